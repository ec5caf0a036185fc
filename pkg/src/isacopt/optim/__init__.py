from . import config  # noqa: F401
from . import kkt  # noqa: F401
from . import linesearch  # noqa: F401
from . import schedule  # noqa: F401
from . import srgd  # noqa: F401
from . import trace  # noqa: F401
#
from .config import AdaptiveLineSearch  # noqa: F401
from .config import Constant  # noqa: F401
from .config import Diminishing  # noqa: F401
from .config import LineSearchParams  # noqa: F401
from .config import OptimizerConfig  # noqa: F401
from .kkt import kkt_report  # noqa: F401
from .linesearch import backtracking_line_search  # noqa: F401
from .linesearch import line_search  # noqa: F401
from .schedule import validate_schedule  # noqa: F401
from .srgd import OptimizationError  # noqa: F401
from .srgd import run  # noqa: F401
from .srgd import srcg_direction  # noqa: F401
from .trace import IterationTrace  # noqa: F401
