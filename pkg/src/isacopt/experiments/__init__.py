from . import config  # noqa: F401
from . import harness  # noqa: F401
from . import output  # noqa: F401
from . import plotting  # noqa: F401
#
from .config import ExperimentConfig  # noqa: F401
from .config import load_config  # noqa: F401
from .harness import RunRecord  # noqa: F401
from .harness import run_convergence  # noqa: F401
from .harness import run_experiment  # noqa: F401
from .harness import run_gradcheck  # noqa: F401
from .harness import run_tradeoff  # noqa: F401
