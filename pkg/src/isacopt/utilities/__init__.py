from . import debug  # noqa: F401
from . import linalg  # noqa: F401
from . import seeding  # noqa: F401
from . import slicing  # noqa: F401
