__version__ = '0.1.0-dev'

import isacopt.optim  # noqa: F401

from . import backends  # noqa: F401
from . import bfim  # noqa: F401
from . import gradient  # noqa: F401
from . import manifold  # noqa: F401
from . import optim  # noqa: F401
from . import sampler  # noqa: F401
from . import system_model  # noqa: F401
from . import utilities  # noqa: F401
