from . import mpi  # noqa: F401
