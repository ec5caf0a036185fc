from . import partition  # noqa: F401
#
# Expose the partition types
from .partition import MPIPartition as Partition  # noqa: F401
