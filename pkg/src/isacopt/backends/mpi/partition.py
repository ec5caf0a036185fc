from mpi4py import MPI

from isacopt.utilities.slicing import compute_work_range


class MPIPartition:
    r"""MPI-based team of workers sharing a list of independent tasks.

    The MPI interface is provided by ``mpi4py``.  Each worker owns a
    contiguous, balanced block of the task list; results travel as pickled
    Python objects, and rank 0 of the partition is the root that collects
    them.

    If the communicator is a null communicator, a nullified partition is
    created, which is indicated by the ``active`` member.  Inactive workers
    own no tasks and take part in no collectives.

    Parameters
    ----------
    comm : MPI communicator, optional
        MPI Communicator to create the partition from.

    Attributes
    ----------
    _comm : MPI communicator
        MPI Communicator for this partition.
    active : boolean
        Indicates if the worker participates in the partition.
    rank :
        Lexicographic identifier for the worker in the partition.
    size :
        Number of workers active in this team for this partition.

    """

    def __init__(self, comm=MPI.COMM_NULL):

        # MPI communicator to communicate within
        self._comm = comm

        # If the communicator is not null, this worker is active and can
        # gather remaining information.  Otherwise, the worker is inactive
        # and members should be nullified.
        if self._comm != MPI.COMM_NULL:
            self.active = True
            self.rank = self._comm.Get_rank()
            self.size = self._comm.Get_size()
        else:
            self.active = False
            self.rank = MPI.PROC_NULL
            self.size = -1

    @classmethod
    def world(cls):
        return cls(MPI.COMM_WORLD)

    @property
    def is_root(self):
        return self.active and self.rank == 0

    def work_range(self, n_items):
        r"""Indices of the tasks owned by this worker.

        Parameters
        ----------
        n_items : int
            Total number of tasks.

        Returns
        -------
        A ``range``; empty for inactive workers.

        """

        if not self.active:
            return range(0)
        return compute_work_range(self.size, self.rank, n_items)

    def gather_to_root(self, items):
        r"""Concatenates every worker's list of results on the root.

        Returns
        -------
        The concatenated list, in rank order, on the root and ``None``
        elsewhere.

        """

        if not self.active:
            return None

        gathered = self._comm.gather(list(items), root=0)
        if self.rank != 0:
            return None

        return [item for block in gathered for item in block]

    def broadcast_from_root(self, value):

        if not self.active:
            return value
        return self._comm.bcast(value, root=0)
