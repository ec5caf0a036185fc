import numpy as np
import pytest
import torch
from adjoint_test import check_adjoint_test_tight

parametrizations = []

parametrizations.append(
    pytest.param(
        1,  # passed to comm_split_fixture, required MPI ranks
        id="sequential",
        marks=[pytest.mark.mpi(min_size=1)]
        )
    )

parametrizations.append(
    pytest.param(
        3,  # passed to comm_split_fixture, required MPI ranks
        id="distributed-3",
        marks=[pytest.mark.mpi(min_size=3)]
        )
    )

parametrizations.append(
    pytest.param(
        4,  # passed to comm_split_fixture, required MPI ranks
        id="distributed-4",
        marks=[pytest.mark.mpi(min_size=4)]
        )
    )


@pytest.mark.parametrize("comm_split_fixture", parametrizations, indirect=["comm_split_fixture"])
def test_work_is_gathered_in_order(barrier_fence_fixture, comm_split_fixture):

    from isacopt.backends.mpi.partition import MPIPartition

    # Isolate the minimum needed ranks
    base_comm, active = comm_split_fixture
    if not active:
        return

    P = MPIPartition(base_comm)

    gathered = P.gather_to_root([(i, P.rank) for i in P.work_range(10)])

    if P.rank == 0:
        assert [i for i, _ in gathered] == list(range(10))
        owners = [rank for _, rank in gathered]
        assert owners == sorted(owners)
    else:
        assert gathered is None

    assert P.broadcast_from_root("root" if P.rank == 0 else None) == "root"


@pytest.mark.parametrize("comm_split_fixture", parametrizations, indirect=["comm_split_fixture"])
def test_distributed_projection_is_self_adjoint(barrier_fence_fixture, comm_split_fixture):

    from mpi4py import MPI

    from isacopt.backends.mpi.partition import MPIPartition
    from isacopt.manifold import random_point
    from isacopt.utilities.seeding import complex_normal

    # Isolate the minimum needed ranks
    base_comm, active = comm_split_fixture
    if not active:
        return

    P = MPIPartition(base_comm)

    # Every worker draws the same global matrices and keeps its block of rows
    w = random_point((7, 2), 1.5, seed=0)
    rng = np.random.default_rng(1)
    x1 = complex_normal(rng, (7, 2))
    y2 = complex_normal(rng, (7, 2))

    rows = P.work_range(7)
    w_local = w.mat[rows.start:rows.stop]

    def project(v_local):
        local = torch.sum(w_local.conj() * v_local).real.item()
        radial = P._comm.allreduce(local, op=MPI.SUM)
        return v_local - (radial / w.power) * w_local

    x1_local = x1[rows.start:rows.stop]
    y2_local = y2[rows.start:rows.stop]

    check_adjoint_test_tight(P, x1_local, project(y2_local), project(x1_local), y2_local)


@pytest.mark.parametrize("comm_split_fixture", parametrizations[1:], indirect=["comm_split_fixture"])
def test_parallel_cells_match_sequential(barrier_fence_fixture, comm_split_fixture):

    from mpi4py import MPI

    from isacopt.backends.mpi.partition import MPIPartition
    from isacopt.experiments.config import from_dict
    from isacopt.experiments.harness import run_gradcheck

    # Isolate the minimum needed ranks
    base_comm, active = comm_split_fixture
    if not active:
        return

    cfg = from_dict({
        "experiment": "gradcheck",
        "system": {"n_tx": 2, "n_rx": 2, "n_streams": 1},
        "grid": {"n_subcarriers": 2, "n_symbols": 1},
        "scenario": {"path_count": 1},
        "optimizer": {"samples_per_iter": 2},
        "gradcheck": {"trials": 5},
    })

    P = MPIPartition(base_comm)
    parallel = run_gradcheck(cfg, P)
    sequential = run_gradcheck(cfg, MPIPartition(MPI.COMM_SELF))

    if P.rank == 0:
        assert parallel.raw == sequential.raw
        assert parallel.aggregate == sequential.aggregate
    else:
        assert parallel is None


def test_inactive_partition():

    from isacopt.backends.mpi.partition import MPIPartition

    P = MPIPartition()

    assert not P.active
    assert not P.is_root
    assert len(P.work_range(5)) == 0
    assert P.gather_to_root([1, 2]) is None
    assert P.broadcast_from_root(3) == 3


def test_self_partition_is_its_own_root():

    from mpi4py import MPI

    from isacopt.backends.mpi.partition import MPIPartition

    P = MPIPartition(MPI.COMM_SELF)

    assert P.active
    assert P.size == 1 and P.rank == 0 and P.is_root
    assert list(P.work_range(3)) == [0, 1, 2]
