import numpy as np

INDEX_DTYPE = np.int64


def compute_subshape(P_shape, index, shape):

    P_shape = np.atleast_1d(P_shape)
    index = np.atleast_1d(index)
    shape = np.atleast_1d(shape)
    subshape = shape // P_shape
    subshape[index < shape % P_shape] += 1

    return subshape


def compute_start_index(P_shape, index, shape):

    P_shape = np.atleast_1d(P_shape)
    index = np.atleast_1d(index)
    shape = np.atleast_1d(shape)
    start_index = (shape // P_shape)*index
    start_index += np.minimum(index, shape % P_shape)

    return start_index


def compute_stop_index(P_shape, index, shape):

    start_index = compute_start_index(P_shape, index, shape)
    subshape = compute_subshape(P_shape, index, shape)
    stop_index = start_index + subshape

    return stop_index


def compute_work_range(n_workers, worker, n_items):
    r"""Contiguous block of a list of ``n_items`` owned by one worker.

    The first ``n_items % n_workers`` workers own one extra item, so the
    blocks of all workers tile ``range(n_items)`` in order.

    Parameters
    ----------
    n_workers : int
        Number of workers sharing the items.
    worker : int
        Index of the worker, ``0 <= worker < n_workers``.
    n_items : int
        Total number of items.

    Returns
    -------
    A ``range`` of item indices.

    """

    if not 0 <= worker < n_workers:
        raise ValueError(f"Worker index {worker} outside of [0, {n_workers}).")

    start = int(compute_start_index(n_workers, worker, n_items)[0])
    stop = int(compute_stop_index(n_workers, worker, n_items)[0])

    return range(start, stop)


def range_index(shape):

    import itertools

    # An iterator that generates all cartesian coordinates over a set of
    # dimensions
    for x in itertools.product(*[range(y) for y in shape]):
        yield x
