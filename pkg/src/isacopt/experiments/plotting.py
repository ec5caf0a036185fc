r"""SVG figures of experiment records.

Each figure is drawn from the aggregate (or raw) rows alone.  The SVG
writer is given a fixed hash salt and no date, so equal rows give equal
files.  The configuration hash, when given, goes into the SVG description.
"""

__all__ = ["plot_record", "plot_convergence", "plot_tradeoff", "plot_gradcheck"]

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

SVG_RC = {"svg.hashsalt": "isacopt", "svg.fonttype": "path"}


def _save(fig, path, config_hash=None):

    metadata = {"Date": None}
    if config_hash is not None:
        metadata["Description"] = f"config_hash={config_hash}"

    with matplotlib.rc_context(SVG_RC):
        fig.savefig(path, format="svg", metadata=metadata)
    plt.close(fig)


def plot_convergence(aggregate, path, config_hash=None):
    r"""Mean :math:`-\hat f` and gradient norm per iteration with one-std bands."""

    fig, (ax_obj, ax_grad) = plt.subplots(1, 2, figsize=(10, 4))

    rows = np.asarray(aggregate, dtype=np.float64).reshape(-1, 7)
    for n_samples in np.unique(rows[:, 0]):
        block = rows[rows[:, 0] == n_samples]
        it = block[:, 1]
        for ax, mean, std in ((ax_obj, block[:, 2], block[:, 3]), (ax_grad, block[:, 4], block[:, 5])):
            ax.plot(it, mean, label=f"N = {int(n_samples)}")
            ax.fill_between(it, mean - std, mean + std, alpha=0.25)

    ax_obj.set_xlabel("iteration")
    ax_obj.set_ylabel("negative objective")
    ax_grad.set_xlabel("iteration")
    ax_grad.set_ylabel("Riemannian gradient norm")
    ax_grad.set_yscale("log")
    for ax in (ax_obj, ax_grad):
        ax.grid(True, ls=":")
        if len(rows):
            ax.legend()

    fig.tight_layout()
    _save(fig, path, config_hash)


def plot_tradeoff(aggregate, path, config_hash=None):
    r"""Mean sensing versus mean communication term, one point per trade-off factor."""

    fig, ax = plt.subplots(figsize=(5, 4))

    rows = np.asarray(aggregate, dtype=np.float64).reshape(-1, 6)
    ax.errorbar(rows[:, 3], rows[:, 1], xerr=rows[:, 4], yerr=rows[:, 2], fmt="o-", capsize=3)
    for alpha, sensing, comm in zip(rows[:, 0], rows[:, 1], rows[:, 3]):
        ax.annotate(f"{alpha:g}", (comm, sensing), textcoords="offset points", xytext=(4, 4), fontsize=8)

    ax.set_xlabel("communication term")
    ax.set_ylabel("sensing term")
    ax.grid(True, ls=":")

    fig.tight_layout()
    _save(fig, path, config_hash)


def plot_gradcheck(raw, threshold, path, config_hash=None):
    r"""Relative gradient error per trial against the acceptance threshold."""

    fig, ax = plt.subplots(figsize=(5, 4))

    rows = np.asarray(raw, dtype=np.float64).reshape(-1, 3)
    ax.semilogy(rows[:, 0], np.maximum(rows[:, 2], np.finfo(np.float64).tiny), "o")
    ax.axhline(threshold, color="k", ls="--")

    ax.set_xlabel("trial")
    ax.set_ylabel("relative error")
    ax.grid(True, ls=":")

    fig.tight_layout()
    _save(fig, path, config_hash)


def plot_record(record, path, threshold=None):

    if record.experiment == "convergence":
        plot_convergence(record.aggregate, path, record.config_hash)
    elif record.experiment == "tradeoff":
        plot_tradeoff(record.aggregate, path, record.config_hash)
    elif record.experiment == "gradcheck":
        if threshold is None:
            threshold = record.aggregate[0][3] if record.aggregate else 1.0
        plot_gradcheck(record.raw, threshold, path, record.config_hash)
    else:
        raise ValueError(f"No plot for experiment {record.experiment!r}.")
