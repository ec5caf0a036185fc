import logging
import sys


LOG_FORMAT = "[%(asctime)s] rank %(rank)d %(levelname)s %(name)s: %(message)s"


class RankFilter(logging.Filter):
    r"""Stamps every log record with the MPI rank of the emitting worker."""

    def __init__(self, rank=0):
        super().__init__()
        self.rank = rank

    def filter(self, record):
        record.rank = self.rank
        return True


def configure_logging(level="INFO", rank=0, stream=None):
    r"""Installs a rank-aware handler on the root logger.

    Parameters
    ----------
    level : str or int
        Logging level name (``"DEBUG"``, ``"INFO"``, ...) or number.
    rank : int
        Rank written into every record.
    stream : file-like, optional
        Destination, ``sys.stderr`` by default.

    Returns
    -------
    The installed handler.

    """

    if isinstance(level, str):
        numeric = logging.getLevelName(level.upper())
        if not isinstance(numeric, int):
            raise ValueError(f"Unknown log level {level!r}.")
        level = numeric

    handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler.addFilter(RankFilter(rank))

    root = logging.getLogger()
    for old in [h for h in root.handlers if getattr(h, "_isacopt_handler", False)]:
        root.removeHandler(old)
    handler._isacopt_handler = True
    root.addHandler(handler)
    root.setLevel(level)

    return handler
