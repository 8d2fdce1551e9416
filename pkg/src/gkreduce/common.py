import logging
import random
from dataclasses import dataclass

logger = logging.getLogger(__name__)


class GKReduceError(Exception):
    """Base class for every error raised by gkreduce."""


@dataclass
class Finding:
    """One verified identity: the check id, what it was applied to, and its exact residual."""

    check: str
    subject: str
    passed: bool
    residual: str = "0"
    note: str = ""


def finding(check: str, subject: str, residual: object) -> Finding:
    """Builds a finding that passes iff the residual renders as ``0``."""
    text = str(residual)
    return Finding(check, subject, text == "0", text)


def make_rng(seed: int, *labels: str | int) -> random.Random:
    """Returns an independent, reproducible random stream for ``seed`` and a label path.

    String seeds are hashed with SHA-512 by :class:`random.Random`, so the stream is
    stable across processes and Python builds.
    """
    key = ":".join([str(seed), *(str(label) for label in labels)])
    logger.debug(f"Seeding random stream '{key}'")
    return random.Random(key)
