"""Exact invariants and completion verdicts for Q[[x1..xn]]/I, plus a desk-scale
run of the z-selection construction that adjoins u to a CS-subring."""

__version__ = "0.1.0"

from .algebra import LocalElement, Polynomial, TruncatedSeries, XPolynomial, substitute  # noqa: E402
from .groebner import IdealHandle  # noqa: E402
from .invariants import Undecided, compute_invariants  # noqa: E402
from .classifier import RingPresentation, classify_all  # noqa: E402
from .construction import ConstructionConfig, ExponentMap, run_construction  # noqa: E402

__all__ = [
    "LocalElement", "Polynomial", "TruncatedSeries", "XPolynomial", "substitute",
    "IdealHandle", "Undecided", "compute_invariants", "RingPresentation", "classify_all",
    "ConstructionConfig", "ExponentMap", "run_construction",
]
