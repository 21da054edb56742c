"""Scalar response surfaces used as a baseline against the ROM."""

import logging
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator, interp1d

from tsrom.errors import DuplicateSiteError, EmptyInputError, InvalidArgumentError, OutOfDomainError

logger = logging.getLogger(__name__)

SURFACE_KINDS = ("linear", "nearest", "cubic_spline", "pchip")


class ResponseSurface:
    """
    One-dimensional interpolant of a scalar quantity of interest q(s).

    Sites are reproduced exactly and extrapolation is refused.
    """

    def __init__(self, sites: Sequence[Tuple[float, float]], kind: str = "pchip"):
        """
        Initialize the response surface.

        Args:
            sites: (s, q) pairs, any order
            kind: One of linear, nearest, cubic_spline, pchip
        """
        if kind not in SURFACE_KINDS:
            raise InvalidArgumentError(f"Invalid response surface kind: {kind}")
        if len(sites) < 2:
            raise EmptyInputError(f"a response surface needs at least two sites, got {len(sites)}")

        ordered = sorted(sites, key=lambda site: site[0])
        self.s = np.array([site[0] for site in ordered], dtype=np.float64)
        self.q = np.array([site[1] for site in ordered], dtype=np.float64)
        if np.any(np.diff(self.s) == 0):
            raise DuplicateSiteError("response surface sites must have distinct s")

        self.kind = kind
        if kind == "linear":
            self._fn = lambda x: np.interp(x, self.s, self.q)
        elif kind == "nearest":
            self._fn = interp1d(self.s, self.q, kind="nearest")
        elif kind == "cubic_spline":
            self._fn = CubicSpline(self.s, self.q)
        else:
            self._fn = PchipInterpolator(self.s, self.q)

    def __call__(self, query: float) -> float:
        """
        Evaluate the surface at query.

        Raises:
            OutOfDomainError: If query lies outside the site hull
        """
        low, high = float(self.s[0]), float(self.s[-1])
        if not low <= query <= high:
            raise OutOfDomainError(f"query s={query!r} outside response surface hull [{low!r}, {high!r}]")

        node = np.flatnonzero(self.s == query)
        if node.size:
            return float(self.q[node[0]])
        return float(self._fn(query))


def response_surface(sites: Sequence[Tuple[float, float]], kind: str, query: float) -> float:
    """Evaluate a response surface of the given kind at one query"""
    return ResponseSurface(sites, kind)(query)


def select_response_surface(
    training_sites: Sequence[Tuple[float, float]],
    selection_sites: Sequence[Tuple[float, float]],
    kinds: Optional[Sequence[str]] = None,
) -> Tuple[str, Dict[str, float]]:
    """
    Pick the surface kind with the lowest max absolute error on held-out sites.

    Selection sites outside the training hull are skipped.

    Returns:
        Tuple of (best kind, {kind: max absolute selection error})
    """
    kinds = list(kinds or SURFACE_KINDS)
    scores: Dict[str, float] = {}

    for kind in kinds:
        surface = ResponseSurface(training_sites, kind)
        inside = [(s, q) for s, q in selection_sites if surface.s[0] <= s <= surface.s[-1]]
        if not inside:
            raise EmptyInputError("no selection site lies inside the training hull")
        scores[kind] = max(abs(surface(s) - q) for s, q in inside)

    best = min(kinds, key=lambda kind: (scores[kind], kinds.index(kind)))
    logger.info(f"Selected {best} response surface (max selection error {scores[best]:.4g})")
    return best, scores
