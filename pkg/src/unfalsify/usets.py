"""Parametrized uncertainty-set families.

Two nested, origin-centered families are supported, both parametrized by a
single nonnegative scalar ``gamma``:

* ``l2``   -- Euclidean ball, ``{w : ||w||_2 <= gamma}``
* ``linf`` -- box, ``{w : max_j |w_j| <= gamma}``

The size metric is the radius itself, ``r(gamma) = gamma``.  Any strictly
increasing function of the radius picks the same optimizers; the radius is
the best-scaled choice numerically.  Because the families are nested and the
metric is strictly increasing, growing the set always grows the metric and
vice versa, which is what lets the covering problem collapse to a single
worst-case trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tolerances import TOL_MEM

#: Scalar set-size parameter (nonnegative radius / half-width).
Gamma = float

FAMILIES = ("l2", "linf")


@dataclass(frozen=True)
class UncertaintySetModel:
    """Family of uncertainty sets, one per nonnegative gamma."""

    family: str
    dim: int

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown uncertainty-set family {self.family!r}")
        if self.dim < 1:
            raise ValueError("uncertainty dimension must be positive")


def _check_point(uset: UncertaintySetModel, w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (uset.dim,):
        raise ValueError(f"point has shape {w.shape}, expected ({uset.dim},)")
    return w


def point_size(uset: UncertaintySetModel, w: np.ndarray) -> float:
    """Norm of ``w`` under the family's defining norm."""
    w = _check_point(uset, w)
    if uset.family == "l2":
        return float(np.linalg.norm(w))
    return float(np.max(np.abs(w))) if w.size else 0.0


def member(uset: UncertaintySetModel, gamma: Gamma, w: np.ndarray) -> bool:
    """Whether ``w`` lies in the set with parameter ``gamma``."""
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    return point_size(uset, w) <= gamma + TOL_MEM


def metric(uset: UncertaintySetModel, gamma: Gamma) -> float:
    """Size metric of the set with parameter ``gamma``.

    Strictly increasing in gamma for both families.
    """
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    return float(gamma)


def enclose(uset: UncertaintySetModel, points) -> Gamma:
    """Smallest gamma whose set contains every point of ``points``.

    The empty collection is enclosed by gamma = 0.
    """
    best = 0.0
    for w in points:
        best = max(best, point_size(uset, w))
    return best
