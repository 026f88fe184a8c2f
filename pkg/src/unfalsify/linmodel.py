"""Uncertain linear model, data handling and the constraint view of the
permissible-trajectory set.

The model is the discrete-time system

    x[k+1] = A x[k] + B u[k] + E w[k]
    y[k]   = C x[k] + D u[k] + F v[k]

where ``w`` is the process uncertainty and ``v`` the measurement noise.  For
an N-point input/output record the unknowns are the initial state, the N-1
process disturbances that influence the record, and the N noise samples.
Stacking the measurement equations gives one big affine system ``M z = b``
over that decision vector; everything downstream (feasibility, optimistic
and pessimistic solves) works on this representation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    InvalidDataError,
    InvalidModelError,
    SingularMatrixError,
    SolverFailureError,
)
from .tolerances import TOL_EQ, TOL_MEM, TOL_OPT_ABS, TOL_OPT_REL, TOL_RANK

__all__ = [
    "LinearUncertainModel",
    "DataSet",
    "NoiseModel",
    "OmegaRepresentation",
    "InferabilityVerdict",
    "FalsificationResult",
    "build_uncertainty_observability",
    "assemble_omega",
    "recover_trajectory",
    "analyze_inferability",
    "falsification_check",
    "simulate",
]


def _as_matrix(name: str, value, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(value, dtype=float))
    if arr.ndim != 2:
        raise InvalidModelError(f"{name} must be a 2-D matrix, got ndim={arr.ndim}")
    if rows is not None and arr.shape[0] != rows:
        raise InvalidModelError(f"{name} has {arr.shape[0]} rows, expected {rows}")
    if cols is not None and arr.shape[1] != cols:
        raise InvalidModelError(f"{name} has {arr.shape[1]} columns, expected {cols}")
    if not np.all(np.isfinite(arr)):
        raise InvalidModelError(f"{name} contains non-finite entries")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class LinearUncertainModel:
    """Discrete-time linear model with uncertainty and noise entry matrices."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    E: np.ndarray
    F: np.ndarray
    dt: float = 1.0

    def __post_init__(self):
        A = _as_matrix("A", self.A)
        n = A.shape[0]
        if A.shape[1] != n:
            raise InvalidModelError("A must be square")
        B = _as_matrix("B", self.B, rows=n)
        E = _as_matrix("E", self.E, rows=n)
        C = _as_matrix("C", self.C, cols=n)
        p = C.shape[0]
        D = _as_matrix("D", self.D, rows=p, cols=B.shape[1])
        F = _as_matrix("F", self.F, rows=p)
        if not np.isfinite(self.dt) or self.dt <= 0:
            raise InvalidModelError("dt must be positive and finite")
        for name, val in (("A", A), ("B", B), ("C", C), ("D", D), ("E", E), ("F", F)):
            object.__setattr__(self, name, val)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def p(self) -> int:
        return self.C.shape[0]

    @property
    def d_w(self) -> int:
        return self.E.shape[1]

    @property
    def d_v(self) -> int:
        return self.F.shape[1]


@dataclass(frozen=True, eq=False)
class DataSet:
    """N-point input/output record; ``U`` is (N, m) and ``Y`` is (N, p)."""

    U: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        U = np.atleast_2d(np.asarray(self.U, dtype=float))
        Y = np.atleast_2d(np.asarray(self.Y, dtype=float))
        if U.shape[0] != Y.shape[0]:
            raise InvalidDataError(
                f"U has {U.shape[0]} samples but Y has {Y.shape[0]}"
            )
        if U.shape[0] < 2:
            raise InvalidDataError("at least 2 data points are required")
        if not (np.all(np.isfinite(U)) and np.all(np.isfinite(Y))):
            raise InvalidDataError("data contains non-finite entries")
        U = U.copy()
        Y = Y.copy()
        U.flags.writeable = False
        Y.flags.writeable = False
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "Y", Y)

    @property
    def N(self) -> int:
        return self.U.shape[0]

    def prefix(self, length: int) -> "DataSet":
        """The record truncated to its first ``length`` samples."""
        if not 2 <= length <= self.N:
            raise InvalidDataError(f"prefix length {length} outside [2, {self.N}]")
        return DataSet(self.U[:length], self.Y[:length])


@dataclass(frozen=True, eq=False)
class NoiseModel:
    """Admissible per-sample measurement noise.

    ``none``: v = 0 identically.  ``box``: |v_j| <= vbar_j componentwise.
    ``ball``: ||v||_2 <= rho.
    """

    kind: str
    vbar: Optional[np.ndarray] = None
    rho: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("none", "box", "ball"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.kind == "box":
            vbar = np.atleast_1d(np.asarray(self.vbar, dtype=float))
            if vbar.ndim != 1 or not np.all(np.isfinite(vbar)) or np.any(vbar < 0):
                raise ValueError("box noise bound must be a finite nonnegative vector")
            vbar = vbar.copy()
            vbar.flags.writeable = False
            object.__setattr__(self, "vbar", vbar)
        if self.kind == "ball":
            if self.rho is None or not np.isfinite(self.rho) or self.rho < 0:
                raise ValueError("ball noise radius must be finite and nonnegative")
            object.__setattr__(self, "rho", float(self.rho))

    @classmethod
    def none(cls) -> "NoiseModel":
        return cls("none")

    @classmethod
    def box(cls, vbar) -> "NoiseModel":
        return cls("box", vbar=vbar)

    @classmethod
    def ball(cls, rho: float) -> "NoiseModel":
        return cls("ball", rho=rho)

    @property
    def is_none(self) -> bool:
        return self.kind == "none"

    def box_bounds(self, d_v: int) -> tuple[np.ndarray, np.ndarray]:
        """Componentwise bounds on one noise sample (the tightest box
        containing the admissible set)."""
        if self.kind == "none":
            z = np.zeros(d_v)
            return z, z
        if self.kind == "box":
            vbar = self.vbar
            if vbar.size == 1 and d_v > 1:
                vbar = np.full(d_v, float(vbar[0]))
            if vbar.size != d_v:
                raise ValueError(
                    f"box bound has {vbar.size} entries, noise dimension is {d_v}"
                )
            return -vbar, vbar
        r = np.full(d_v, self.rho)
        return -r, r

    def admissible(self, V: np.ndarray, tol: float = TOL_MEM) -> bool:
        """Whether every row of ``V`` is an admissible noise sample."""
        V = np.atleast_2d(V)
        if self.kind == "none":
            return bool(np.all(np.abs(V) <= tol))
        if self.kind == "box":
            lo, hi = self.box_bounds(V.shape[1])
            return bool(np.all(V <= hi + tol) and np.all(V >= lo - tol))
        return bool(np.all(np.linalg.norm(V, axis=1) <= self.rho + tol))


def build_uncertainty_observability(model: LinearUncertainModel, N: int) -> np.ndarray:
    """Block lower-triangular matrix mapping (x0, w_0..w_{N-2}) to the
    noiseless output residuals of an N-point record.

    Block row k is ``[C A^k, C A^{k-1} E, ..., C E, 0, ...]``: the first
    block column acts on the initial state, block column j (1-based) carries
    ``C A^(k-j) E`` for j <= k and is zero above the diagonal.  Input
    feedthrough never enters.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    n, p, d_w = model.n, model.p, model.d_w
    ncols = n + d_w * (N - 1)
    out = np.zeros((p * N, ncols))

    # C A^k and C A^k E for k = 0..N-1, built by one pass of right-multiplies.
    CAk = model.C.copy()
    CAkE = [CAk @ model.E]
    CA_pows = [CAk]
    for _ in range(1, N):
        CAk = CAk @ model.A
        CA_pows.append(CAk)
        CAkE.append(CAk @ model.E)

    for k in range(N):
        rows = slice(k * p, (k + 1) * p)
        out[rows, :n] = CA_pows[k]
        for j in range(1, k + 1):
            cols = slice(n + (j - 1) * d_w, n + j * d_w)
            out[rows, cols] = CAkE[k - j]
    return out


def _input_response_rhs(model: LinearUncertainModel, data: DataSet) -> np.ndarray:
    """Stacked right-hand side b with all input/output dependence absorbed:
    b_k = y_k - C s_k - D u_k where s is the input-driven state (x0 = 0,
    w = 0)."""
    N = data.N
    p = model.p
    b = np.empty(p * N)
    s = np.zeros(model.n)
    for k in range(N):
        b[k * p : (k + 1) * p] = data.Y[k] - model.C @ s - model.D @ data.U[k]
        if k < N - 1:
            s = model.A @ s + model.B @ data.U[k]
    return b


@dataclass(frozen=True, eq=False)
class OmegaRepresentation:
    """Affine encoding ``M z = b`` of all trajectories consistent with the
    data, over the stacked decision vector z = (x0, w_0..w_{N-2},
    v_0..v_{N-1}).

    Noise columns are present only when the noise model allows nonzero
    noise; ``lb``/``ub`` carry the componentwise bounds (+-inf on free
    coordinates).  For ball noise the box is the tightest relaxation and
    ``ball_radius`` records the exact per-sample constraint.
    """

    M: np.ndarray
    b: np.ndarray
    n: int
    d_w: int
    d_v: int
    N: int
    noise: NoiseModel
    lb: np.ndarray
    ub: np.ndarray
    ball_radius: Optional[float] = None

    @property
    def ncols(self) -> int:
        return self.M.shape[1]

    @property
    def n_w_blocks(self) -> int:
        return self.N - 1

    @property
    def has_noise_columns(self) -> bool:
        return not self.noise.is_none

    def x0_slice(self) -> slice:
        return slice(0, self.n)

    def w_slice(self, i: int) -> slice:
        if not 0 <= i < self.n_w_blocks:
            raise IndexError(f"uncertainty block {i} out of range")
        start = self.n + i * self.d_w
        return slice(start, start + self.d_w)

    def w_slices(self) -> list[slice]:
        return [self.w_slice(i) for i in range(self.n_w_blocks)]

    def v_slice(self, k: int) -> slice:
        if not self.has_noise_columns:
            raise IndexError("no noise columns in this representation")
        if not 0 <= k < self.N:
            raise IndexError(f"noise sample {k} out of range")
        start = self.n + self.n_w_blocks * self.d_w + k * self.d_v
        return slice(start, start + self.d_v)

    def v_slices(self) -> list[slice]:
        return [self.v_slice(k) for k in range(self.N)]

    def unpack(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Split a decision vector into (x0, W, V); V is all-zero when the
        representation has no noise columns."""
        z = np.asarray(z, dtype=float)
        if z.shape != (self.ncols,):
            raise ValueError(f"decision vector has shape {z.shape}, expected ({self.ncols},)")
        x0 = z[: self.n].copy()
        W = z[self.n : self.n + self.n_w_blocks * self.d_w].reshape(
            self.n_w_blocks, self.d_w
        ).copy()
        if self.has_noise_columns:
            V = z[self.n + self.n_w_blocks * self.d_w :].reshape(self.N, self.d_v).copy()
        else:
            V = np.zeros((self.N, self.d_v))
        return x0, W, V

    def pack(self, x0: np.ndarray, W: np.ndarray, V: Optional[np.ndarray] = None) -> np.ndarray:
        parts = [np.asarray(x0, dtype=float).ravel(), np.asarray(W, dtype=float).ravel()]
        if self.has_noise_columns:
            if V is None:
                V = np.zeros((self.N, self.d_v))
            parts.append(np.asarray(V, dtype=float).ravel())
        z = np.concatenate(parts)
        if z.shape != (self.ncols,):
            raise ValueError("packed vector has the wrong length")
        return z

    def residual(self, z: np.ndarray) -> float:
        """Infinity norm of M z - b."""
        return float(np.max(np.abs(self.M @ z - self.b)))


def assemble_omega(
    model: LinearUncertainModel, data: DataSet, noise: NoiseModel
) -> OmegaRepresentation:
    """Build the affine system whose solutions (within noise bounds) are
    exactly the trajectories reproducing the data."""
    if data.U.shape[1] != model.m:
        raise InvalidDataError(
            f"inputs have dimension {data.U.shape[1]}, model expects {model.m}"
        )
    if data.Y.shape[1] != model.p:
        raise InvalidDataError(
            f"outputs have dimension {data.Y.shape[1]}, model expects {model.p}"
        )
    N = data.N
    n, p, d_w, d_v = model.n, model.p, model.d_w, model.d_v
    uobs = build_uncertainty_observability(model, N)
    b = _input_response_rhs(model, data)

    if noise.is_none:
        M = uobs
        ncols = M.shape[1]
        lb = np.full(ncols, -np.inf)
        ub = np.full(ncols, np.inf)
        ball_radius = None
    else:
        M = np.zeros((p * N, uobs.shape[1] + d_v * N))
        M[:, : uobs.shape[1]] = uobs
        for k in range(N):
            M[k * p : (k + 1) * p, uobs.shape[1] + k * d_v : uobs.shape[1] + (k + 1) * d_v] = model.F
        ncols = M.shape[1]
        lb = np.full(ncols, -np.inf)
        ub = np.full(ncols, np.inf)
        lo, hi = noise.box_bounds(d_v)
        for k in range(N):
            sl = slice(uobs.shape[1] + k * d_v, uobs.shape[1] + (k + 1) * d_v)
            lb[sl] = lo
            ub[sl] = hi
        ball_radius = noise.rho if noise.kind == "ball" else None

    M = M.copy()
    M.flags.writeable = False
    b.flags.writeable = False
    lb.flags.writeable = False
    ub.flags.writeable = False
    return OmegaRepresentation(
        M=M, b=b, n=n, d_w=d_w, d_v=d_v, N=N, noise=noise, lb=lb, ub=ub,
        ball_radius=ball_radius,
    )


def recover_trajectory(
    model: LinearUncertainModel, data: DataSet, v: Optional[np.ndarray] = None
) -> tuple[np.ndarray, np.ndarray]:
    """Unique (x0, W) reproducing the data for a given noise trajectory.

    Requires the uncertainty observability matrix to be square and
    nonsingular; the system is then solved by LU factorization.
    """
    N = data.N
    uobs = build_uncertainty_observability(model, N)
    rows, cols = uobs.shape
    if rows != cols:
        raise SingularMatrixError(
            f"uncertainty observability matrix is {rows}x{cols}, not square"
        )
    sv = np.linalg.svd(uobs, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] <= TOL_RANK * sv[0]:
        raise SingularMatrixError("uncertainty observability matrix is singular")

    if v is None:
        v = np.zeros((N, model.d_v))
    v = np.atleast_2d(np.asarray(v, dtype=float))
    if v.shape != (N, model.d_v):
        raise ValueError(f"noise trajectory has shape {v.shape}, expected ({N}, {model.d_v})")

    rhs = _input_response_rhs(model, data)
    p = model.p
    for k in range(N):
        rhs[k * p : (k + 1) * p] -= model.F @ v[k]
    sol = np.linalg.solve(uobs, rhs)
    x0 = sol[: model.n]
    W = sol[model.n :].reshape(N - 1, model.d_w)
    return x0, W


def simulate(
    model: LinearUncertainModel,
    U: np.ndarray,
    x0: Optional[np.ndarray] = None,
    W: Optional[np.ndarray] = None,
    V: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Forward-simulate the linear model; returns the (N, p) output record."""
    U = np.atleast_2d(np.asarray(U, dtype=float))
    N = U.shape[0]
    if U.shape[1] != model.m:
        raise InvalidDataError(f"inputs have dimension {U.shape[1]}, expected {model.m}")
    x = np.zeros(model.n) if x0 is None else np.asarray(x0, dtype=float).copy()
    W = np.zeros((N - 1, model.d_w)) if W is None else np.atleast_2d(np.asarray(W, dtype=float))
    V = np.zeros((N, model.d_v)) if V is None else np.atleast_2d(np.asarray(V, dtype=float))
    Y = np.empty((N, model.p))
    for k in range(N):
        Y[k] = model.C @ x + model.D @ U[k] + model.F @ V[k]
        if k < N - 1:
            x = model.A @ x + model.B @ U[k] + model.E @ W[k]
    return Y


# -- inferability -----------------------------------------------------------

UNIQUE_OMEGA = "UniqueOmega"
BOUNDED_OMEGA = "BoundedOmega"
UNBOUNDED = "Unbounded"
OVERDETERMINED_CONSISTENT = "OverdeterminedConsistent"
OVERDETERMINED_INCONSISTENT = "OverdeterminedInconsistent"


@dataclass(frozen=True)
class InferabilityVerdict:
    """Outcome of the boundedness/uniqueness analysis of the trajectory set."""

    kind: str
    rank: int
    shape: tuple[int, int]
    explanation: str

    @property
    def bounded(self) -> bool:
        return self.kind != UNBOUNDED


def analyze_inferability(
    model: LinearUncertainModel,
    N: int,
    noise: NoiseModel,
    data: Optional[DataSet] = None,
) -> InferabilityVerdict:
    """Classify whether the data can pin down a bounded set of uncertainty
    trajectories.

    Based on the numerical rank of the uncertainty observability matrix:
    square and nonsingular with zero noise means a single trajectory; full
    column rank with bounded noise means a bounded set; a rank deficiency
    that touches the uncertainty coordinates leaves some disturbance
    direction completely unobserved, so the set is unbounded no matter the
    noise.  A tall matrix makes the record over-determined; whether it is
    consistent can only be decided against actual data, so that refinement
    is reported only when ``data`` is supplied.
    """
    uobs = build_uncertainty_observability(model, N)
    rows, cols = uobs.shape
    sv = np.linalg.svd(uobs, compute_uv=False)
    smax = sv[0] if sv.size else 0.0
    tol = TOL_RANK * smax if smax > 0 else TOL_RANK
    rank = int(np.sum(sv > tol))
    shape = (rows, cols)

    if rank < cols:
        # Does the null space touch any w coordinate?
        _, _, vt = np.linalg.svd(uobs)
        null_basis = vt[rank:]
        w_part = null_basis[:, model.n :]
        if null_basis.size and np.max(np.abs(w_part)) > 1e-9:
            return InferabilityVerdict(
                UNBOUNDED, rank, shape,
                "some uncertainty direction never reaches the outputs; the "
                "trajectory set is unbounded",
            )
        return InferabilityVerdict(
            BOUNDED_OMEGA, rank, shape,
            "initial state is ambiguous but every uncertainty trajectory is "
            "pinned; trajectory set bounded",
        )

    if rows == cols:
        if noise.is_none:
            return InferabilityVerdict(
                UNIQUE_OMEGA, rank, shape,
                "square nonsingular residual map with zero noise: exactly one "
                "trajectory reproduces the data",
            )
        return InferabilityVerdict(
            BOUNDED_OMEGA, rank, shape,
            "square nonsingular residual map with bounded noise: bounded "
            "trajectory set",
        )

    # Tall, full column rank: over-determined record.
    if data is not None:
        if _overdetermined_consistent(model, data, noise):
            return InferabilityVerdict(
                OVERDETERMINED_CONSISTENT, rank, shape,
                "over-determined record is consistent; trajectory set bounded",
            )
        return InferabilityVerdict(
            OVERDETERMINED_INCONSISTENT, rank, shape,
            "over-determined record cannot be reproduced by any trajectory "
            "within the noise bounds",
        )
    return InferabilityVerdict(
        BOUNDED_OMEGA, rank, shape,
        "full column rank with bounded noise: trajectory set bounded "
        "(over-determined; consistency depends on the data)",
    )


def _overdetermined_consistent(
    model: LinearUncertainModel, data: DataSet, noise: NoiseModel
) -> bool:
    from .solvers.minimax import feasible_point

    omega = assemble_omega(model, data, noise)
    return feasible_point(omega) is not None


# -- falsification ----------------------------------------------------------


@dataclass(frozen=True)
class FalsificationResult:
    verdict: str  # "unfalsified" | "falsified"
    gamma_opt: Optional[float]
    witness: Optional[tuple[np.ndarray, np.ndarray, np.ndarray]]

    @property
    def unfalsified(self) -> bool:
        return self.verdict == "unfalsified"


def falsification_check(
    model: LinearUncertainModel,
    data: DataSet,
    noise: NoiseModel,
    uset,
    gamma_fixed: float,
) -> FalsificationResult:
    """Decide whether some trajectory within the fixed-size uncertainty set
    and the noise bounds reproduces the data exactly.

    Solved by computing the smallest enclosing gamma and comparing it with
    the fixed budget.
    """
    from .optimistic import solve_optimistic

    if gamma_fixed < 0:
        raise ValueError("gamma_fixed must be nonnegative")
    sol = solve_optimistic(model, data, noise, uset)
    if sol.status.kind == "infeasible":
        return FalsificationResult("falsified", None, None)

    tol_feas = TOL_OPT_ABS + TOL_OPT_REL * max(1.0, gamma_fixed)
    if sol.status.kind == "optimal":
        if sol.gamma <= gamma_fixed + tol_feas:
            return FalsificationResult("unfalsified", sol.gamma, sol.witness)
        return FalsificationResult("falsified", sol.gamma, None)

    # Solver hit its budget: the incumbent is still an upper bound and the
    # reported lower bound a valid lower bound, so decide when they allow it.
    if sol.gamma is not None and sol.gamma <= gamma_fixed + tol_feas:
        return FalsificationResult("unfalsified", sol.gamma, sol.witness)
    if sol.lower_bound is not None and sol.lower_bound > gamma_fixed + tol_feas:
        return FalsificationResult("falsified", sol.gamma, None)
    raise SolverFailureError(
        f"optimistic solve inconclusive (status {sol.status.kind}); cannot "
        f"certify a verdict for gamma={gamma_fixed}"
    )
