"""Bipartite pure states, Schmidt machinery, entanglement measures,
majorization, and group-shifted state families.

States are stored as their amplitude matrices: the ket sum_ij c_ij |i>|j>
is the matrix [c_ij], so local operations act by left/right multiplication
and the Schmidt coefficients are the squared singular values.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup

__all__ = [
    "BipartitePureState",
    "MajorizationVerdict",
    "SchmidtDecomposition",
    "ShiftedSetSpec",
    "build_group_shifted",
    "dual_of_ket",
    "entropy_of_entanglement",
    "g_concurrence",
    "ket_of_dual",
    "majorization_compare",
    "schmidt_decompose",
    "shannon_entropy",
]

_NORM_TOL = 1e-10


@dataclass(frozen=True)
class BipartitePureState:
    """Normalized bipartite ket stored as its D_A x D_B amplitude matrix."""

    dual: np.ndarray

    def __post_init__(self):
        dual = np.ascontiguousarray(np.asarray(self.dual, dtype=np.complex128))
        if dual.ndim != 2:
            raise ValueError("dual must be a matrix")
        if not np.all(np.isfinite(dual.real)) or not np.all(np.isfinite(dual.imag)):
            raise ValueError("dual has non-finite entries")
        norm = np.linalg.norm(dual)
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state is not normalized (||dual||_F = {norm!r})")
        dual.setflags(write=False)
        object.__setattr__(self, "dual", dual)

    @property
    def dims(self) -> tuple[int, int]:
        return self.dual.shape

    @property
    def ket(self) -> np.ndarray:
        return self.dual.reshape(-1)

    @classmethod
    def from_ket(cls, ket, dims: tuple[int, int]) -> "BipartitePureState":
        return cls(dual_of_ket(ket, dims))

    def overlap(self, other: "BipartitePureState") -> complex:
        return complex(np.vdot(self.dual, other.dual))


def dual_of_ket(ket, dims: tuple[int, int]) -> np.ndarray:
    """Amplitude vector -> matrix; component i*D_B + j goes to entry (i, j)."""
    ket = np.asarray(ket, dtype=np.complex128).reshape(-1)
    da, db = dims
    if ket.size != da * db:
        raise ValueError(f"ket length {ket.size} does not match dims {dims}")
    return ket.reshape(da, db)


def ket_of_dual(dual) -> np.ndarray:
    dual = np.asarray(dual, dtype=np.complex128)
    if dual.ndim != 2:
        raise ValueError("dual must be a matrix")
    return dual.reshape(-1)


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Schmidt data; coefficients sorted nonincreasing and summing to 1.

    The state is sum_r sqrt(coefficients[r]) |u_r>|v_r> with u_r, v_r the
    columns of left_basis and right_basis.
    """

    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray

    @property
    def rank(self) -> int:
        return int(np.sum(self.coefficients > 1e-12))

    def reconstruct_dual(self) -> np.ndarray:
        root = np.sqrt(self.coefficients)
        return (self.left_basis * root[None, :]) @ self.right_basis.T


def schmidt_decompose(state: BipartitePureState) -> SchmidtDecomposition:
    u, s, vh = np.linalg.svd(state.dual, full_matrices=False)
    # dual = U diag(s) Vh, so the right Schmidt vectors are the columns of Vh^T
    return SchmidtDecomposition(coefficients=s * s, left_basis=u, right_basis=vh.T)


def shannon_entropy(p, base: float) -> float:
    """Entropy of a probability vector; zero entries contribute zero."""
    if base <= 1.0:
        raise ValueError("entropy base must exceed 1")
    p = np.asarray(p, dtype=float)
    nz = p[p > 0.0]
    return float(-(nz * np.log(nz)).sum() / np.log(base))


def entropy_of_entanglement(state: BipartitePureState, base: float | None = None) -> float:
    """Entropy of the Schmidt coefficients.

    Defaults to base D (D = min dimension) so a maximally entangled state
    scores exactly 1 whatever its dimension.
    """
    coeffs = np.linalg.svd(state.dual, compute_uv=False) ** 2
    if base is None:
        base = min(state.dims)
    return shannon_entropy(coeffs, base)


def g_concurrence(state: BipartitePureState) -> float:
    """D times the geometric mean of the Schmidt coefficients.

    Equals D * |det(dual)|^(2/D); zero exactly when the state is not full
    Schmidt rank, and 1 exactly for maximally entangled states.
    """
    da, db = state.dims
    if da != db:
        raise ValueError("g_concurrence needs a square amplitude matrix")
    det = np.linalg.det(state.dual)
    return float(da * abs(det) ** (2.0 / da))


class MajorizationVerdict(enum.Enum):
    X_MAJORIZED_BY_Y = "x_majorized_by_y"
    Y_MAJORIZED_BY_X = "y_majorized_by_x"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def majorization_compare(x, y, tol: float = 1e-10) -> MajorizationVerdict:
    """Compare probability vectors under the sorted-prefix-sum partial order.

    Vectors are zero-padded to a common length and must each sum to 1 within
    1e-9.  EQUAL means the sorted vectors agree elementwise within tol.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    n = max(x.size, y.size)
    x = np.pad(x, (0, n - x.size))
    y = np.pad(y, (0, n - y.size))
    for name, v in (("x", x), ("y", y)):
        if abs(v.sum() - 1.0) > 1e-9:
            raise ValueError(f"{name} is not normalized (sum {v.sum()!r})")
    xs = np.sort(x)[::-1]
    ys = np.sort(y)[::-1]
    if np.max(np.abs(xs - ys)) <= tol:
        return MajorizationVerdict.EQUAL
    px = np.cumsum(xs)
    py = np.cumsum(ys)
    x_below = bool(np.all(px <= py + tol))
    y_below = bool(np.all(py <= px + tol))
    if x_below and y_below:
        return MajorizationVerdict.EQUAL
    if x_below:
        return MajorizationVerdict.X_MAJORIZED_BY_Y
    if y_below:
        return MajorizationVerdict.Y_MAJORIZED_BY_X
    return MajorizationVerdict.INCOMPARABLE


@dataclass(frozen=True)
class ShiftedSetSpec:
    """A group-shifted family of D x D states, D = |G| * copies.

    weights[g, n] is the squared amplitude attached to basis label (g, n);
    all weights are strictly positive (full Schmidt rank regime) and sum to 1.
    phases[f, g] is an optional phase (radians) carried by the g-th term of
    the f-th family member.  shift_side selects which party carries the
    group shift.
    """

    group: FiniteGroup
    weights: np.ndarray
    copies: int = 1
    phases: np.ndarray | None = None
    shift_side: str = "B"

    def __post_init__(self):
        n = self.group.order
        if self.copies < 1:
            raise ValueError("copies must be >= 1")
        w = np.asarray(self.weights, dtype=float)
        if w.ndim == 1:
            if w.size != n * self.copies:
                raise ValueError(f"need {n * self.copies} weights, got {w.size}")
            w = w.reshape(n, self.copies)
        if w.shape != (n, self.copies):
            raise ValueError(f"weights shape {w.shape} != ({n}, {self.copies})")
        if np.any(w <= 0.0):
            raise ValueError("all weights must be strictly positive")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1 (got {w.sum()!r})")
        w = np.ascontiguousarray(w)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if self.phases is None:
            ph = np.zeros((n, n))
        else:
            ph = np.asarray(self.phases, dtype=float)
            if ph.shape != (n, n):
                raise ValueError(f"phases shape {ph.shape} != ({n}, {n})")
            if not np.all(np.isfinite(ph)):
                raise ValueError("phases must be finite")
            ph = np.ascontiguousarray(ph)
        ph.setflags(write=False)
        object.__setattr__(self, "phases", ph)
        if self.shift_side not in ("A", "B"):
            raise ValueError("shift_side must be 'A' or 'B'")

    @property
    def dim(self) -> int:
        return self.group.order * self.copies

    @property
    def weight_vector(self) -> np.ndarray:
        """Weights flattened in (group, copy) order, matching basis labels."""
        return self.weights.reshape(-1)

    @property
    def block_weights(self) -> np.ndarray:
        """Total weight per copy block."""
        return self.weights.sum(axis=0)

    @property
    def has_phases(self) -> bool:
        return bool(np.any(self.phases != 0.0))


def build_group_shifted(spec: ShiftedSetSpec) -> list[BipartitePureState]:
    """The family {psi_f : f in G}; member f places amplitude sqrt(w[g,n])
    (times any phase) between labels (g, n) and (f*g, n), shifted on the
    chosen side.  Basis label (g, n) is the index g * copies + n."""
    n = spec.group.order
    nt = spec.copies
    d = spec.dim
    amp = np.sqrt(spec.weights)
    copies = np.arange(nt)
    rows_base = np.arange(n)[:, None] * nt + copies[None, :]
    states = []
    for f in range(n):
        shifted = spec.group.cayley[f][:, None] * nt + copies[None, :]
        dual = np.zeros((d, d), dtype=np.complex128)
        entries = amp * np.exp(1j * spec.phases[f])[:, None]
        if spec.shift_side == "B":
            dual[rows_base, shifted] = entries
        else:
            dual[shifted, rows_base] = entries
        states.append(BipartitePureState(dual))
    return states
