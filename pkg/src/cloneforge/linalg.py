"""Dense complex matrix kernels: tensor products, SVD, spectra, phase-blind
comparison, and unitary-equivalence machinery for group representations."""

from __future__ import annotations

import numpy as np

__all__ = [
    "DEFAULT_TOL",
    "eigenvalues_diagonalizable",
    "find_intertwiner",
    "frobenius_norm",
    "phase_invariant_distance",
    "svd",
    "tensor_product",
    "unitarize_similarity",
    "unitarity_defect",
]

DEFAULT_TOL = 1e-8
_TENSOR_ENTRY_CAP = 10**8


def as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix has non-finite entries")
    return m


def frobenius_norm(m) -> float:
    return float(np.linalg.norm(np.asarray(m)))


def unitarity_defect(m) -> float:
    """Frobenius distance of m^dag m from the identity."""
    m = np.asarray(m, dtype=np.complex128)
    return float(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[1])))


def tensor_product(a, b, max_entries: int = _TENSOR_ENTRY_CAP) -> np.ndarray:
    """Kronecker product with index convention (i*rows_b + k, j*cols_b + l)."""
    a = as_matrix(a)
    b = as_matrix(b)
    entries = a.shape[0] * a.shape[1] * b.shape[0] * b.shape[1]
    if entries > max_entries:
        raise ValueError(f"tensor product would have {entries} entries (cap {max_entries})")
    return np.kron(a, b)


def svd(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full SVD: returns (U, sigma, V) with m = U @ diag(sigma) @ V^dag.

    sigma is nonincreasing and nonnegative; U, V are unitary.  Reconstruction
    is verified to 1e-10 * ||m||_F.
    """
    m = as_matrix(m)
    u, s, vh = np.linalg.svd(m, full_matrices=True)
    v = vh.conj().T
    smat = np.zeros(m.shape, dtype=np.complex128)
    smat[: len(s), : len(s)] = np.diag(s)
    residual = np.linalg.norm(m - u @ smat @ vh)
    if residual > 1e-10 * max(1.0, np.linalg.norm(m)):
        raise np.linalg.LinAlgError(f"svd reconstruction residual {residual:.3e} too large")
    return u, s, v


def eigenvalues_diagonalizable(m, residual_tol: float = DEFAULT_TOL) -> np.ndarray:
    """Eigenvalue multiset of a matrix similar to a unitary.

    Residuals ||m v - w v|| of the recovered pairs are checked against
    residual_tol; defective inputs are out of contract and rejected.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("eigenvalues need a square matrix")
    w, vecs = np.linalg.eig(m)
    residual = np.max(np.linalg.norm(m @ vecs - vecs * w[None, :], axis=0))
    if residual > residual_tol:
        raise np.linalg.LinAlgError(
            f"eigenpair residual {residual:.3e} exceeds {residual_tol:.1e}; "
            "input looks defective or ill-conditioned"
        )
    return w


def phase_invariant_distance(a, b) -> float:
    """min over theta of ||a - e^{i theta} b||_F, in closed form."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    nb = np.linalg.norm(b)
    if nb == 0.0:
        raise ValueError("second argument must be nonzero")
    na = np.linalg.norm(a)
    overlap = abs(np.vdot(a, b))
    return float(np.sqrt(max(0.0, na * na + nb * nb - 2.0 * overlap)))


def _family(ms) -> np.ndarray:
    fam = np.asarray([as_matrix(m) for m in ms], dtype=np.complex128)
    if fam.ndim != 3 or fam.shape[1] != fam.shape[2]:
        raise ValueError("expected a family of square matrices of equal dimension")
    return fam


def unitarize_similarity(t_family, l_family, s, *, precondition_tol: float = DEFAULT_TOL,
                         output_tol: float = 1e-7) -> np.ndarray:
    """Turn an invertible similarity between two unitary representation families
    into a unitary one.

    Given families with T_f = S L_f S^{-1} (all T_f, L_f unitary), returns a
    unitary W with T_f = W L_f W^dag for every f.  W is the unitary polar
    factor of S: writing S = V diag(d) U via SVD, the intertwining equations
    force the parts of the similarity mixing distinct singular values to
    vanish, so W = V @ U works regardless of degeneracies in d.
    """
    t_fam = _family(t_family)
    l_fam = _family(l_family)
    if t_fam.shape != l_fam.shape:
        raise ValueError("families must have matching sizes and dimensions")
    s = as_matrix(s)
    d = t_fam.shape[1]
    if s.shape != (d, d):
        raise ValueError("similarity matrix has wrong shape")

    for name, fam in (("first", t_fam), ("second", l_fam)):
        worst = max(unitarity_defect(m) for m in fam)
        if worst > precondition_tol:
            raise ValueError(f"{name} family is not unitary (defect {worst:.3e})")
    sinv = np.linalg.inv(s)
    worst = max(np.linalg.norm(t - s @ l @ sinv) for t, l in zip(t_fam, l_fam))
    if worst > precondition_tol:
        raise ValueError(f"similarity precondition fails (residual {worst:.3e})")

    u, _, vh = np.linalg.svd(s)
    w = u @ vh
    conj = max(np.linalg.norm(t - w @ l @ w.conj().T) for t, l in zip(t_fam, l_fam))
    if unitarity_defect(w) > 1e-10 or conj > output_tol:
        raise np.linalg.LinAlgError(
            f"unitarization failed (unitarity {unitarity_defect(w):.3e}, conjugation {conj:.3e})"
        )
    return w


def find_intertwiner(t_family, l_family, *, residual_tol: float = DEFAULT_TOL,
                     invertibility_tol: float = 1e-6, samples: int = 32,
                     seed: int = 7) -> np.ndarray | None:
    """Invertible S with T_f S = S L_f for every index f, or None.

    The joint constraints are stacked as (T_f (x) I - I (x) L_f^T) vec(S) = 0
    (row-major vec) and the nullspace extracted by SVD; random combinations of
    the nullspace basis are sampled until one is safely invertible.
    """
    t_fam = _family(t_family)
    l_fam = _family(l_family)
    if t_fam.shape != l_fam.shape:
        raise ValueError("families must have matching sizes and dimensions")
    n, d, _ = t_fam.shape
    eye = np.eye(d)
    blocks = [np.kron(t_fam[f], eye) - np.kron(eye, l_fam[f].T) for f in range(n)]
    stacked = np.concatenate(blocks, axis=0)
    _, sv, vh = np.linalg.svd(stacked)
    cutoff = max(1e-12, sv[0] * 1e-10) if len(sv) else 1e-12
    rank = int(np.sum(sv > cutoff))
    nullity = d * d - rank
    if nullity == 0:
        return None
    basis = vh[rank:].conj()  # rows span the nullspace of `stacked`

    def acceptable(vec: np.ndarray) -> np.ndarray | None:
        s = vec.reshape(d, d)
        norm = np.linalg.norm(s)
        if norm == 0.0:
            return None
        s = s * (np.sqrt(d) / norm)
        smin = np.linalg.svd(s, compute_uv=False)[-1]
        if smin < invertibility_tol:
            return None
        worst = max(np.linalg.norm(t_fam[f] @ s - s @ l_fam[f]) for f in range(n))
        if worst > residual_tol:
            return None
        return s

    for row in basis:
        s = acceptable(row)
        if s is not None:
            return s
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        coeff = rng.standard_normal(nullity) + 1j * rng.standard_normal(nullity)
        s = acceptable(coeff @ basis)
        if s is not None:
            return s
    return None
