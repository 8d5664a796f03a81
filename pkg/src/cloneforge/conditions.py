"""Necessary-condition battery for candidate clonable state sets.

The checks certify consistency with the necessary conditions for local
cloning by separable operations: full Schmidt rank, equal entanglement under
the geometric-mean measure, majorization compatibility, a spectrum condition
on the transition operators, closure of the set under triple products into a
finite-group structure, divisibility of the dimension by the group order, and
the vanishing-trace character criterion.  A passing battery never asserts
clonability, only consistency; the converse directions live in the protocol
module (explicit cloning run) and the classifiers below.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .groups import FiniteGroup, regular_representation
from .linalg import find_intertwiner, phase_invariant_distance, unitarize_similarity, unitarity_defect
from .states import (
    BipartitePureState,
    MajorizationVerdict,
    g_concurrence,
    majorization_compare,
)

__all__ = [
    "ConditionReport",
    "DivisibilityCharacterCheck",
    "EntanglementEqualityCheck",
    "FullRankCheck",
    "GroupExtension",
    "MajorizationCompatCheck",
    "MaxEntClassification",
    "QubitPairClassification",
    "SpectrumCheck",
    "check_divisibility_and_character",
    "check_equal_gconcurrence",
    "check_full_rank",
    "check_majorization_compat",
    "check_spectrum_condition",
    "classify_max_entangled_set",
    "extend_to_group",
    "qubit_clonability",
    "run_battery",
]

_RANK_TOL = 1e-9
_MEMBER_TOL = 1e-7
_ORTH_TOL = 1e-7


def _det_phase_normalize(t: np.ndarray) -> np.ndarray:
    """Divide by the principal D-th root of det(t), fixing |det| = 1 and
    pinning the residual phase to a deterministic branch."""
    d = t.shape[0]
    det = np.linalg.det(t)
    if abs(det) < 1e-300:
        raise ValueError("transition operator is singular")
    return t / det ** (1.0 / d)


@dataclass(frozen=True)
class FullRankCheck:
    passed: bool
    min_singular_values: list[float]
    blank_min_singular: float | None = None
    witness: object = None


def check_full_rank(states: list[BipartitePureState],
                    blank: BipartitePureState | None = None,
                    tol: float = _RANK_TOL) -> FullRankCheck:
    """Every state (and the blank, if given) must have full Schmidt rank."""
    mins = []
    witness = None
    for idx, state in enumerate(states):
        da, db = state.dims
        smin = float(np.linalg.svd(state.dual, compute_uv=False)[-1]) if da == db else 0.0
        mins.append(smin)
        if smin <= tol and witness is None:
            witness = idx
    blank_min = None
    if blank is not None:
        blank_min = float(np.linalg.svd(blank.dual, compute_uv=False)[-1])
        if blank_min <= tol and witness is None:
            witness = "blank"
    return FullRankCheck(witness is None, mins, blank_min, witness)


@dataclass(frozen=True)
class EntanglementEqualityCheck:
    passed: bool
    g_concurrences: list[float]
    det_magnitudes: list[float]
    det_passed: bool


def check_equal_gconcurrence(states: list[BipartitePureState],
                             tol: float = 1e-8) -> EntanglementEqualityCheck:
    """All states must agree on the geometric-mean entanglement measure;
    the equivalent |det| equality is evaluated alongside as a cross-check."""
    values = [g_concurrence(s) for s in states]
    dets = [float(abs(np.linalg.det(s.dual))) for s in states]
    spread = max(values) - min(values) if values else 0.0
    det_spread = max(dets) - min(dets) if dets else 0.0
    return EntanglementEqualityCheck(spread <= tol, values, dets, det_spread <= tol)


@dataclass(frozen=True)
class MajorizationCompatCheck:
    passed: bool
    verdicts: list[list[str]]
    witness: tuple[int, int] | None = None


def check_majorization_compat(states: list[BipartitePureState]) -> MajorizationCompatCheck:
    """Any two members must share a Schmidt spectrum or be incomparable."""
    n = len(states)
    spectra = [np.linalg.svd(s.dual, compute_uv=False) ** 2 for s in states]
    verdicts = [["equal"] * n for _ in range(n)]
    witness = None
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            verdict = majorization_compare(spectra[i], spectra[j])
            verdicts[i][j] = verdict.value
            ok = verdict in (MajorizationVerdict.EQUAL, MajorizationVerdict.INCOMPARABLE)
            if not ok and witness is None:
                witness = (i, j)
    return MajorizationCompatCheck(witness is None, verdicts, witness)


def _multisets_match(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    used = np.zeros(len(b), dtype=bool)
    for x in a:
        dist = np.abs(b - x)
        dist[used] = np.inf
        j = int(np.argmin(dist))
        if dist[j] > tol:
            return False
        used[j] = True
    return True


@dataclass(frozen=True)
class SpectrumCheck:
    passed: bool
    pair: tuple[int, int]
    matched_phase: float | None = None


def check_spectrum_condition(states: list[BipartitePureState],
                             pair: tuple[int, int],
                             tol: float = 1e-7) -> SpectrumCheck:
    """Spectrum condition on T = psi_i psi_j^{-1}.

    The transition operator is only defined up to a phase whose D-th power is
    constrained by the determinant, so the check is: after normalizing
    |det T| = 1, some admissible phase rotation makes the spectrum of
    T (x) I equal (as a multiset) to that of T (x) T.
    """
    i, j = pair
    if i == j:
        return SpectrumCheck(True, pair, 0.0)
    psi_j = states[j].dual
    if np.linalg.svd(psi_j, compute_uv=False)[-1] <= _RANK_TOL:
        raise ValueError(f"state {j} is singular; spectrum condition undefined")
    t = states[i].dual @ np.linalg.inv(psi_j)
    d = t.shape[0]
    t = t / abs(np.linalg.det(t)) ** (1.0 / d)
    chi = float(np.angle(np.linalg.det(t)))
    eye = np.eye(d)
    spec_left = np.linalg.eigvals(np.kron(t, eye))
    spec_right = np.linalg.eigvals(np.kron(t, t))
    for k in range(d * d):
        delta = 2.0 * np.pi * k / (d * d) - chi / d
        if _multisets_match(spec_left, np.exp(1j * delta) * spec_right, tol):
            return SpectrumCheck(True, pair, delta)
    return SpectrumCheck(False, pair, None)


@dataclass(frozen=True)
class GroupExtension:
    """Outcome of closing a state set under triple products.

    On success: the inferred group (identity at the first input state), the
    extended family in discovery order, and the det-normalized transition
    operators indexed like the group elements.  On failure: a witness dict.
    """

    group: FiniteGroup | None
    states: list[BipartitePureState]
    t_operators: np.ndarray | None
    failure: dict | None = None

    @property
    def ok(self) -> bool:
        return self.group is not None


def _orthonormal(duals: list[np.ndarray], tol: float = 1e-8) -> bool:
    for i in range(len(duals)):
        for j in range(i + 1, len(duals)):
            if abs(np.vdot(duals[i], duals[j])) > tol:
                return False
    return True


def extend_to_group(states: list[BipartitePureState], cap: int | None = None,
                    member_tol: float = _MEMBER_TOL,
                    orth_tol: float = _ORTH_TOL) -> GroupExtension:
    """Close a set of orthonormal full-rank states under normalized triple
    products psi_i psi_j^{-1} psi_k.

    Each product must match an existing member up to a phase or be orthogonal
    to the whole family; anything in between is a hard failure witness (the
    set cannot be consistent with clonability).  On closure the transition
    operators T_l = psi_l psi_0^{-1} are multiplied pairwise to build a Cayley
    table with the first input state as identity, which is validated as a
    group.
    """
    duals = [s.dual for s in states]
    if not duals:
        raise ValueError("need at least one state")
    d = duals[0].shape[0]
    if any(m.shape != (d, d) for m in duals):
        raise ValueError("states must share a square dual shape")
    if any(np.linalg.svd(m, compute_uv=False)[-1] <= _RANK_TOL for m in duals):
        raise ValueError("extension requires full-rank states")
    if not _orthonormal(duals):
        raise ValueError("extension requires orthonormal states")
    cap = d if cap is None else cap
    if cap < len(duals):
        raise ValueError("cap smaller than the input set")

    family = list(duals)
    while True:
        mem = np.stack(family)
        inv_mem = np.stack([np.linalg.inv(m) for m in family])
        prod = np.einsum("iab,jbc,kcd->ijkad", mem, inv_mem, mem)
        norms = np.linalg.norm(prod, axis=(3, 4))
        prod = prod / norms[:, :, :, None, None]
        overlaps = np.abs(np.einsum("lad,ijkad->ijkl", mem.conj(), prod))
        added = False
        nb = len(family)
        for i, j, k in itertools.product(range(nb), repeat=3):
            candidate = prod[i, j, k]
            best = float(overlaps[i, j, k].max())
            # members appended within this sweep are not in `overlaps` yet
            for extra in family[nb:]:
                best = max(best, abs(np.vdot(extra, candidate)))
            if best >= 1.0 - 0.5 * member_tol**2:
                continue  # matches an existing member up to a phase
            if best <= orth_tol:
                if len(family) >= cap:
                    return GroupExtension(None, [BipartitePureState(m) for m in family], None,
                                          {"reason": "cap_exceeded", "cap": cap})
                family.append(candidate)
                added = True
            else:
                return GroupExtension(None, [BipartitePureState(m) for m in family], None,
                                      {"reason": "ambiguous_member", "triple": (i, j, k),
                                       "max_overlap": best})
        if not added:
            break

    base_inv = np.linalg.inv(family[0])
    t_ops = np.stack([_det_phase_normalize(m @ base_inv) for m in family])
    t_unit = t_ops / np.linalg.norm(t_ops, axis=(1, 2))[:, None, None]
    nb = len(family)
    cayley = np.zeros((nb, nb), dtype=np.int64)
    for i in range(nb):
        for j in range(nb):
            product = t_unit[i] @ t_unit[j]
            product = product / np.linalg.norm(product)
            dists = [phase_invariant_distance(product, t_unit[l]) for l in range(nb)]
            l = int(np.argmin(dists))
            if dists[l] > 1e-6:
                return GroupExtension(None, [BipartitePureState(m) for m in family], None,
                                      {"reason": "closure_mismatch", "pair": (i, j),
                                       "distance": dists[l]})
            cayley[i, j] = l
    try:
        group = FiniteGroup.from_table(cayley, label=f"inferred-{nb}")
    except ValueError as exc:
        return GroupExtension(None, [BipartitePureState(m) for m in family], None,
                              {"reason": "invalid_table", "detail": str(exc)})
    return GroupExtension(group, [BipartitePureState(m) for m in family], t_ops, None)


@dataclass(frozen=True)
class DivisibilityCharacterCheck:
    passed: bool
    divides: bool
    n_t: int | None
    traces: list[complex]
    trace_identity: float
    character_passed: bool


def check_divisibility_and_character(extension: GroupExtension, dim: int,
                                     trace_tol: float = 1e-7,
                                     identity_tol: float = 1e-9) -> DivisibilityCharacterCheck:
    """The inferred group order must divide the dimension and the transition
    operators must have vanishing trace away from the identity."""
    if not extension.ok:
        raise ValueError("needs a successful group extension")
    traces = [complex(np.trace(t)) for t in extension.t_operators]
    char_ok = all(abs(traces[l]) <= trace_tol for l in range(1, len(traces)))
    identity_err = abs(traces[0] - dim)
    char_ok = char_ok and identity_err <= identity_tol
    order = extension.group.order
    divides = dim % order == 0
    return DivisibilityCharacterCheck(
        passed=divides and char_ok,
        divides=divides,
        n_t=dim // order if divides else None,
        traces=traces,
        trace_identity=float(abs(traces[0])),
        character_passed=char_ok,
    )


@dataclass(frozen=True)
class MaxEntClassification:
    """Group-shifted certificate for a maximally entangled set, or rejection.

    When accepted, `w` is a unitary with psi_f proportional to
    W L(f) W^dag psi_base for every member of the extended family, L the
    left-translation permutation representation of the recovered group.
    """

    accepted: bool
    group: FiniteGroup | None = None
    w: np.ndarray | None = None
    states: list[BipartitePureState] = field(default_factory=list)
    witness: dict | None = None


def classify_max_entangled_set(states: list[BipartitePureState],
                               uniform_tol: float = 1e-8,
                               reconstruction_tol: float = 1e-7) -> MaxEntClassification:
    d = states[0].dims[0]
    for idx, state in enumerate(states):
        coeffs = np.linalg.svd(state.dual, compute_uv=False) ** 2
        if np.max(np.abs(coeffs - 1.0 / d)) > uniform_tol:
            raise ValueError(f"state {idx} is not maximally entangled")
    ext = extend_to_group(states)
    if not ext.ok:
        return MaxEntClassification(False, witness=ext.failure)
    t_ops = ext.t_operators
    worst = max(unitarity_defect(t) for t in t_ops)
    if worst > 1e-8:
        return MaxEntClassification(False, witness={"reason": "non_unitary_transitions",
                                                    "defect": worst})
    rep = regular_representation(ext.group).astype(np.complex128)
    s = find_intertwiner(t_ops, rep)
    if s is None:
        return MaxEntClassification(False, witness={"reason": "no_intertwiner"})
    w = unitarize_similarity(t_ops, rep, s)
    base = ext.states[0].dual
    for l, state in enumerate(ext.states):
        recon = w @ rep[l] @ w.conj().T @ base
        if phase_invariant_distance(state.dual, recon) > reconstruction_tol:
            return MaxEntClassification(False, witness={"reason": "reconstruction_failed",
                                                        "member": l})
    return MaxEntClassification(True, group=ext.group, w=w, states=ext.states)


@dataclass(frozen=True)
class QubitPairClassification:
    """Canonical form of a candidate two-qubit clonable pair.

    `branch` records which off-diagonal of the second state carries the large
    amplitude once the first state is put in Schmidt form ("upper" for the
    (0,1) entry, "lower" for (1,0)); `theta` is the residual relative phase.
    """

    accepted: bool
    lam: float
    branch: str | None = None
    theta: float | None = None
    reason: str | None = None
    canonical_second: np.ndarray | None = None


def qubit_clonability(first: BipartitePureState, second: BipartitePureState,
                      tol: float = 1e-8) -> QubitPairClassification:
    """Decide whether an orthogonal, partially entangled two-qubit pair has
    the shifted canonical form required for cloning with a rank-2 blank."""
    if first.dims != (2, 2) or second.dims != (2, 2):
        raise ValueError("qubit classifier needs 2x2 states")
    if abs(np.vdot(first.dual, second.dual)) > tol:
        raise ValueError("states must be orthogonal")
    u, sing, vh = np.linalg.svd(first.dual)
    if sing[-1] <= tol or np.linalg.svd(second.dual, compute_uv=False)[-1] <= tol:
        raise ValueError("product states are out of scope")
    lam = float(sing[0] ** 2)
    if abs(lam - 0.5) <= tol:
        raise ValueError("maximally entangled pairs are classified separately")
    # pin the per-column phase freedom of the Schmidt bases
    for r in range(2):
        anchor = u[np.argmax(np.abs(u[:, r])), r]
        phase = anchor / abs(anchor)
        u[:, r] = u[:, r] / phase
        vh[r, :] = vh[r, :] * phase
    g = u.conj().T @ second.dual @ vh.conj().T
    if abs(g[0, 0]) > tol or abs(g[1, 1]) > tol:
        return QubitPairClassification(False, lam, reason="diagonal terms are nonzero",
                                       canonical_second=g)
    upper, lower = abs(g[0, 1]) ** 2, abs(g[1, 0]) ** 2
    if abs(upper - lam) <= tol and abs(lower - (1.0 - lam)) <= tol:
        branch = "upper"
        large, small = g[0, 1], g[1, 0]
    elif abs(lower - lam) <= tol and abs(upper - (1.0 - lam)) <= tol:
        branch = "lower"
        large, small = g[1, 0], g[0, 1]
    else:
        return QubitPairClassification(False, lam, reason="off-diagonal weights mismatch",
                                       canonical_second=g)
    theta = float(np.angle(small * np.conj(large)))
    return QubitPairClassification(True, lam, branch=branch, theta=theta, canonical_second=g)


@dataclass(frozen=True)
class ConditionReport:
    """Aggregated verdicts; `overall` is the conjunction of every check.

    A passing battery means "consistent with the necessary conditions", never
    a clonability claim.
    """

    full_rank: FullRankCheck
    entanglement_equality: EntanglementEqualityCheck
    majorization_compat: MajorizationCompatCheck
    spectrum: list[SpectrumCheck]
    group_closure: GroupExtension
    divisibility: DivisibilityCharacterCheck | None
    qubit_form: QubitPairClassification | None
    overall: bool
    failed_checks: list[str]


def run_battery(states: list[BipartitePureState],
                blank: BipartitePureState | None = None,
                cap: int | None = None) -> ConditionReport:
    full_rank = check_full_rank(states, blank)
    equality = check_equal_gconcurrence(states)
    compat = check_majorization_compat(states)

    spectrum: list[SpectrumCheck] = []
    spectrum_ok = full_rank.passed
    if full_rank.passed:
        for i, j in itertools.permutations(range(len(states)), 2):
            res = check_spectrum_condition(states, (i, j))
            spectrum.append(res)
            spectrum_ok = spectrum_ok and res.passed

    if full_rank.passed and _orthonormal([s.dual for s in states]):
        closure = extend_to_group(states, cap=cap)
    else:
        closure = GroupExtension(None, states, None,
                                 {"reason": "preconditions_not_met"})
    divisibility = None
    if closure.ok:
        divisibility = check_divisibility_and_character(closure, states[0].dims[0])

    qubit_form = None
    if len(states) == 2 and states[0].dims == (2, 2):
        try:
            qubit_form = qubit_clonability(states[0], states[1])
        except ValueError:
            qubit_form = None

    failed = []
    if not full_rank.passed:
        failed.append("full_rank")
    if not equality.passed:
        failed.append("equal_gconcurrence")
    if not equality.det_passed:
        failed.append("equal_det")
    if not compat.passed:
        failed.append("majorization_compat")
    if not spectrum_ok:
        failed.append("spectrum_condition")
    if not closure.ok:
        failed.append("group_closure")
    if divisibility is not None and not divisibility.passed:
        failed.append("divisibility_character")
    if qubit_form is not None and not qubit_form.accepted:
        failed.append("qubit_form")
    return ConditionReport(
        full_rank=full_rank,
        entanglement_equality=equality,
        majorization_compat=compat,
        spectrum=spectrum,
        group_closure=closure,
        divisibility=divisibility,
        qubit_form=qubit_form,
        overall=len(failed) == 0,
        failed_checks=failed,
    )
