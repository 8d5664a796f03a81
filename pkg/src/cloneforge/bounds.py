"""Lower bounds on the entanglement of the blank resource state.

For a group-shifted family with weights lambda and a candidate blank with
Schmidt vector gamma, an auxiliary-superposition argument produces two
D^2-component vectors

    alpha[(g,n),(h,m)] = gamma[h,m] * sum_{s,f} mu[inv(f),s] * lambda[f*g, n]
    beta[(g,n),(h,m)]  = sum_{s,f} mu[inv(f),s] * lambda[f*g, n] * lambda[f*h, m]

for any nonnegative weights mu; cloning is only possible if alpha is
majorized by beta.  Consequences implemented here: a lower bound on the
smallest Schmidt coefficient of the blank (a ratio of minima, invariant under
rescaling mu), and an entropy gap via the distribution q_r = sum_f
lambda_f lambda_{f r} which the blank's Schmidt vector must majorize-below.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import (
    BipartitePureState,
    MajorizationVerdict,
    ShiftedSetSpec,
    entropy_of_entanglement,
    g_concurrence,
    majorization_compare,
    shannon_entropy,
)

__all__ = [
    "BlankMajorization",
    "BoundReport",
    "EntropyGapResult",
    "GammaMinBound",
    "MonotoneBound",
    "MuWeights",
    "check_blank_majorization",
    "entropy_gap",
    "gamma_min_bound",
    "majorization_vectors",
    "monotone_bound",
    "blank_bound_report",
]

MU_STRATEGIES = ("uniform", "inverse_weights", "custom", "sampled")


@dataclass(frozen=True)
class MuWeights:
    """Nonnegative coefficients mu[f, s] indexed like the family weights.

    The majorization statement needs mu normalized to total 1; the ratio
    bound is scale-invariant, so recipes like mu[f, s] = 1 / lambda[inv(f), s]
    may be used unnormalized.
    """

    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(np.asarray(self.values, dtype=float))
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2:
            raise ValueError("mu must be a (group, copies) array")
        if np.any(values < 0.0) or not np.all(np.isfinite(values)):
            raise ValueError("mu entries must be finite and nonnegative")
        if values.sum() <= 0.0:
            raise ValueError("mu must have positive total weight")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def uniform(cls, group_order: int, copies: int = 1) -> "MuWeights":
        total = group_order * copies
        return cls(np.full((group_order, copies), 1.0 / total))

    @classmethod
    def inverse_weights(cls, spec: ShiftedSetSpec) -> "MuWeights":
        """mu[f, s] = 1 / lambda[inv(f), s], deliberately unnormalized."""
        return cls(1.0 / spec.weights[spec.group.inverses, :])

    def normalized(self) -> "MuWeights":
        return MuWeights(self.values / self.values.sum())


def _core_vectors(spec: ShiftedSetSpec, mu_values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """a_core[g, n] and b_core[(g,n),(h,m)], the mu-weighted translation sums."""
    group = spec.group
    nu = mu_values[group.inverses, :]
    shifted = spec.weights[group.cayley, :]  # [f, g, n] = lambda[f*g, n]
    a_core = np.einsum("fs,fgn->gn", nu, shifted)
    b_core = np.einsum("fs,fgn,fhm->gnhm", nu, shifted, shifted)
    return a_core, b_core


def _as_mu(spec: ShiftedSetSpec, mu: MuWeights | None) -> MuWeights:
    if mu is None:
        return MuWeights.uniform(spec.group.order, spec.copies)
    values = mu.values
    if values.shape != (spec.group.order, spec.copies):
        raise ValueError(f"mu shape {values.shape} does not match spec")
    return mu


def _as_gamma(spec: ShiftedSetSpec, blank_gamma) -> np.ndarray:
    gamma = np.asarray(blank_gamma, dtype=float)
    if gamma.ndim == 1:
        if gamma.size != spec.dim:
            raise ValueError(f"gamma needs {spec.dim} entries, got {gamma.size}")
        gamma = gamma.reshape(spec.group.order, spec.copies)
    if gamma.shape != (spec.group.order, spec.copies):
        raise ValueError("gamma shape does not match spec")
    if np.any(gamma < 0.0) or abs(gamma.sum() - 1.0) > 1e-9:
        raise ValueError("gamma must be a probability vector")
    return gamma


def majorization_vectors(spec: ShiftedSetSpec, blank_gamma,
                         mu: MuWeights | None = None) -> tuple[np.ndarray, np.ndarray]:
    """The (alpha, beta) pair for a candidate blank, flattened in
    ((g,n),(h,m)) order.  Phases in the spec never enter."""
    mu = _as_mu(spec, mu)
    gamma = _as_gamma(spec, blank_gamma)
    a_core, b_core = _core_vectors(spec, mu.values)
    alpha = np.einsum("gn,hm->gnhm", a_core, gamma)
    return alpha.reshape(-1), b_core.reshape(-1)


@dataclass(frozen=True)
class BlankMajorization:
    passed: bool
    verdict: MajorizationVerdict
    alpha: np.ndarray
    beta: np.ndarray


def check_blank_majorization(spec: ShiftedSetSpec, blank_gamma,
                             mu: MuWeights | None = None) -> BlankMajorization:
    """Necessary condition alpha majorized-by beta for the given blank.

    mu is normalized internally so both vectors are probability vectors.
    Failure rules the blank out for cloning this family.
    """
    mu = _as_mu(spec, mu).normalized()
    alpha, beta = majorization_vectors(spec, blank_gamma, mu)
    verdict = majorization_compare(alpha, beta)
    passed = verdict in (MajorizationVerdict.X_MAJORIZED_BY_Y, MajorizationVerdict.EQUAL)
    return BlankMajorization(passed, verdict, alpha, beta)


@dataclass(frozen=True)
class GammaMinBound:
    value: float
    strategy: str
    mu: np.ndarray


def _bound_ratio(spec: ShiftedSetSpec, mu_values: np.ndarray) -> float:
    a_core, b_core = _core_vectors(spec, mu_values)
    return float(b_core.min() / a_core.min())


def gamma_min_bound(spec: ShiftedSetSpec, strategy: str = "inverse_weights", *,
                    mu: MuWeights | None = None, samples: int = 1000,
                    seed: int = 0) -> GammaMinBound:
    """Lower bound on the smallest Schmidt coefficient of any admissible blank.

    The bound is min(beta-core) / min(alpha-core), invariant under rescaling
    mu.  Strategies: "uniform"; "inverse_weights" (mu[f,s] = 1/lambda[inv(f),s],
    which is exact at 1/D for D = 2 and 3); "custom" (pass mu); "sampled"
    (best of the named recipes plus `samples` Dirichlet draws).
    """
    if strategy not in MU_STRATEGIES:
        raise ValueError(f"unknown mu strategy {strategy!r}")
    if strategy == "custom":
        chosen = _as_mu(spec, mu)
        return GammaMinBound(_bound_ratio(spec, chosen.values), strategy, chosen.values)
    if strategy == "uniform":
        chosen = MuWeights.uniform(spec.group.order, spec.copies)
        return GammaMinBound(_bound_ratio(spec, chosen.values), strategy, chosen.values)
    inv_mu = MuWeights.inverse_weights(spec)
    if strategy == "inverse_weights":
        return GammaMinBound(_bound_ratio(spec, inv_mu.values), strategy, inv_mu.values)
    # sampled: maximize the ratio over random mu, seeded for reproducibility
    best_values = inv_mu.values
    best = _bound_ratio(spec, best_values)
    uniform = MuWeights.uniform(spec.group.order, spec.copies)
    candidate = _bound_ratio(spec, uniform.values)
    if candidate > best:
        best, best_values = candidate, uniform.values
    rng = np.random.default_rng(seed)
    shape = (spec.group.order, spec.copies)
    for _ in range(samples):
        draw = rng.dirichlet(np.ones(spec.group.order * spec.copies)).reshape(shape)
        candidate = _bound_ratio(spec, draw)
        if candidate > best:
            best, best_values = candidate, draw
    return GammaMinBound(best, "sampled", best_values)


@dataclass(frozen=True)
class EntropyGapResult:
    """Entropy floor for the blank via q_r = sum_f lambda_f lambda_{f r}.

    Any admissible blank must satisfy gamma majorized-by q, hence carry
    entropy at least shannon_q; for non-uniform weights shannon_q strictly
    exceeds the family entropy.  Entropies are base D.
    """

    q: np.ndarray
    shannon_q: float
    entropy_lambda: float
    gap: float
    q_majorized_by_weights: bool
    base: int

    def admits_blank(self, gamma) -> bool:
        verdict = majorization_compare(gamma, self.q)
        return verdict in (MajorizationVerdict.X_MAJORIZED_BY_Y, MajorizationVerdict.EQUAL)


def entropy_gap(spec: ShiftedSetSpec) -> EntropyGapResult:
    if spec.copies != 1:
        raise ValueError("entropy gap is defined for single-copy specs")
    group = spec.group
    w = spec.weights[:, 0]
    q = np.einsum("f,fr->r", w, w[group.cayley])
    d = spec.dim
    shannon_q = shannon_entropy(q, d)
    entropy_lambda = shannon_entropy(w, d)
    verdict = majorization_compare(q, w)
    return EntropyGapResult(
        q=q,
        shannon_q=shannon_q,
        entropy_lambda=entropy_lambda,
        gap=shannon_q - entropy_lambda,
        q_majorized_by_weights=verdict in (MajorizationVerdict.X_MAJORIZED_BY_Y,
                                           MajorizationVerdict.EQUAL),
        base=d,
    )


@dataclass(frozen=True)
class MonotoneBound:
    """Minimum entanglement any blank must carry: no measure may decrease
    under the cloning map, so the blank dominates the family under each."""

    entropy: float
    g_concurrence: float
    base: int

    def satisfied_by(self, blank: BipartitePureState, tol: float = 1e-9) -> bool:
        return (
            entropy_of_entanglement(blank, self.base) >= self.entropy - tol
            and g_concurrence(blank) >= self.g_concurrence - tol
        )


def monotone_bound(family: ShiftedSetSpec | list[BipartitePureState]) -> MonotoneBound:
    if isinstance(family, ShiftedSetSpec):
        d = family.dim
        lam = family.weight_vector
        return MonotoneBound(
            entropy=shannon_entropy(lam, d),
            g_concurrence=float(d * np.prod(lam) ** (1.0 / d)),
            base=d,
        )
    states = list(family)
    if not states:
        raise ValueError("need at least one state")
    d = min(states[0].dims)
    return MonotoneBound(
        entropy=max(entropy_of_entanglement(s, d) for s in states),
        g_concurrence=max(g_concurrence(s) for s in states),
        base=d,
    )


@dataclass(frozen=True)
class BoundReport:
    """Everything the blank-bounds pipeline produces for one family."""

    alpha: np.ndarray
    beta: np.ndarray
    majorization_verdict: MajorizationVerdict
    majorization_passed: bool
    gamma_min_lower: float
    mu_strategy: str
    q: np.ndarray | None
    shannon_q: float | None
    entropy_lambda: float | None
    gap: float | None
    entropy_base: int
    monotone: MonotoneBound
    blank_gamma: np.ndarray


def blank_bound_report(spec: ShiftedSetSpec, blank_gamma=None,
                       mu_strategy: str = "inverse_weights", *,
                       mu: MuWeights | None = None, samples: int = 1000,
                       seed: int = 0) -> BoundReport:
    if blank_gamma is None:
        blank_gamma = np.full(spec.dim, 1.0 / spec.dim)
    gamma = _as_gamma(spec, blank_gamma)
    bound = gamma_min_bound(spec, mu_strategy, mu=mu, samples=samples, seed=seed)
    report_mu = MuWeights(bound.mu).normalized()
    majorization = check_blank_majorization(spec, gamma, report_mu)
    if spec.copies == 1:
        gapres = entropy_gap(spec)
        q, shannon_q, entropy_lambda, gap = gapres.q, gapres.shannon_q, gapres.entropy_lambda, gapres.gap
    else:
        q = shannon_q = entropy_lambda = gap = None
    return BoundReport(
        alpha=majorization.alpha,
        beta=majorization.beta,
        majorization_verdict=majorization.verdict,
        majorization_passed=majorization.passed,
        gamma_min_lower=bound.value,
        mu_strategy=mu_strategy,
        q=q,
        shannon_q=shannon_q,
        entropy_lambda=entropy_lambda,
        gap=gap,
        entropy_base=spec.dim,
        monotone=monotone_bound(spec),
        blank_gamma=gamma.reshape(-1),
    )
