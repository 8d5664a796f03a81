import numpy as np
import pytest

from cloneforge import (
    BipartitePureState,
    MajorizationVerdict,
    ShiftedSetSpec,
    build_group_shifted,
    dual_of_ket,
    entropy_of_entanglement,
    g_concurrence,
    group_from_name,
    ket_of_dual,
    majorization_compare,
    schmidt_decompose,
)
from conftest import GROUP_NAMES, haar_unitary, named_groups, positive_weights


def diag_state(*coeffs) -> BipartitePureState:
    return BipartitePureState(np.diag(np.sqrt(np.asarray(coeffs, dtype=float))))


def test_state_requires_normalization():
    with pytest.raises(ValueError):
        BipartitePureState(np.eye(2))


def test_dual_of_ket_basis_product():
    mat = dual_of_ket([0, 1, 0, 0], (2, 2))
    assert mat.tolist() == [[0, 1], [0, 0]]


def test_dual_of_ket_bell():
    mat = dual_of_ket(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2))
    assert np.allclose(mat, np.eye(2) / np.sqrt(2))


def test_ket_dual_round_trip(rng):
    ket = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    ket /= np.linalg.norm(ket)
    assert np.max(np.abs(ket_of_dual(dual_of_ket(ket, (3, 4))) - ket)) < 1e-15


def test_rank_matches_schmidt_rank(rng):
    ket = np.zeros(9, dtype=complex)
    ket[0] = ket[4] = 1 / np.sqrt(2)  # two-term Schmidt state
    mat = dual_of_ket(ket, (3, 3))
    assert np.linalg.matrix_rank(mat) == 2
    state = BipartitePureState(mat)
    assert schmidt_decompose(state).rank == 2


def test_schmidt_maximally_entangled():
    state = BipartitePureState(np.eye(3) / np.sqrt(3))
    coeffs = schmidt_decompose(state).coefficients
    assert np.allclose(coeffs, 1 / 3, atol=1e-12)


def test_schmidt_diagonal_passthrough():
    coeffs = schmidt_decompose(diag_state(0.7, 0.3)).coefficients
    assert np.allclose(coeffs, [0.7, 0.3], atol=1e-12)


def test_schmidt_reconstruction(rng):
    mat = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    state = BipartitePureState(mat / np.linalg.norm(mat))
    dec = schmidt_decompose(state)
    assert np.linalg.norm(dec.reconstruct_dual() - state.dual) <= 1e-9
    assert np.all(np.diff(dec.coefficients) <= 1e-15)
    assert abs(dec.coefficients.sum() - 1.0) <= 1e-10


def test_entropy_maximally_entangled_is_one_any_dimension():
    for d in (2, 3, 5, 8):
        state = BipartitePureState(np.eye(d) / np.sqrt(d))
        assert abs(entropy_of_entanglement(state) - 1.0) < 1e-12


def test_entropy_product_state_is_zero():
    state = BipartitePureState(np.diag([1.0, 0.0]))
    assert entropy_of_entanglement(state) == 0.0


def test_entropy_spot_value_base_two():
    # independent evaluation of -sum lambda log2 lambda
    oracle = -(0.7 * np.log2(0.7) + 0.3 * np.log2(0.3))
    assert abs(entropy_of_entanglement(diag_state(0.7, 0.3), 2) - oracle) < 1e-12
    assert abs(oracle - 0.88129089) < 1e-8


def test_entropy_permutation_invariant(rng):
    w = positive_weights(rng, 5)
    perm = rng.permutation(5)
    a = diag_state(*w)
    b = diag_state(*w[perm])
    assert abs(entropy_of_entanglement(a) - entropy_of_entanglement(b)) < 1e-12


def test_g_concurrence_values():
    assert abs(g_concurrence(BipartitePureState(np.eye(4) / 2)) - 1.0) < 1e-12
    assert abs(g_concurrence(diag_state(0.7, 0.3)) - 2 * np.sqrt(0.21)) < 1e-12
    assert abs(g_concurrence(diag_state(0.7, 0.3)) - 0.91651514) < 1e-8
    assert g_concurrence(BipartitePureState(np.diag([1.0, 0.0]))) == 0.0
    assert abs(g_concurrence(diag_state(0.6, 0.4)) - 0.97979590) < 1e-8


def test_g_concurrence_local_unitary_invariance(rng):
    mat = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    state = BipartitePureState(mat / np.linalg.norm(mat))
    u = haar_unitary(4, rng)
    v = haar_unitary(4, rng)
    rotated = BipartitePureState(u @ state.dual @ v.T)
    assert abs(g_concurrence(rotated) - g_concurrence(state)) < 1e-9


def test_majorization_uniform_is_bottom(rng):
    w = positive_weights(rng, 6)
    assert majorization_compare(np.full(6, 1 / 6), w) == MajorizationVerdict.X_MAJORIZED_BY_Y


def test_majorization_permutation_equal():
    assert majorization_compare([0.5, 0.3, 0.2], [0.2, 0.5, 0.3]) == MajorizationVerdict.EQUAL


def test_majorization_incomparable_pair():
    # prefix sums cross: 0.6 > 0.55 but 0.85 < 0.95
    verdict = majorization_compare([0.6, 0.25, 0.15], [0.55, 0.40, 0.05])
    assert verdict == MajorizationVerdict.INCOMPARABLE


def test_majorization_two_dim_always_comparable():
    assert majorization_compare([0.7, 0.3], [0.6, 0.4]) == MajorizationVerdict.Y_MAJORIZED_BY_X


def test_majorization_zero_padding():
    assert majorization_compare([0.5, 0.5], [0.5, 0.5, 0.0]) == MajorizationVerdict.EQUAL


def test_majorization_rejects_unnormalized():
    with pytest.raises(ValueError):
        majorization_compare([0.5, 0.4], [0.5, 0.5])


def test_spec_validation_errors():
    z2 = group_from_name("Z2")
    with pytest.raises(ValueError):
        ShiftedSetSpec(z2, np.array([0.7, 0.3, 0.0]))
    with pytest.raises(ValueError):
        ShiftedSetSpec(z2, np.array([1.0, 0.0]))  # zero weight
    with pytest.raises(ValueError):
        ShiftedSetSpec(z2, np.array([0.7, 0.2]))  # not normalized
    with pytest.raises(ValueError):
        ShiftedSetSpec(z2, np.array([0.7, 0.3]), shift_side="C")


def test_build_group_shifted_matches_canonical_qubit_pair():
    z2 = group_from_name("Z2")
    spec = ShiftedSetSpec(z2, np.array([0.7, 0.3]))
    psi_e, psi_g = build_group_shifted(spec)
    assert np.allclose(psi_e.dual, np.diag([np.sqrt(0.7), np.sqrt(0.3)]))
    assert np.allclose(psi_g.dual, np.array([[0, np.sqrt(0.7)], [np.sqrt(0.3), 0]]))


def test_build_group_shifted_uniform_is_maximally_entangled():
    z3 = group_from_name("Z3")
    spec = ShiftedSetSpec(z3, np.full(3, 1 / 3))
    for state in build_group_shifted(spec):
        assert abs(g_concurrence(state) - 1.0) < 1e-12


def test_build_group_shifted_two_copies_orthonormal():
    z2 = group_from_name("Z2")
    spec = ShiftedSetSpec(z2, np.array([0.4, 0.1, 0.3, 0.2]), copies=2)
    family = build_group_shifted(spec)
    for i, a in enumerate(family):
        for j, b in enumerate(family):
            expected = 1.0 if i == j else 0.0
            assert abs(abs(a.overlap(b)) - expected) <= 1e-12


def test_shift_side_a_transposes_the_pattern():
    z3 = group_from_name("Z3")
    w = np.array([0.5, 0.3, 0.2])
    spec_b = ShiftedSetSpec(z3, w, shift_side="B")
    spec_a = ShiftedSetSpec(z3, w, shift_side="A")
    fam_b = build_group_shifted(spec_b)
    fam_a = build_group_shifted(spec_a)
    for f in range(3):
        assert np.allclose(fam_a[f].dual, fam_b[f].dual.T)


def test_phases_enter_componentwise(rng):
    z2 = group_from_name("Z2")
    phases = np.array([[0.0, 0.0], [np.pi / 3, -np.pi / 5]])
    spec = ShiftedSetSpec(z2, np.array([0.7, 0.3]), phases=phases)
    psi_e, psi_g = build_group_shifted(spec)
    assert np.allclose(psi_e.dual, np.diag([np.sqrt(0.7), np.sqrt(0.3)]))
    assert np.isclose(psi_g.dual[0, 1], np.sqrt(0.7) * np.exp(1j * np.pi / 3))
    assert np.isclose(psi_g.dual[1, 0], np.sqrt(0.3) * np.exp(-1j * np.pi / 5))
    assert spec.has_phases


@pytest.mark.parametrize("name,group", named_groups())
def test_family_members_share_schmidt_multiset(name, group, rng):
    w = positive_weights(rng, group.order)
    family = build_group_shifted(ShiftedSetSpec(group, w))
    reference = np.sort(w)[::-1]
    for state in family:
        coeffs = schmidt_decompose(state).coefficients
        assert np.max(np.abs(coeffs - reference)) <= 1e-9
