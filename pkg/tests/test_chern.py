from math import comb

import numpy as np
import pytest

from kahlerpinch import (
    ChernIndex,
    CurvatureTensor,
    chern_form,
    chern_forms,
    chern_product,
    chern_ratio,
    curvature_matrix,
    distance,
    enumerate_indices,
    kahler_form,
    make_space,
    power,
    random_kahler,
    random_unitary_frame,
    reference_constants,
    space_form_ratio,
    top_coefficient,
)
from kahlerpinch.errors import DegenerateDenominatorError, DegreeError, PreconditionError


# ---------------------------------------------------------------------------
# indices
# ---------------------------------------------------------------------------


def test_enumerate_indices_small_n():
    assert [i.multi_index for i in enumerate_indices(2)] == [(2, 0), (0, 1)]
    assert [i.multi_index for i in enumerate_indices(3)] == [(3, 0, 0), (1, 1, 0), (0, 0, 1)]
    assert len(enumerate_indices(4)) == 5


def test_chern_index_validation():
    ChernIndex((2, 0))
    with pytest.raises(DegreeError):
        ChernIndex((1, 1))  # weight 3 != 2
    with pytest.raises(DegreeError):
        ChernIndex((-1, 1))


# ---------------------------------------------------------------------------
# curvature matrix
# ---------------------------------------------------------------------------


def test_curvature_matrix_skew_hermitian(r0_n2, space2):
    omega = curvature_matrix(r0_n2)
    assert omega.skew_hermitian_residual() < 1e-12
    tensor = random_kahler(space2, seed=101)
    assert curvature_matrix(tensor).skew_hermitian_residual() < 1e-12


def test_curvature_matrix_n1_proportional_to_kahler_form(r0_n1, space1):
    omega = curvature_matrix(r0_n1)
    entry = omega.entries[0][0]
    # Lambda^2 of a 2-dim space is 1-dim: both parts are multiples of omega
    kf = kahler_form(space1)
    for part in (entry.re, entry.im):
        if part.max_abs() > 0:
            ratio = part.coeffs[0] / kf.coeffs[0]
            assert (part - ratio * kf).max_abs() < 1e-12


def test_curvature_matrix_zero_tensor(space2):
    zero = CurvatureTensor(space2, np.zeros((4, 4, 4, 4)))
    omega = curvature_matrix(zero)
    assert all(omega.entries[a][b].max_abs() == 0.0 for a in range(2) for b in range(2))


def test_curvature_matrix_rejects_non_unitary_frame(r0_n2, space2):
    bad = [space2.basis_vector(0), 2.0 * space2.basis_vector(2)]
    with pytest.raises(PreconditionError):
        curvature_matrix(r0_n2, bad)


# ---------------------------------------------------------------------------
# chern forms
# ---------------------------------------------------------------------------


def test_c0_is_one(r0_n2):
    c0 = chern_form(r0_n2, 0)
    assert c0.degree == 0 and c0.coeffs[0] == 1.0


def test_chern_form_degree_bounds(r0_n2):
    with pytest.raises(DegreeError):
        chern_form(r0_n2, 3)
    with pytest.raises(DegreeError):
        chern_form(r0_n2, -1)


def test_chern_forms_of_model_are_multiples_of_omega_powers(r0_n3, space3):
    # U(n)-invariance: c_k(R0) = gamma_k * omega^k, checked entrywise
    forms = chern_forms(r0_n3)
    omega = kahler_form(space3)
    for k in (1, 2, 3):
        omega_k = power(omega, k)
        # match coefficients on the first nonzero slot of omega^k
        idx = int(np.argmax(np.abs(omega_k.coeffs)))
        gamma = forms[k].coeffs[idx] / omega_k.coeffs[idx]
        assert (forms[k] - gamma * omega_k).max_abs() < 1e-12


def test_chern_form_homogeneity(space2):
    tensor = random_kahler(space2, seed=103)
    base = chern_forms(tensor)
    for lam in (0.5, 2.0):
        scaled = chern_forms(tensor.scaled(lam))
        for k in (1, 2):
            assert (scaled[k] - lam**k * base[k]).max_abs() < 1e-10


def test_frame_independence(space2):
    tensor = random_kahler(space2, seed=104)
    base = chern_forms(tensor)
    for s in range(20):
        frame = random_unitary_frame(space2, seed=200 + s)
        resampled = chern_forms(tensor, frame)
        worst = max((resampled[k] - base[k]).max_abs() for k in range(space2.n + 1))
        assert worst < 1e-10


def test_reality_of_chern_forms(space3):
    # the imaginary residue is checked inside chern_forms at 1e-12; build a
    # few random tensors to exercise the check
    for s in range(5):
        tensor = random_kahler(space3, seed=300 + s)
        chern_forms(tensor)  # raises if the residue exceeds the threshold


# ---------------------------------------------------------------------------
# densities and ratios
# ---------------------------------------------------------------------------


def test_model_ratios_match_published_values(r0_n2, r0_n3):
    three = chern_ratio(r0_n2, ChernIndex((2, 0)), ChernIndex((0, 1)))
    assert three == pytest.approx(3.0, abs=1e-8)
    sixteen = chern_ratio(r0_n3, ChernIndex((3, 0, 0)), ChernIndex((0, 0, 1)))
    assert sixteen == pytest.approx(16.0, abs=1e-8)
    six = chern_ratio(r0_n3, ChernIndex((1, 1, 0)), ChernIndex((0, 0, 1)))
    assert six == pytest.approx(6.0, abs=1e-8)


def test_space_form_formula_is_binomial_products():
    # independent recomputation of the reference formula
    got = space_form_ratio(ChernIndex((3, 0, 0)), ChernIndex((0, 0, 1)))
    assert got == comb(4, 1) ** 3 / comb(4, 3)
    got = space_form_ratio(ChernIndex((1, 1, 0)), ChernIndex((0, 0, 1)))
    assert got == comb(4, 1) * comb(4, 2) / comb(4, 3)


def test_reference_constants_cross_check():
    for n in (1, 2, 3):
        table = reference_constants(n)
        assert len(table) == len(enumerate_indices(n))
        assert all(abs(v) > 0 for v in table.values())
        for a in table:
            for b in table:
                assert table[a] / table[b] == pytest.approx(
                    space_form_ratio(a, b), rel=1e-8
                )


def test_reference_constants_n2_single_nontrivial_ratio():
    table = reference_constants(2)
    indices = list(table)
    ratios = {
        (str(a), str(b)): table[a] / table[b] for a in indices for b in indices if a != b
    }
    assert len(ratios) == 2  # the pair and its reciprocal
    assert sorted(ratios.values()) == pytest.approx([1 / 3, 3.0], rel=1e-10)


def test_ratio_scale_invariance(space2):
    tensor = random_kahler(space2, seed=105)
    i2, i1 = ChernIndex((0, 1)), ChernIndex((2, 0))
    base = chern_ratio(tensor, i1, i2)
    for lam in (0.5, 2.0, 10.0):
        assert abs(chern_ratio(tensor.scaled(lam), i1, i2) - base) < 1e-10


def test_ratio_of_index_with_itself(space2):
    tensor = random_kahler(space2, seed=106)
    idx = ChernIndex((2, 0))
    assert chern_ratio(tensor, idx, idx) == pytest.approx(1.0, abs=1e-14)


def test_degenerate_denominator_raises(space2):
    zero = CurvatureTensor(space2, np.zeros((4, 4, 4, 4)))
    with pytest.raises(DegenerateDenominatorError):
        chern_ratio(zero, ChernIndex((2, 0)), ChernIndex((0, 1)))


def test_chern_product_matches_ratio(r0_n2):
    i1, i2 = ChernIndex((2, 0)), ChernIndex((0, 1))
    g1 = chern_product(r0_n2, i1).gamma
    g2 = chern_product(r0_n2, i2).gamma
    assert g1 / g2 == pytest.approx(chern_ratio(r0_n2, i1, i2), rel=1e-12)


def test_chern_product_rejects_wrong_dimension(r0_n2):
    with pytest.raises(DegreeError):
        chern_product(r0_n2, ChernIndex((3, 0, 0)))


def test_continuity_near_model(space2, r0_n2):
    # fit the local Lipschitz constant on half the samples, verify on the rest
    from kahlerpinch.experiments import perturb

    table = reference_constants(2)
    samples = []
    for s in range(12):
        tensor = perturb(space2, 0.008, seed=400 + s)
        dist = distance(tensor, r0_n2)
        for index in enumerate_indices(2):
            dev = abs(chern_product(tensor, index).gamma - table[index])
            samples.append((dist, dev, str(index)))
    fit = max(dev / dist for dist, dev, _ in samples[: len(samples) // 2])
    print(f"fitted continuity constant near the model tensor: C = {fit:.4f}")
    for dist, dev, label in samples[len(samples) // 2 :]:
        assert dev <= 2.0 * max(fit, 1e-6) * dist, label
