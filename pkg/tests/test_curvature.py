import math

import numpy as np
import pytest

from kahlerpinch import (
    CurvatureTensor,
    TwoPlane,
    check_kahler,
    complex_hyperbolic_tensor,
    constraint_matrix,
    distance,
    fit_second_polarization_coefficient,
    holomorphic_sectional,
    identity_one_residual,
    kahler_projector,
    make_space,
    polarization_residuals,
    project_kahler,
    random_kahler,
    random_orthonormal_pair,
    reconstruct_from_sectional,
    sectional,
    seeded_rng,
    solve_sectional_from_H,
    symmetry_residuals,
    tensor_from_text,
    tensor_to_text,
)
from kahlerpinch.errors import (
    DegeneratePlaneError,
    PreconditionError,
    ResourceLimitError,
    SpaceMismatchError,
    TensorFormatError,
)


def _unit(rng, dim):
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------------------
# model tensor
# ---------------------------------------------------------------------------


def test_model_tensor_holomorphic_curvature_is_minus_one(r0_n2, space2):
    rng = seeded_rng(1)
    for _ in range(20):
        u = _unit(rng, space2.dim)
        assert holomorphic_sectional(r0_n2, u) == pytest.approx(-1.0, abs=1e-12)


def test_model_tensor_totally_real_sectional(r0_n2, space2):
    for seed in range(10):
        u, v = random_orthonormal_pair(space2, seed, constraint="v_perp_ju")
        assert sectional(r0_n2, TwoPlane(u, v)) == pytest.approx(-0.25, abs=1e-12)


def test_model_tensor_mixed_component(r0_n2, space2):
    for seed in range(10):
        u, v = random_orthonormal_pair(space2, seed, constraint="v_perp_ju")
        value = r0_n2.evaluate(u, space2.j(u), v, space2.j(v))
        assert value == pytest.approx(-0.5, abs=1e-12)


def test_model_tensor_certificate_exact(r0_n2):
    res = symmetry_residuals(r0_n2)
    assert all(v == 0.0 for v in res.values())


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------


def test_single_entry_tensor_fails_antisymmetry(space2):
    entries = np.zeros((4, 4, 4, 4))
    entries[0, 1, 2, 3] = 1.0
    cert = check_kahler(CurvatureTensor(space2, entries), 1e-12)
    assert not cert.passed
    assert cert.antisymmetry == pytest.approx(1.0)


def test_random_dense_tensor_fails(space2):
    rng = seeded_rng(33)
    tensor = CurvatureTensor(space2, rng.standard_normal((4, 4, 4, 4)))
    cert = check_kahler(tensor, 1e-9)
    assert not cert.passed
    # recompute the residual directly: max over both antisymmetric pairs
    e = tensor.entries
    ranges = [(i, j, k, l) for i in range(4) for j in range(4) for k in range(4) for l in range(4)]
    direct = max(
        max(abs(e[i, j, k, l] + e[j, i, k, l]), abs(e[i, j, k, l] + e[i, j, l, k]))
        for i, j, k, l in ranges
    )
    assert cert.antisymmetry == pytest.approx(direct, abs=1e-15)


# ---------------------------------------------------------------------------
# projection
# ---------------------------------------------------------------------------


def test_projector_rank_matches_independent_nullity_oracle(space2):
    # rank-revealing SVD of the assembled constraint system, built before the
    # projector is consulted
    a = np.asarray(constraint_matrix(space2).todense())
    nullity = a.shape[1] - np.linalg.matrix_rank(a)
    proj = kahler_projector(space2)
    assert proj.nullity == nullity == 9
    assert np.trace(proj.matrix) == pytest.approx(nullity, abs=1e-8)


def test_projector_dimension_small_n(space1, space3):
    assert kahler_projector(space1).nullity == 1
    assert kahler_projector(space3).nullity == 36


def test_projection_fixes_model_tensor(r0_n2):
    assert distance(project_kahler(r0_n2), r0_n2) < 1e-12


def test_projection_idempotent_and_self_adjoint(space2):
    rng = seeded_rng(9)
    proj = kahler_projector(space2).matrix
    assert np.max(np.abs(proj - proj.T)) < 1e-10
    assert np.max(np.abs(proj @ proj - proj)) < 1e-10
    raw = rng.standard_normal((4, 4, 4, 4))
    once = project_kahler(raw, space2)
    twice = project_kahler(once)
    assert distance(once, twice) < 1e-10


def test_projection_respects_cap(space2):
    with pytest.raises(ResourceLimitError):
        kahler_projector(space2, cap=1)


def test_symmetry_closure_over_many_seeds():
    # certified output for every seed; split across dimensions
    for n, count in ((1, 334), (2, 333), (3, 333)):
        space = make_space(n)
        proj = kahler_projector(space).matrix
        d = space.dim
        rng_seeds = range(count)
        for s in rng_seeds:
            raw = seeded_rng(n, s).standard_normal((d, d, d, d))
            tensor = CurvatureTensor(space, (proj @ raw.ravel()).reshape(raw.shape))
            cert = check_kahler(tensor, 1e-10)
            assert cert.passed, f"n={n} seed={s} residual {cert.max_residual}"


def test_random_kahler_contract(space2):
    tensor = random_kahler(space2, seed=4, frobenius_norm=2.5)
    assert tensor.certificate is not None and tensor.certificate.passed
    assert tensor.certificate.max_residual <= 1e-10
    assert abs(tensor.frobenius_norm() - 2.5) < 1e-12
    other = random_kahler(space2, seed=5, frobenius_norm=2.5)
    assert distance(tensor, other) > 0


# ---------------------------------------------------------------------------
# curvature evaluation
# ---------------------------------------------------------------------------


def test_sectional_is_plane_invariant(r0_n2, space2):
    rng = seeded_rng(21)
    tensor = random_kahler(space2, seed=6)
    u, v = random_orthonormal_pair(space2, 3)
    base = sectional(tensor, TwoPlane(u, v))
    assert sectional(tensor, TwoPlane(2 * u, 3 * v)) == pytest.approx(base, rel=1e-12)
    # shear the spanning pair: same plane
    assert sectional(tensor, TwoPlane(u, v + 0.7 * u)) == pytest.approx(base, rel=1e-11)


def test_degenerate_plane_rejected():
    space = make_space(2)
    u = space.basis_vector(0)
    with pytest.raises(DegeneratePlaneError):
        TwoPlane(u, 2 * u)
    with pytest.raises(DegeneratePlaneError):
        TwoPlane(u, np.zeros(4))


def test_holomorphic_sectional_contract(r0_n2, space2):
    rng = seeded_rng(13)
    u = rng.standard_normal(space2.dim)
    assert holomorphic_sectional(r0_n2, u) == pytest.approx(-1.0, abs=1e-12)
    doubled = r0_n2.scaled(2.0)
    assert holomorphic_sectional(doubled, u) == pytest.approx(-2.0, abs=1e-12)
    tensor = random_kahler(space2, seed=14)
    unit = u / np.linalg.norm(u)
    via_plane = sectional(tensor, TwoPlane(unit, space2.j(unit)))
    assert holomorphic_sectional(tensor, u) == pytest.approx(via_plane, rel=1e-10)
    with pytest.raises(DegeneratePlaneError):
        holomorphic_sectional(r0_n2, np.zeros(space2.dim))


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------


def test_identity_one_on_model_tensor(r0_n2, space2):
    u, v = random_orthonormal_pair(space2, 17, constraint="v_perp_ju")
    # (-1/4) + (-1/4) - (-1/2) = 0
    assert abs(identity_one_residual(r0_n2, u, v)) < 1e-12


def test_identity_one_requires_orthonormal_quadruple(r0_n2, space2):
    u = space2.basis_vector(0)
    v = space2.basis_vector(1)  # v = Ju: not an orthonormal quadruple
    with pytest.raises(PreconditionError):
        identity_one_residual(r0_n2, u, v)


def test_identity_one_on_random_kahler_tensors():
    worst = 0.0
    for n in (2, 3):
        space = make_space(n)
        for s in range(500):
            tensor = random_kahler(space, seed=1000 + s)
            u, v = random_orthonormal_pair(space, 2000 + s, constraint="v_perp_ju")
            worst = max(worst, abs(identity_one_residual(tensor, u, v)))
    assert worst < 1e-10


def test_identity_one_nonzero_for_non_kahler(space2):
    entries = np.zeros((4, 4, 4, 4))
    entries[0, 2, 0, 2] = 1.0  # K(e1, e3) only: breaks J-invariance
    tensor = CurvatureTensor(space2, entries)
    u, v = space2.basis_vector(0), space2.basis_vector(2)
    assert abs(identity_one_residual(tensor, u, v)) > 0.5


def test_reconstruction_roundtrip_model(r0_n2, space2):
    rebuilt = reconstruct_from_sectional(r0_n2.biquadratic, space2)
    assert distance(rebuilt, r0_n2) < 1e-12


def test_reconstruction_roundtrip_random(space2):
    for s in (3, 4):
        tensor = random_kahler(space2, seed=s)
        rebuilt = reconstruct_from_sectional(tensor.biquadratic, space2)
        assert distance(rebuilt, tensor) < 1e-10


def test_reconstruction_zero_oracle(space2):
    rebuilt = reconstruct_from_sectional(lambda a, b: 0.0, space2)
    assert rebuilt.frobenius_norm() == 0.0


def test_solve_sectional_model_triple(r0_n2, space2):
    u, v = random_orthonormal_pair(space2, 23, constraint="v_perp_ju")
    triple = solve_sectional_from_H(r0_n2, u, v)
    assert triple == pytest.approx((-0.25, -0.25, -0.5), abs=1e-12)
    doubled = r0_n2.scaled(2.0)
    scaled_triple = solve_sectional_from_H(doubled, u, v)
    assert scaled_triple == pytest.approx((-0.5, -0.5, -1.0), abs=1e-12)


def test_solve_sectional_matches_direct_contraction():
    worst = 0.0
    for n in (2, 3):
        space = make_space(n)
        for s in range(500):
            tensor = random_kahler(space, seed=5000 + s)
            u, v = random_orthonormal_pair(space, 6000 + s, constraint="v_perp_ju")
            got = solve_sectional_from_H(tensor, u, v)
            expected = (
                tensor.biquadratic(u, v),
                tensor.biquadratic(u, space.j(v)),
                tensor.evaluate(u, space.j(u), v, space.j(v)),
            )
            worst = max(worst, max(abs(a - b) for a, b in zip(got, expected)))
    assert worst < 1e-9


def test_polarization_identities_on_random_tensors(space2):
    rng = seeded_rng(31)
    worst_first = worst_second = 0.0
    printed_seen = 0.0
    for s in range(100):
        tensor = random_kahler(space2, seed=7000 + s)
        u, v = random_orthonormal_pair(space2, 8000 + s, constraint="v_perp_ju")
        theta = rng.uniform(0.1, math.pi / 2 - 0.1)
        for a, b in ((1 / math.sqrt(2), 1 / math.sqrt(2)), (math.cos(theta), math.sin(theta))):
            res = polarization_residuals(tensor, u, v, a, b)
            worst_first = max(worst_first, res["first"])
            worst_second = max(worst_second, res["second"])
            printed_seen = max(printed_seen, res["second_printed"])
    assert worst_first < 1e-10
    assert worst_second < 1e-10
    assert printed_seen > 1e-3  # the printed variant is falsified


def test_printed_variant_residual_on_model(r0_n2, space2):
    # frozen: |(-2) - (-2.4375)| = 0.4375 at a = b = 1/sqrt(2)
    u, v = random_orthonormal_pair(space2, 37, constraint="v_perp_ju")
    res = polarization_residuals(r0_n2, u, v, 1 / math.sqrt(2), 1 / math.sqrt(2))
    assert res["second_printed"] == pytest.approx(0.4375, abs=1e-12)
    assert res["second"] < 1e-12


def test_fitted_second_coefficient_is_minus_eight(space2):
    fitted = fit_second_polarization_coefficient(space2, seed=41, samples=100)
    assert fitted == pytest.approx(-8.0, abs=1e-6)


# ---------------------------------------------------------------------------
# distance
# ---------------------------------------------------------------------------


def test_distance_axioms(space2, r0_n2):
    a = random_kahler(space2, seed=51)
    b = random_kahler(space2, seed=52)
    c = random_kahler(space2, seed=53)
    assert distance(r0_n2, r0_n2) == 0.0
    assert distance(r0_n2.scaled(2.0), r0_n2) == pytest.approx(r0_n2.frobenius_norm(), rel=1e-14)
    assert distance(a, c) <= distance(a, b) + distance(b, c) + 1e-12
    with pytest.raises(SpaceMismatchError):
        distance(a, random_kahler(make_space(3), seed=1))


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------


def test_tensor_file_roundtrip_is_exact(space2):
    tensor = random_kahler(space2, seed=61)
    text = tensor_to_text(tensor, 1e-9)
    back, tol = tensor_from_text(text)
    assert tol == 1e-9
    assert np.array_equal(back.entries, tensor.entries)
    # serialization is deterministic
    assert tensor_to_text(back, 1e-9) == text


def test_tensor_file_malformed_cases(space2, r0_n2):
    text = tensor_to_text(r0_n2)
    with pytest.raises(TensorFormatError):
        tensor_from_text(text[: len(text) // 2])  # truncated
    with pytest.raises(TensorFormatError):
        tensor_from_text("[1, 2, 3]")
    import json

    obj = json.loads(text)
    obj["format_version"] = 99
    with pytest.raises(TensorFormatError):
        tensor_from_text(json.dumps(obj))
    obj = json.loads(text)
    obj["entries"] = obj["entries"][:-1]
    with pytest.raises(TensorFormatError):
        tensor_from_text(json.dumps(obj))
    obj = json.loads(text)
    obj["n"] = 0
    with pytest.raises(TensorFormatError):
        tensor_from_text(json.dumps(obj))
