"""Theorem-level experiments: perturbation sweeps and the explicit constant chain.

A sweep perturbs the complex hyperbolic model tensor, certifies pinching,
renormalizes to curvature maximum -1/4, and records the pinching defect, the
distance to the model tensor, the holomorphic-curvature deviation, and the
deviation of every Chern-density ratio from its model value. Aggregation uses
per-step maxima (worst case). The constant chain makes the qualitative
"small defect implies small ratio deviation" statement quantitative through a
conservative absolute-coefficient bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .chern import chern_ratio, enumerate_indices, reference_constants
from .curvature import (
    CurvatureTensor,
    complex_hyperbolic_tensor,
    distance,
    fit_second_polarization_coefficient,
    identity_one_residual,
    polarization_residuals,
    project_kahler,
    random_kahler,
    reconstruct_from_sectional,
    solve_sectional_from_H,
    _polarization_system,
)
from .errors import PreconditionError
from .pinching import berger_bound_check, default_restarts, hol_extremes, normalize_quarter, pinch
from .space import HermitianSpace, make_space, random_orthonormal_pair, seeded_rng

__all__ = [
    "SweepRecord",
    "ConstantChain",
    "CertificationReport",
    "perturb",
    "sweep",
    "aggregate_by_t",
    "emit_csv",
    "holomorphic_coefficient_bound",
    "proof_constants",
    "certify_constants",
    "identity_suite",
]

MAX_EXCLUDED_FRACTION = 0.05


@dataclass(frozen=True)
class SweepRecord:
    """One perturbation sample after certification and renormalization."""

    n: int
    t: float
    seed: int
    delta: float
    frobenius_dist: float
    h_dev: float
    ratio_devs: dict[str, float]
    ratio_dev_max: float
    converged: bool
    anomaly: bool


@dataclass(frozen=True)
class ConstantChain:
    """Explicit admissible constants for the defect-to-ratio implication."""

    epsilon: float
    n: int
    eta: float
    delta_1: float
    delta: float
    epsilon_1: float


@dataclass(frozen=True)
class CertificationReport:
    """Outcome of sampling tensors with certified defect below the chain's delta."""

    samples: int
    violations: int
    max_ratio_dev: float
    max_defect: float
    retries: int


def _sample_seed(seed: int, t_index: int, sample: int) -> int:
    ss = np.random.SeedSequence([int(seed) % (1 << 63), t_index, sample])
    return int(ss.generate_state(1)[0])


def perturb(space: HermitianSpace, t: float, seed: int) -> CurvatureTensor:
    """Model tensor plus a size-t random unit-norm Kahler direction, re-projected."""
    if t < 0:
        raise PreconditionError("perturbation size must be >= 0")
    model = complex_hyperbolic_tensor(space)
    if t == 0:
        return model
    direction = random_kahler(space, seed, 1.0)
    return project_kahler(model.entries + t * direction.entries, space)


def _record_for_sample(
    space: HermitianSpace,
    model: CurvatureTensor,
    pairs,
    model_ratios,
    t: float,
    sample_seed: int,
    restarts: int,
) -> SweepRecord:
    tensor = perturb(space, t, sample_seed)
    report = pinch(tensor, restarts=restarts, seed=sample_seed)
    normalization = normalize_quarter(tensor, report)
    normalized = normalization.tensor
    hol = hol_extremes(normalized, restarts=restarts, seed=sample_seed)
    h_dev = max(abs(hol.h_min + 1.0), abs(hol.h_max + 1.0))
    ratio_devs = {}
    for (index_i, index_j), model_value in zip(pairs, model_ratios):
        value = chern_ratio(normalized, index_i, index_j)
        ratio_devs[f"{index_i}:{index_j}"] = abs(value - model_value)
    return SweepRecord(
        n=space.n,
        t=float(t),
        seed=sample_seed,
        delta=normalization.delta,
        frobenius_dist=distance(normalized, model),
        h_dev=h_dev,
        ratio_devs=ratio_devs,
        ratio_dev_max=max(ratio_devs.values()) if ratio_devs else 0.0,
        converged=report.converged and hol.converged,
        anomaly=normalization.anomaly,
    )


def sweep(
    n: int,
    t_values,
    samples_per_t: int,
    seed: int,
    restarts: int | None = None,
) -> list[SweepRecord]:
    """Run the perturbation experiment; flags (and keeps) non-converged records.

    Raises if more than MAX_EXCLUDED_FRACTION of records failed to converge.
    """
    if samples_per_t < 1:
        raise PreconditionError("samples_per_t must be >= 1")
    t_values = [float(t) for t in t_values]
    if any(t < 0 for t in t_values):
        raise PreconditionError("all perturbation sizes must be >= 0")
    space = make_space(n)
    if restarts is None:
        restarts = default_restarts(n)
    model = complex_hyperbolic_tensor(space)
    indices = enumerate_indices(n)
    pairs = [(a, b) for a in indices for b in indices if a != b]
    model_ratios = [chern_ratio(model, a, b) for a, b in pairs]
    records = []
    for t_index, t in enumerate(sorted(t_values)):
        for sample in range(samples_per_t):
            sample_seed = _sample_seed(seed, t_index, sample)
            records.append(
                _record_for_sample(space, model, pairs, model_ratios, t, sample_seed, restarts)
            )
    excluded = sum(1 for r in records if not r.converged)
    if excluded > MAX_EXCLUDED_FRACTION * len(records):
        raise RuntimeError(
            f"{excluded}/{len(records)} records failed to converge "
            f"(> {MAX_EXCLUDED_FRACTION:.0%}); rerun with more restarts"
        )
    return records


def aggregate_by_t(records: list[SweepRecord]) -> list[dict]:
    """Per-t worst-case aggregates over converged records (non-converged counted)."""
    out = []
    for t in sorted({r.t for r in records}):
        bucket = [r for r in records if r.t == t]
        converged = [r for r in bucket if r.converged]
        out.append(
            {
                "t": t,
                "samples": len(bucket),
                "excluded": len(bucket) - len(converged),
                "max_delta": max((r.delta for r in converged), default=float("nan")),
                "max_frobenius_dist": max(
                    (r.frobenius_dist for r in converged), default=float("nan")
                ),
                "max_h_dev": max((r.h_dev for r in converged), default=float("nan")),
                "max_ratio_dev": max((r.ratio_dev_max for r in converged), default=float("nan")),
            }
        )
    return out


def _float17(x: float) -> str:
    return format(float(x), ".17g")


def emit_csv(records: list[SweepRecord]) -> str:
    """CSV with one row per record, t ascending then seed ascending, 17 digits."""
    if not records:
        raise PreconditionError("no records to emit")
    if len({r.n for r in records}) != 1:
        raise PreconditionError("records mix different complex dimensions")
    header = "t,seed,delta,frobenius_dist,h_dev,ratio_dev_max,converged"
    lines = [header]
    for r in sorted(records, key=lambda r: (r.t, r.seed)):
        lines.append(
            ",".join(
                [
                    _float17(r.t),
                    str(r.seed),
                    _float17(r.delta),
                    _float17(r.frobenius_dist),
                    _float17(r.h_dev),
                    _float17(r.ratio_dev_max),
                    "true" if r.converged else "false",
                ]
            )
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# the explicit constant chain
# ---------------------------------------------------------------------------


def holomorphic_coefficient_bound() -> tuple[float, float]:
    """Absolute-coefficient bounds (per-K, per-entry) through the two linear formulas.

    Every tensor entry is 1/24 times eight biquadratic values at combined
    basis vectors; each biquadratic at an orthonormal unit pair is a fixed
    linear combination of six holomorphic-curvature values read off the
    polarization system. Accumulating absolute coefficients with worst-case
    norm factors gives a conservative bound on how entry deviations are
    controlled by unit-vector holomorphic deviations.
    """
    a = b = 1.0 / sqrt(2.0)
    system = _polarization_system(a, b)
    inverse = np.linalg.inv(system)
    # Absolute H-coefficient mass on the right-hand sides:
    #  - first identity: H at two unit combinations (coefficient 1 each) plus
    #    2a^4 H(u) + 2b^4 H(v);
    #  - second identity: the combinations (u +- Jv)/sqrt2 need not be unit;
    #    |q|^4 = (1 +- <u, Jv>)^2 <= 4 is the worst-case normalization factor;
    #  - the Bianchi consequence is homogeneous.
    worst_q4 = 4.0
    rhs_mass = np.array(
        [
            1.0 + 1.0 + 2 * a**4 + 2 * b**4,
            worst_q4 + worst_q4 + 2 * a**4 + 2 * b**4,
            0.0,
        ]
    )
    per_k = float(np.abs(inverse[0]) @ rhs_mass)
    # 24-term formula: 8 biquadratics, each K(x +- z, y +- t) with
    # |x +- z|^2 <= 4 for unit x, z (worst case: repeated basis vectors).
    worst_pair_norm = 4.0 * 4.0
    per_entry = 8.0 * worst_pair_norm * per_k / 24.0
    return per_k, per_entry


def proof_constants(epsilon: float, n: int) -> ConstantChain:
    """Explicit admissible constants (eta, delta_1, delta, epsilon_1) for a target epsilon.

    eta bounds the holomorphic deviation forcing every entry of R - R0 below
    epsilon / (2n)^4 (hence |R - R0| < epsilon); delta_1 = eta/4 makes the
    mixed-component bound (2/3)(3/4 + delta_1) <= 1/2 + eta/6; the defect
    threshold is min(eta/3, delta_1); epsilon_1 is the largest density
    deviation keeping every reference ratio within epsilon.
    """
    if epsilon <= 0:
        raise PreconditionError("epsilon must be positive")
    if n < 2:
        raise PreconditionError("constant chain needs complex dimension >= 2")
    _, per_entry = holomorphic_coefficient_bound()
    eta = epsilon / ((2 * n) ** 4 * per_entry)
    delta_1 = eta / 4.0
    delta = min(eta / 3.0, delta_1)
    table = reference_constants(n)
    epsilon_1 = float("inf")
    for index_i, gamma_i in table.items():
        for index_j, gamma_j in table.items():
            if index_i == index_j:
                continue
            a_abs, b_abs = abs(gamma_i), abs(gamma_j)
            # binding inequality: (a + e1)/(b - e1) <= a/b + epsilon
            epsilon_1 = min(epsilon_1, epsilon * b_abs**2 / (a_abs + b_abs + epsilon * b_abs))
    return ConstantChain(
        epsilon=float(epsilon), n=n, eta=eta, delta_1=delta_1, delta=delta, epsilon_1=epsilon_1
    )


def certify_constants(
    chain: ConstantChain,
    samples: int,
    seed: int,
    restarts: int | None = None,
) -> CertificationReport:
    """Sample tensors with certified defect below chain.delta; count ratio violations.

    Absence of counterexamples, not a proof: every sampled tensor whose
    certified pinching defect is below delta must keep every Chern-density
    ratio within epsilon of the model value.
    """
    if samples < 1:
        raise PreconditionError("samples must be >= 1")
    space = make_space(chain.n)
    if restarts is None:
        restarts = default_restarts(chain.n)
    model = complex_hyperbolic_tensor(space)
    indices = enumerate_indices(chain.n)
    pairs = [(a, b) for a in indices for b in indices if a != b]
    model_ratios = [chern_ratio(model, a, b) for a, b in pairs]
    violations = 0
    max_ratio_dev = 0.0
    max_defect = -float("inf")
    retries = 0
    for sample in range(samples):
        sample_seed = _sample_seed(seed, 0, sample)
        t = chain.delta / 8.0
        for _ in range(8):
            tensor = perturb(space, t, sample_seed)
            report = pinch(tensor, restarts=restarts, seed=sample_seed)
            normalization = normalize_quarter(tensor, report)
            if normalization.delta < chain.delta:
                break
            retries += 1
            t *= 0.5
        else:
            raise RuntimeError(f"sample {sample} never certified below delta={chain.delta:g}")
        max_defect = max(max_defect, normalization.delta)
        for (index_i, index_j), model_value in zip(pairs, model_ratios):
            dev = abs(chern_ratio(normalization.tensor, index_i, index_j) - model_value)
            max_ratio_dev = max(max_ratio_dev, dev)
            if dev >= chain.epsilon:
                violations += 1
    return CertificationReport(
        samples=samples,
        violations=violations,
        max_ratio_dev=max_ratio_dev,
        max_defect=max_defect,
        retries=retries,
    )


# ---------------------------------------------------------------------------
# algebraic identity verification
# ---------------------------------------------------------------------------


def identity_suite(n: int, samples: int, seed: int, restarts: int = 32) -> dict:
    """Max residuals of every verified identity over seeded random Kahler tensors.

    Covers the Bianchi consequence, the two polarization identities (with the
    miscoefficiented printed variant of the second reported informationally,
    plus a least-squares fit of the true coefficient), the six-value linear
    solve against direct contraction, the 24-term reconstruction roundtrip,
    and the mixed-component bound on the model tensor.
    """
    if n < 2:
        raise PreconditionError("identity suite needs complex dimension >= 2")
    if samples < 1:
        raise PreconditionError("samples must be >= 1")
    space = make_space(n)
    rng = seeded_rng(seed, 23)
    n_tensors = max(1, min(10, samples // 10))
    tensors = [random_kahler(space, _sample_seed(seed, 1, i)) for i in range(n_tensors)]
    model = complex_hyperbolic_tensor(space)

    res_one = 0.0
    res_solve = 0.0
    res_first = 0.0
    res_second = 0.0
    res_second_printed = 0.0
    for s in range(samples):
        tensor = tensors[s % n_tensors]
        u, v = random_orthonormal_pair(space, _sample_seed(seed, 2, s), constraint="v_perp_ju")
        res_one = max(res_one, abs(identity_one_residual(tensor, u, v)))
        solved = solve_sectional_from_H(tensor, u, v)
        ju, jv = space.j(u), space.j(v)
        direct = (
            tensor.biquadratic(u, v),
            tensor.biquadratic(u, jv),
            tensor.evaluate(u, ju, v, jv),
        )
        res_solve = max(res_solve, max(abs(a - b) for a, b in zip(solved, direct)))
        theta = rng.uniform(0.1, np.pi / 2 - 0.1)
        for a, b in ((1.0 / sqrt(2.0), 1.0 / sqrt(2.0)), (np.cos(theta), np.sin(theta))):
            pol = polarization_residuals(tensor, u, v, a, b)
            res_first = max(res_first, pol["first"])
            res_second = max(res_second, pol["second"])
            res_second_printed = max(res_second_printed, pol["second_printed"])

    res_reconstruction = 0.0
    for tensor in [model] + tensors[: min(3, n_tensors)]:
        rebuilt = reconstruct_from_sectional(tensor.biquadratic, space)
        res_reconstruction = max(res_reconstruction, distance(rebuilt, tensor))

    model_report = pinch(model, restarts=restarts, seed=seed)
    berger_violation = berger_bound_check(model, model_report, samples=samples, seed=seed)
    u, v = random_orthonormal_pair(space, seed, constraint="v_perp_ju")
    attainment_gap = abs(abs(model.evaluate(u, space.j(u), v, space.j(v))) - 0.5)

    fitted = fit_second_polarization_coefficient(space, seed, samples=max(50, samples))
    return {
        "identity_one": res_one,
        "solve_vs_direct": res_solve,
        "polarization_first": res_first,
        "polarization_second": res_second,
        "polarization_second_printed": res_second_printed,
        "reconstruction_roundtrip": res_reconstruction,
        "berger_max_violation": berger_violation,
        "berger_attainment_gap": attainment_gap,
        "suspected_typo": bool(res_second_printed > 1e-6),
        "fitted_second_coefficient": fitted,
    }
