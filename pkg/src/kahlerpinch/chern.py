"""Pointwise Chern-Weil theory for Kahler curvature tensors.

Given a certified tensor R and a unitary frame {f_a}, the curvature matrix of
2-forms is

    Omega_ab(x, y) = R(x, y, f_a, f_b) + (i/2) [R(x, y, f_a, Jf_b) - R(x, y, Jf_a, f_b)]

(the complex-bilinear extension of R evaluated on type-(1,0)/(0,1) frame
vectors), which is skew-Hermitian as a matrix of forms. Chern forms are the
elementary symmetric polynomials of (i/2pi) Omega under wedge multiplication,
computed through Newton's identities on wedge-traces; 2-form entries commute,
so the classical recursion applies verbatim. Densities are coefficients
relative to omega^n; only ratios of densities are consumed downstream, so the
normalization convention cancels.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .curvature import CurvatureTensor, complex_hyperbolic_tensor, require_certified
from .errors import (
    DegenerateDenominatorError,
    DegreeError,
    IdentityInconsistencyError,
    PreconditionError,
)
from .forms import (
    AlternatingForm,
    ComplexFormPair,
    ComplexMatrixOfForms,
    index_combinations,
    top_coefficient,
    wedge,
)
from .space import HermitianSpace, make_space

__all__ = [
    "ChernIndex",
    "ChernDensity",
    "canonical_frame",
    "curvature_matrix",
    "chern_form",
    "chern_forms",
    "chern_product",
    "chern_ratio",
    "enumerate_indices",
    "reference_constants",
    "space_form_ratio",
]

REALITY_TOL = 1e-12


@dataclass(frozen=True)
class ChernIndex:
    """Multi-index (a_1, ..., a_n) with sum of i * a_i equal to n."""

    multi_index: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(a) for a in self.multi_index)
        object.__setattr__(self, "multi_index", idx)
        if any(a < 0 for a in idx):
            raise DegreeError(f"multi-index must be nonnegative, got {idx}")
        n = len(idx)
        weight = sum((i + 1) * a for i, a in enumerate(idx))
        if weight != n:
            raise DegreeError(f"multi-index {idx} has total degree {weight}, expected {n}")

    @property
    def n(self) -> int:
        return len(self.multi_index)

    def label(self) -> str:
        return ",".join(str(a) for a in self.multi_index)

    def __str__(self) -> str:
        return self.label()


@dataclass(frozen=True)
class ChernDensity:
    """Coefficient gamma with c_I(R) = gamma * omega^n."""

    index: ChernIndex
    gamma: float


def enumerate_indices(n: int) -> list[ChernIndex]:
    """All multi-indices with sum i * a_i = n, largest leading entries first."""
    if n < 1:
        raise DegreeError("n must be >= 1")
    found: list[tuple[int, ...]] = []

    def recurse(prefix: list[int], position: int, remaining: int):
        if position == n:
            if remaining == 0:
                found.append(tuple(prefix))
            return
        weight = position + 1
        for a in range(remaining // weight, -1, -1):
            recurse(prefix + [a], position + 1, remaining - weight * a)

    recurse([], 0, n)
    found.sort(reverse=True)
    return [ChernIndex(t) for t in found]


def canonical_frame(space: HermitianSpace) -> list[np.ndarray]:
    return [space.basis_vector(2 * a) for a in range(space.n)]


def _require_unitary_frame(space: HermitianSpace, frame, tol: float = 1e-10):
    if len(frame) != space.n:
        raise PreconditionError(f"frame must have {space.n} vectors, got {len(frame)}")
    cols = []
    for f in frame:
        cols.append(np.asarray(f, dtype=float))
        cols.append(space.j(cols[-1]))
    gram = np.column_stack(cols).T @ np.column_stack(cols)
    if np.max(np.abs(gram - np.eye(space.dim))) > tol:
        raise PreconditionError("frame is not unitary: {f_a, Jf_a} fails orthonormality")


def curvature_matrix(tensor: CurvatureTensor, frame=None) -> ComplexMatrixOfForms:
    """Curvature matrix of complex 2-forms in a unitary frame."""
    require_certified(tensor)
    space = tensor.space
    if frame is None:
        frame = canonical_frame(space)
    _require_unitary_frame(space, frame)
    pairs = index_combinations(space.dim, 2)
    rows_i = np.array([p[0] for p in pairs])
    rows_j = np.array([p[1] for p in pairs])

    def two_form(x, y) -> np.ndarray:
        # coefficients of the 2-form (a, b) -> R(a, b, x, y) over sorted pairs
        matrix = np.einsum("ijkl,k,l->ij", tensor.entries, x, y)
        return matrix[rows_i, rows_j]

    n = space.n
    entries: list[list[ComplexFormPair]] = []
    jf = [space.j(f) for f in frame]
    for a in range(n):
        row = []
        for b in range(n):
            re = AlternatingForm(space, 2, two_form(frame[a], frame[b]))
            im = AlternatingForm(
                space, 2, 0.5 * (two_form(frame[a], jf[b]) - two_form(jf[a], frame[b]))
            )
            row.append(ComplexFormPair(re, im))
        entries.append(row)
    return ComplexMatrixOfForms(space, entries)


def chern_forms(tensor: CurvatureTensor, frame=None) -> list[AlternatingForm]:
    """All Chern forms c_0, ..., c_n as real alternating forms (degree 2k).

    Imaginary parts must cancel (skew-Hermitian input); they are checked
    against a small threshold and discarded.
    """
    space = tensor.space
    n = space.n
    omega_matrix = curvature_matrix(tensor, frame)
    normalized = omega_matrix.scale_complex(1j / (2.0 * np.pi))
    # wedge-powers and their traces
    traces: list[ComplexFormPair] = []
    current = normalized
    traces.append(current.trace())
    for _ in range(1, n):
        current = current.matmul_wedge(normalized)
        traces.append(current.trace())
    # Newton's identities: k sigma_k = sum_{j=1..k} (-1)^{j-1} sigma_{k-j} ^ p_j
    sigmas: list[ComplexFormPair] = [
        ComplexFormPair.from_real(AlternatingForm.constant_one(space))
    ]
    for k in range(1, n + 1):
        acc = ComplexFormPair.zero(space, 2 * k)
        for j in range(1, k + 1):
            term = sigmas[k - j].wedge(traces[j - 1])
            if j % 2 == 0:
                term = term.times_complex(-1.0)
            acc = acc + term
        sigmas.append(acc / k)
    out = []
    for k, sigma in enumerate(sigmas):
        residue = sigma.im.max_abs()
        scale = max(1.0, sigma.re.max_abs())
        if residue > REALITY_TOL * scale:
            raise PreconditionError(
                f"Chern form c_{k} has imaginary residue {residue:.3e}; "
                "input tensor is not Kahler enough"
            )
        out.append(sigma.re)
    return out


def chern_form(tensor: CurvatureTensor, k: int, frame=None) -> AlternatingForm:
    """Single Chern form c_k (real, degree 2k)."""
    if k < 0 or k > tensor.space.n:
        raise DegreeError(f"k must be in [0, {tensor.space.n}], got {k}")
    return chern_forms(tensor, frame)[k]


def chern_product(tensor: CurvatureTensor, index: ChernIndex, frame=None) -> ChernDensity:
    """Density of c_1^{a_1} ^ ... ^ c_n^{a_n} relative to omega^n."""
    space = tensor.space
    if index.n != space.n:
        raise DegreeError(f"index has n={index.n}, tensor has n={space.n}")
    forms = chern_forms(tensor, frame)
    product = AlternatingForm.constant_one(space)
    for k, a in enumerate(index.multi_index, start=1):
        for _ in range(a):
            product = wedge(product, forms[k])
    return ChernDensity(index=index, gamma=top_coefficient(product))


def space_form_ratio(index_i: ChernIndex, index_j: ChernIndex) -> float:
    """Reference ratio for a complex space form: products of binomials C(n+1, k)."""
    n = index_i.n
    ratio = 1.0
    for k in range(1, n + 1):
        ratio *= float(comb(n + 1, k)) ** (index_i.multi_index[k - 1] - index_j.multi_index[k - 1])
    return ratio


@lru_cache(maxsize=None)
def reference_constants(n: int) -> dict[ChernIndex, float]:
    """Densities gamma_I of the complex hyperbolic model tensor, all indices.

    Cross-checked internally: every pairwise ratio must match the space-form
    binomial formula.
    """
    space = make_space(n)
    model = complex_hyperbolic_tensor(space)
    forms = chern_forms(model)
    table: dict[ChernIndex, float] = {}
    for index in enumerate_indices(n):
        product = AlternatingForm.constant_one(space)
        for k, a in enumerate(index.multi_index, start=1):
            for _ in range(a):
                product = wedge(product, forms[k])
        table[index] = top_coefficient(product)
    indices = list(table)
    for a in indices:
        for b in indices:
            expected = space_form_ratio(a, b)
            got = table[a] / table[b]
            if abs(got - expected) > 1e-8 * max(1.0, abs(expected)):
                raise IdentityInconsistencyError(
                    f"reference ratio {a}/{b} = {got!r} disagrees with "
                    f"space-form value {expected!r}"
                )
    return table


def chern_ratio(
    tensor: CurvatureTensor, index_i: ChernIndex, index_j: ChernIndex, frame=None
) -> float:
    """gamma_I / gamma_J; scale- and frame-independent."""
    space = tensor.space
    if index_i.n != space.n or index_j.n != space.n:
        raise DegreeError("index dimensions disagree with the tensor")
    forms = chern_forms(tensor, frame)

    def gamma(index: ChernIndex) -> float:
        product = AlternatingForm.constant_one(space)
        for k, a in enumerate(index.multi_index, start=1):
            for _ in range(a):
                product = wedge(product, forms[k])
        return top_coefficient(product)

    denominator = gamma(index_j)
    reference = abs(reference_constants(space.n)[index_j])
    if abs(denominator) < 1e-12 * reference:
        raise DegenerateDenominatorError(
            f"density gamma_{index_j} = {denominator!r} vanished relative to reference"
        )
    return gamma(index_i) / denominator
