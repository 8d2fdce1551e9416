"""Seeded random inputs for the property suites.

Every generator takes an explicit :class:`random.Random`; obtain one with
:func:`gkreduce.common.make_rng` so runs are reproducible.
"""

import itertools
import logging
import random

from sympy import QQ

from .courant import GenSection, SymmetryPair, TwistData
from .genlin import LinearGK, PairedSpace, b_transform, change_frame, direct_sum, gcs_from_complex, gcs_from_symplectic
from .linalg import Matrix, Subspace, rank
from .symcalc import Chart, Coeff, CoeffField, CoordinateKind, DiffForm, VectorField, coeff_field, exterior_d

logger = logging.getLogger(__name__)


def random_coeff(chart: Chart, rng: random.Random, degree: int = 2, terms: int = 2, gaussian: bool = False) -> Coeff:
    """Polynomial in the full coordinates with small integer coefficients."""
    f = chart.field
    full = [c.name for c in chart.coordinates if c.kind is CoordinateKind.FULL]
    total = f.zero
    for _ in range(terms):
        term = f.from_int(rng.randint(-3, 3))
        if gaussian and rng.random() < 0.3:
            term = term + f.i * rng.randint(-2, 2)
        for _ in range(rng.randint(0, degree) if full else 0):
            term = term * f.variable(rng.choice(full))
        total = total + term
    return total


def random_form(
    chart: Chart, rng: random.Random, degree: int, terms: int = 2, coeff_degree: int = 2, gaussian: bool = False
) -> DiffForm:
    monomials = list(itertools.combinations(range(chart.dimension), degree))
    if not monomials:
        return DiffForm.zero(chart)
    chosen = rng.sample(monomials, min(terms, len(monomials)))
    return DiffForm(chart, {m: random_coeff(chart, rng, coeff_degree, gaussian=gaussian) for m in sorted(chosen)})


def random_vector_field(chart: Chart, rng: random.Random, degree: int = 2, gaussian: bool = False) -> VectorField:
    f = chart.field
    components = [
        random_coeff(chart, rng, degree, gaussian=gaussian) if rng.random() < 0.7 else f.zero
        for _ in range(chart.dimension)
    ]
    return VectorField(chart, components)


def random_section(chart: Chart, rng: random.Random, degree: int = 2, gaussian: bool = False) -> GenSection:
    xi = random_form(chart, rng, 1, terms=rng.randint(1, chart.dimension), coeff_degree=degree, gaussian=gaussian)
    return GenSection(random_vector_field(chart, rng, degree, gaussian), xi)


def random_closed_three_form(chart: Chart, rng: random.Random, degree: int = 2) -> DiffForm:
    """H = dB for a random 2-form B, so dH = 0 exactly."""
    return exterior_d(random_form(chart, rng, 2, terms=3, coeff_degree=degree))


def random_twist(chart: Chart, rng: random.Random, degree: int = 2) -> TwistData:
    return TwistData(random_closed_three_form(chart, rng, degree))


def random_spinor(chart: Chart, rng: random.Random, degree: int = 2) -> DiffForm:
    """Mixed-degree form with Gaussian-rational polynomial coefficients."""
    total = DiffForm.zero(chart)
    for k in range(chart.dimension + 1):
        if rng.random() < 0.6:
            total = total + random_form(chart, rng, k, terms=2, coeff_degree=degree, gaussian=True)
    return total or DiffForm.scalar(chart, 1)


def random_symmetry_pair(chart: Chart, rng: random.Random, degree: int = 2) -> SymmetryPair:
    """(X, dα) for random X and a random 1-form α."""
    alpha = random_form(chart, rng, 1, terms=2, coeff_degree=degree + 1)
    return SymmetryPair(random_vector_field(chart, rng, degree), exterior_d(alpha))


def _random_invertible(field: CoeffField, rng: random.Random, n: int) -> Matrix:
    while True:
        A = Matrix.from_ints(field, [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        if rank(A) == n:
            return A


def _random_skew(field: CoeffField, rng: random.Random, n: int) -> Matrix:
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            value = rng.randint(-2, 2)
            rows[i][j], rows[j][i] = value, -value
    return Matrix.from_ints(field, rows)


def random_kahler_gk(
    rng: random.Random,
    planes: int,
    kind: str = "kahler",
    field: CoeffField | None = None,
    transform: bool = True,
) -> LinearGK:
    """Constant-coefficient GK structure on ℝ^{2·planes}.

    Each plane carries a Kähler triple with J = [[0, −1], [1, 0]] and
    ω = w·[[0, −1], [1, 0]]; one structure of the pair is built from ω and the
    other from J. ``kind="kahler"`` puts every symplectic block in J₁;
    ``kind="mixed"`` alternates the types plane by plane. A random frame change
    and B-transform follow unless ``transform`` is false.
    """
    if kind not in ("kahler", "mixed"):
        raise ValueError(f"Unknown GK kind '{kind}'")
    f = field or coeff_field(())
    Jc = Matrix.from_ints(f, [[0, -1], [1, 0]])
    first, second = [], []
    for p in range(planes):
        w = QQ(rng.randint(1, 5), rng.randint(1, 3))
        omega = Matrix.from_ints(f, [[0, -w], [w, 0]])
        symplectic, complex_type = gcs_from_symplectic(omega), gcs_from_complex(Jc)
        if kind == "kahler" or p % 2 == 0:
            first.append(symplectic)
            second.append(complex_type)
        else:
            first.append(complex_type)
            second.append(symplectic)
    J1, J2 = direct_sum(first), direct_sum(second)
    if transform:
        E = _random_invertible(f, rng, 2 * planes)
        B = _random_skew(f, rng, 2 * planes)
        J1 = b_transform(B, change_frame(J1, E))
        J2 = b_transform(B, change_frame(J2, E))
    logger.debug(f"Random {kind} GK structure on {planes} planes")
    return LinearGK(J1, J2)


def random_cotangent(rng: random.Random, space: PairedSpace, dim: int = 1) -> Subspace:
    """A random ``dim``-dimensional K ⊆ V* with integer coordinates."""
    f = space.field
    while True:
        vectors = [
            space.vector(None, tuple(f.from_int(rng.randint(-3, 3)) for _ in range(space.n))) for _ in range(dim)
        ]
        K = Subspace.span(f, space.dim, vectors)
        if K.dim == dim:
            return K
