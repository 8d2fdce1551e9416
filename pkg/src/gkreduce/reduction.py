"""Abelian bi-Hamiltonian reduction of a generalized Kähler manifold by two tori.

The torus T acts J₁-Hamiltonianly and T̂ acts J₂-Hamiltonianly, with moment
sections 𝔛_j = J₁(df_j) and 𝔛̂_k = J₂(df̂_k). On the level set the connection
forms Θ, Θ̂ give the normalizing 2-form B̃, and the twisting forms of the two
quotients satisfy

    π̂*ĥ − π*h = d(Σ P_jk Θ̂_k ∧ Θ_j),    P_jk = 2⟨𝔛_j, 𝔛̂_k⟩.

Everything is computed on an invariant chart, where "descends to the quotient"
is certified by basicness.
"""

from __future__ import annotations

import dataclasses
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from enum import StrEnum
from typing import Any

from .common import Finding, GKReduceError, finding
from .courant import (
    GenSection,
    TwistData,
    eigenframe,
    frame_preserved,
    loday_bracket,
    pairing,
)
from .genlin import (
    GenlinError,
    LemmaReport,
    LinearGK,
    PairedSpace,
    is_gk,
    lemma_double_split,
    lemma_dual_split,
    lemma_extend,
    lemma_kahler_split,
    lemma_missingrank,
)
from .linalg import LinearAlgebraError, Matrix, Subspace, inverse, rank, residual_text, vec_add, vec_scale
from .symcalc import (
    BasicReport,
    Chart,
    Coeff,
    CoordinateKind,
    DiffForm,
    VectorField,
    basic_check,
    exterior_d,
    interior,
    lie_derivative,
    restrict_to_level,
    restrict_vector_field,
    transfer,
    wedge,
)

logger = logging.getLogger(__name__)

Point = Mapping[str, Any]

CONVENTION = "connections satisfy ι_{X_j}Θ_k = δ_jk and ι_{X̂_j}Θ̂_k = δ_jk; P_jk = 2⟨𝔛_j, 𝔛̂_k⟩"


class ReductionError(GKReduceError):
    """Raised for reduction input that does not meet a precondition."""


class MomentError(ReductionError):
    """Raised when a moment function has vanishing differential."""


class ConnectionMismatchError(ReductionError):
    """Raised when connection forms are not dual to the torus generators."""


class GroupElementError(ReductionError):
    """Raised for a T-duality group element outside O(m, m; ℤ) or one breaking the Lagrangian condition."""


class SubtorusError(ReductionError):
    """Raised when neither reduction case applies to a subtorus."""


class Tag(StrEnum):
    J1 = "J1"
    J2 = "J2"


class Side(StrEnum):
    T = "T"
    T_HAT = "T-hat"


@dataclass(frozen=True)
class Moment:
    function: Coeff
    tag: Tag


@dataclass
class TorusActionData:
    """Two torus actions on a chart of M, Hamiltonian for J₁ and J₂ respectively.

    ``level`` fixes full coordinates to constants; the level set M₀ is modelled by
    ``level_chart`` (by default the chart without those coordinates).
    """

    chart: Chart
    moments: list[Moment]
    gk: LinearGK
    tw: TwistData
    level: dict[str, Any] = dataclasses.field(default_factory=dict)
    level_chart: Chart | None = None

    def __post_init__(self) -> None:
        if self.gk.field != self.chart.field:
            raise ReductionError(f"Structure field does not match chart '{self.chart.name}'")
        if self.gk.J1.nrows != 2 * self.chart.dimension:
            raise ReductionError(f"Structure of size {self.gk.J1.nrows} on a {self.chart.dimension}-dimensional chart")
        if self.tw.chart != self.chart:
            raise ReductionError(f"Twisting form lives on '{self.tw.chart.name}', not '{self.chart.name}'")
        if not self.moments:
            raise ReductionError("At least one moment function is required")
        structure = is_gk(self.gk)
        if not structure.valid:
            raise ReductionError(f"Not a generalized Kähler structure: {structure.violations}")
        if self.level and self.level_chart is None:
            self.level_chart = self.chart.without(self.level, f"{self.chart.name}0")

    def family(self, tag: Tag) -> list[int]:
        return [k for k, m in enumerate(self.moments) if m.tag is tag]

    @property
    def reduced_chart(self) -> Chart:
        return self.level_chart or self.chart


def moment_differential(act: TorusActionData, k: int) -> DiffForm:
    df = exterior_d(DiffForm.scalar(act.chart, act.moments[k].function))
    if not df:
        raise MomentError(f"Moment function {k} ({act.moments[k].function}) has zero differential")
    return df


def moment_sections(act: TorusActionData) -> list[GenSection]:
    """𝔛_j = J_tag(df_j), one section per moment function, in input order."""
    sections = []
    for k, moment in enumerate(act.moments):
        df = moment_differential(act, k)
        J = act.gk.structure(1 if moment.tag is Tag.J1 else 2)
        covector = GenSection(VectorField.zero(act.chart), df).vector()
        section = GenSection.from_vector(act.chart, J.apply(covector))
        logger.debug(f"Moment section {k} ({moment.tag}): {section}")
        sections.append(section)
    return sections


def level_checks(act: TorusActionData) -> list[Finding]:
    """Each moment function is constant on the level set."""
    findings = []
    for k, moment in enumerate(act.moments):
        restricted = moment.function.subs(act.level)
        findings.append(
            Finding(
                "level-constant",
                f"f{k + 1}",
                restricted.is_constant,
                "0" if restricted.is_constant else str(restricted),
            )
        )
    return findings


def hamiltonian_checks(
    act: TorusActionData, sections: Sequence[GenSection], invariance: bool = False
) -> list[Finding]:
    """Identities every family of moment sections satisfies, with exact residuals.

    With ``invariance`` the action of each section is also checked to preserve both
    +i-eigenframes.
    """
    H = act.tw.H
    dfs = [moment_differential(act, k) for k in range(len(act.moments))]
    findings: list[Finding] = []
    for j, x in enumerate(sections):
        name = f"X{j + 1}"
        findings.append(finding("moment-tangent", name, interior(x.X, dfs[j])))
        findings.append(finding("twist-invariant", name, lie_derivative(x.X, H)))
        findings.append(finding("splitting-preserved", name, exterior_d(x.xi) - interior(x.X, H)))
    for tag in Tag:
        family = act.family(tag)
        for a, j in enumerate(family):
            for k in family[a + 1 :]:
                residual = interior(sections[j].X, dfs[k]) + interior(sections[k].X, dfs[j])
                findings.append(finding("moment-isotropy", f"X{j + 1}, X{k + 1}", residual))
    for j, x in enumerate(sections):
        for k, y in enumerate(sections):
            findings.append(finding("moment-brackets", f"X{j + 1} * X{k + 1}", loday_bracket(x, y, act.tw)))
    if invariance:
        for label, J in (("J1", act.gk.J1), ("J2", act.gk.J2)):
            frame = eigenframe(J, act.chart)
            for j, x in enumerate(sections):
                failures = {k: v for k, v in frame_preserved(x, frame, act.tw).items() if not v.is_zero}
                residual = "; ".join(f"<{a},{b}> = {v}" for (a, b), v in failures.items()) or "0"
                findings.append(finding("structure-invariance", f"X{j + 1} on L({label})", residual))
    return findings


@dataclass
class PairingResult:
    matrix: Matrix
    derivatives: dict[tuple[int, int], DiffForm]
    nondegenerate: bool

    @property
    def constant(self) -> bool:
        return not any(self.derivatives.values())


def family_pairing(T: Sequence[GenSection], T_hat: Sequence[GenSection], field) -> Matrix:
    rows = [[pairing(x, y) * 2 for y in T_hat] for x in T]
    return Matrix(field, rows, len(T_hat))


def pairing_P(act: TorusActionData, sections: Sequence[GenSection]) -> PairingResult:
    """P_jk = 2⟨J₁(df_j), J₂(df̂_k)⟩ with constancy and nondegeneracy."""
    T = [sections[k] for k in act.family(Tag.J1)]
    T_hat = [sections[k] for k in act.family(Tag.J2)]
    matrix = family_pairing(T, T_hat, act.chart.field)
    derivatives = {}
    for j in range(len(T)):
        for k in range(len(T_hat)):
            derivatives[(j, k)] = exterior_d(DiffForm.scalar(act.chart, matrix[j, k]))
    square = len(T) == len(T_hat) and len(T) > 0
    nondegenerate = square and rank(matrix) == len(T)
    return PairingResult(matrix, derivatives, nondegenerate)


@dataclass
class TorusFamilies:
    """Moment sections of both tori and the twisting form, on the level-set chart."""

    tw: TwistData
    T: list[GenSection]
    T_hat: list[GenSection]

    @property
    def chart(self) -> Chart:
        return self.tw.chart

    def side(self, side: Side) -> list[GenSection]:
        return self.T if side is Side.T else self.T_hat

    @property
    def sections(self) -> list[GenSection]:
        return [*self.T, *self.T_hat]

    @property
    def generators(self) -> list[VectorField]:
        return [x.X for x in self.sections]

    def pairing(self) -> Matrix:
        return family_pairing(self.T, self.T_hat, self.chart.field)


def restrict_section(x: GenSection, values: Mapping[str, Any], level_chart: Chart) -> GenSection:
    return GenSection(restrict_vector_field(x.X, values, level_chart), restrict_to_level(x.xi, values, level_chart))


def level_families(act: TorusActionData, sections: Sequence[GenSection]) -> TorusFamilies:
    if act.level_chart is None:
        return TorusFamilies(act.tw, [sections[k] for k in act.family(Tag.J1)], [sections[k] for k in act.family(Tag.J2)])
    chart = act.level_chart
    restricted = [restrict_section(x, act.level, chart) for x in sections]
    tw = TwistData(restrict_to_level(act.tw.H, act.level, chart))
    return TorusFamilies(tw, [restricted[k] for k in act.family(Tag.J1)], [restricted[k] for k in act.family(Tag.J2)])


@dataclass
class ConnectionData:
    Theta: list[DiffForm]
    ThetaHat: list[DiffForm]

    def side(self, side: Side) -> list[DiffForm]:
        return self.Theta if side is Side.T else self.ThetaHat

    @property
    def forms(self) -> list[DiffForm]:
        return [*self.Theta, *self.ThetaHat]


def contraction_matrix(fam: TorusFamilies, conn: ConnectionData) -> Matrix:
    """Entry (a, b) is ι_{X̃_a} Θ̃_b over both tori."""
    rows = [[interior(X, theta).coefficient(()) for theta in conn.forms] for X in fam.generators]
    return Matrix(fam.chart.field, rows, len(conn.forms))


def _require_dual(fam: TorusFamilies, conn: ConnectionData) -> Matrix:
    if len(conn.Theta) != len(fam.T) or len(conn.ThetaHat) != len(fam.T_hat):
        raise ConnectionMismatchError(
            f"{len(conn.Theta)}+{len(conn.ThetaHat)} connection forms for {len(fam.T)}+{len(fam.T_hat)} generators"
        )
    for theta in conn.forms:
        if theta.chart != fam.chart or theta.degrees - {1}:
            raise ConnectionMismatchError(f"Connection form {theta} is not a 1-form on chart '{fam.chart.name}'")
    contractions = contraction_matrix(fam, conn)
    m = len(fam.T)
    for a in range(contractions.nrows):
        for b in range(contractions.ncols):
            same_torus = (a < m) == (b < m)
            if same_torus and contractions[a, b] != (1 if a == b else 0):
                raise ConnectionMismatchError(f"ι_X Θ is {contractions[a, b]} at ({a}, {b}), expected {int(a == b)}")
    return contractions


def connection_checks(fam: TorusFamilies, conn: ConnectionData) -> list[Finding]:
    findings = []
    try:
        contractions = _require_dual(fam, conn)
    except ConnectionMismatchError as e:
        return [Finding("connection-duality", "Theta", False, str(e))]
    m = len(fam.T)
    cross = [(a, b) for a, b, _ in contractions.nonzero_entries() if (a < m) != (b < m)]
    duality = Finding("connection-duality", "Theta", True)
    if cross:
        duality.note = "cross contractions " + ", ".join(f"({a},{b}) = {contractions[a, b]}" for a, b in cross)
    findings.append(duality)
    for a, X in enumerate(fam.generators):
        for b, theta in enumerate(conn.forms):
            findings.append(finding("connection-invariant", f"L_X{a + 1} Theta{b + 1}", lie_derivative(X, theta)))
    return findings


def _half(chart: Chart) -> Coeff:
    return chart.field.one / 2


def family_b(chart: Chart, sections: Sequence[GenSection], thetas: Sequence[DiffForm]) -> DiffForm:
    """Σ Θ_j ∧ ξ_j − ½ Σ Θ_j ∧ Θ_k · ι_{X_k} ξ_j."""
    total = DiffForm.zero(chart)
    for theta, x in zip(thetas, sections, strict=True):
        total = total + wedge(theta, x.xi)
    half = _half(chart)
    for j, x in enumerate(sections):
        for k, y in enumerate(sections):
            total = total - wedge(wedge(thetas[j], thetas[k]), interior(y.X, x.xi)).scale(half)
    return total


def horizontal_part(a: DiffForm, generators: Sequence[VectorField], thetas: Sequence[DiffForm]) -> DiffForm:
    """Applies Π (1 − Θ_a ∧ ι_{X_a})."""
    for X, theta in zip(generators, thetas, strict=True):
        a = a - wedge(theta, interior(X, a))
    return a


@dataclass
class BTilde:
    form: DiffForm
    horizontal: DiffForm
    lie_residuals: list[DiffForm]

    @property
    def invariant(self) -> bool:
        return not any(self.lie_residuals)


def b_tilde(fam: TorusFamilies, conn: ConnectionData) -> BTilde:
    _require_dual(fam, conn)
    if not fam.T and not fam.T_hat:
        raise ReductionError("No torus generators")
    form = family_b(fam.chart, fam.T, conn.Theta) + family_b(fam.chart, fam.T_hat, conn.ThetaHat)
    horizontal = horizontal_part(form, fam.generators, conn.forms)
    return BTilde(form, horizontal, [lie_derivative(X, form) for X in fam.generators])


@dataclass
class ReducedTwisting:
    """A representative π*h of the twisting form of one quotient."""

    side: Side
    form: DiffForm
    basic: BasicReport
    xi_prime: list[DiffForm]
    crosscheck: list[DiffForm]
    quotient: DiffForm | None = None


def _quotient_chart(chart: Chart, generators: Sequence[VectorField]) -> Chart | None:
    names = []
    for X in generators:
        support = [k for k, c in enumerate(X.components) if c]
        if len(support) != 1 or chart.coordinates[support[0]].kind is not CoordinateKind.ANGLE:
            return None
        if X.components[support[0]] not in (1, -1):
            return None
        names.append(chart.names[support[0]])
    if len(set(names)) != len(names):
        return None
    return chart.without(names, f"{chart.name}/{'+'.join(names)}")


def quotient_expression(a: DiffForm, generators: Sequence[VectorField]) -> DiffForm | None:
    """The basic form on the quotient chart when every generator is ±∂ of an angle."""
    chart = _quotient_chart(a.chart, generators)
    if chart is None:
        return None
    return transfer(a, chart)


def reduced_twisting(
    fam: TorusFamilies, conn: ConnectionData, side: Side, B: DiffForm | None = None
) -> ReducedTwisting:
    """π*h = H̃ + d(Θ∧ξ' − ½ Σ Θ_j∧Θ_k ι_{X_k} ξ'_j) with H̃ = H + dB̃ and ξ'_l = ξ_l − ι_{X_l} B̃."""
    chart = fam.chart
    if B is None:
        B = b_tilde(fam, conn).form
    H_tilde = fam.tw.H + exterior_d(B)
    sections, thetas = fam.side(side), conn.side(side)
    other = Side.T_HAT if side is Side.T else Side.T
    others, other_thetas = fam.side(other), conn.side(other)

    primed = [GenSection(x.X, x.xi - interior(x.X, B)) for x in sections]
    correction = family_b(chart, primed, thetas)
    form = H_tilde + exterior_d(correction)

    crosscheck = []
    for x, xp in zip(sections, primed, strict=True):
        expected = DiffForm.zero(chart)
        for theta, y in zip(thetas, sections, strict=True):
            expected = expected + theta.scale(pairing(x, y))
        for theta, y in zip(other_thetas, others, strict=True):
            expected = expected + wedge(theta, interior(x.X, y.xi))
        crosscheck.append(xp.xi - expected)

    generators = [x.X for x in sections]
    basic = basic_check(form, generators)
    if not basic.basic:
        raise ReductionError(f"Reduced twisting form for {side} is not basic: {'; '.join(basic.obstructions)}")
    result = ReducedTwisting(side, form, basic, [x.xi for x in primed], crosscheck)
    result.quotient = quotient_expression(form, generators)
    return result


@dataclass
class DualityReport:
    h: DiffForm
    hhat: DiffForm
    residual: DiffForm
    pairing_matrix: Matrix
    b_tilde: DiffForm
    convention: str = CONVENTION

    @property
    def passed(self) -> bool:
        return not self.residual


def duality_check(
    fam: TorusFamilies, conn: ConnectionData, pairing_matrix: Matrix | None = None, pairing_scale: int = 1
) -> DualityReport:
    """Residual of π̂*ĥ − π*h − d(Σ P_jk Θ̂_k ∧ Θ_j); ``pairing_scale`` ≠ 1 is a negative control."""
    P = fam.pairing() if pairing_matrix is None else pairing_matrix
    for j, k, value in P.nonzero_entries():
        if not value.is_constant:
            raise ReductionError(f"P[{j},{k}] = {value} is not constant")
    B = b_tilde(fam, conn).form
    h = reduced_twisting(fam, conn, Side.T, B).form
    hhat = reduced_twisting(fam, conn, Side.T_HAT, B).form
    mixed = DiffForm.zero(fam.chart)
    for j, theta in enumerate(conn.Theta):
        for k, theta_hat in enumerate(conn.ThetaHat):
            if P[j, k]:
                mixed = mixed + wedge(theta_hat, theta).scale(P[j, k] * pairing_scale)
    residual = hhat - h - exterior_d(mixed)
    logger.info(f"Duality residual on '{fam.chart.name}': {residual}")
    return DualityReport(h, hhat, residual, P, B)


def b_shear(b: Sequence[Sequence[int]]) -> list[list[int]]:
    """The element [[I, 0], [b, I]] of O(m, m; ℤ) for skew integral b."""
    m = len(b)
    if any(len(row) != m for row in b):
        raise GroupElementError("b must be square")
    if any(b[j][k] != -b[k][j] for j in range(m) for k in range(m)):
        raise GroupElementError("b must be skew-symmetric")
    g = [[0] * (2 * m) for _ in range(2 * m)]
    for j in range(2 * m):
        g[j][j] = 1
    for j in range(m):
        for k in range(m):
            g[m + j][k] = int(b[j][k])
    return g


@dataclass
class TransformResult:
    families: TorusFamilies
    connections: ConnectionData
    report: DualityReport


def _combine(items: Sequence[GenSection], weights: Sequence[Coeff]) -> GenSection:
    total = GenSection.zero(items[0].chart)
    for w, x in zip(weights, items, strict=True):
        if w:
            total = total + x.scale(w)
    return total


def _combine_forms(items: Sequence[DiffForm], weights: Sequence[Coeff]) -> DiffForm:
    total = DiffForm.zero(items[0].chart)
    for w, a in zip(weights, items, strict=True):
        if w:
            total = total + a.scale(w)
    return total


def tduality_transform(g: Sequence[Sequence[int]], fam: TorusFamilies, conn: ConnectionData) -> TransformResult:
    """Acts on the generators of T × T̂ by g ∈ O(m, m; ℤ) and re-runs the duality check."""
    m = len(fam.T)
    if m != len(fam.T_hat) or m == 0:
        raise GroupElementError(f"T-duality group needs equal nonzero ranks, got {len(fam.T)} and {len(fam.T_hat)}")
    if len(g) != 2 * m or any(len(row) != 2 * m for row in g):
        raise GroupElementError(f"Group element must be {2 * m}x{2 * m}")
    if any(not isinstance(entry, int) for row in g for entry in row):
        raise GroupElementError("Group element must have integer entries")
    _require_dual(fam, conn)
    f = fam.chart.field
    G = Matrix.from_ints(f, g)
    P = fam.pairing()
    zero = Matrix.zeros(f, m, m)
    split = Matrix.block(f, [[zero, P], [P.T, zero]])
    if not (G.T @ split @ G - split).is_zero:
        raise GroupElementError(f"Group element does not preserve the split pairing: {residual_text(G.T @ split @ G - split)}")
    try:
        G_inv = inverse(G)
    except LinearAlgebraError as e:
        raise GroupElementError("Group element is not invertible") from e

    old = fam.sections
    new = [_combine(old, G.column(i)) for i in range(2 * m)]
    for label, family in (("T", new[:m]), ("T-hat", new[m:])):
        for a, x in enumerate(family):
            for y in family[a:]:
                if not pairing(x, y).is_zero:
                    raise GroupElementError(f"Transformed {label} family is not Lagrangian")
    forms = conn.forms
    thetas = [_combine_forms(forms, [G_inv[i, k] for k in range(2 * m)]) for i in range(2 * m)]

    families = TorusFamilies(fam.tw, new[:m], new[m:])
    connections = ConnectionData(thetas[:m], thetas[m:])
    return TransformResult(families, connections, duality_check(families, connections))


def moment_cotangent(act: TorusActionData) -> Subspace:
    """K = span(df_j) in V ⊕ V* at the generic point of the chart."""
    space = PairedSpace(act.chart.dimension, act.chart.field)
    vectors = [GenSection(VectorField.zero(act.chart), moment_differential(act, k)).vector() for k in range(len(act.moments))]
    return Subspace.span(act.chart.field, space.dim, vectors)


def _ordered_sections(act: TorusActionData, sections: Sequence[GenSection]) -> list[GenSection]:
    return [sections[k] for k in act.family(Tag.J1)] + [sections[k] for k in act.family(Tag.J2)]


@dataclass
class SubtorusReport:
    gram: Matrix
    isotropic_case: bool
    nondegenerate_case: bool
    route: str
    lemma: LemmaReport

    @property
    def passed(self) -> bool:
        return self.lemma.passed


def subtorus_reduction_check(
    act: TorusActionData,
    sections: Sequence[GenSection],
    basis: Sequence[Sequence[int]],
    mode: str | None = None,
) -> SubtorusReport:
    """Decides which extension lemma reduces by the subtorus spanned by ``basis``.

    ``basis`` rows are integer coordinates on the generators of T × T̂ (T first).
    The Gram matrix reported is 2⟨𝔛_a, 𝔛_b⟩, so a single generator X + ξ shows ι_X ξ.
    """
    ordered = _ordered_sections(act, sections)
    if not basis or any(len(v) != len(ordered) for v in basis):
        raise SubtorusError(f"Subtorus basis vectors must have {len(ordered)} integer entries")
    f = act.chart.field
    space = PairedSpace(act.chart.dimension, f)
    vectors = []
    for v in basis:
        combined = (f.zero,) * space.dim
        for weight, x in zip(v, ordered, strict=True):
            if weight:
                combined = vec_add(combined, vec_scale(f.from_int(int(weight)), x.vector()))
        vectors.append(combined)
    Kp = Subspace.span(f, space.dim, vectors)
    if Kp.dim != len(basis):
        raise SubtorusError("Subtorus basis is not independent")
    K = moment_cotangent(act)
    gram = space.gram(vectors).scale(2)

    meets_cotangent = Kp.intersection(space.cotangent).dim > 0
    isotropic_case = not meets_cotangent and space.is_isotropic(K + Kp)
    orthogonal = all(space.pairing(k, kp).is_zero for k in K.basis for kp in Kp.basis)
    nondegenerate_case = not meets_cotangent and orthogonal and rank(gram) == Kp.dim
    logger.info(f"Subtorus {list(basis)}: isotropic case {isotropic_case}, nondegenerate case {nondegenerate_case}")

    if mode is None:
        mode = "isotropic" if isotropic_case else "nondegenerate" if nondegenerate_case else None
        if mode is None:
            raise SubtorusError("Neither the isotropic nor the nondegenerate reduction case applies")
    elif mode not in ("isotropic", "nondegenerate"):
        raise SubtorusError(f"Unknown subtorus mode '{mode}'")
    elif not (isotropic_case if mode == "isotropic" else nondegenerate_case):
        raise SubtorusError(f"The {mode} reduction case does not apply to this subtorus")

    lemma = lemma_extend(K, Kp) if mode == "isotropic" else lemma_missingrank(K, Kp)
    return SubtorusReport(gram, isotropic_case, nondegenerate_case, mode, lemma)


def generic_point_lemmas(act: TorusActionData, points: Sequence[Point] = ()) -> dict[str, LemmaReport]:
    """The fiberwise splitting lemmas for K = span(df_j) at the generic point of M."""
    K = moment_cotangent(act)
    J1K = K.image(act.gk.J1)
    runs = {
        "kahler_split": lambda: lemma_kahler_split(K, act.gk, points),
        "double_split": lambda: lemma_double_split(K, act.gk),
        "dual_split": lambda: lemma_dual_split(K, act.gk, J1K, points),
    }
    reports = {}
    for name, run in runs.items():
        try:
            reports[name] = run()
        except GenlinError as e:
            logger.warning(f"Lemma {name} not applicable: {e}")
            failed = LemmaReport(name)
            failed.check("hypotheses", False, str(e))
            reports[name] = failed
    return reports
