"""Sections of TM ⊕ T*M: the twisted Loday bracket, Courant axioms and spinors.

A section X + ξ pairs with Y + η by ⟨X+ξ, Y+η⟩ = ½(ι_Xη + ι_Yξ). The
H-twisted Loday bracket is

    (X + ξ) *_H (Y + η) = [X, Y] + ℒ_X η − ι_Y(dξ − ι_X H)

and a form ρ is acted on by Clifford multiplication (X + ξ)·ρ = ι_Xρ + ξ∧ρ.
"""

from __future__ import annotations

import dataclasses
import itertools
import logging
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass
from typing import Any

from .common import GKReduceError
from .genlin import PairedSpace, eigenspace, require_gcs
from .linalg import Matrix, Subspace, Vector, nullspace, solve, vec_add, vec_scale
from .symcalc import (
    Chart,
    Coeff,
    DiffForm,
    VectorField,
    apply,
    evaluate,
    exterior_d,
    interior,
    lie_derivative,
    vector_bracket,
    wedge,
)

logger = logging.getLogger(__name__)


class CourantError(GKReduceError):
    """Raised for invalid Courant-algebroid input."""


class TwistNotClosedError(CourantError):
    """Raised when a twisting 3-form is not closed."""


class SpinorError(CourantError):
    """Raised for a spinor that vanishes or whose annihilator is not pure."""


@dataclass(frozen=True)
class GenSection:
    """A section X + ξ of TM ⊕ T*M."""

    X: VectorField
    xi: DiffForm

    def __post_init__(self) -> None:
        if self.X.chart != self.xi.chart:
            raise CourantError(f"Section mixes charts '{self.X.chart.name}' and '{self.xi.chart.name}'")
        if self.xi.degrees - {1}:
            raise CourantError(f"Section 1-form part has degrees {sorted(self.xi.degrees)}")

    @classmethod
    def zero(cls, chart: Chart) -> GenSection:
        return cls(VectorField.zero(chart), DiffForm.zero(chart))

    @classmethod
    def from_vector(cls, chart: Chart, v: Sequence[Coeff]) -> GenSection:
        n = chart.dimension
        if len(v) != 2 * n:
            raise CourantError(f"Fiber vector of length {len(v)} on a {n}-dimensional chart")
        xi = DiffForm(chart, {(k,): c for k, c in enumerate(v[n:]) if c})
        return cls(VectorField(chart, v[:n]), xi)

    @property
    def chart(self) -> Chart:
        return self.X.chart

    def vector(self) -> Vector:
        """Fiber components (X_1, ..., X_n, ξ_1, ..., ξ_n)."""
        f = self.chart.field
        covector = tuple(self.xi.terms.get((k,), f.zero) for k in range(self.chart.dimension))
        return (*self.X.components, *covector)

    def __add__(self, other: GenSection) -> GenSection:
        return GenSection(self.X + other.X, self.xi + other.xi)

    def __sub__(self, other: GenSection) -> GenSection:
        return GenSection(self.X - other.X, self.xi - other.xi)

    def __neg__(self) -> GenSection:
        return GenSection(-self.X, -self.xi)

    def scale(self, c: Coeff | int) -> GenSection:
        return GenSection(self.X.scale(c), self.xi.scale(c))

    def conjugate(self) -> GenSection:
        return GenSection(self.X.conjugate(), self.xi.conjugate())

    def __bool__(self) -> bool:
        return bool(self.X) or bool(self.xi)

    def __str__(self) -> str:
        if not self:
            return "0"
        parts = [str(p) for p in (self.X, self.xi) if p]
        return " + ".join(parts)


@dataclass(frozen=True)
class TwistData:
    """A closed 3-form H."""

    H: DiffForm

    def __post_init__(self) -> None:
        if self.H.degrees - {3}:
            raise CourantError(f"Twisting form has degrees {sorted(self.H.degrees)}, expected 3")
        dH = exterior_d(self.H)
        if dH:
            raise TwistNotClosedError(f"dH = {dH} is not zero")

    @classmethod
    def zero(cls, chart: Chart) -> TwistData:
        return cls(DiffForm.zero(chart))

    @property
    def chart(self) -> Chart:
        return self.H.chart


@dataclass(frozen=True)
class SymmetryPair:
    """(X, A) ∈ Γ(TM) ⊕ Ω²₀(M)."""

    X: VectorField
    A: DiffForm

    def __post_init__(self) -> None:
        if self.A.degrees - {2}:
            raise CourantError(f"Symmetry 2-form has degrees {sorted(self.A.degrees)}")
        if exterior_d(self.A):
            raise CourantError("Symmetry 2-form is not closed")


def pairing(x: GenSection, y: GenSection) -> Coeff:
    """⟨X+ξ, Y+η⟩ = ½(ι_Xη + ι_Yξ) as a function."""
    value = interior(x.X, y.xi) + interior(y.X, x.xi)
    return value.coefficient(()) / 2


def _scalar(chart: Chart, c: Coeff) -> DiffForm:
    return DiffForm.scalar(chart, c)


def loday_bracket(x: GenSection, y: GenSection, tw: TwistData) -> GenSection:
    twisted = exterior_d(x.xi) - interior(x.X, tw.H)
    return GenSection(vector_bracket(x.X, y.X), lie_derivative(x.X, y.xi) - interior(y.X, twisted))


def corrupted_bracket(x: GenSection, y: GenSection, tw: TwistData) -> GenSection:
    """Loday bracket without the exact term d ι_X η; a negative control for the metric axioms."""
    exact = exterior_d(interior(x.X, y.xi))
    return loday_bracket(x, y, tw) - GenSection(VectorField.zero(x.chart), exact)


Bracket = Callable[[GenSection, GenSection, TwistData], GenSection]


def symmetrization_check(x: GenSection, y: GenSection, tw: TwistData) -> GenSection:
    """Residual of x *_H y + y *_H x = 2 d⟨x, y⟩."""
    chart = x.chart
    total = loday_bracket(x, y, tw) + loday_bracket(y, x, tw)
    return total - GenSection(VectorField.zero(chart), exterior_d(_scalar(chart, pairing(x, y))).scale(2))


@dataclass
class AxiomResidual:
    indices: tuple[int, int, int]
    jacobi: GenSection
    symmetric_metric: Coeff
    invariance: Coeff

    @property
    def passed(self) -> bool:
        return not self.jacobi and self.symmetric_metric.is_zero and self.invariance.is_zero


@dataclass
class AxiomReport:
    residuals: list[AxiomResidual] = dataclasses.field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.residuals)

    @property
    def failures(self) -> list[AxiomResidual]:
        return [r for r in self.residuals if not r.passed]


def axiom_residuals(
    x: GenSection, y: GenSection, z: GenSection, tw: TwistData, bracket: Bracket = loday_bracket
) -> tuple[GenSection, Coeff, Coeff]:
    """Residuals of the Jacobi identity and both metric axioms for one ordered triple."""
    jacobi = bracket(x, bracket(y, z, tw), tw) - bracket(bracket(x, y, tw), z, tw) - bracket(y, bracket(x, z, tw), tw)
    derivative = apply(x.X, pairing(y, z))
    symmetric_metric = derivative - pairing(x, bracket(y, z, tw) + bracket(z, y, tw))
    invariance = derivative - pairing(bracket(x, y, tw), z) - pairing(y, bracket(x, z, tw))
    return jacobi, symmetric_metric, invariance


def axioms_check(
    sections: Sequence[GenSection],
    tw: TwistData,
    bracket: Bracket = loday_bracket,
    triples: Sequence[tuple[int, int, int]] | None = None,
) -> AxiomReport:
    """Courant-algebroid axioms over every ordered triple of sections (or the listed ones)."""
    if len(sections) < 3 and triples is None:
        raise CourantError(f"axioms_check needs at least 3 sections, got {len(sections)}")
    chosen = triples if triples is not None else list(itertools.product(range(len(sections)), repeat=3))
    report = AxiomReport()
    for i, j, k in chosen:
        jacobi, symmetric_metric, invariance = axiom_residuals(sections[i], sections[j], sections[k], tw, bracket)
        report.residuals.append(AxiomResidual((i, j, k), jacobi, symmetric_metric, invariance))
    logger.debug(f"Checked {len(chosen)} triples, {len(report.failures)} failing")
    return report


def psi(p: SymmetryPair | tuple[VectorField, DiffForm], H: DiffForm) -> tuple[VectorField, DiffForm]:
    """ψ_H(X, A) = (X, A + ι_X H)."""
    X, A = (p.X, p.A) if isinstance(p, SymmetryPair) else p
    return X, A + interior(X, H)


def twisted_lie_bracket(
    p: tuple[VectorField, DiffForm], q: tuple[VectorField, DiffForm], H: DiffForm
) -> tuple[VectorField, DiffForm]:
    """[(X, A), (Y, B)]_H = ([X, Y], ℒ_X B − ℒ_Y A + d ι_Y ι_X H)."""
    (X, A), (Y, B) = p, q
    return vector_bracket(X, Y), lie_derivative(X, B) - lie_derivative(Y, A) + exterior_d(interior(Y, interior(X, H)))


def psi_translate_check(p: SymmetryPair, q: SymmetryPair, H: TwistData, Hp: TwistData) -> tuple[VectorField, DiffForm]:
    """Residual of [ψ_H p, ψ_H q]_{H+H'} − ψ_H [p, q]_{H'}."""
    total = H.H + Hp.H
    left_X, left_A = twisted_lie_bracket(psi(p, H.H), psi(q, H.H), total)
    right_X, right_A = psi(twisted_lie_bracket((p.X, p.A), (q.X, q.A), Hp.H), H.H)
    return left_X - right_X, left_A - right_A


def clifford(x: GenSection, rho: DiffForm) -> DiffForm:
    return interior(x.X, rho) + wedge(x.xi, rho)


def clifford_check(x: GenSection, y: GenSection, rho: DiffForm) -> DiffForm:
    """Residual of x·y·ρ + y·x·ρ − 2⟨x, y⟩ρ."""
    return clifford(x, clifford(y, rho)) + clifford(y, clifford(x, rho)) - rho.scale(2 * pairing(x, y))


def d_twisted(rho: DiffForm, tw: TwistData) -> DiffForm:
    """d_H ρ = dρ − H ∧ ρ."""
    return exterior_d(rho) - wedge(tw.H, rho)


def _clifford_matrix(rho: DiffForm) -> tuple[Matrix, list[tuple[int, ...]]]:
    """Columns are e_k·ρ for the fiber basis (∂_1, ..., ∂_n, dx_1, ..., dx_n)."""
    chart = rho.chart
    columns = []
    for k in range(chart.dimension):
        columns.append(interior(VectorField.coordinate(chart, chart.names[k]), rho))
    for k in range(chart.dimension):
        columns.append(wedge(DiffForm.differential(chart, chart.names[k]), rho))
    monomials = sorted({m for c in columns for m in c.terms}, key=lambda m: (len(m), m))
    f = chart.field
    rows = [[c.terms.get(m, f.zero) for c in columns] for m in monomials]
    return Matrix(f, rows, 2 * chart.dimension), monomials


@dataclass
class AnnihilatorResult:
    subspace: Subspace
    pure: bool
    isotropic: bool


def spinor_annihilator(rho: DiffForm, at: Mapping[str, Any] | None = None) -> AnnihilatorResult:
    """{x : x·ρ = 0} in the complexified fiber, at a point or at the generic point."""
    if at is not None:
        rho = evaluate(rho, at)
    if not rho:
        raise SpinorError("Spinor vanishes" + (" at the point" if at is not None else ""))
    chart = rho.chart
    space = PairedSpace(chart.dimension, chart.field)
    matrix, _ = _clifford_matrix(rho)
    annihilator = Subspace.span(chart.field, space.dim, nullspace(matrix))
    return AnnihilatorResult(annihilator, annihilator.dim == chart.dimension, space.is_isotropic(annihilator))


@dataclass
class IntegrabilityResult:
    """Outcome of solving d_H ρ = Y·ρ."""

    solvable: bool
    Y: GenSection | None = None
    raw: GenSection | None = None
    residual: DiffForm | None = None


def spinor_integrability(rho: DiffForm, tw: TwistData) -> IntegrabilityResult:
    """Solves d_H ρ = Y·ρ; Y is returned as the representative in the conjugate of Ann(ρ)."""
    chart = rho.chart
    annihilator = spinor_annihilator(rho)
    if not annihilator.pure:
        raise SpinorError(f"Annihilator of the spinor has dimension {annihilator.subspace.dim}, not {chart.dimension}")
    matrix, monomials = _clifford_matrix(rho)
    target = d_twisted(rho, tw)
    if set(target.terms) - set(monomials):
        return IntegrabilityResult(False, residual=target)
    f = chart.field
    x = solve(matrix, [target.terms.get(m, f.zero) for m in monomials])
    if x is None:
        return IntegrabilityResult(False, residual=target)
    raw = GenSection.from_vector(chart, x)

    L = annihilator.subspace
    conjugate_basis = [tuple(c.conjugate() for c in v) for v in L.basis]
    decomposition = solve(Matrix.from_columns(f, [*L.basis, *conjugate_basis]), x)
    Y = raw
    if decomposition is not None:
        weights = decomposition[L.dim :]
        vector: Vector = (f.zero,) * len(x)
        for w, v in zip(weights, conjugate_basis, strict=True):
            vector = vec_add(vector, vec_scale(w, v))
        Y = GenSection.from_vector(chart, vector)
    residual = target - clifford(Y, rho)
    return IntegrabilityResult(not residual, Y, raw, residual)


def section_image(J: Matrix, x: GenSection) -> GenSection:
    return GenSection.from_vector(x.chart, J.apply(x.vector()))


def eigenframe(J: Matrix, chart: Chart) -> list[GenSection]:
    """Sections spanning the +i-eigenspace of J at the generic point."""
    require_gcs(J)
    if J.nrows != 2 * chart.dimension:
        raise CourantError(f"Structure of size {J.nrows} on a {chart.dimension}-dimensional chart")
    L = eigenspace(J)
    if L.dim != chart.dimension:
        raise CourantError(f"+i-eigenspace has dimension {L.dim}, expected {chart.dimension}")
    return [GenSection.from_vector(chart, v) for v in L.basis]


@dataclass
class IntegrabilityReport:
    """⟨a *_H b, c⟩ for frame members; involutive iff all vanish."""

    residuals: dict[tuple[int, int, int], Coeff] = dataclasses.field(default_factory=dict)

    @property
    def involutive(self) -> bool:
        return all(r.is_zero for r in self.residuals.values())

    @property
    def failures(self) -> dict[tuple[int, int, int], Coeff]:
        return {k: v for k, v in self.residuals.items() if not v.is_zero}


def frame_involutivity(frame: Sequence[GenSection], tw: TwistData) -> IntegrabilityReport:
    report = IntegrabilityReport()
    for a, b in itertools.product(range(len(frame)), repeat=2):
        bracket = loday_bracket(frame[a], frame[b], tw)
        for c, member in enumerate(frame):
            report.residuals[(a, b, c)] = pairing(bracket, member)
    return report


def gcs_integrability(J: Matrix, chart: Chart, tw: TwistData) -> IntegrabilityReport:
    return frame_involutivity(eigenframe(J, chart), tw)


def infinitesimal_action(x: GenSection, target: GenSection | DiffForm, tw: TwistData) -> GenSection | DiffForm:
    """x ∘_H y = −x *_H y on sections; x ∘_H ρ = −ℒ_X ρ − (dξ − ι_X H) ∧ ρ on spinors."""
    if isinstance(target, GenSection):
        return -loday_bracket(x, target, tw)
    A = exterior_d(x.xi) - interior(x.X, tw.H)
    return -lie_derivative(x.X, target) - wedge(A, target)


def spinor_action_check(x: GenSection, rho: DiffForm, Y: GenSection, tw: TwistData) -> DiffForm:
    """Residual of x ∘_H ρ = (−d_H + Y·)(x·ρ) − 2⟨x, Y⟩ρ, valid when d_H ρ = Y·ρ."""
    moved = clifford(x, rho)
    expected = -d_twisted(moved, tw) + clifford(Y, moved) - rho.scale(2 * pairing(x, Y))
    return infinitesimal_action(x, rho, tw) - expected  # type: ignore[operator]


def frame_preserved(x: GenSection, frame: Sequence[GenSection], tw: TwistData) -> dict[tuple[int, int], Coeff]:
    """⟨x ∘_H a, b⟩ for frame members a, b; all zero iff the action preserves the frame's span."""
    residuals = {}
    for a, member in enumerate(frame):
        moved = infinitesimal_action(x, member, tw)
        for b, other in enumerate(frame):
            residuals[(a, b)] = pairing(moved, other)  # type: ignore[arg-type]
    return residuals


def b_transform_section(x: GenSection, B: DiffForm) -> GenSection:
    return GenSection(x.X, x.xi + interior(x.X, B))


def b_naturality_check(x: GenSection, y: GenSection, tw: TwistData, B: DiffForm) -> GenSection:
    """Residual of e^B(x) *_{H−dB} e^B(y) − e^B(x *_H y)."""
    shifted = TwistData(tw.H - exterior_d(B))
    left = loday_bracket(b_transform_section(x, B), b_transform_section(y, B), shifted)
    return left - b_transform_section(loday_bracket(x, y, tw), B)
