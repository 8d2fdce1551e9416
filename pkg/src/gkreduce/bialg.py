"""Coboundary Lie bialgebras over the rationals.

A Lie algebra is given by structure constants c^k_ij in a fixed basis,
[e_i, e_j] = Σ_k c^k_ij e_k. An r-matrix r = Σ r^pq e_p ⊗ e_q is stored as the
matrix (r^pq) and splits as r = s + a into symmetric and antisymmetric parts.
The cobracket is δ(x) = ad_x r, the factorizable case yields a Manin triple
inside 𝔤 ⊕ 𝔤.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from .common import Finding, GKReduceError, finding
from .linalg import LinearAlgebraError, Matrix, Subspace, Vector, inverse, is_skew, rank, residual_text, vec_add
from .symcalc import Chart, ChartParser, Coeff, CoeffField, SymcalcError, coeff_field

logger = logging.getLogger(__name__)

Tensor3 = dict[tuple[int, int, int], Coeff]


class BialgError(GKReduceError):
    """Raised for invalid Lie algebra or r-matrix data."""


class NotFactorizableError(BialgError):
    """Raised when a Manin triple is requested for an r-matrix that is not factorizable."""


class CommutingAbelianViolation(BialgError):
    """Raised when 𝔤 and 𝔤̂ commute inside the double but the double is not abelian."""


def rationals() -> CoeffField:
    return coeff_field(())


def _combination_text(names: Sequence[str], vector: Sequence[Coeff]) -> str:
    parts = []
    for name, c in zip(names, vector, strict=True):
        if not c:
            continue
        text = str(c)
        if text == "1":
            parts.append(name)
        elif text == "-1":
            parts.append(f"-{name}")
        else:
            parts.append(f"{text}*{name}")
    if not parts:
        return "0"
    return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class JacobiReport:
    names: tuple[str, ...]
    residuals: dict[tuple[int, int, int], Vector]

    @property
    def valid(self) -> bool:
        return not self.residuals

    @property
    def failures(self) -> list[str]:
        n = self.names
        return [
            f"[{n[i]},{n[j]},{n[k]}]: {_combination_text(n, v)}" for (i, j, k), v in sorted(self.residuals.items())
        ]


def _bracket(constants, u: Sequence[Coeff], v: Sequence[Coeff], f: CoeffField) -> Vector:
    n = len(u)
    out = [f.zero] * n
    for i, ui in enumerate(u):
        if not ui:
            continue
        for j, vj in enumerate(v):
            if not vj:
                continue
            w = ui * vj
            for k, c in enumerate(constants[i][j]):
                if c:
                    out[k] = out[k] + w * c
    return tuple(out)


def _jacobi_residuals(constants, f: CoeffField) -> dict[tuple[int, int, int], Vector]:
    n = len(constants)
    units = [tuple(f.one if k == m else f.zero for k in range(n)) for m in range(n)]
    residuals = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                total = (f.zero,) * n
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    inner = _bracket(constants, units[b], units[c], f)
                    total = vec_add(total, _bracket(constants, units[a], inner, f))
                if any(total):
                    residuals[(i, j, k)] = total
    return residuals


@dataclass(frozen=True)
class LieAlgebraData:
    """Structure constants ``constants[i][j][k] = c^k_ij``.

    Antisymmetry is always enforced; the Jacobi identity is enforced unless
    ``strict`` is false, which is how deliberately broken algebras are built.
    """

    names: tuple[str, ...]
    constants: tuple[tuple[tuple[Coeff, ...], ...], ...]
    strict: bool = True

    def __post_init__(self) -> None:
        n = len(self.names)
        if len(set(self.names)) != n:
            raise BialgError(f"Repeated basis names: {list(self.names)}")
        if len(self.constants) != n or any(len(row) != n or any(len(c) != n for c in row) for row in self.constants):
            raise BialgError(f"Structure constants must have shape {n}x{n}x{n}")
        for i in range(n):
            for j in range(i, n):
                for k in range(n):
                    if self.constants[i][j][k] != -self.constants[j][i][k]:
                        raise BialgError(
                            f"Bracket is not antisymmetric at [{self.names[i]},{self.names[j]}] "
                            f"component {self.names[k]}"
                        )
        if self.strict:
            report = jacobi_check(self)
            if not report.valid:
                raise BialgError(f"Jacobi identity fails: {report.failures}")

    @classmethod
    def abelian(cls, names: Sequence[str]) -> LieAlgebraData:
        f = rationals()
        n = len(names)
        return cls(tuple(names), tuple(tuple((f.zero,) * n for _ in range(n)) for _ in range(n)))

    @classmethod
    def from_brackets(cls, names: Sequence[str], brackets: Mapping[str, str | int], strict: bool = True):
        """Builds the algebra from ``{"H,E": "2*E", ...}``; unlisted brackets vanish."""
        f = rationals()
        n = len(names)
        try:
            parser = ChartParser(Chart.build("basis", names))
        except SymcalcError as e:
            raise BialgError(f"Invalid basis names {list(names)}: {e}") from e
        table = [[[f.zero] * n for _ in range(n)] for _ in range(n)]
        for key, text in brackets.items():
            pair = [part.strip() for part in key.split(",")]
            if len(pair) != 2 or any(p not in names for p in pair):
                raise BialgError(f"Bracket key '{key}' must name two basis elements")
            i, j = names.index(pair[0]), names.index(pair[1])
            if i == j:
                raise BialgError(f"Bracket key '{key}' pairs an element with itself")
            value = _linear_combination(parser, names, text, f)
            table[i][j] = list(value)
            table[j][i] = [-c for c in value]
        return cls(tuple(names), tuple(tuple(tuple(c) for c in row) for row in table), strict)

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def field(self) -> CoeffField:
        return rationals()

    def bracket(self, u: Sequence[Coeff], v: Sequence[Coeff]) -> Vector:
        return _bracket(self.constants, u, v, self.field)

    def unit(self, k: int) -> Vector:
        f = self.field
        return tuple(f.one if m == k else f.zero for m in range(self.dim))

    def ad(self, x: int) -> Matrix:
        """Matrix of ad_{e_x}: entry (α, p) is c^α_xp."""
        n = self.dim
        return Matrix(self.field, [[self.constants[x][p][a] for p in range(n)] for a in range(n)], n)

    def text(self, vector: Sequence[Coeff]) -> str:
        return _combination_text(self.names, vector)

    def tensor_text(self, tensor: Tensor3) -> str:
        if not tensor:
            return "0"
        n = self.names
        return "; ".join(f"{n[a]}⊗{n[b]}⊗{n[c]} = {v}" for (a, b, c), v in sorted(tensor.items()))

    def double(self) -> LieAlgebraData:
        """𝔤 ⊕ 𝔤 with the componentwise bracket; the second copy is primed."""
        f = self.field
        n = self.dim
        table = [[[f.zero] * (2 * n) for _ in range(2 * n)] for _ in range(2 * n)]
        for offset in (0, n):
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        table[offset + i][offset + j][offset + k] = self.constants[i][j][k]
        names = (*self.names, *(f"{name}'" for name in self.names))
        return LieAlgebraData(names, tuple(tuple(tuple(c) for c in row) for row in table), self.strict)


def _linear_combination(parser: ChartParser, names: Sequence[str], text: str | int, f: CoeffField) -> Vector:
    try:
        value = parser.coeff(text)
    except SymcalcError as e:
        raise BialgError(f"Cannot read bracket value '{text}': {e}") from e
    out = []
    rest = value
    for name in names:
        c = value.diff(name)
        if not c.is_constant:
            raise BialgError(f"Bracket value '{text}' is not linear in the basis")
        rest = rest - c * parser.coeff(name)
        out.append(f.from_gaussian(c.constant_value()))
    if rest:
        raise BialgError(f"Bracket value '{text}' is not a linear combination of {list(names)}")
    if any(c.im for c in out):
        raise BialgError(f"Bracket value '{text}' is not rational")
    return tuple(out)


def jacobi_check(g: LieAlgebraData) -> JacobiReport:
    """Every nonzero Jacobiator [e_i,[e_j,e_k]] + cyclic over i < j < k."""
    return JacobiReport(g.names, _jacobi_residuals(g.constants, g.field))


@dataclass(frozen=True)
class RMatrix:
    """r = Σ r^pq e_p ⊗ e_q as the matrix (r^pq)."""

    r: Matrix

    def __post_init__(self) -> None:
        if not self.r.is_square:
            raise BialgError(f"r-matrix must be square, got shape {self.r.shape}")

    @classmethod
    def from_terms(cls, g: LieAlgebraData, terms: Mapping[str, str | int]) -> RMatrix:
        """Builds r from ``{"E,F": "1", "H,H": "1/4"}``."""
        f = g.field
        parser = ChartParser(Chart("scalars", ()))
        rows = [[f.zero] * g.dim for _ in range(g.dim)]
        for key, text in terms.items():
            pair = [part.strip() for part in key.split(",")]
            if len(pair) != 2 or any(p not in g.names for p in pair):
                raise BialgError(f"r-matrix key '{key}' must name two basis elements")
            try:
                value = parser.coeff(text)
            except SymcalcError as e:
                raise BialgError(f"Cannot read r-matrix entry '{text}': {e}") from e
            if value.im:
                raise BialgError(f"r-matrix entry '{text}' is not rational")
            p, q = g.names.index(pair[0]), g.names.index(pair[1])
            rows[p][q] = rows[p][q] + value
        return cls(Matrix(f, rows, g.dim))

    @cached_property
    def s(self) -> Matrix:
        return (self.r + self.r.T).scale(self.r.field.one / 2)

    @cached_property
    def a(self) -> Matrix:
        return (self.r - self.r.T).scale(self.r.field.one / 2)

    @property
    def plus(self) -> Matrix:
        """r₊ = a + s as a map 𝔤* → 𝔤."""
        return self.a + self.s

    @property
    def minus(self) -> Matrix:
        return self.a - self.s


def _require_compatible(g: LieAlgebraData, r: RMatrix) -> None:
    if r.r.nrows != g.dim:
        raise BialgError(f"r-matrix of size {r.r.nrows} for a {g.dim}-dimensional algebra")


def _ad_tensor(g: LieAlgebraData, tensor: Tensor3) -> dict[int, Tensor3]:
    out: dict[int, Tensor3] = {}
    n = g.dim
    for x in range(n):
        acc: dict[tuple[int, int, int], Coeff] = defaultdict(lambda: g.field.zero)
        for (a, b, c), value in tensor.items():
            for m in range(n):
                if k := g.constants[x][a][m]:
                    acc[(m, b, c)] += k * value
                if k := g.constants[x][b][m]:
                    acc[(a, m, c)] += k * value
                if k := g.constants[x][c][m]:
                    acc[(a, b, m)] += k * value
        nonzero = {key: v for key, v in sorted(acc.items()) if v}
        if nonzero:
            out[x] = nonzero
    return out


def _ad_on_matrix(g: LieAlgebraData, x: int, m: Matrix) -> Matrix:
    C = g.ad(x)
    return C @ m + m @ C.T


@dataclass
class CYBEReport:
    g: LieAlgebraData
    tensor: Tensor3
    obstruction_invariant: bool
    s_invariant: bool
    s_invertible: bool

    @property
    def zero(self) -> bool:
        return not self.tensor

    @property
    def factorizable(self) -> bool:
        return self.zero and self.s_invariant and self.s_invertible

    def residual(self) -> str:
        return self.g.tensor_text(self.tensor)


def cybe_obstruction(g: LieAlgebraData, r: RMatrix) -> CYBEReport:
    """⟦r,r⟧ = [r₁₂, r₁₃] + [r₁₂, r₂₃] + [r₁₃, r₂₃] componentwise, with the factorizability flags."""
    _require_compatible(g, r)
    f = g.field
    entries = r.r.nonzero_entries()
    acc: dict[tuple[int, int, int], Coeff] = defaultdict(lambda: f.zero)
    for p, q, rpq in entries:
        for s, t, rst in entries:
            w = rpq * rst
            for m in range(g.dim):
                if c := g.constants[p][s][m]:
                    acc[(m, q, t)] += w * c
                if c := g.constants[q][s][m]:
                    acc[(p, m, t)] += w * c
                if c := g.constants[q][t][m]:
                    acc[(p, s, m)] += w * c
    tensor = {key: v for key, v in sorted(acc.items()) if v}
    s_invariant = all(_ad_on_matrix(g, x, r.s).is_zero for x in range(g.dim))
    report = CYBEReport(
        g,
        tensor,
        obstruction_invariant=not _ad_tensor(g, tensor),
        s_invariant=s_invariant,
        s_invertible=rank(r.s) == g.dim,
    )
    logger.debug(f"CYBE obstruction on {g.dim}-dimensional algebra: zero={report.zero}")
    return report


@dataclass
class CocommutatorReport:
    g: LieAlgebraData
    delta: list[Matrix]
    antisymmetric: bool
    cocycle_residuals: dict[tuple[int, int], Matrix]
    jacobi: JacobiReport
    dual: LieAlgebraData | None = None

    @property
    def valid(self) -> bool:
        return self.antisymmetric and not self.cocycle_residuals and self.jacobi.valid


def cocommutator(g: LieAlgebraData, r: RMatrix) -> CocommutatorReport:
    """δ(e_x) = ad_{e_x} r and the bracket it induces on 𝔤*, ĉ^x_αβ = δ(e_x)^αβ."""
    _require_compatible(g, r)
    f = g.field
    n = g.dim
    delta = [_ad_on_matrix(g, x, r.r) for x in range(n)]
    antisymmetric = all(is_skew(D) for D in delta)
    cocycle = {}
    for x in range(n):
        for y in range(x + 1, n):
            lhs = Matrix.zeros(f, n, n)
            for k, c in enumerate(g.constants[x][y]):
                if c:
                    lhs = lhs + delta[k].scale(c)
            rhs = _ad_on_matrix(g, x, delta[y]) - _ad_on_matrix(g, y, delta[x])
            if not (residual := lhs - rhs).is_zero:
                cocycle[(x, y)] = residual
    dual_constants = tuple(tuple(tuple(delta[x][a, b] for x in range(n)) for b in range(n)) for a in range(n))
    dual_names = tuple(f"{name}*" for name in g.names)
    jacobi = JacobiReport(dual_names, _jacobi_residuals(dual_constants, f))
    dual = LieAlgebraData(dual_names, dual_constants, strict=False) if antisymmetric else None
    return CocommutatorReport(g, delta, antisymmetric, cocycle, jacobi, dual)


@dataclass
class ManinTripleData:
    """𝔤 ⊕ 𝔤 with the embeddings of 𝔤 and 𝔤̂ as column matrices and an invariant pairing.

    With κ = s⁻¹ the pairing is ½ diag(κ, −κ); it restricts to the natural
    duality ⟨(x, x), (r₊ω, r₋ω)⟩ = ω(x).
    """

    big: LieAlgebraData
    pairing: Matrix
    embedding: Matrix
    dual_embedding: Matrix
    checks: list[Finding] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return all(c.passed for c in self.checks)

    def images(self) -> tuple[Subspace, Subspace]:
        f = self.big.field
        return (
            Subspace.span(f, self.big.dim, self.embedding.columns()),
            Subspace.span(f, self.big.dim, self.dual_embedding.columns()),
        )


def _subalgebra_residual(big: LieAlgebraData, columns: Sequence[Vector], image: Subspace) -> str:
    for k, u in enumerate(columns):
        for v in columns[k + 1 :]:
            rest = image.reduce(big.bracket(u, v))
            if any(rest):
                return f"bracket leaves the image by {big.text(rest)}"
    return "0"


def _invariance_residual(big: LieAlgebraData, P: Matrix) -> str:
    units = [big.unit(k) for k in range(big.dim)]

    def pair(u, v):
        return sum((u[i] * P[i, j] * v[j] for i in range(big.dim) for j in range(big.dim) if u[i] and v[j]), big.field.zero)

    failures = []
    for x in range(big.dim):
        for y in range(big.dim):
            for z in range(y, big.dim):
                value = pair(big.bracket(units[x], units[y]), units[z]) + pair(units[y], big.bracket(units[x], units[z]))
                if value:
                    n = big.names
                    failures.append(f"({n[x]},{n[y]},{n[z]}) = {value}")
    return "; ".join(failures) or "0"


def manin_checks(triple: ManinTripleData) -> list[Finding]:
    big, P = triple.big, triple.pairing
    n = big.dim // 2
    E, D = triple.embedding, triple.dual_embedding
    image, dual_image = triple.images()
    spanned = rank(Matrix.from_columns(big.field, [*E.columns(), *D.columns()], big.dim))
    duality = D.T @ P @ E
    return [
        finding("manin-subalgebra", "g", _subalgebra_residual(big, E.columns(), image)),
        finding("manin-subalgebra", "g-hat", _subalgebra_residual(big, D.columns(), dual_image)),
        finding("manin-isotropic", "g", residual_text(E.T @ P @ E)),
        finding("manin-isotropic", "g-hat", residual_text(D.T @ P @ D)),
        finding("manin-invariance", "pairing", _invariance_residual(big, P)),
        finding("manin-span", "g+g-hat", "0" if spanned == 2 * n else f"rank {spanned} of {2 * n}"),
        finding("manin-duality", "pairing", residual_text(duality - Matrix.identity(big.field, n))),
    ]


def manin_triple(g: LieAlgebraData, r: RMatrix, cybe: CYBEReport | None = None) -> ManinTripleData:
    """Double of a factorizable r-matrix: τ ↦ (τ, τ) and ω ↦ (r₊ω, r₋ω) inside 𝔤 ⊕ 𝔤."""
    cybe = cybe or cybe_obstruction(g, r)
    if not cybe.factorizable:
        missing = [
            name
            for name, ok in (("CYBE", cybe.zero), ("s ad-invariant", cybe.s_invariant), ("s invertible", cybe.s_invertible))
            if not ok
        ]
        raise NotFactorizableError(f"r-matrix is not factorizable: fails {', '.join(missing)}")
    f = g.field
    n = g.dim
    try:
        kappa = inverse(r.s)
    except LinearAlgebraError as e:
        raise NotFactorizableError(f"Symmetric part is singular: {e}") from e
    zero = Matrix.zeros(f, n, n)
    half = f.one / 2
    pairing = Matrix.block(f, [[kappa.scale(half), zero], [zero, kappa.scale(-half)]])
    identity = Matrix.identity(f, n)
    embedding = Matrix.block(f, [[identity], [identity]])
    dual_embedding = Matrix.block(f, [[r.plus], [r.minus]])
    triple = ManinTripleData(g.double(), pairing, embedding, dual_embedding)
    triple.checks = manin_checks(triple)
    logger.info(f"Manin triple of a {n}-dimensional algebra: valid={triple.valid}")
    return triple


def commuting_abelian_check(triple: ManinTripleData) -> bool:
    """True iff [𝔤, 𝔤̂] = 0 in the double; then the double must be abelian."""
    big = triple.big
    for u in triple.embedding.columns():
        for v in triple.dual_embedding.columns():
            if any(big.bracket(u, v)):
                return False
    nonzero = [
        (i, j) for i in range(big.dim) for j in range(i + 1, big.dim) if any(big.constants[i][j])
    ]
    if nonzero:
        i, j = nonzero[0]
        raise CommutingAbelianViolation(
            f"𝔤 and 𝔤̂ commute but [{big.names[i]},{big.names[j]}] = {big.text(big.constants[i][j])}"
        )
    return True
