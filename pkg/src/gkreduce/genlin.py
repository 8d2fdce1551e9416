"""Linear algebra on V ⊕ V* with the split pairing.

Vectors of V ⊕ V* are laid out as (X_1, ..., X_n, ξ_1, ..., ξ_n). The pairing is
⟨X+ξ, Y+η⟩ = ½(ι_Xη + ι_Yξ) and the anchor ``a`` projects onto the X block.
Everything here works over any coefficient field, so a chart's fraction field
gives linear algebra at the generic point.
"""

from __future__ import annotations

import dataclasses
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import Any

from .common import GKReduceError
from .linalg import (
    DimensionMismatchError,
    LinearAlgebraError,
    Matrix,
    Subspace,
    Vector,
    dot,
    inverse,
    is_skew,
    is_symmetric,
    nullspace,
    rank,
    residual_text,
    signature,
    solve,
    unit_vector,
)
from .symcalc import Coeff, CoeffField, DiffForm, SymcalcError

logger = logging.getLogger(__name__)

Point = Mapping[str, Any]


class GenlinError(GKReduceError):
    """Raised for invalid linear generalized-geometry input."""


class HypothesisError(GenlinError):
    """Raised when a lemma's hypothesis does not hold; ``condition`` names it."""

    def __init__(self, condition: str, message: str):
        super().__init__(f"Hypothesis {condition} fails: {message}")
        self.condition = condition


class NotAStructureError(GenlinError):
    """Raised when a matrix is not the structure it is supposed to be."""


@dataclass(frozen=True)
class PairedSpace:
    """V ⊕ V* for dim V = n over ``field``."""

    n: int
    field: CoeffField

    @classmethod
    def of(cls, field: CoeffField, ambient: int) -> PairedSpace:
        if ambient % 2:
            raise DimensionMismatchError(f"V ⊕ V* has even dimension, got {ambient}")
        return cls(ambient // 2, field)

    @property
    def dim(self) -> int:
        return 2 * self.n

    @cached_property
    def pairing_matrix(self) -> Matrix:
        f = self.field
        half = f.one / 2
        rows = []
        for i in range(self.dim):
            partner = (i + self.n) % self.dim
            rows.append([half if j == partner else f.zero for j in range(self.dim)])
        return Matrix(f, rows, self.dim)

    @cached_property
    def tangent(self) -> Subspace:
        f = self.field
        return Subspace.span(f, self.dim, [self.vector(unit_vector(f, self.n, k), None) for k in range(self.n)])

    @cached_property
    def cotangent(self) -> Subspace:
        f = self.field
        return Subspace.span(f, self.dim, [self.vector(None, unit_vector(f, self.n, k)) for k in range(self.n)])

    def vector(self, X: Sequence[Coeff] | None, xi: Sequence[Coeff] | None) -> Vector:
        zero = (self.field.zero,) * self.n
        return (*(X or zero), *(xi or zero))

    def split(self, v: Sequence[Coeff]) -> tuple[Vector, Vector]:
        return tuple(v[: self.n]), tuple(v[self.n :])

    def pairing(self, x: Sequence[Coeff], y: Sequence[Coeff]) -> Coeff:
        if len(x) != self.dim or len(y) != self.dim:
            raise DimensionMismatchError(f"Vectors of length {len(x)} and {len(y)} in a {self.dim}-dimensional space")
        X, xi = self.split(x)
        Y, eta = self.split(y)
        return (dot(X, eta) + dot(Y, xi)) / 2

    def gram(self, vectors: Sequence[Sequence[Coeff]]) -> Matrix:
        return Matrix(self.field, [[self.pairing(a, b) for b in vectors] for a in vectors], len(vectors))

    def is_isotropic(self, S: Subspace) -> bool:
        return all(self.pairing(a, b).is_zero for k, a in enumerate(S.basis) for b in S.basis[k:])

    def annihilator(self, S: Subspace, within: Subspace | None = None) -> Subspace:
        """Ann(S) = {v : ⟨v, s⟩ = 0 for all s ∈ S}, optionally intersected with ``within``."""
        if not S.basis:
            result = Subspace.full(self.field, self.dim)
        else:
            result = Subspace.span(self.field, self.dim, nullspace(S.matrix() @ self.pairing_matrix))
        return result.intersection(within) if within is not None else result

    def anchor(self, v: Sequence[Coeff]) -> Vector:
        return tuple(v[: self.n])

    def anchor_image(self, S: Subspace) -> Subspace:
        return Subspace.span(self.field, self.n, [self.anchor(v) for v in S.basis])

    def ann_tangent(self, K: Subspace) -> Subspace:
        """Ann_V(K) ⊆ V for K ⊆ V*, as a subspace of n-space."""
        covectors = [self.split(v)[1] for v in K.basis]
        if not covectors:
            return Subspace.full(self.field, self.n)
        return Subspace.span(self.field, self.n, nullspace(Matrix(self.field, covectors, self.n)))

    def ann_cotangent(self, N: Subspace) -> Subspace:
        """Ann_{V*}(N) for N ⊆ V, embedded in V ⊕ V*."""
        if not N.basis:
            covectors = [unit_vector(self.field, self.n, k) for k in range(self.n)]
        else:
            covectors = nullspace(N.matrix())
        return Subspace.span(self.field, self.dim, [self.vector(None, c) for c in covectors])


def space_of(S: Subspace) -> PairedSpace:
    return PairedSpace.of(S.field, S.ambient)


def natural_pairing(x: Sequence[Coeff], y: Sequence[Coeff]) -> Coeff:
    if len(x) != len(y):
        raise DimensionMismatchError(f"Vectors of length {len(x)} and {len(y)}")
    if not x:
        raise DimensionMismatchError("Empty vectors")
    return PairedSpace.of(x[0].field, len(x)).pairing(x, y)


@dataclass
class StructureReport:
    """Named identities with their exact residuals; valid iff every residual is 0."""

    residuals: dict[str, str] = dataclasses.field(default_factory=dict)
    notes: list[str] = dataclasses.field(default_factory=list)

    def record(self, name: str, residual: Matrix | str | bool) -> None:
        if isinstance(residual, Matrix):
            self.residuals[name] = residual_text(residual)
        elif isinstance(residual, bool):
            self.residuals[name] = "0" if residual else "violated"
        else:
            self.residuals[name] = residual

    @property
    def violations(self) -> dict[str, str]:
        return {k: v for k, v in self.residuals.items() if v != "0"}

    @property
    def valid(self) -> bool:
        return not self.violations


def _pairing_for(J: Matrix, pairing: Matrix | None) -> Matrix:
    if pairing is not None:
        return pairing
    return PairedSpace.of(J.field, J.nrows).pairing_matrix


def is_gcs(J: Matrix, pairing: Matrix | None = None) -> StructureReport:
    """J² = −I and Jᵀ P J = P, checked exactly."""
    report = StructureReport()
    if not J.is_square or J.nrows % 2:
        report.record("shape", f"expected an even square matrix, got {J.shape}")
        return report
    P = _pairing_for(J, pairing)
    identity = Matrix.identity(J.field, J.nrows)
    report.record("square", J @ J + identity)
    report.record("orthogonal", J.T @ P @ J - P)
    return report


def require_gcs(J: Matrix, label: str = "J", pairing: Matrix | None = None) -> None:
    report = is_gcs(J, pairing)
    if not report.valid:
        raise NotAStructureError(f"{label} is not a generalized complex structure: {report.violations}")


def iota_matrix(omega: Matrix) -> Matrix:
    """Matrix of X ↦ ι_X ω for a 2-form given by ω[i][j] = ω(e_i, e_j)."""
    return omega.T


def gcs_from_symplectic(omega: Matrix) -> Matrix:
    """GCS whose +i-eigenspace is L_ω = {X − iι_Xω}."""
    if not is_skew(omega):
        raise NotAStructureError("Symplectic form matrix must be skew-symmetric")
    W = iota_matrix(omega)
    try:
        W_inv = inverse(W)
    except LinearAlgebraError as e:
        raise NotAStructureError("Symplectic form is degenerate") from e
    n = omega.nrows
    zero = Matrix.zeros(omega.field, n, n)
    return Matrix.block(omega.field, [[zero, -W_inv], [W, zero]])


def gcs_from_complex(Jc: Matrix) -> Matrix:
    """GCS whose +i-eigenspace is L_J = {X + iJX} ⊕ {ξ − iJ*ξ}."""
    n = Jc.nrows
    if not Jc.is_square or (Jc @ Jc + Matrix.identity(Jc.field, n)).nonzero_entries():
        raise NotAStructureError("Complex structure must satisfy J² = −I")
    zero = Matrix.zeros(Jc.field, n, n)
    return Matrix.block(Jc.field, [[-Jc, zero], [zero, Jc.T]])


def gcs_from_classical(kind: str, matrix: Matrix) -> Matrix:
    if kind == "symplectic":
        return gcs_from_symplectic(matrix)
    if kind == "complex":
        return gcs_from_complex(matrix)
    raise GenlinError(f"Unknown classical structure '{kind}'; expected 'symplectic' or 'complex'")


def direct_sum(blocks: Sequence[Matrix]) -> Matrix:
    """GCS of V_1 ⊕ ... ⊕ V_k from GCS matrices of each summand (each in its own X, ξ layout)."""
    if not blocks:
        raise GenlinError("direct_sum needs at least one block")
    field = blocks[0].field
    sizes = [b.nrows // 2 for b in blocks]
    n = sum(sizes)
    rows = [[field.zero] * (2 * n) for _ in range(2 * n)]
    offset = 0
    for block, k in zip(blocks, sizes, strict=True):
        if not block.is_square or block.nrows != 2 * k:
            raise DimensionMismatchError(f"Block of shape {block.shape} is not a GCS matrix")
        for i in range(2 * k):
            for j in range(2 * k):
                row = offset + i if i < k else n + offset + i - k
                col = offset + j if j < k else n + offset + j - k
                rows[row][col] = block[i, j]
        offset += k
    return Matrix(field, rows, 2 * n)


def frame_transform(E: Matrix) -> tuple[Matrix, Matrix]:
    """T = diag(E, E⁻ᵀ) and its inverse for a frame whose vectors are the columns of E."""
    n = E.nrows
    try:
        E_inv = inverse(E)
    except LinearAlgebraError as e:
        raise GenlinError("Frame vectors are linearly dependent at the generic point") from e
    zero = Matrix.zeros(E.field, n, n)
    T = Matrix.block(E.field, [[E, zero], [zero, E_inv.T]])
    T_inv = Matrix.block(E.field, [[E_inv, zero], [zero, E.T]])
    return T, T_inv


def change_frame(J: Matrix, E: Matrix) -> Matrix:
    """Expresses a structure given in the frame E in chart coordinates: T J T⁻¹."""
    T, T_inv = frame_transform(E)
    return T @ J @ T_inv


def b_matrix(B: DiffForm | Matrix) -> Matrix:
    """Skew matrix B[i][j] = B(e_i, e_j) of a 2-form."""
    if isinstance(B, Matrix):
        if not is_skew(B):
            raise GenlinError("B must be skew-symmetric")
        return B
    if B.degrees - {2}:
        raise GenlinError(f"B must be a 2-form, got degrees {sorted(B.degrees)}")
    n = B.chart.dimension
    f = B.chart.field
    rows = [[f.zero] * n for _ in range(n)]
    for (i, j), c in B.terms.items():
        rows[i][j] = c
        rows[j][i] = -c
    return Matrix(f, rows, n)


def b_exponential(B: Matrix, sign: int = 1) -> Matrix:
    """e^{±B} acting as X + ξ ↦ X + ξ ± ι_X B."""
    B = b_matrix(B)
    n = B.nrows
    f = B.field
    M = iota_matrix(B) if sign > 0 else -iota_matrix(B)
    return Matrix.block(f, [[Matrix.identity(f, n), Matrix.zeros(f, n, n)], [M, Matrix.identity(f, n)]])


def b_transform(B: Matrix | DiffForm, target: Matrix | Subspace | Sequence[Coeff]):
    """Applies e^B to a structure (by conjugation), a subspace or a vector."""
    forward = b_exponential(b_matrix(B))
    if isinstance(target, Matrix):
        return forward @ target @ b_exponential(b_matrix(B), -1)
    if isinstance(target, Subspace):
        return target.image(forward)
    return forward.apply(target)


def annihilator(S: Subspace, within: Subspace | None = None) -> Subspace:
    return space_of(S).annihilator(S, within)


def eigenspace(J: Matrix, value: Coeff | None = None) -> Subspace:
    """Kernel of J − value·I (default value i) over the field."""
    f = J.field
    value = f.i if value is None else value
    shifted = J - Matrix.identity(f, J.nrows).scale(value)
    return Subspace.span(f, J.nrows, nullspace(shifted))


def gcs_type(J: Matrix) -> int:
    """n − dim a(L) for the +i-eigenspace L."""
    space = PairedSpace.of(J.field, J.nrows)
    return space.n - space.anchor_image(eigenspace(J)).dim


@dataclass
class Quotient:
    """top / bottom with a chosen complement basis and the induced Gram matrix."""

    top: Subspace
    bottom: Subspace
    complement: list[Vector]
    gram: Matrix
    nondegenerate: bool

    @property
    def dim(self) -> int:
        return len(self.complement)


def quotient_with_pairing(top: Subspace, bottom: Subspace, pairing: Matrix | None = None) -> Quotient:
    """top/bottom with the pairing it inherits; requires bottom ⊆ top and ⟨bottom, top⟩ = 0."""
    if not bottom <= top:
        raise GenlinError("Quotient bottom is not contained in top")
    P = pairing if pairing is not None else space_of(top).pairing_matrix
    for b in bottom.basis:
        Pb = P.apply(b)
        if any(not dot(t, Pb).is_zero for t in top.basis):
            raise GenlinError("Pairing does not descend: bottom is not orthogonal to top")
    complement = bottom.extend_from(top.basis)
    gram = Matrix(top.field, [[dot(a, P.apply(b)) for b in complement] for a in complement], len(complement))
    nondegenerate = rank(gram) == len(complement) if complement else True
    return Quotient(top, bottom, complement, gram, nondegenerate)


@dataclass
class LinearGK:
    """A pair of commuting generalized complex structures with G = −J₁J₂ for a pairing."""

    J1: Matrix
    J2: Matrix
    pairing: Matrix | None = None

    def __post_init__(self) -> None:
        if self.J1.shape != self.J2.shape:
            raise DimensionMismatchError(f"J1 {self.J1.shape} and J2 {self.J2.shape} differ in shape")
        if self.pairing is None:
            self.pairing = PairedSpace.of(self.J1.field, self.J1.nrows).pairing_matrix

    @property
    def field(self) -> CoeffField:
        return self.J1.field

    @cached_property
    def G(self) -> Matrix:
        return -(self.J1 @ self.J2)

    def structure(self, j: int) -> Matrix:
        if j not in (1, 2):
            raise GenlinError(f"Structure index must be 1 or 2, got {j}")
        return self.J1 if j == 1 else self.J2

    def metric_form(self) -> Matrix:
        """Gram matrix of ⟨G·,·⟩ (symmetric for a generalized metric)."""
        return self.pairing @ self.G  # type: ignore[operator]


def sampled_positivity(gk: LinearGK, points: Sequence[Point]) -> dict[str, bool]:
    """Positivity of ⟨G·,·⟩ at each sample point, keyed by a rendering of the point."""
    form = gk.metric_form()
    results = {}
    for point in points:
        key = ", ".join(f"{k}={v}" for k, v in sorted(point.items())) or "constant"
        try:
            positive, _, _ = signature(form, point)
            results[key] = positive == form.nrows
        except (LinearAlgebraError, SymcalcError) as e:
            logger.warning(f"Positivity test failed at {key}: {e}")
            results[key] = False
    return results


def is_gk(gk: LinearGK, points: Sequence[Point] = ()) -> StructureReport:
    report = StructureReport()
    P = gk.pairing
    for label, J in (("J1", gk.J1), ("J2", gk.J2)):
        sub = is_gcs(J, P)
        for name, residual in sub.residuals.items():
            report.record(f"{label} {name}", residual)
    if not report.valid:
        return report
    identity = Matrix.identity(gk.field, gk.J1.nrows)
    report.record("commute", gk.J1 @ gk.J2 - gk.J2 @ gk.J1)
    report.record("G squared", gk.G @ gk.G - identity)
    form = gk.metric_form()
    report.record("metric symmetric", form - form.T)
    if is_symmetric(form):
        checked = list(points) if points else ([{}] if not gk.field.variables else [])
        if not checked:
            report.notes.append("positivity not sampled: no sample points for a non-constant structure")
        for key, positive in sampled_positivity(gk, checked).items():
            report.record(f"positive at {key}", positive)
    return report


def restrict_gk(gk: LinearGK, W: Subspace) -> LinearGK:
    """Restriction of a GK structure to an invariant subspace, in the basis of W."""
    B = W.column_matrix()
    columns = {}
    for label, J in (("J1", gk.J1), ("J2", gk.J2)):
        solved = []
        for v in W.basis:
            x = solve(B, J.apply(v))
            if x is None:
                raise GenlinError(f"Subspace is not invariant under {label}")
            solved.append(x)
        columns[label] = Matrix.from_columns(gk.field, solved, W.dim)
    pairing = B.T @ gk.pairing @ B  # type: ignore[operator]
    return LinearGK(columns["J1"], columns["J2"], pairing)


@dataclass
class LemmaCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class LemmaReport:
    lemma: str
    checks: list[LemmaCheck] = dataclasses.field(default_factory=list)
    dimensions: dict[str, int] = dataclasses.field(default_factory=dict)
    notes: list[str] = dataclasses.field(default_factory=list)
    outputs: dict[str, Any] = dataclasses.field(default_factory=dict)

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(LemmaCheck(name, bool(passed), detail))
        if not passed:
            logger.info(f"{self.lemma}: check '{name}' failed {detail}")
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[str]:
        return [f"{c.name}: {c.detail}" if c.detail else c.name for c in self.checks if not c.passed]


def _require_cotangent(space: PairedSpace, K: Subspace) -> None:
    if not K <= space.cotangent:
        raise HypothesisError("K ⊆ V*", "K is not contained in V*")


def _require_same_ambient(*subspaces: Subspace) -> None:
    ambients = {S.ambient for S in subspaces}
    if len(ambients) > 1:
        raise DimensionMismatchError(f"Subspaces live in spaces of dimensions {sorted(ambients)}")


def lemma_extend(K: Subspace, Kp: Subspace) -> LemmaReport:
    """V_K = Ann(K,K')/(K,K') and its self-dual sequence onto W_K = Ann_V(K)/N'."""
    _require_same_ambient(K, Kp)
    space = space_of(K)
    _require_cotangent(space, K)
    S = K + Kp
    if not space.is_isotropic(S):
        raise HypothesisError("(1)", "K + K' is not contained in Ann(K, K')")
    if Kp.intersection(space.cotangent).dim:
        raise HypothesisError("(2)", "K' meets V*")

    report = LemmaReport("extend")
    A = space.annihilator(S)
    quotient = quotient_with_pairing(A, S, space.pairing_matrix)
    report.outputs["V_K"] = quotient
    expected = space.dim - 2 * S.dim
    report.check("pairing descends nondegenerate", quotient.nondegenerate)
    report.check("dimension of V_K", quotient.dim == expected, f"dim V_K = {quotient.dim}, expected {expected}")

    ann_v = space.ann_tangent(K)
    N = space.anchor_image(Kp)
    report.check("N' ⊆ Ann_V(K)", N <= ann_v)
    report.check("anchor onto W_K", (space.anchor_image(A) + N) == ann_v)
    kernel = A.intersection(space.cotangent + Kp)
    kernel_dim = kernel.dim - S.dim
    w_dim = ann_v.dim - N.dim
    report.check("exact", quotient.dim == kernel_dim + w_dim, f"{quotient.dim} = {kernel_dim} + {w_dim}")
    report.check("kernel maximal isotropic", space.is_isotropic(kernel) and 2 * kernel_dim == quotient.dim)
    report.check("self-dual", kernel_dim == w_dim)
    report.dimensions.update({"K": K.dim, "K'": Kp.dim, "V_K": quotient.dim, "W_K": w_dim, "kernel": kernel_dim})
    return report


def lemma_missingrank(K: Subspace, Kp: Subspace) -> LemmaReport:
    """V'_K = Ann(K,K')/K and the sequence 0 → W*_K → V'_K → Ann_V(K) → 0."""
    _require_same_ambient(K, Kp)
    space = space_of(K)
    _require_cotangent(space, K)
    if Kp.intersection(space.cotangent).dim:
        raise HypothesisError("(2)", "K' meets V*")
    if any(not space.pairing(k, kp).is_zero for k in K.basis for kp in Kp.basis):
        raise HypothesisError("(1'')", "K is not contained in Ann(K, K')")
    gram = space.gram(Kp.basis)
    if Kp.dim and rank(gram) != Kp.dim:
        raise HypothesisError("(1'')", "the pairing restricted to K' is degenerate")

    report = LemmaReport("missingrank")
    A = space.annihilator(K + Kp)
    quotient = quotient_with_pairing(A, K, space.pairing_matrix)
    report.outputs["V_K"] = quotient
    expected = space.dim - 2 * K.dim - Kp.dim
    report.check("pairing descends nondegenerate", quotient.nondegenerate)
    report.check("dimension of V'_K", quotient.dim == expected, f"dim V'_K = {quotient.dim}, expected {expected}")
    ann_v = space.ann_tangent(K)
    report.check("anchor onto Ann_V(K)", space.anchor_image(A) == ann_v)
    kernel = A.intersection(space.cotangent)
    kernel_dim = kernel.dim - K.dim
    report.check("exact", quotient.dim == kernel_dim + ann_v.dim, f"{quotient.dim} = {kernel_dim} + {ann_v.dim}")
    report.check("kernel isotropic", space.is_isotropic(kernel))
    report.dimensions.update({"K": K.dim, "K'": Kp.dim, "V'_K": quotient.dim, "Ann_V(K)": ann_v.dim, "kernel": kernel_dim})
    return report


def _images(gk: LinearGK, K: Subspace) -> tuple[Subspace, Subspace, Subspace]:
    return K.image(gk.J1), K.image(gk.J2), K.image(gk.G)


def _anchor_type(space: PairedSpace, L: Subspace, N: Subspace, ann_v: Subspace) -> int:
    image = space.anchor_image(L) + N
    return (ann_v.dim - N.dim) - (image.dim - N.dim)


def lemma_kahler_split(K: Subspace, gk: LinearGK, points: Sequence[Point] = ()) -> LemmaReport:
    """U¹_K = W_K ⊕ (K + J₁K) and the restricted structure on W_K = Ann(K, J₁K, J₂K, GK)."""
    space = space_of(K)
    if gk.J1.nrows != space.dim:
        raise DimensionMismatchError(f"Structure of size {gk.J1.nrows} for a {space.dim}-dimensional space")
    _require_cotangent(space, K)
    J1K, J2K, GK = _images(gk, K)
    S1 = K + J1K
    if not space.is_isotropic(S1):
        raise HypothesisError("(1)", "K + J1(K) is not contained in Ann(K, J1(K))")

    report = LemmaReport("kahler_split")
    direct = J1K.intersection(space.cotangent).dim == 0
    U1 = space.annihilator(S1)
    U2 = space.annihilator(K + J2K)
    W = space.annihilator(K + J1K + J2K + GK)
    report.outputs["W_K"] = W
    report.dimensions.update({"K": K.dim, "K+J1K": S1.dim, "U1": U1.dim, "U2": U2.dim, "W_K": W.dim})
    if not direct:
        report.notes.append("condition (2) fails: J1(K) meets V*, the sum is not direct; dimensions listed only")
        report.outputs["direct"] = False
        return report
    report.outputs["direct"] = True

    report.check(
        "U1 = W_K ⊕ (K + J1K)",
        W <= U1 and W.intersection(S1).dim == 0 and W.dim + S1.dim == U1.dim,
        f"{U1.dim} = {W.dim} + {S1.dim}",
    )
    L1, L2 = eigenspace(gk.J1), eigenspace(gk.J2)
    report.check("L1 ∩ W_K = L1 ∩ U2", L1.intersection(W) == L1.intersection(U2))
    report.check("L2 ∩ W_K = L2 ∩ U1", L2.intersection(W) == L2.intersection(U1))

    try:
        restricted = restrict_gk(gk, W)
    except GenlinError as e:
        report.check("W_K invariant", False, str(e))
        return report
    report.outputs["restricted"] = restricted
    structure = is_gk(restricted, points)
    report.check("restricted structure is GK", structure.valid, "; ".join(f"{k}: {v}" for k, v in structure.violations.items()))
    report.notes.extend(structure.notes)

    extend = lemma_extend(K, J1K)
    v_k = extend.outputs["V_K"]
    report.check("W_K ≅ V_K", W.dim == v_k.dim and W.intersection(S1).dim == 0 and W <= space.annihilator(S1))
    ann_v = space.ann_tangent(K)
    N = space.anchor_image(J1K)
    report.outputs["types"] = {
        "J1": _anchor_type(space, L1.intersection(W), N, ann_v),
        "J2": _anchor_type(space, L2.intersection(W), N, ann_v),
    }
    return report


def lemma_double_split(K: Subspace, gk: LinearGK) -> LemmaReport:
    """Ṽ_K = V_K ⊕ K and 0 → Ann_{V*}(N₁, N₂)/K → V_K → Ann_V(K) → 0."""
    space = space_of(K)
    _require_cotangent(space, K)
    J1K, J2K, GK = _images(gk, K)
    for j, JK in ((1, J1K), (2, J2K)):
        if not space.is_isotropic(K + JK):
            raise HypothesisError(f"(1) for J{j}", f"K + J{j}(K) is not contained in Ann(K, J{j}(K))")
        if JK.intersection(space.cotangent).dim:
            raise HypothesisError(f"(2) for J{j}", f"J{j}(K) meets V*")
    N1, N2 = space.anchor_image(J1K), space.anchor_image(J2K)
    if N1.intersection(N2).dim:
        raise HypothesisError("(3)", "N1 and N2 intersect")

    report = LemmaReport("double_split")
    ann_v = space.ann_tangent(K)
    report.check("N1 ⊕ N2 ⊆ Ann_V(K)", (N1 + N2) <= ann_v)
    U = space.annihilator(K + J1K + J2K)
    W = space.annihilator(K + J1K + J2K + GK)
    report.check(
        "Ṽ_K = V_K ⊕ K",
        K <= U and W.intersection(K).dim == 0 and W.dim + K.dim == U.dim,
        f"{U.dim} = {W.dim} + {K.dim}",
    )
    quotient = quotient_with_pairing(U, K, space.pairing_matrix)
    report.outputs["V_K"] = quotient
    report.check("pairing descends nondegenerate", quotient.nondegenerate)
    report.check("anchor onto Ann_V(K)", space.anchor_image(U) == ann_v)
    kernel = U.intersection(space.cotangent)
    report.check("kernel = Ann_V*(N1, N2)", kernel == space.ann_cotangent(N1 + N2))
    kernel_dim = kernel.dim - K.dim
    report.check("exact", quotient.dim == kernel_dim + ann_v.dim, f"{quotient.dim} = {kernel_dim} + {ann_v.dim}")
    missing = lemma_missingrank(K, J1K + J2K)
    report.check("agrees with missingrank", missing.passed and missing.dimensions["V'_K"] == quotient.dim)
    report.dimensions.update(
        {"K": K.dim, "Ṽ_K": U.dim, "V_K": quotient.dim, "Ann_V(K)": ann_v.dim, "kernel": kernel_dim}
    )
    return report


def p_k_matrix(K: Subspace, gk: LinearGK) -> tuple[Matrix, list[Vector]]:
    """Gram matrix of the pairing on J₁(K) ⊕ J₂(K) and the basis it is taken in."""
    space = space_of(K)
    basis = [gk.J1.apply(k) for k in K.basis] + [gk.J2.apply(k) for k in K.basis]
    return space.gram(basis), basis


def default_lagrangians(K: Subspace, gk: LinearGK) -> dict[str, Subspace]:
    """J₁(K) and J₂(K); each is a null space of P_K since J_j is orthogonal and K ⊆ V* is isotropic."""
    return {"J1K": K.image(gk.J1), "J2K": K.image(gk.J2)}


def lemma_dual_split(K: Subspace, gk: LinearGK, Kp: Subspace, points: Sequence[Point] = ()) -> LemmaReport:
    """P_K of signature (m, m) and 0 → W*_{K'} → W_K → W_{K'} → 0 for a P_K-Lagrangian K'."""
    space = space_of(K)
    double = lemma_double_split(K, gk)
    J1K, J2K, GK = _images(gk, K)
    m = K.dim
    if not Kp <= J1K + J2K:
        raise HypothesisError("K' ⊆ J1K ⊕ J2K", "K' is not contained in J1(K) ⊕ J2(K)")
    if not space.is_isotropic(Kp) or Kp.dim != m:
        raise HypothesisError("maximal isotropic", f"K' must be isotropic of dimension {m}, got dimension {Kp.dim}")

    report = LemmaReport("dual_split")
    report.check("double split", double.passed, "; ".join(double.failures))
    P_K, _ = p_k_matrix(K, gk)
    report.outputs["P_K"] = P_K
    sampled = list(points) if points else ([{}] if not gk.field.variables else [])
    for point in sampled:
        key = ", ".join(f"{k}={v}" for k, v in sorted(point.items())) or "constant"
        try:
            inertia = signature(P_K, point)
        except (LinearAlgebraError, SymcalcError) as e:
            report.check(f"signature at {key}", False, str(e))
            continue
        report.check(f"signature at {key}", inertia == (m, m, 0), f"inertia {inertia}")
    if not sampled:
        report.notes.append("P_K signature not sampled: no sample points for a non-constant structure")

    W = space.annihilator(K + J1K + J2K + GK)
    U = space.annihilator(K + Kp)
    report.check(
        "U_K' = W_K ⊕ (K ⊕ K')",
        W <= U and W.intersection(K + Kp).dim == 0 and W.dim + K.dim + Kp.dim == U.dim,
        f"{U.dim} = {W.dim} + {K.dim} + {Kp.dim}",
    )
    ann_v = space.ann_tangent(K)
    N = space.anchor_image(Kp)
    report.check("N' ⊆ Ann_V(K)", N <= ann_v)
    report.check("anchor onto W_K'", (space.anchor_image(W) + N) == ann_v)
    ann_n = space.ann_cotangent(N)
    kernel = W.intersection(ann_n + Kp)
    report.check("kernel ≅ Ann_V*(N')/K", kernel.dim == ann_n.dim - K.dim, f"{kernel.dim} = {ann_n.dim} - {K.dim}")
    report.check("kernel maximal isotropic", space.is_isotropic(kernel) and 2 * kernel.dim == W.dim)
    report.check("self-dual", kernel.dim == ann_v.dim - N.dim)
    report.dimensions.update({"K": m, "W_K": W.dim, "W_K'": ann_v.dim - N.dim, "kernel": kernel.dim})
    return report
