"""Check catalog and the report format shared by the CLI and the MCP tools."""

import json
import logging
from dataclasses import dataclass
from enum import StrEnum

from pydantic import BaseModel

from .common import Finding, GKReduceError

logger = logging.getLogger(__name__)


class UnknownCheckError(GKReduceError):
    """Raised by :func:`explain` for an id that is not in the catalog."""


class Status(StrEnum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class CheckInfo:
    topic: str
    formula: str


CHECK_CATALOG: dict[str, CheckInfo] = {
    # structures
    "gk-structure": CheckInfo(
        "generalized Kähler pair",
        "J_j² = −1, J_jᵀ P J_j = P, J₁J₂ = J₂J₁, G = −J₁J₂ with G² = 1 and ⟨G·,·⟩ symmetric",
    ),
    "gk-positivity": CheckInfo("generalized metric", "⟨G·,·⟩ positive definite at each sample point"),
    "twisted-integrability": CheckInfo(
        "integrability of a generalized complex structure", "⟨a *_H b, c⟩ = 0 for a, b, c in the +i-eigenframe"
    ),
    "spinor-annihilator": CheckInfo(
        "canonical spinor line", "Ann(ρ) = {x : x·ρ = 0} is maximal isotropic and equals the +i-eigenspace"
    ),
    "spinor-integrability": CheckInfo("integrability via pure spinors", "d_H ρ = 𝔜·ρ for some section 𝔜"),
    "spinor-action": CheckInfo(
        "spinor action of a section", "𝔛∘_Hρ = (−d_H + 𝔜·)𝔛·ρ − 2⟨𝔛,𝔜⟩ρ whenever d_Hρ = 𝔜·ρ"
    ),
    # Courant algebroid
    "courant-jacobi": CheckInfo("Courant algebroid axioms", "x * (y * z) = (x * y) * z + y * (x * z)"),
    "courant-symmetric": CheckInfo("Courant algebroid axioms", "X⟨y, z⟩ = ⟨x, y * z + z * y⟩"),
    "courant-invariance": CheckInfo("Courant algebroid axioms", "X⟨y, z⟩ = ⟨x * y, z⟩ + ⟨y, x * z⟩"),
    "symmetrization": CheckInfo("symmetric part of the Loday bracket", "x *_H y + y *_H x = 2 d⟨x, y⟩"),
    "psi-translate": CheckInfo(
        "symmetries of the twisted bracket", "[ψ_H p, ψ_H q]_{H+H'} = ψ_H [p, q]_{H'} with ψ_H(X, A) = (X, A + ι_X H)"
    ),
    "clifford": CheckInfo("Clifford module of forms", "x·y·ρ + y·x·ρ = 2⟨x, y⟩ρ"),
    "b-naturality": CheckInfo("B-field transformations", "e^B x *_{H−dB} e^B y = e^B (x *_H y)"),
    # reduction
    "level-constant": CheckInfo("level set of the moment maps", "each moment function is constant on the level chart"),
    "moment-sections": CheckInfo("moment sections", "𝔛_j = J_tag(df_j) equals the expected section"),
    "moment-tangent": CheckInfo("moment sections", "ι_{X_j} df_j = 0"),
    "twist-invariant": CheckInfo("Hamiltonian action", "ℒ_{X_j} H = 0"),
    "splitting-preserved": CheckInfo("Hamiltonian action", "dξ_j = ι_{X_j} H"),
    "moment-isotropy": CheckInfo("Hamiltonian action", "ι_{X_j} df_k + ι_{X_k} df_j = 0 within one torus"),
    "moment-brackets": CheckInfo("abelian action", "𝔛_j *_H 𝔛_k = 0"),
    "structure-invariance": CheckInfo("Hamiltonian action", "⟨𝔛 ∘_H a, b⟩ = 0 on the +i-eigenframes"),
    "pairing-constant": CheckInfo("pairing of the two tori", "P_jk = 2⟨𝔛_j, 𝔛̂_k⟩ is constant"),
    "pairing-nondegenerate": CheckInfo("pairing of the two tori", "P is square and invertible"),
    "pairing-expected": CheckInfo("pairing of the two tori", "P equals the expected matrix"),
    "connection-duality": CheckInfo("connection forms", "ι_{X_j} Θ_k = δ_jk and ι_{X̂_j} Θ̂_k = δ_jk"),
    "connection-invariant": CheckInfo("connection forms", "ℒ_X Θ = 0 for every generator and connection form"),
    "b-tilde-invariant": CheckInfo(
        "normalizing 2-form", "B̃ = Σ Θ_j∧ξ_j − ½ Σ Θ_j∧Θ_k ι_{X_k}ξ_j summed over both tori is invariant"
    ),
    "reduced-twist-basic": CheckInfo(
        "twisting form of a quotient", "π*h = H + dB̃ + d(Θ∧ξ' − ½ Σ Θ_j∧Θ_k ι_{X_k}ξ'_j) is basic"
    ),
    "xi-prime-crosscheck": CheckInfo(
        "twisting form of a quotient", "ξ'_l = ξ_l − ι_{X_l}B̃ = Σ Θ_j⟨𝔛_l, 𝔛_j⟩ + Σ Θ̂_j ι_{X_l}ξ̂_j"
    ),
    "duality-residual": CheckInfo(
        "T-duality identity of the reduced twisting forms", "π̂*ĥ − π*h = d(Σ P_jk Θ̂_k ∧ Θ_j)"
    ),
    "tduality-group": CheckInfo(
        "T-duality group O(m, m; ℤ)",
        "g preserves [[0, P], [Pᵀ, 0]], keeps both families Lagrangian and the duality residual vanishes",
    ),
    "subtorus-case": CheckInfo(
        "reduction by a subtorus", "isotropic: K + K' isotropic; nondegenerate: K ⊥ K' with K' nondegenerate"
    ),
    "subtorus-route": CheckInfo("reduction by a subtorus", "the applicable case matches the expected one"),
    "subtorus-lemma": CheckInfo("reduction by a subtorus", "the linear extension lemma of the chosen case holds"),
    "generic-point-lemma": CheckInfo(
        "fiberwise splitting at the generic point", "splitting lemmas for K = span(df_j) on the chart"
    ),
    # linear algebra
    "lemma-extend": CheckInfo(
        "extension by an isotropic subspace", "0 → Ann_V*(N')/K → V_K → Ann_V(K)/N' → 0 with V_K = Ann(K+K')/(K+K')"
    ),
    "lemma-missingrank": CheckInfo(
        "extension by a nondegenerate subspace", "0 → (A∩V*)/K → V'_K → Ann_V(K) → 0 with V'_K = Ann(K+K')/K"
    ),
    "lemma-kahler-split": CheckInfo("generalized Kähler reduction, one structure", "U¹ = W ⊕ (K + J₁K), W ≅ V_K"),
    "lemma-double-split": CheckInfo("generalized Kähler reduction, both structures", "Ṽ_K = V_K ⊕ K, anchor onto Ann_V(K)"),
    "lemma-dual-split": CheckInfo(
        "dual reduction", "P_K has signature (m, m) and 0 → W*_{K'} → W_K → W_{K'} → 0"
    ),
    # bialgebras
    "jacobi": CheckInfo("Lie algebra", "[e_i,[e_j,e_k]] + cyclic = 0"),
    "cybe": CheckInfo(
        "classical Yang–Baxter equation", "⟦r, r⟧ = [r₁₂, r₁₃] + [r₁₂, r₂₃] + [r₁₃, r₂₃] = 0 and is ad-invariant"
    ),
    "s-ad-invariant": CheckInfo("factorizable r-matrix", "ad_x s = 0 for the symmetric part s"),
    "s-invertible": CheckInfo("factorizable r-matrix", "s is invertible"),
    "factorizable": CheckInfo("factorizable r-matrix", "⟦r, r⟧ = 0, s ad-invariant and invertible"),
    "cocommutator": CheckInfo(
        "coboundary Lie bialgebra", "δ(x) = ad_x r is skew, a 1-cocycle, and its dual bracket satisfies Jacobi"
    ),
    "manin-subalgebra": CheckInfo("Manin triple", "both embedded images are subalgebras of 𝔤 ⊕ 𝔤"),
    "manin-isotropic": CheckInfo("Manin triple", "both images are isotropic for ½ diag(κ, −κ), κ = s⁻¹"),
    "manin-invariance": CheckInfo("Manin triple", "⟨[x, y], z⟩ + ⟨y, [x, z]⟩ = 0"),
    "manin-span": CheckInfo("Manin triple", "the images span 𝔤 ⊕ 𝔤 since r₊ − r₋ = 2s is invertible"),
    "manin-duality": CheckInfo("Manin triple", "⟨(x, x), (r₊ω, r₋ω)⟩ = ω(x)"),
    "commuting-abelian": CheckInfo("commuting Manin triple", "[𝔤, 𝔤̂] = 0 forces the double to be abelian"),
    # controls
    "negative-control": CheckInfo(
        "negative control", "a deliberately broken input must make the named identity fail"
    ),
}


# Citation of the identity behind each check id.
ANCHORS: dict[str, str] = {
    "gk-structure": "§2.3; §3.4 (G = −J₁J₂ defines a generalized metric)",
    "gk-positivity": "§3.4 (G = −J₁J₂ defines a generalized metric)",
    "twisted-integrability": "§2.3 (involutive with respect to the H-twisted Loday bracket)",
    "spinor-annihilator": "§2.4 (U = Ann_C(L), pure spinor associated to the subbundle)",
    "spinor-integrability": "Eq. subg:integ",
    "spinor-action": "Remark subg:cplx; Eq. gency:commu",
    "courant-jacobi": "Def app:courant, Eqs. app:courantdefn1–3",
    "courant-symmetric": "Def app:courant, Eqs. app:courantdefn1–3",
    "courant-invariance": "Def app:courant, Eqs. app:courantdefn1–3",
    "symmetrization": "§2.2 (H-twisted Loday bracket)",
    "psi-translate": "Prop recall:transl",
    "clifford": "§2.4 (Clifford action on forms)",
    "b-naturality": "§2.1 (B-transformation); §2.2 (H-twisted Loday bracket)",
    "level-constant": "Def double:biactdef",
    "moment-sections": "Def poisson:ham",
    "moment-tangent": "Lemma poisson:moment",
    "twist-invariant": "Assumption torus:assum",
    "splitting-preserved": "Assumption torus:assum; Corollary courant:split (proof)",
    "moment-isotropy": "Lemma poisson:moment",
    "moment-brackets": "Lemma poisson:moment",
    "structure-invariance": "Def double:biactdef",
    "pairing-constant": "Eq. double:geopairing; Lemma double:torusprop",
    "pairing-nondegenerate": "Eq. double:geopairing; Lemma double:torusprop",
    "pairing-expected": "Eq. double:geopairing",
    "connection-duality": "§5 (connection forms on M₀)",
    "connection-invariant": "§5 (connection forms on M₀)",
    "b-tilde-invariant": "Eq. torus:btrans",
    "reduced-twist-basic": "Theorem torus:duality (proof); Corollary courant:split",
    "xi-prime-crosscheck": "Theorem torus:duality (proof)",
    "duality-residual": "Theorem torus:duality, Eq. torus:dualeq",
    "tduality-group": "Corollary dual:tgroup; §dual:bfield",
    "subtorus-case": "Prop dual:kahler; Prop dual:nondegen; Lemma courant:reduce",
    "subtorus-route": "Lemma courant:reduce, cases (1) and (2)",
    "subtorus-lemma": "Lemma courant:extend; Lemma courant:missingrank",
    "generic-point-lemma": "Lemma kahler:linear; Lemma double:linear; Lemma dual:linear",
    "lemma-extend": "Lemma courant:extend",
    "lemma-missingrank": "Lemma courant:missingrank",
    "lemma-kahler-split": "Lemma kahler:linear; Lemma kahler:sequence",
    "lemma-double-split": "Lemma double:linear",
    "lemma-dual-split": "§6; Lemma dual:linear",
    "jacobi": "Def app:liebidef",
    "cybe": "Eq. app:yangbaxter",
    "s-ad-invariant": "Eq. app:yangbaxter",
    "s-invertible": "Eq. app:dsum",
    "factorizable": "Eq. app:yangbaxter; Eq. app:dsum",
    "cocommutator": "Eq. app:cocommu",
    "manin-subalgebra": "Def app:liebidef; Eq. app:dsum",
    "manin-isotropic": "Def app:liebidef; Eq. app:dsum",
    "manin-invariance": "Def app:liebidef",
    "manin-span": "Eq. app:dsum",
    "manin-duality": "Eq. app:dsum; Theorem app:liedouble",
    "commuting-abelian": "Prop torus:comute",
    "negative-control": "none (deliberately broken input)",
}


def explain(check_id: str) -> str:
    try:
        info = CHECK_CATALOG[check_id]
    except KeyError as e:
        raise UnknownCheckError(f"Unknown check id '{check_id}'") from e
    return f"{check_id}: {info.topic}\n  reference: {ANCHORS[check_id]}\n  verifies: {info.formula}"


class CheckEntry(BaseModel):
    id: str
    subject: str
    anchor: str
    status: Status
    residual: str = "0"
    note: str = ""
    timing_ms: float | None = None

    @classmethod
    def from_finding(cls, f: Finding, timing_ms: float | None = None) -> "CheckEntry":
        return cls(
            id=f.check,
            subject=f.subject,
            anchor=ANCHORS[f.check],
            status=Status.PASS if f.passed else Status.FAIL,
            residual=f.residual,
            note=f.note,
            timing_ms=timing_ms,
        )


class Report(BaseModel):
    scenario: str
    kind: str
    seed: int | None = None
    status: Status
    checks: list[CheckEntry]

    @classmethod
    def assemble(cls, scenario: str, kind: str, checks: list[CheckEntry], seed: int | None = None) -> "Report":
        failed = any(c.status is Status.FAIL for c in checks)
        status = Status.FAIL if failed or not checks else Status.PASS
        return cls(scenario=scenario, kind=kind, seed=seed, status=status, checks=checks)

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    @property
    def failures(self) -> list[CheckEntry]:
        return [c for c in self.checks if c.status is Status.FAIL]


def render_json(report: Report) -> str:
    return json.dumps(report.model_dump(mode="json", exclude_none=True), indent=2, ensure_ascii=False) + "\n"


def parse_json(text: str) -> Report:
    return Report.model_validate_json(text)


def render_text(report: Report) -> str:
    lines = [f"scenario: {report.scenario} ({report.kind})"]
    if report.seed is not None:
        lines.append(f"seed: {report.seed}")
    width = max((len(c.id) for c in report.checks), default=0)
    for c in report.checks:
        line = f"{c.status.value.upper():<14} {c.id:<{width}}  [{c.subject}]"
        if c.status is not Status.NOT_APPLICABLE or c.residual != "0":
            line += f"  residual: {c.residual}"
        if c.note:
            line += f"  ({c.note})"
        if c.timing_ms is not None:
            line += f"  {c.timing_ms:.1f} ms"
        lines.append(line)
    counts = {s: sum(1 for c in report.checks if c.status is s) for s in Status}
    lines.append(
        f"overall: {report.status.value.upper()} ({len(report.checks)} checks, {counts[Status.FAIL]} failed, "
        f"{counts[Status.NOT_APPLICABLE]} not applicable)"
    )
    return "\n".join(lines) + "\n"
