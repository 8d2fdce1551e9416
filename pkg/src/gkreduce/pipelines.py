"""Verification pipelines: one per scenario kind, each producing report entries.

An exception inside a single check becomes a ``fail`` entry carrying the message,
so one broken check never hides the others. Problems in the scenario data itself
raise :class:`ScenarioError`.
"""

import logging
import time
from collections.abc import Callable, Iterator, Mapping
from contextlib import contextmanager
from typing import Any

from sympy import Rational
from sympy.polys.domains import QQ_I

from .bialg import (
    BialgError,
    LieAlgebraData,
    NotFactorizableError,
    RMatrix,
    commuting_abelian_check,
    cocommutator,
    cybe_obstruction,
    jacobi_check,
    manin_triple,
)
from .common import Finding, GKReduceError, make_rng
from .courant import (
    GenSection,
    TwistData,
    axioms_check,
    b_naturality_check,
    clifford_check,
    corrupted_bracket,
    gcs_integrability,
    psi_translate_check,
    spinor_action_check,
    spinor_annihilator,
    spinor_integrability,
    symmetrization_check,
)
from .generators import (
    random_cotangent,
    random_form,
    random_kahler_gk,
    random_section,
    random_spinor,
    random_symmetry_pair,
    random_twist,
)
from .genlin import (
    HypothesisError,
    LemmaReport,
    LinearGK,
    PairedSpace,
    b_transform,
    change_frame,
    direct_sum,
    eigenspace,
    gcs_from_complex,
    gcs_from_symplectic,
    is_gk,
    lemma_double_split,
    lemma_dual_split,
    lemma_extend,
    lemma_kahler_split,
    lemma_missingrank,
)
from .linalg import Matrix, Subspace, residual_text, vec_sub
from .reduction import (
    ConnectionData,
    Moment,
    Side,
    SubtorusError,
    Tag,
    TorusActionData,
    b_shear,
    b_tilde,
    connection_checks,
    duality_check,
    generic_point_lemmas,
    hamiltonian_checks,
    level_checks,
    level_families,
    moment_sections,
    pairing_P,
    reduced_twisting,
    subtorus_reduction_check,
    tduality_transform,
)
from .report import CheckEntry, Report, Status
from .scenarios import (
    BialgScenario,
    ChartSpec,
    CourantAxiomsScenario,
    Form,
    GKModel,
    GKVerifyScenario,
    LinearLemmasScenario,
    PairSpec,
    ReductionScenario,
    Scenario,
    ScenarioError,
    StructureSpec,
)
from .settings import settings
from .symcalc import Chart, ChartParser, DiffForm, VectorField, coeff_field

logger = logging.getLogger(__name__)

Point = dict[str, Any]


class Collector:
    """Accumulates report entries in order, with optional per-entry wall time."""

    def __init__(self, timings: bool = False):
        self.entries: list[CheckEntry] = []
        self.timings = timings
        self._last = time.perf_counter()

    def _elapsed(self) -> float | None:
        now = time.perf_counter()
        elapsed, self._last = (now - self._last) * 1000, now
        return round(elapsed, 1) if self.timings else None

    def add(self, f: Finding) -> None:
        self.entries.append(CheckEntry.from_finding(f, self._elapsed()))

    def extend(self, findings: list[Finding]) -> None:
        for f in findings:
            self.add(f)

    def not_applicable(self, check: str, subject: str, note: str = "") -> None:
        entry = CheckEntry.from_finding(Finding(check, subject, True, "0", note), self._elapsed())
        entry.status = Status.NOT_APPLICABLE
        self.entries.append(entry)

    def control(self, subject: str, residual: object, broke: bool) -> None:
        """A negative control passes when the broken input makes its identity fail."""
        text = str(residual)
        self.add(Finding("negative-control", subject, broke, text, "" if broke else "control did not fail"))

    @contextmanager
    def guard(self, check: str, subject: str) -> Iterator[None]:
        try:
            yield
        except Exception as e:
            logger.error(f"Check {check} [{subject}] raised: {e}", exc_info=True)
            self.add(Finding(check, subject, False, f"{type(e).__name__}: {e}"))


@contextmanager
def _field(source: str, path: str) -> Iterator[None]:
    try:
        yield
    except ScenarioError:
        raise
    except (GKReduceError, ValueError, ArithmeticError) as e:
        raise ScenarioError(str(e), source, field=path) from e


def _aggregate(check: str, subject: str, residuals: list[tuple[str, object]]) -> Finding:
    failing = [(label, str(value)) for label, value in residuals if str(value) != "0"]
    if not failing:
        return Finding(check, subject, True)
    label, text = failing[0]
    return Finding(check, subject, False, f"{len(failing)} of {len(residuals)} fail; first {label}: {text}")


def _matrix_text(m: Matrix) -> str:
    return "[" + "; ".join(", ".join(row) for row in m.to_strings()) + "]"


# building blocks


def build_chart(spec: ChartSpec, source: str) -> tuple[Chart, ChartParser]:
    with _field(source, "chart"):
        chart = Chart.build(spec.name, [(c.name, c.kind) for c in spec.coordinates])
        return chart, ChartParser(chart, spec.definitions)


def _expr_matrix(rows, parser: ChartParser) -> Matrix:
    return Matrix(parser.chart.field, [[parser.coeff(x) for x in row] for row in rows])


def build_structure(spec: StructureSpec, parser: ChartParser, source: str, path: str) -> Matrix:
    chart = parser.chart
    with _field(source, path):
        if spec.matrix is not None:
            J = _expr_matrix(spec.matrix, parser)
        else:
            blocks = []
            for block in spec.blocks or []:
                if block.symplectic is not None:
                    blocks.append(gcs_from_symplectic(_expr_matrix(block.symplectic, parser)))
                else:
                    blocks.append(gcs_from_complex(_expr_matrix(block.complex, parser)))
            J = direct_sum(blocks)
        if J.shape != (2 * chart.dimension, 2 * chart.dimension):
            raise ScenarioError(f"structure has shape {J.shape} on a {chart.dimension}-dimensional chart", source, path)
        if spec.frame is not None:
            if len(spec.frame) != chart.dimension:
                raise ScenarioError(f"frame needs {chart.dimension} vectors", source, f"{path}.frame")
            columns = [parser.vector_field(v).components for v in spec.frame]
            J = change_frame(J, Matrix.from_columns(chart.field, columns, chart.dimension))
        if spec.b_field:
            J = b_transform(parser.form(spec.b_field), J)
    return J


def build_gk(pair: PairSpec, parser: ChartParser, source: str, path: str = "structures") -> LinearGK:
    return LinearGK(
        build_structure(pair.J1, parser, source, f"{path}.J1"),
        build_structure(pair.J2, parser, source, f"{path}.J2"),
    )


def build_twist(form: Form, parser: ChartParser, source: str, path: str = "H") -> TwistData:
    with _field(source, path):
        return TwistData(parser.form(form))


def default_points(chart: Chart, count: int) -> list[Point]:
    """Deterministic rational points with every full coordinate in (0, 1)."""
    names = chart.field.variables
    if not names:
        return []
    return [
        {name: QQ_I.from_sympy(Rational((k + i) % count + 1, count + 1)) for i, name in enumerate(names)}
        for k in range(count)
    ]


def build_points(specs: list[Mapping[str, Any]], parser: ChartParser, source: str) -> list[Point]:
    if not specs:
        return default_points(parser.chart, settings.sample_points)
    with _field(source, "sample_points"):
        return [parser.point(p) for p in specs]


# generalized Kähler structures


def _frame_failures(failures: Mapping[tuple[int, int, int], Any]) -> str:
    return "; ".join(f"<e{a} * e{b}, e{c}> = {v}" for (a, b, c), v in failures.items()) or "0"


def gk_checks(col: Collector, model: GKModel, source: str, prefix: str = "") -> None:
    chart, parser = build_chart(model.chart, source)
    gk = build_gk(model.structures, parser, source)
    tw = build_twist(model.H, parser, source)
    points = build_points(model.sample_points, parser, source)

    structure = is_gk(gk, points)
    for name, residual in structure.residuals.items():
        check = "gk-positivity" if name.startswith("positive") else "gk-structure"
        col.add(Finding(check, prefix + name, residual == "0", residual))
    for note in structure.notes:
        col.not_applicable("gk-positivity", prefix + "sampling", note)
    if not structure.valid:
        return

    for label, J in (("J1", gk.J1), ("J2", gk.J2)):
        with col.guard("twisted-integrability", prefix + label):
            report = gcs_integrability(J, chart, tw)
            col.add(Finding("twisted-integrability", prefix + label, report.involutive, _frame_failures(report.failures)))
        if model.controls.untwisted and tw.H:
            subject = f"{prefix}{label} integrability with H = 0"
            with col.guard("negative-control", subject):
                report = gcs_integrability(J, chart, TwistData.zero(chart))
                col.control(subject, _frame_failures(report.failures), not report.involutive)

    sample = GenSection(VectorField.coordinate(chart, chart.names[0]), DiffForm.differential(chart, chart.names[-1]))
    for label, form in sorted(model.spinors.items()):
        with _field(source, f"spinors.{label}"):
            rho = parser.form(form)
        J = gk.structure(1 if label == "J1" else 2)
        subject = prefix + label
        with col.guard("spinor-annihilator", subject):
            ann = spinor_annihilator(rho)
            matches = ann.subspace == eigenspace(J)
            ok = ann.pure and ann.isotropic and matches
            residual = "0" if ok else f"dim {ann.subspace.dim}, isotropic {ann.isotropic}, equals eigenspace {matches}"
            col.add(Finding("spinor-annihilator", subject, ok, residual))
        with col.guard("spinor-integrability", subject):
            result = spinor_integrability(rho, tw)
            residual = "0" if result.residual is None else str(result.residual)
            col.add(Finding("spinor-integrability", subject, result.solvable, residual, f"Y = {result.Y}"))
            if result.solvable and result.Y is not None:
                action = spinor_action_check(sample, rho, result.Y, tw)
                col.add(Finding("spinor-action", f"{subject}, x = {sample}", not action, str(action)))
        if model.controls.untwisted and tw.H:
            control = f"{subject} spinor with H = 0"
            with col.guard("negative-control", control):
                result = spinor_integrability(rho, TwistData.zero(chart))
                col.control(control, "0" if result.residual is None else str(result.residual), not result.solvable)


def run_gk_verify(scenario: GKVerifyScenario, col: Collector) -> None:
    gk_checks(col, scenario, scenario.name)


# Courant algebroid axioms


def run_courant_axioms(scenario: CourantAxiomsScenario, col: Collector) -> None:
    chart, _ = build_chart(scenario.chart, scenario.name)
    seed, degree = scenario.seed, scenario.degree
    tw = random_twist(chart, make_rng(seed, "twist"), degree)
    rng = make_rng(seed, "sections")
    sections = [random_section(chart, rng, degree) for _ in range(scenario.sections)]
    pick = make_rng(seed, "triples")
    n = len(sections)
    triples = [(pick.randrange(n), pick.randrange(n), pick.randrange(n)) for _ in range(scenario.triples)]

    with col.guard("courant-jacobi", "loday bracket"):
        report = axioms_check(sections, tw, triples=triples)
        subject = f"{len(triples)} triples"
        for check, attr in (
            ("courant-jacobi", "jacobi"),
            ("courant-symmetric", "symmetric_metric"),
            ("courant-invariance", "invariance"),
        ):
            col.add(_aggregate(check, subject, [(str(r.indices), getattr(r, attr)) for r in report.residuals]))

    if scenario.corrupted_control:
        subject = "bracket without d ι_X η"
        with col.guard("negative-control", subject):
            corrupted = axioms_check(sections, tw, corrupted_bracket, triples=triples[:10])
            failing = corrupted.failures
            col.control(subject, f"{len(failing)} of {len(corrupted.residuals)} triples fail", bool(failing))

    pairs = make_rng(seed, "pairs")
    residuals = []
    for k in range(scenario.symmetrization_pairs):
        x, y = sections[pairs.randrange(n)], sections[pairs.randrange(n)]
        residuals.append((f"pair {k}", symmetrization_check(x, y, tw)))
    if residuals:
        col.add(_aggregate("symmetrization", f"{len(residuals)} pairs", residuals))

    psi_rng = make_rng(seed, "psi")
    residuals = []
    for k in range(scenario.psi_instances):
        p, q = random_symmetry_pair(chart, psi_rng, degree), random_symmetry_pair(chart, psi_rng, degree)
        H, Hp = random_twist(chart, psi_rng, degree), random_twist(chart, psi_rng, degree)
        vector, form = psi_translate_check(p, q, H, Hp)
        residuals.append((f"instance {k}", "0" if not vector and not form else f"{vector}; {form}"))
    if residuals:
        col.add(_aggregate("psi-translate", f"{len(residuals)} instances", residuals))

    cl_rng = make_rng(seed, "clifford")
    residuals = []
    for k in range(scenario.clifford_pairs):
        x, y = random_section(chart, cl_rng, degree, True), random_section(chart, cl_rng, degree, True)
        residuals.append((f"pair {k}", clifford_check(x, y, random_spinor(chart, cl_rng, degree))))
    if residuals:
        col.add(_aggregate("clifford", f"{len(residuals)} pairs", residuals))

    b_rng = make_rng(seed, "b-field")
    residuals = []
    for k in range(scenario.naturality_pairs):
        x, y = sections[b_rng.randrange(n)], sections[b_rng.randrange(n)]
        B = random_form(chart, b_rng, 2, terms=2, coeff_degree=degree)
        residuals.append((f"pair {k}", b_naturality_check(x, y, tw, B)))
    if residuals:
        col.add(_aggregate("b-naturality", f"{len(residuals)} pairs", residuals))


# reduction and T-duality


def _subtorus_checks(col: Collector, act: TorusActionData, sections: list[GenSection], scenario: ReductionScenario):
    for sub in scenario.subtori:
        subject = f"{sub.name} {sub.basis}"
        try:
            report = subtorus_reduction_check(act, sections, sub.basis, sub.mode)
        except SubtorusError as e:
            route = "none"
            col.not_applicable("subtorus-case", f"{subject} isotropic", str(e))
            col.not_applicable("subtorus-case", f"{subject} nondegenerate", str(e))
            col.add(Finding("subtorus-route", subject, sub.expect == route, route))
            continue
        for case, applies in (("isotropic", report.isotropic_case), ("nondegenerate", report.nondegenerate_case)):
            if applies:
                col.add(Finding("subtorus-case", f"{subject} {case}", True))
            else:
                col.not_applicable("subtorus-case", f"{subject} {case}", "hypotheses do not hold")
        note = f"gram 2<X,X> = {_matrix_text(report.gram)}"
        col.add(Finding("subtorus-route", subject, report.route == sub.expect, report.route, note))
        dims = ", ".join(f"{k} {v}" for k, v in report.lemma.dimensions.items())
        col.add(Finding("subtorus-lemma", subject, report.passed, "; ".join(report.lemma.failures) or "0", dims))


def _lemma_note(report: LemmaReport) -> str:
    parts = [", ".join(f"{k} {v}" for k, v in report.dimensions.items())]
    types = report.outputs.get("types")
    if types:
        parts.append("types " + ", ".join(f"{k}={v}" for k, v in sorted(types.items())))
    return "; ".join(p for p in parts if p)


def run_reduction(scenario: ReductionScenario, col: Collector) -> None:
    source = scenario.name
    if scenario.gk_model is not None:
        gk_checks(col, scenario.gk_model, source, prefix="model ")
    chart, parser = build_chart(scenario.chart, source)
    gk = build_gk(scenario.structures, parser, source)
    tw = build_twist(scenario.H, parser, source)
    points = build_points(scenario.sample_points, parser, source)
    with _field(source, "moments"):
        moments = [Moment(parser.coeff(m.function), Tag(m.tag)) for m in scenario.moments]
    with _field(source, "level"):
        level = parser.point(scenario.level)

    structure = is_gk(gk, points)
    for name, residual in structure.residuals.items():
        check = "gk-positivity" if name.startswith("positive") else "gk-structure"
        col.add(Finding(check, name, residual == "0", residual))

    act = None
    with col.guard("gk-structure", "torus action"):
        act = TorusActionData(chart, moments, gk, tw, level)
    if act is None:
        return
    col.extend(level_checks(act))

    sections = None
    with col.guard("moment-sections", "all"):
        sections = moment_sections(act)
    if sections is None:
        return
    if scenario.expected_sections is not None:
        for k, (x, spec) in enumerate(zip(sections, scenario.expected_sections, strict=True)):
            with _field(source, f"expected_sections.{k}"):
                expected = GenSection(parser.vector_field(spec.vector), parser.form(spec.form))
            col.add(Finding("moment-sections", f"X{k + 1}", not (x - expected), str(x - expected), f"X{k + 1} = {x}"))
    with col.guard("moment-brackets", "hamiltonian checks"):
        col.extend(hamiltonian_checks(act, sections, scenario.check_structure_invariance))

    with col.guard("pairing-constant", "P"):
        P = pairing_P(act, sections)
        derivatives = "; ".join(f"dP[{j},{k}] = {d}" for (j, k), d in P.derivatives.items() if d) or "0"
        col.add(Finding("pairing-constant", "P", P.constant, derivatives, f"P = {_matrix_text(P.matrix)}"))
        col.add(Finding("pairing-nondegenerate", "P", P.nondegenerate, "0" if P.nondegenerate else "singular"))
        if scenario.expected_pairing is not None:
            with _field(source, "expected_pairing"):
                expected = _expr_matrix(scenario.expected_pairing, parser)
            same_shape = expected.shape == P.matrix.shape
            residual = residual_text(P.matrix - expected) if same_shape else f"shape {P.matrix.shape}"
            col.add(Finding("pairing-expected", "P", residual == "0", residual))

    if scenario.generic_point_lemmas:
        with col.guard("generic-point-lemma", "K = span(df)"):
            for name, report in generic_point_lemmas(act, points).items():
                residual = "; ".join(report.failures) or "0"
                col.add(Finding("generic-point-lemma", name, report.passed, residual, _lemma_note(report)))

    _subtorus_checks(col, act, sections, scenario)

    if scenario.connections is None:
        return
    fam = level_families(act, sections)
    level_parser = ChartParser(fam.chart)
    with _field(source, "connections"):
        conn = ConnectionData(
            [level_parser.form(t) for t in scenario.connections.Theta],
            [level_parser.form(t) for t in scenario.connections.ThetaHat],
        )
    col.extend(connection_checks(fam, conn))

    B = None
    with col.guard("b-tilde-invariant", "B~"):
        bt = b_tilde(fam, conn)
        lie = [(f"L_X{a + 1}", r) for a, r in enumerate(bt.lie_residuals)]
        finding = _aggregate("b-tilde-invariant", "B~", lie)
        finding.note = f"B~ = {bt.form}; horizontal part {bt.horizontal}"
        col.add(finding)
        B = bt.form
    if B is None:
        return
    for side in Side:
        with col.guard("reduced-twist-basic", str(side)):
            reduced = reduced_twisting(fam, conn, side, B)
            note = f"pi*h = {reduced.form}"
            if reduced.quotient is not None:
                note += f" on {reduced.quotient.chart.name}"
            col.add(Finding("reduced-twist-basic", str(side), reduced.basic.basic, "0", note))
            checks = [(f"xi'{k + 1}", r) for k, r in enumerate(reduced.crosscheck)]
            col.add(_aggregate("xi-prime-crosscheck", str(side), checks))

    with col.guard("duality-residual", "pi-hat*h-hat - pi*h"):
        duality = duality_check(fam, conn)
        note = f"pi*h = {duality.h}; pi-hat*h-hat = {duality.hhat}; P = {_matrix_text(duality.pairing_matrix)}"
        col.add(Finding("duality-residual", "pi-hat*h-hat - pi*h", duality.passed, str(duality.residual), note))

    if scenario.controls.pairing_scale is not None:
        scale = scenario.controls.pairing_scale
        subject = f"duality residual with P scaled by {scale}"
        with col.guard("negative-control", subject):
            control = duality_check(fam, conn, pairing_scale=scale)
            col.control(subject, control.residual, not control.passed)

    for element in scenario.group_elements:
        with col.guard("tduality-group", element.name):
            g = b_shear(element.b) if element.b is not None else element.matrix
            result = tduality_transform(g, fam, conn)
            col.add(
                Finding(
                    "tduality-group",
                    element.name,
                    result.report.passed,
                    str(result.report.residual),
                    f"g = {g}; pi*h = {result.report.h}",
                )
            )


# bialgebras


def run_bialg(scenario: BialgScenario, col: Collector) -> None:
    source = scenario.name
    names = scenario.algebra.names
    with _field(source, "algebra"):
        g = LieAlgebraData.from_brackets(names, scenario.algebra.brackets, strict=False)
    jacobi = jacobi_check(g)
    col.add(Finding("jacobi", "g", jacobi.valid, "; ".join(jacobi.failures) or "0"))
    if not jacobi.valid:
        return
    g = LieAlgebraData(g.names, g.constants)
    with _field(source, "r"):
        r = RMatrix.from_terms(g, scenario.r)

    cybe = cybe_obstruction(g, r)
    note = "obstruction ad-invariant" if cybe.obstruction_invariant else "obstruction not ad-invariant"
    col.add(Finding("cybe", "r", cybe.zero, cybe.residual(), note))
    col.add(Finding("s-ad-invariant", "s", cybe.s_invariant, "0" if cybe.s_invariant else "ad_x s != 0"))
    col.add(Finding("s-invertible", "s", cybe.s_invertible, "0" if cybe.s_invertible else "singular"))
    expected = scenario.expect.factorizable
    col.add(
        Finding(
            "factorizable", "r", cybe.factorizable == expected, str(cybe.factorizable).lower(), f"expected {expected}"
        )
    )

    co = cocommutator(g, r)
    problems = []
    if not co.antisymmetric:
        problems.append("cobracket not skew")
    problems += [f"cocycle at ({g.names[x]},{g.names[y]}): {residual_text(m)}" for (x, y), m in co.cocycle_residuals.items()]
    problems += co.jacobi.failures
    col.add(Finding("cocommutator", "delta = ad r", co.valid, "; ".join(problems) or "0"))

    if cybe.factorizable:
        with col.guard("manin-subalgebra", "double"):
            triple = manin_triple(g, r, cybe)
            col.extend(triple.checks)
            with col.guard("commuting-abelian", "g"):
                commuting = commuting_abelian_check(triple)
                want = scenario.expect.commuting
                note = "hypothesis holds, double abelian" if commuting else "hypothesis fails"
                col.add(Finding("commuting-abelian", "g", want is None or want == commuting, str(commuting).lower(), note))

    for dim in scenario.abelian_dims:
        subject = f"abelian dim {dim}"
        with col.guard("commuting-abelian", subject):
            a = LieAlgebraData.abelian([f"e{k + 1}" for k in range(dim)])
            identity = RMatrix(Matrix.identity(a.field, dim))
            triple = manin_triple(a, identity)
            col.extend([Finding(f.check, f"{subject} {f.subject}", f.passed, f.residual) for f in triple.checks])
            commuting = commuting_abelian_check(triple)
            col.add(Finding("commuting-abelian", subject, commuting, str(commuting).lower()))

    controls = scenario.controls
    if controls.perturbed_brackets is not None:
        subject = "perturbed structure constants"
        with _field(source, "controls.perturbed_brackets"):
            perturbed = LieAlgebraData.from_brackets(names, controls.perturbed_brackets, strict=False)
        report = jacobi_check(perturbed)
        residual = "; ".join(report.failures) or "0"
        matched = controls.expected_jacobi is None or any(
            failure.endswith(f": {controls.expected_jacobi}") for failure in report.failures
        )
        col.control(subject, residual, not report.valid and matched)
    if controls.non_factorizable_r is not None:
        subject = "Manin triple of a non-factorizable r"
        with _field(source, "controls.non_factorizable_r"):
            bad = RMatrix.from_terms(g, controls.non_factorizable_r)
        try:
            manin_triple(g, bad)
        except NotFactorizableError as e:
            col.control(subject, str(e), True)
        except BialgError as e:
            col.control(subject, f"{type(e).__name__}: {e}", False)
        else:
            col.control(subject, "triple was built", False)


# linear lemmas


def _lemma_runs() -> dict[str, tuple[str, bool, Callable[[Subspace, LinearGK], LemmaReport]]]:
    def missingrank(K: Subspace, gk: LinearGK) -> LemmaReport:
        k = K.basis[0]
        return lemma_missingrank(K, Subspace.span(K.field, K.ambient, [vec_sub(gk.J1.apply(k), gk.J2.apply(k))]))

    return {
        "lemma-extend": ("kahler", False, lambda K, gk: lemma_extend(K, K.image(gk.J1))),
        "lemma-missingrank": ("kahler", False, missingrank),
        "lemma-kahler-split": ("kahler", False, lambda K, gk: lemma_kahler_split(K, gk)),
        "lemma-double-split": ("mixed", True, lambda K, gk: lemma_double_split(K, gk)),
        "lemma-dual-split": ("mixed", True, lambda K, gk: lemma_dual_split(K, gk, K.image(gk.J1))),
    }


def run_linear_lemmas(scenario: LinearLemmasScenario, col: Collector) -> None:
    field = coeff_field(())
    for check, (kind, two_planes, run) in _lemma_runs().items():
        failures: list[str] = []
        rejected = 0
        for k in range(scenario.instances):
            planes = 2 if two_planes else scenario.planes[k % len(scenario.planes)]
            rng = make_rng(scenario.seed, check, k)
            space = PairedSpace(2 * planes, field)
            report = None
            for _ in range(scenario.attempts):
                gk = random_kahler_gk(rng, planes, kind, field)
                K = random_cotangent(rng, space)
                try:
                    report = run(K, gk)
                    break
                except HypothesisError:
                    rejected += 1
            if report is None:
                failures.append(f"instance {k}: no admissible K in {scenario.attempts} draws")
            elif not report.passed:
                failures.append(f"instance {k}: {'; '.join(report.failures)}")
        residual = f"{len(failures)} failing; first {failures[0]}" if failures else "0"
        note = f"{rejected} draws rejected by the hypotheses" if rejected else ""
        col.add(Finding(check, f"{scenario.instances} random instances", not failures, residual, note))


RUNNERS: dict[str, Callable[[Any, Collector], None]] = {
    "gk-verify": run_gk_verify,
    "courant-axioms": run_courant_axioms,
    "reduction": run_reduction,
    "tduality": run_reduction,
    "bialg": run_bialg,
    "linear-lemmas": run_linear_lemmas,
}


def run_scenario(scenario: Scenario, include_timings: bool | None = None) -> Report:
    """Runs every check of a scenario; raises :class:`ScenarioError` only for invalid data."""
    timings = settings.include_timings if include_timings is None else include_timings
    col = Collector(timings)
    logger.info(f"Running scenario '{scenario.name}' ({scenario.kind})")
    RUNNERS[scenario.kind](scenario, col)
    report = Report.assemble(scenario.name, scenario.kind, col.entries, getattr(scenario, "seed", None))
    logger.info(f"Scenario '{scenario.name}': {report.status} ({len(report.failures)} failed)")
    return report
