"""Scenario files: JSON documents validated by pydantic, one model per scenario kind.

Mathematical expressions are strings in the coefficient grammar of
:class:`gkreduce.symcalc.ChartParser`; forms are maps from wedge monomials
(``"du^dphi1"``, ``"1"`` for degree 0) to coefficients.
"""

import json
import logging
from importlib import resources
from pathlib import Path
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, model_validator

from .common import GKReduceError
from .settings import settings

logger = logging.getLogger(__name__)

Expr = str | int
Form = dict[str, Expr]
VectorSpec = dict[str, Expr]
ExprMatrix = list[list[Expr]]


class ScenarioError(GKReduceError):
    """Raised for a scenario that cannot be read or does not validate."""

    def __init__(self, message: str, source: str = "<scenario>", field: str | None = None, line: int | None = None):
        self.source = source
        self.field = field
        self.line = line
        location = source
        if line is not None:
            location += f":{line}"
        if field:
            location += f": {field}"
        super().__init__(f"{location}: {message}")


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class CoordinateSpec(_Model):
    name: str
    kind: Literal["full", "angle"] = "full"


class ChartSpec(_Model):
    name: str = "M"
    coordinates: list[CoordinateSpec] = Field(min_length=1)
    definitions: dict[str, str] = Field(default_factory=dict)


class BlockSpec(_Model):
    symplectic: ExprMatrix | None = None
    complex: ExprMatrix | None = None

    @model_validator(mode="after")
    def _one_kind(self) -> "BlockSpec":
        if (self.symplectic is None) == (self.complex is None):
            raise ValueError("a block is either 'symplectic' or 'complex'")
        return self


class StructureSpec(_Model):
    """A generalized complex structure: explicit matrix or classical blocks, optionally in a frame."""

    matrix: ExprMatrix | None = None
    blocks: list[BlockSpec] | None = None
    frame: list[VectorSpec] | None = None
    b_field: Form | None = None

    @model_validator(mode="after")
    def _one_source(self) -> "StructureSpec":
        if (self.matrix is None) == (self.blocks is None):
            raise ValueError("give exactly one of 'matrix' and 'blocks'")
        return self


class PairSpec(_Model):
    J1: StructureSpec
    J2: StructureSpec


class GKControls(_Model):
    untwisted: bool = True


class GKModel(_Model):
    chart: ChartSpec
    structures: PairSpec
    H: Form = Field(default_factory=dict)
    sample_points: list[dict[str, Expr]] = Field(default_factory=list)
    spinors: dict[Literal["J1", "J2"], Form] = Field(default_factory=dict)
    controls: GKControls = Field(default_factory=GKControls)


class _ScenarioBase(_Model):
    name: str
    description: str = ""


class GKVerifyScenario(_ScenarioBase, GKModel):
    kind: Literal["gk-verify"]


class CourantAxiomsScenario(_ScenarioBase):
    kind: Literal["courant-axioms"]
    seed: int
    chart: ChartSpec
    sections: int = Field(6, ge=3)
    triples: int = Field(100, ge=1)
    symmetrization_pairs: int = Field(20, ge=0)
    psi_instances: int = Field(50, ge=0)
    clifford_pairs: int = Field(100, ge=0)
    naturality_pairs: int = Field(10, ge=0)
    degree: int = Field(2, ge=0, le=4)
    corrupted_control: bool = True


class MomentSpec(_Model):
    function: str
    tag: Literal["J1", "J2"]


class SectionSpec(_Model):
    vector: VectorSpec = Field(default_factory=dict)
    form: Form = Field(default_factory=dict)


class ConnectionSpec(_Model):
    Theta: list[Form]
    ThetaHat: list[Form]


class GroupElementSpec(_Model):
    name: str
    matrix: list[list[int]] | None = None
    b: list[list[int]] | None = None

    @model_validator(mode="after")
    def _one_source(self) -> "GroupElementSpec":
        if (self.matrix is None) == (self.b is None):
            raise ValueError("give exactly one of 'matrix' and 'b'")
        return self


class SubtorusSpec(_Model):
    name: str
    basis: list[list[int]] = Field(min_length=1)
    mode: Literal["isotropic", "nondegenerate"] | None = None
    expect: Literal["isotropic", "nondegenerate", "none"]


class ReductionControls(_Model):
    pairing_scale: int | None = None


class ReductionScenario(_ScenarioBase):
    kind: Literal["reduction", "tduality"]
    chart: ChartSpec
    structures: PairSpec
    H: Form = Field(default_factory=dict)
    moments: list[MomentSpec] = Field(min_length=1)
    level: dict[str, Expr] = Field(default_factory=dict)
    expected_sections: list[SectionSpec] | None = None
    expected_pairing: ExprMatrix | None = None
    connections: ConnectionSpec | None = None
    group_elements: list[GroupElementSpec] = Field(default_factory=list)
    subtori: list[SubtorusSpec] = Field(default_factory=list)
    sample_points: list[dict[str, Expr]] = Field(default_factory=list)
    controls: ReductionControls = Field(default_factory=ReductionControls)
    check_structure_invariance: bool = False
    generic_point_lemmas: bool = False
    gk_model: GKModel | None = None

    @model_validator(mode="after")
    def _consistent(self) -> "ReductionScenario":
        if self.expected_sections is not None and len(self.expected_sections) != len(self.moments):
            raise ValueError("expected_sections needs one entry per moment")
        if self.kind == "tduality" and not self.group_elements:
            raise ValueError("a tduality scenario needs at least one group element")
        if (self.group_elements or self.controls.pairing_scale is not None) and self.connections is None:
            raise ValueError("group elements and pairing controls need connections")
        return self


class AlgebraSpec(_Model):
    names: list[str] = Field(min_length=1)
    brackets: dict[str, Expr] = Field(default_factory=dict)


class BialgExpect(_Model):
    factorizable: bool = True
    commuting: bool | None = None


class BialgControls(_Model):
    perturbed_brackets: dict[str, Expr] | None = None
    expected_jacobi: str | None = None
    non_factorizable_r: dict[str, Expr] | None = None


class BialgScenario(_ScenarioBase):
    kind: Literal["bialg"]
    algebra: AlgebraSpec
    r: dict[str, Expr]
    expect: BialgExpect = Field(default_factory=BialgExpect)
    controls: BialgControls = Field(default_factory=BialgControls)
    abelian_dims: list[int] = Field(default_factory=list)


class LinearLemmasScenario(_ScenarioBase):
    kind: Literal["linear-lemmas"]
    seed: int
    instances: int = Field(50, ge=1)
    planes: list[int] = Field(default_factory=lambda: [1, 2])
    attempts: int = Field(20, ge=1)

    @model_validator(mode="after")
    def _planes(self) -> "LinearLemmasScenario":
        if not self.planes or any(p < 1 or p > 2 for p in self.planes):
            raise ValueError("planes must be 1 or 2 (n <= 4)")
        return self


Scenario = Annotated[
    GKVerifyScenario | CourantAxiomsScenario | ReductionScenario | BialgScenario | LinearLemmasScenario,
    Field(discriminator="kind"),
]

_ADAPTER: TypeAdapter[Scenario] = TypeAdapter(Scenario)


def _field_path(loc: tuple) -> str:
    return ".".join(str(part) for part in loc)


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    """Parses and validates a scenario; every problem becomes a :class:`ScenarioError`."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(e.msg, source, line=e.lineno) from e
    try:
        return _ADAPTER.validate_python(data)
    except ValidationError as e:
        first = e.errors()[0]
        others = f" (and {e.error_count() - 1} more)" if e.error_count() > 1 else ""
        raise ScenarioError(first["msg"] + others, source, field=_field_path(first["loc"])) from e


def _bundled_dir():
    return resources.files("gkreduce") / "bundled"


def _search_dirs() -> list:
    dirs = []
    if settings.scenarios_dir:
        dirs.append(Path(settings.scenarios_dir))
    dirs.append(_bundled_dir())
    return dirs


def bundled_names() -> list[str]:
    names = set()
    for directory in _search_dirs():
        if not directory.is_dir():
            logger.warning(f"Scenario directory {directory} does not exist")
            continue
        names.update(entry.name[: -len(".json")] for entry in directory.iterdir() if entry.name.endswith(".json"))
    return sorted(names)


def load_bundled(name: str) -> Scenario:
    for directory in _search_dirs():
        candidate = directory / f"{name}.json"
        if candidate.is_file():
            return parse_scenario(candidate.read_text(encoding="utf-8"), f"{name}.json")
    raise KeyError(name)


def load_file(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioError(f"cannot read file: {e.strerror}", str(path)) from e
    return parse_scenario(text, str(path))


def catalog() -> list[tuple[str, str, str]]:
    """(name, kind, description) for every scenario that can be run by name."""
    rows = []
    for name in bundled_names():
        try:
            scenario = load_bundled(name)
        except ScenarioError as e:
            logger.error(f"Invalid scenario '{name}': {e}")
            rows.append((name, "invalid", str(e)))
            continue
        rows.append((name, scenario.kind, scenario.description))
    return rows
