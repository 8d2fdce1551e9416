"""Exact exterior calculus on coordinate charts.

Coefficients live in Q(i)(x_1, ..., x_k) where x_1, ..., x_k are the chart's
``full`` coordinates. A coefficient is stored as a pair (re, im) of elements of
the rational function field Q(x_1, ..., x_k), so every normalization (gcd
cancellation) runs over QQ. ``angle`` coordinates never occur inside
coefficients; only their differentials and coordinate vector fields do.

Forms are sparse maps from strictly increasing index tuples (wedge monomials)
to non-zero coefficients; mixed degrees are allowed so spinors are plain forms.
"""

from __future__ import annotations

import dataclasses
import io
import logging
import re
import tokenize
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import StrEnum
from functools import cache
from types import MappingProxyType
from typing import Any

from sympy import Add, Basic, Float, Function, I, Integer, Mul, Pow, Rational, Symbol
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.fields import FracField
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement

from .common import GKReduceError

logger = logging.getLogger(__name__)

_PLACEHOLDER = "_c"
_RESERVED_NAMES = frozenset({"i", "I"})
_TRANSFORMATIONS = (*standard_transformations, convert_xor)
_PARSE_GLOBALS = {"Integer": Integer, "Rational": Rational, "Float": Float, "Symbol": Symbol, "Function": Function}
_ALLOWED_OPS = frozenset({"+", "-", "*", "/", "^", "(", ")"})
_SKIPPED_TOKENS = frozenset({tokenize.NEWLINE, tokenize.NL, tokenize.ENDMARKER})
_NUMBER = re.compile(r"\d+(\.\d*)?")

Monomial = tuple[int, ...]


class SymcalcError(GKReduceError):
    """Raised for invalid exterior-calculus input."""


class ChartMismatchError(SymcalcError):
    """Raised when operands live on different charts or coefficient fields."""


class ExpressionError(SymcalcError):
    """Raised when a coefficient or form literal cannot be parsed."""


class EvaluationError(SymcalcError):
    """Raised when a coefficient cannot be evaluated at a point."""


def as_rational(value: Any):
    """Converts an int, sympy Rational or real ``QQ_I`` element to ``QQ``."""
    if hasattr(value, "y") and hasattr(value, "x"):
        if value.y:
            raise SymcalcError(f"Expected a real value, got {value}")
        return value.x
    return QQ.convert(value)


def sort_with_sign(indices: Sequence[int]) -> tuple[int, Monomial]:
    """Sorts distinct indices and returns the sign of the sorting permutation."""
    inversions = sum(1 for x in range(len(indices)) for y in range(x + 1, len(indices)) if indices[x] > indices[y])
    return (-1 if inversions % 2 else 1), tuple(sorted(indices))


class CoeffField:
    """The coefficient field Q(i)(variables), realized as pairs over Q(variables)."""

    __slots__ = ("_index", "frac", "variables")

    def __init__(self, variables: tuple[str, ...]):
        self.variables = variables
        self.frac = FracField(variables or (_PLACEHOLDER,), QQ, grlex)
        self._index = {name: k for k, name in enumerate(variables)}

    def __repr__(self) -> str:
        return f"CoeffField({', '.join(self.variables)})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CoeffField) and self.variables == other.variables

    def __hash__(self) -> int:
        return hash(("CoeffField", self.variables))

    @property
    def zero(self) -> Coeff:
        return Coeff(self, self.frac.zero, self.frac.zero)

    @property
    def one(self) -> Coeff:
        return Coeff(self, self.frac.one, self.frac.zero)

    @property
    def i(self) -> Coeff:
        return Coeff(self, self.frac.zero, self.frac.one)

    def from_int(self, value: int) -> Coeff:
        return Coeff(self, self.frac.ground_new(value), self.frac.zero)

    def from_rational(self, value: Any) -> Coeff:
        return Coeff(self, self.frac.ground_new(as_rational(value)), self.frac.zero)

    def from_gaussian(self, value: Any) -> Coeff:
        """Builds a constant coefficient from a ``QQ_I`` element."""
        value = QQ_I.convert(value)
        return Coeff(self, self.frac.ground_new(value.x), self.frac.ground_new(value.y))

    def has_variable(self, name: str) -> bool:
        return name in self._index

    def generator(self, name: str):
        return self.frac.gens[self._index[name]]

    def variable(self, name: str) -> Coeff:
        if name not in self._index:
            raise ExpressionError(f"'{name}' is not a coefficient variable of {self!r}")
        return Coeff(self, self.generator(name), self.frac.zero)

    def transfer(self, value: Coeff) -> Coeff:
        """Re-expresses a coefficient of another field in this one."""
        if value.field == self:
            return Coeff(self, value.re, value.im)
        return Coeff(self, self._transfer_frac(value.re), self._transfer_frac(value.im))

    def _transfer_frac(self, element):
        source_names = [str(symbol) for symbol in element.field.symbols]
        targets = [self._index.get(name) for name in source_names]
        ring = self.frac.ring

        def move(poly: PolyElement) -> PolyElement:
            terms = {}
            for monom, coeff in poly.iterterms():
                exponents = [0] * ring.ngens
                for k, power in enumerate(monom):
                    if not power:
                        continue
                    target = targets[k]
                    if target is None:
                        raise ChartMismatchError(
                            f"Coefficient depends on '{source_names[k]}', which {self!r} does not contain"
                        )
                    exponents[target] = power
                terms[tuple(exponents)] = coeff
            return ring.from_dict(terms)

        return self.frac.new(move(element.numer), move(element.denom))


@cache
def coeff_field(variables: tuple[str, ...]) -> CoeffField:
    return CoeffField(variables)


def _frac_str(element) -> str:
    return str(element)


def _eval_poly(poly: PolyElement, point: Sequence[Any]):
    total = QQ_I.zero
    for monom, coeff in poly.iterterms():
        term = QQ_I(coeff)
        for value, power in zip(point, monom, strict=False):
            if power:
                term = term * value**power
        total = total + term
    return total


class Coeff:
    """Exact element re + i*im of Q(i)(x_1, ..., x_k)."""

    __slots__ = ("field", "im", "re")

    def __init__(self, field: CoeffField, re, im):
        self.field = field
        self.re = re
        self.im = im

    def _lift(self, other: Any) -> Coeff | None:
        if isinstance(other, Coeff):
            if other.field is not self.field and other.field != self.field:
                raise ChartMismatchError(f"Coefficients from different fields: {self.field!r} and {other.field!r}")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return None

    def __add__(self, other: Any) -> Coeff:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Coeff(self.field, self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: Any) -> Coeff:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Coeff(self.field, self.re - o.re, self.im - o.im)

    def __rsub__(self, other: Any) -> Coeff:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> Coeff:
        return Coeff(self.field, -self.re, -self.im)

    def __mul__(self, other: Any) -> Coeff:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        zero = self.field.frac.zero
        if not b and not d:
            return Coeff(self.field, a * c, zero)
        if not b:
            return Coeff(self.field, a * c, a * d)
        if not d:
            return Coeff(self.field, a * c, b * c)
        return Coeff(self.field, a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> Coeff:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by the zero coefficient")
        a, b, c, d = self.re, self.im, o.re, o.im
        if not d:
            return Coeff(self.field, a / c, b / c)
        norm = c * c + d * d
        return Coeff(self.field, (a * c + b * d) / norm, (b * c - a * d) / norm)

    def __rtruediv__(self, other: Any) -> Coeff:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, exponent: int) -> Coeff:
        if exponent < 0:
            return self.field.one / (self ** (-exponent))
        result = self.field.one
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def conjugate(self) -> Coeff:
        return Coeff(self.field, self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    @property
    def is_zero(self) -> bool:
        return not self

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = self.field.from_int(other)
        if not isinstance(other, Coeff):
            return NotImplemented
        return self.field == other.field and self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.field.variables, self.re, self.im))

    def __repr__(self) -> str:
        return f"Coeff({self})"

    def __str__(self) -> str:
        one = self.field.frac.one
        if not self.im:
            return _frac_str(self.re)
        if self.im == one:
            imag = "i"
        elif self.im == -one:
            imag = "-i"
        else:
            imag = f"i*({_frac_str(self.im)})"
        if not self.re:
            return imag
        return f"{_frac_str(self.re)} + {imag}"

    def diff(self, name: str) -> Coeff:
        """Partial derivative along the coordinate ``name`` (zero for non-variables)."""
        if not self.field.has_variable(name):
            return self.field.zero
        gen = self.field.generator(name)
        re = self.re.diff(gen) if self.re else self.re
        im = self.im.diff(gen) if self.im else self.im
        return Coeff(self.field, re, im)

    @property
    def is_constant(self) -> bool:
        return all(part.numer.is_ground and part.denom.is_ground for part in (self.re, self.im))

    def constant_value(self):
        """Returns the ``QQ_I`` value of a constant coefficient."""
        if not self.is_constant:
            raise SymcalcError(f"Coefficient '{self}' is not constant")
        re = self.re.numer.LC / self.re.denom.LC
        im = self.im.numer.LC / self.im.denom.LC
        return QQ_I(re, im)

    def evaluate(self, point: Mapping[str, Any]):
        """Evaluates at a point given as ``QQ_I`` values for every variable."""
        try:
            values = [QQ_I.convert(point[name]) for name in self.field.variables]
        except KeyError as e:
            raise EvaluationError(f"Point does not assign coordinate {e.args[0]!r}") from e
        parts = []
        for part in (self.re, self.im):
            denom = _eval_poly(part.denom, values)
            if not denom:
                raise EvaluationError(f"Denominator of '{self}' vanishes at the point")
            parts.append(_eval_poly(part.numer, values) / denom)
        return parts[0] + QQ_I(0, 1) * parts[1]

    def subs(self, values: Mapping[str, Any]) -> Coeff:
        """Substitutes rational constants for variables; the field is unchanged."""
        parts = []
        for part in (self.re, self.im):
            numer, denom = part.numer, part.denom
            for name, value in values.items():
                if not self.field.has_variable(name):
                    continue
                gen = self.field.generator(name).to_poly()
                rational = as_rational(value)
                numer = numer.subs(gen, rational)
                denom = denom.subs(gen, rational)
            if not denom:
                raise EvaluationError(f"Denominator of '{self}' vanishes on the substitution {dict(values)}")
            parts.append(part.field.new(numer, denom))
        return Coeff(self.field, parts[0], parts[1])


class CoordinateKind(StrEnum):
    FULL = "full"
    ANGLE = "angle"


@dataclass(frozen=True)
class Coordinate:
    name: str
    kind: CoordinateKind = CoordinateKind.FULL


@dataclass(frozen=True)
class Chart:
    """Ordered coordinates; full ones may occur in coefficients, angle ones only as differentials."""

    name: str
    coordinates: tuple[Coordinate, ...]
    _index: dict[str, int] = dataclasses.field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        names = [c.name for c in self.coordinates]
        if len(set(names)) != len(names):
            raise SymcalcError(f"Chart '{self.name}' has repeated coordinate names: {names}")
        for name in names:
            if not name.isidentifier() or name in _RESERVED_NAMES or name == _PLACEHOLDER:
                raise SymcalcError(f"Invalid coordinate name '{name}' in chart '{self.name}'")
        object.__setattr__(self, "_index", {name: k for k, name in enumerate(names)})

    @classmethod
    def build(cls, name: str, coordinates: Iterable[str | tuple[str, str] | Coordinate]) -> Chart:
        items = []
        for coordinate in coordinates:
            if isinstance(coordinate, Coordinate):
                items.append(coordinate)
            elif isinstance(coordinate, str):
                items.append(Coordinate(coordinate))
            else:
                items.append(Coordinate(coordinate[0], CoordinateKind(coordinate[1])))
        return cls(name, tuple(items))

    @property
    def dimension(self) -> int:
        return len(self.coordinates)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.coordinates)

    @property
    def field(self) -> CoeffField:
        return coeff_field(tuple(c.name for c in self.coordinates if c.kind is CoordinateKind.FULL))

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError as e:
            raise ExpressionError(f"Chart '{self.name}' has no coordinate '{name}'") from e

    def has(self, name: str) -> bool:
        return name in self._index

    def is_full(self, k: int) -> bool:
        return self.coordinates[k].kind is CoordinateKind.FULL

    def without(self, names: Iterable[str], new_name: str) -> Chart:
        dropped = set(names)
        for name in dropped:
            self.index(name)
        return Chart(new_name, tuple(c for c in self.coordinates if c.name not in dropped))

    def coordinate_field(self, name: str) -> VectorField:
        return VectorField.coordinate(self, name)

    def differential(self, name: str) -> DiffForm:
        return DiffForm.differential(self, name)


def _check_same_chart(a: Chart, b: Chart) -> None:
    if a is not b and a != b:
        raise ChartMismatchError(f"Operands live on different charts: '{a.name}' and '{b.name}'")


def _accumulate(acc: dict[Monomial, Coeff], monom: Monomial, value: Coeff) -> None:
    current = acc.get(monom)
    acc[monom] = value if current is None else current + value


def _monomial_key(item: tuple[Monomial, Any]) -> tuple[int, Monomial]:
    return len(item[0]), item[0]


def _merge(a: Monomial, b: Monomial) -> tuple[int, Monomial] | None:
    if set(a) & set(b):
        return None
    inversions = sum(1 for x in a for y in b if x > y)
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


class DiffForm:
    """Inhomogeneous differential form on a chart."""

    __slots__ = ("chart", "terms")

    def __init__(self, chart: Chart, terms: Mapping[Monomial, Coeff] | None = None):
        clean: dict[Monomial, Coeff] = {}
        chart_field = chart.field
        for monom, coeff in (terms or {}).items():
            monom = tuple(monom)
            if any(b <= a for a, b in zip(monom, monom[1:], strict=False)):
                raise SymcalcError(f"Wedge monomial {monom} is not strictly increasing")
            if any(k < 0 or k >= chart.dimension for k in monom):
                raise SymcalcError(f"Wedge monomial {monom} is out of range for chart '{chart.name}'")
            if coeff.field != chart_field:
                raise ChartMismatchError(f"Coefficient field {coeff.field!r} does not match chart '{chart.name}'")
            if coeff:
                clean[monom] = coeff
        self.chart = chart
        self.terms = MappingProxyType(dict(sorted(clean.items(), key=_monomial_key)))

    @classmethod
    def _raw(cls, chart: Chart, acc: dict[Monomial, Coeff]) -> DiffForm:
        obj = cls.__new__(cls)
        obj.chart = chart
        obj.terms = MappingProxyType(dict(sorted(((m, c) for m, c in acc.items() if c), key=_monomial_key)))
        return obj

    @classmethod
    def zero(cls, chart: Chart) -> DiffForm:
        return cls._raw(chart, {})

    @classmethod
    def scalar(cls, chart: Chart, value: Coeff | int) -> DiffForm:
        if isinstance(value, int):
            value = chart.field.from_int(value)
        return cls(chart, {(): value})

    @classmethod
    def differential(cls, chart: Chart, name: str) -> DiffForm:
        return cls._raw(chart, {(chart.index(name),): chart.field.one})

    @property
    def degrees(self) -> set[int]:
        return {len(m) for m in self.terms}

    @property
    def is_homogeneous(self) -> bool:
        return len(self.degrees) <= 1

    def component(self, degree: int) -> DiffForm:
        return DiffForm._raw(self.chart, {m: c for m, c in self.terms.items() if len(m) == degree})

    def coefficient(self, monom: Monomial) -> Coeff:
        return self.terms.get(tuple(monom), self.chart.field.zero)

    def __add__(self, other: DiffForm) -> DiffForm:
        if not isinstance(other, DiffForm):
            return NotImplemented
        _check_same_chart(self.chart, other.chart)
        acc = dict(self.terms)
        for monom, coeff in other.terms.items():
            _accumulate(acc, monom, coeff)
        return DiffForm._raw(self.chart, acc)

    def __sub__(self, other: DiffForm) -> DiffForm:
        if not isinstance(other, DiffForm):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> DiffForm:
        return DiffForm._raw(self.chart, {m: -c for m, c in self.terms.items()})

    def scale(self, value: Coeff | int) -> DiffForm:
        if isinstance(value, int):
            value = self.chart.field.from_int(value)
        if not value:
            return DiffForm.zero(self.chart)
        return DiffForm._raw(self.chart, {m: value * c for m, c in self.terms.items()})

    def __mul__(self, value: Coeff | int) -> DiffForm:
        if not isinstance(value, Coeff | int):
            return NotImplemented
        return self.scale(value)

    __rmul__ = __mul__

    def wedge(self, other: DiffForm) -> DiffForm:
        return wedge(self, other)

    def conjugate(self) -> DiffForm:
        return DiffForm._raw(self.chart, {m: c.conjugate() for m, c in self.terms.items()})

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiffForm):
            return NotImplemented
        return self.chart == other.chart and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash((self.chart.name, tuple(self.terms.items())))

    def __repr__(self) -> str:
        return f"DiffForm({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.chart.names
        parts = []
        for monom, coeff in self.terms.items():
            text = str(coeff)
            if not monom:
                parts.append(f"({text})")
                continue
            wedge_text = "^".join(f"d{names[k]}" for k in monom)
            if text == "1":
                parts.append(wedge_text)
            elif text == "-1":
                parts.append(f"-{wedge_text}")
            else:
                parts.append(f"({text})*{wedge_text}")
        return " + ".join(parts)


class VectorField:
    """Vector field on a chart, one coefficient per coordinate."""

    __slots__ = ("chart", "components")

    def __init__(self, chart: Chart, components: Sequence[Coeff]):
        if len(components) != chart.dimension:
            raise SymcalcError(
                f"Vector field needs {chart.dimension} components on chart '{chart.name}', got {len(components)}"
            )
        for c in components:
            if c.field != chart.field:
                raise ChartMismatchError(f"Component field {c.field!r} does not match chart '{chart.name}'")
        self.chart = chart
        self.components = tuple(components)

    @classmethod
    def zero(cls, chart: Chart) -> VectorField:
        return cls(chart, [chart.field.zero] * chart.dimension)

    @classmethod
    def coordinate(cls, chart: Chart, name: str) -> VectorField:
        k = chart.index(name)
        f = chart.field
        return cls(chart, [f.one if j == k else f.zero for j in range(chart.dimension)])

    def __add__(self, other: VectorField) -> VectorField:
        if not isinstance(other, VectorField):
            return NotImplemented
        _check_same_chart(self.chart, other.chart)
        return VectorField(self.chart, [a + b for a, b in zip(self.components, other.components, strict=True)])

    def __sub__(self, other: VectorField) -> VectorField:
        if not isinstance(other, VectorField):
            return NotImplemented
        _check_same_chart(self.chart, other.chart)
        return VectorField(self.chart, [a - b for a, b in zip(self.components, other.components, strict=True)])

    def __neg__(self) -> VectorField:
        return VectorField(self.chart, [-a for a in self.components])

    def scale(self, value: Coeff | int) -> VectorField:
        return VectorField(self.chart, [value * a for a in self.components])

    def __mul__(self, value: Coeff | int) -> VectorField:
        if not isinstance(value, Coeff | int):
            return NotImplemented
        return self.scale(value)

    __rmul__ = __mul__

    def conjugate(self) -> VectorField:
        return VectorField(self.chart, [a.conjugate() for a in self.components])

    def __bool__(self) -> bool:
        return any(self.components)

    @property
    def is_zero(self) -> bool:
        return not self

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.chart == other.chart and self.components == other.components

    def __hash__(self) -> int:
        return hash((self.chart.name, self.components))

    def __repr__(self) -> str:
        return f"VectorField({self})"

    def __str__(self) -> str:
        parts = []
        for name, coeff in zip(self.chart.names, self.components, strict=True):
            if not coeff:
                continue
            text = str(coeff)
            if text == "1":
                parts.append(f"d/d{name}")
            elif text == "-1":
                parts.append(f"-d/d{name}")
            else:
                parts.append(f"({text})*d/d{name}")
        return " + ".join(parts) if parts else "0"


def wedge(a: DiffForm, b: DiffForm) -> DiffForm:
    """Graded-commutative exterior product."""
    _check_same_chart(a.chart, b.chart)
    acc: dict[Monomial, Coeff] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            merged = _merge(ma, mb)
            if merged is None:
                continue
            sign, monom = merged
            value = ca * cb
            _accumulate(acc, monom, value if sign > 0 else -value)
    return DiffForm._raw(a.chart, acc)


def exterior_d(a: DiffForm) -> DiffForm:
    chart = a.chart
    acc: dict[Monomial, Coeff] = {}
    for monom, coeff in a.terms.items():
        if coeff.is_constant:
            continue
        for k, coordinate in enumerate(chart.coordinates):
            if coordinate.kind is CoordinateKind.ANGLE or k in monom:
                continue
            partial = coeff.diff(coordinate.name)
            if not partial:
                continue
            position = sum(1 for j in monom if j < k)
            new = tuple(sorted((*monom, k)))
            _accumulate(acc, new, -partial if position % 2 else partial)
    return DiffForm._raw(chart, acc)


def interior(X: VectorField, a: DiffForm) -> DiffForm:
    """Contraction ι_X, an antiderivation of degree −1."""
    _check_same_chart(X.chart, a.chart)
    acc: dict[Monomial, Coeff] = {}
    for monom, coeff in a.terms.items():
        for p, k in enumerate(monom):
            component = X.components[k]
            if not component:
                continue
            value = component * coeff
            _accumulate(acc, monom[:p] + monom[p + 1 :], -value if p % 2 else value)
    return DiffForm._raw(a.chart, acc)


def lie_derivative(X: VectorField, a: DiffForm) -> DiffForm:
    """Cartan formula ℒ_X = d ι_X + ι_X d."""
    return exterior_d(interior(X, a)) + interior(X, exterior_d(a))


def apply(X: VectorField, f: Coeff) -> Coeff:
    """Directional derivative X(f)."""
    total = X.chart.field.zero
    for coordinate, component in zip(X.chart.coordinates, X.components, strict=True):
        if component and coordinate.kind is CoordinateKind.FULL:
            total = total + component * f.diff(coordinate.name)
    return total


def vector_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """Componentwise Lie bracket [X, Y]."""
    _check_same_chart(X.chart, Y.chart)
    return VectorField(X.chart, [apply(X, y) - apply(Y, x) for x, y in zip(X.components, Y.components, strict=True)])


def evaluate(a: DiffForm, point: Mapping[str, Any]) -> DiffForm:
    """Substitutes a point for the full coordinates; the result has constant coefficients."""
    f = a.chart.field
    acc = {}
    for monom, coeff in a.terms.items():
        try:
            acc[monom] = f.from_gaussian(coeff.evaluate(point))
        except EvaluationError as e:
            raise EvaluationError(f"Cannot evaluate coefficient of {_monomial_text(a.chart, monom)}: {e}") from e
    return DiffForm._raw(a.chart, acc)


def evaluate_vector_field(X: VectorField, point: Mapping[str, Any]) -> VectorField:
    f = X.chart.field
    return VectorField(X.chart, [f.from_gaussian(c.evaluate(point)) for c in X.components])


def _monomial_text(chart: Chart, monom: Monomial) -> str:
    return "^".join(f"d{chart.names[k]}" for k in monom) or "1"


@dataclass
class BasicReport:
    horizontal: bool
    invariant: bool
    obstructions: list[str] = dataclasses.field(default_factory=list)

    @property
    def basic(self) -> bool:
        return self.horizontal and self.invariant


def basic_check(a: DiffForm, verticals: Sequence[VectorField]) -> BasicReport:
    """A form descends along the verticals iff every ι_X a and ℒ_X a vanish."""
    report = BasicReport(horizontal=True, invariant=True)
    for k, X in enumerate(verticals):
        contraction = interior(X, a)
        if contraction:
            report.horizontal = False
            report.obstructions.append(f"vertical {k}: interior = {contraction}")
        derivative = lie_derivative(X, a)
        if derivative:
            report.invariant = False
            report.obstructions.append(f"vertical {k}: lie derivative = {derivative}")
    return report


def _level_map(chart: Chart, values: Mapping[str, Any], level_chart: Chart) -> list[int | None]:
    for name in values:
        k = chart.index(name)
        if not chart.is_full(k):
            raise SymcalcError(f"Level coordinate '{name}' must be a full coordinate")
    mapping: list[int | None] = []
    for coordinate in chart.coordinates:
        if coordinate.name in values:
            mapping.append(None)
            continue
        if not level_chart.has(coordinate.name):
            raise ChartMismatchError(f"Level chart '{level_chart.name}' lacks coordinate '{coordinate.name}'")
        target = level_chart.index(coordinate.name)
        if level_chart.coordinates[target].kind is not coordinate.kind:
            raise ChartMismatchError(f"Coordinate '{coordinate.name}' changes kind on chart '{level_chart.name}'")
        mapping.append(target)
    return mapping


def restrict_to_level(a: DiffForm, values: Mapping[str, Any], level_chart: Chart) -> DiffForm:
    """Pulls back to the slice where the listed full coordinates are fixed rational constants."""
    mapping = _level_map(a.chart, values, level_chart)
    target = level_chart.field
    acc: dict[Monomial, Coeff] = {}
    for monom, coeff in a.terms.items():
        if any(mapping[k] is None for k in monom):
            continue
        sign, new = sort_with_sign([mapping[k] for k in monom])  # type: ignore[misc]
        value = target.transfer(coeff.subs(values))
        _accumulate(acc, new, value if sign > 0 else -value)
    return DiffForm._raw(level_chart, acc)


def restrict_vector_field(X: VectorField, values: Mapping[str, Any], level_chart: Chart) -> VectorField:
    mapping = _level_map(X.chart, values, level_chart)
    target = level_chart.field
    components = [target.zero] * level_chart.dimension
    for k, component in enumerate(X.components):
        restricted = component.subs(values)
        if mapping[k] is None:
            if restricted:
                raise SymcalcError(
                    f"Vector field is not tangent to the level set: d/d{X.chart.names[k]} component is {restricted}"
                )
            continue
        components[mapping[k]] = target.transfer(restricted)  # type: ignore[index]
    return VectorField(level_chart, components)


def transfer(a: DiffForm, chart: Chart) -> DiffForm:
    """Re-expresses a form on another chart that contains every coordinate it uses."""
    target = chart.field
    acc: dict[Monomial, Coeff] = {}
    for monom, coeff in a.terms.items():
        sign, new = sort_with_sign([chart.index(a.chart.names[k]) for k in monom])
        value = target.transfer(coeff)
        _accumulate(acc, new, value if sign > 0 else -value)
    return DiffForm._raw(chart, acc)


def _to_coeff(expr: Any, chart: Chart) -> Coeff:
    f = chart.field
    if not isinstance(expr, Basic):
        raise ExpressionError(f"Unsupported expression '{expr}'")
    if expr is I:
        return f.i
    if isinstance(expr, Integer):
        return f.from_int(int(expr))
    if isinstance(expr, Rational):
        return f.from_rational(QQ(int(expr.p), int(expr.q)))
    if isinstance(expr, Float):
        raise ExpressionError(f"Floating-point literal '{expr}' is not allowed; write an exact fraction")
    if isinstance(expr, Symbol):
        if f.has_variable(expr.name):
            return f.variable(expr.name)
        if chart.has(expr.name):
            raise ExpressionError(f"Angle coordinate '{expr.name}' cannot appear inside a coefficient")
        raise ExpressionError(f"Unknown name '{expr.name}'")
    if isinstance(expr, Add):
        total = f.zero
        for arg in expr.args:
            total = total + _to_coeff(arg, chart)
        return total
    if isinstance(expr, Mul):
        product = f.one
        for arg in expr.args:
            product = product * _to_coeff(arg, chart)
        return product
    if isinstance(expr, Pow):
        base, exponent = expr.args
        if not isinstance(exponent, Integer):
            raise ExpressionError(f"Only integer exponents are allowed, got '{expr}'")
        value = _to_coeff(base, chart)
        if int(exponent) < 0 and not value:
            raise ExpressionError(f"Division by zero in '{expr}'")
        return value ** int(exponent)
    raise ExpressionError(f"Unsupported expression '{expr}'")


class ChartParser:
    """Parses coefficient, form and vector-field literals on a chart.

    Coefficients use integers, ``i``, ``+ - * / ^``, parentheses, full coordinate
    names and the names of earlier ``definitions``.
    """

    def __init__(self, chart: Chart, definitions: Mapping[str, str] | None = None):
        self.chart = chart
        self._locals: dict[str, Any] = {"i": I}
        for name in chart.names:
            self._locals[name] = Symbol(name)
        for name, text in (definitions or {}).items():
            if not name.isidentifier() or name in self._locals:
                raise ExpressionError(f"Definition name '{name}' is invalid or clashes with a coordinate")
            expr = self._parse(str(text))
            _to_coeff(expr, chart)
            self._locals[name] = expr

    def _check_tokens(self, text: str) -> None:
        """Admits integers, ``+ - * / ^``, parentheses and known names only."""
        try:
            tokens = list(tokenize.generate_tokens(io.StringIO(text).readline))
        except (tokenize.TokenError, SyntaxError) as e:
            raise ExpressionError(f"Cannot parse '{text}': {e}") from e
        for tok in tokens:
            if tok.type in _SKIPPED_TOKENS:
                continue
            if tok.type == tokenize.NUMBER and _NUMBER.fullmatch(tok.string):
                continue
            if tok.type == tokenize.OP and tok.string in _ALLOWED_OPS:
                continue
            if tok.type == tokenize.NAME and tok.string in self._locals:
                continue
            if tok.type == tokenize.NAME and tok.string.isidentifier():
                raise ExpressionError(f"Unknown name '{tok.string}' in '{text}'")
            raise ExpressionError(f"Unexpected '{tok.string}' in '{text}'")

    def _parse(self, text: str) -> Any:
        text = text.strip()
        if not text:
            raise ExpressionError("Empty expression")
        self._check_tokens(text)
        try:
            return parse_expr(
                text,
                local_dict=dict(self._locals),
                global_dict=dict(_PARSE_GLOBALS),
                transformations=_TRANSFORMATIONS,
            )
        except Exception as e:  # tokenize.TokenError is not a SyntaxError
            raise ExpressionError(f"Cannot parse '{text}': {e}") from e

    def coeff(self, text: str | int) -> Coeff:
        try:
            return _to_coeff(self._parse(str(text)), self.chart)
        except ZeroDivisionError as e:
            raise ExpressionError(f"Division by zero in '{text}'") from e

    def constant(self, text: str | int):
        value = self.coeff(text)
        if not value.is_constant:
            raise ExpressionError(f"Expected a constant, got '{text}'")
        return value.constant_value()

    def point(self, values: Mapping[str, str | int]) -> dict[str, Any]:
        point = {}
        for name, text in values.items():
            self.chart.index(name)
            point[name] = self.constant(text)
        return point

    def monomial(self, text: str) -> tuple[int, Monomial]:
        """Parses ``"du^dphi1"`` (``"1"`` for degree 0) into (sign, sorted monomial)."""
        text = text.strip()
        if text in ("", "1"):
            return 1, ()
        indices = []
        for token in text.split("^"):
            token = token.strip()
            if not token.startswith("d") or not self.chart.has(token[1:]):
                raise ExpressionError(f"'{token}' is not the differential of a coordinate of '{self.chart.name}'")
            indices.append(self.chart.index(token[1:]))
        if len(set(indices)) != len(indices):
            raise ExpressionError(f"Repeated differential in '{text}'")
        return sort_with_sign(indices)

    def form(self, terms: Mapping[str, str | int]) -> DiffForm:
        acc: dict[Monomial, Coeff] = {}
        for key, text in terms.items():
            sign, monom = self.monomial(key)
            value = self.coeff(text)
            _accumulate(acc, monom, value if sign > 0 else -value)
        return DiffForm._raw(self.chart, acc)

    def vector_field(self, components: Mapping[str, str | int]) -> VectorField:
        f = self.chart.field
        values = [f.zero] * self.chart.dimension
        for name, text in components.items():
            values[self.chart.index(name)] = self.coeff(text)
        return VectorField(self.chart, values)
