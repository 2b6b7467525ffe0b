"""Finite carriers, events, nonnegative functions and measures.

Everything here is exact: weights and function values are
:class:`fractions.Fraction` and every object is immutable. Floats are
rejected at construction so that no rounding can leak into identities that
are meant to hold with equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Mapping, Union

from .errors import IncompatibleCarriers, NonPositiveScale, NullRestriction, ZeroMeasure

RationalLike = Union[int, Fraction, str]


def as_rational(value) -> Fraction:
    """Convert ``value`` to a Fraction, refusing floating point input."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if any(ch in text for ch in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"not an exact rational: {value!r}")


@dataclass(frozen=True)
class Carrier:
    """An ordered, finite, non-empty set of atom labels."""

    atoms: tuple[str, ...]

    def __post_init__(self):
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise ValueError("a carrier needs at least one atom")
        if len(set(atoms)) != len(atoms):
            seen = set()
            dup = next(a for a in atoms if a in seen or seen.add(a))
            raise ValueError(f"duplicate atom {dup!r}")

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __contains__(self, atom):
        return atom in self._index

    @property
    def _index(self) -> dict[str, int]:
        try:
            return self.__dict__["_index_cache"]
        except KeyError:
            index = {a: i for i, a in enumerate(self.atoms)}
            object.__setattr__(self, "_index_cache", index)
            return index

    def index(self, atom: str) -> int:
        try:
            return self._index[atom]
        except KeyError:
            raise KeyError(f"unknown atom {atom!r}") from None

    def event(self, members: Iterable[str] = ()) -> Event:
        return Event(self, frozenset(members))

    @property
    def full(self) -> Event:
        return Event(self, frozenset(self.atoms))

    @property
    def empty(self) -> Event:
        return Event(self, frozenset())

    def __eq__(self, other):
        return isinstance(other, Carrier) and self.atoms == other.atoms

    def __hash__(self):
        return hash(self.atoms)


def _same_carrier(a: Carrier, b: Carrier) -> None:
    if a != b:
        raise IncompatibleCarriers(
            f"carriers differ: {a.atoms!r} vs {b.atoms!r}"
        )


@dataclass(frozen=True)
class Event:
    """A subset of a carrier. Iteration follows carrier order."""

    carrier: Carrier
    members: frozenset

    def __post_init__(self):
        members = frozenset(self.members)
        object.__setattr__(self, "members", members)
        unknown = [a for a in members if a not in self.carrier]
        if unknown:
            raise KeyError(f"unknown atom {sorted(unknown)[0]!r}")

    def __iter__(self):
        return (a for a in self.carrier.atoms if a in self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, atom):
        return atom in self.members

    def __bool__(self):
        return bool(self.members)

    def __or__(self, other: Event) -> Event:
        _same_carrier(self.carrier, other.carrier)
        return Event(self.carrier, self.members | other.members)

    def __and__(self, other: Event) -> Event:
        _same_carrier(self.carrier, other.carrier)
        return Event(self.carrier, self.members & other.members)

    def __le__(self, other: Event) -> bool:
        _same_carrier(self.carrier, other.carrier)
        return self.members <= other.members

    def __lt__(self, other: Event) -> bool:
        _same_carrier(self.carrier, other.carrier)
        return self.members < other.members

    def complement(self) -> Event:
        return Event(self.carrier, frozenset(self.carrier.atoms) - self.members)

    def sort_key(self) -> tuple[int, ...]:
        """Lexicographic key over carrier positions of the members."""
        return tuple(sorted(self.carrier.index(a) for a in self.members))

    def indicator(self) -> NonNegFunction:
        return NonNegFunction(
            self.carrier,
            tuple(Fraction(1) if a in self.members else Fraction(0) for a in self.carrier),
        )

    def label(self) -> str:
        return "{" + ",".join(self) + "}"

    def __repr__(self):
        return f"Event({self.label()})"


@dataclass(frozen=True)
class NonNegFunction:
    """A total nonnegative rational function on a carrier, stored in carrier order."""

    carrier: Carrier
    values: tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(as_rational(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) != len(self.carrier):
            raise ValueError("function must have one value per atom")
        for atom, v in zip(self.carrier, values):
            if v < 0:
                raise ValueError(f"negative value {v} at atom {atom!r}")

    @classmethod
    def from_mapping(cls, carrier: Carrier, mapping: Mapping[str, RationalLike], default=0):
        unknown = [a for a in mapping if a not in carrier]
        if unknown:
            raise KeyError(f"unknown atom {unknown[0]!r}")
        return cls(carrier, tuple(as_rational(mapping.get(a, default)) for a in carrier))

    @classmethod
    def constant(cls, carrier: Carrier, value: RationalLike) -> NonNegFunction:
        v = as_rational(value)
        return cls(carrier, (v,) * len(carrier))

    def __call__(self, atom: str) -> Fraction:
        return self.values[self.carrier.index(atom)]

    def items(self):
        return zip(self.carrier.atoms, self.values)

    def __add__(self, other: NonNegFunction) -> NonNegFunction:
        _same_carrier(self.carrier, other.carrier)
        return NonNegFunction(self.carrier, tuple(a + b for a, b in zip(self.values, other.values)))

    def __mul__(self, other) -> NonNegFunction:
        if isinstance(other, Event):
            other = other.indicator()
        if isinstance(other, NonNegFunction):
            _same_carrier(self.carrier, other.carrier)
            return NonNegFunction(
                self.carrier, tuple(a * b for a, b in zip(self.values, other.values))
            )
        c = as_rational(other)
        return NonNegFunction(self.carrier, tuple(c * v for v in self.values))

    __rmul__ = __mul__

    def support(self) -> Event:
        return Event(self.carrier, frozenset(a for a, v in self.items() if v != 0))


def as_function(f) -> NonNegFunction:
    """Accept an :class:`Event` wherever a function is expected."""
    if isinstance(f, Event):
        return f.indicator()
    if isinstance(f, NonNegFunction):
        return f
    raise TypeError(f"expected an Event or NonNegFunction, got {type(f).__name__}")


@dataclass(frozen=True)
class SigmaFiniteMeasure:
    """A measure on a finite carrier with finite nonnegative rational weights.

    The zero measure is not a valid value. On a finite carrier with finite
    weights sigma-finiteness holds automatically.
    """

    carrier: Carrier
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(as_rational(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if len(weights) != len(self.carrier):
            raise ValueError("measure must have one weight per atom")
        for atom, w in zip(self.carrier, weights):
            if w < 0:
                raise ValueError(f"negative weight {w} at atom {atom!r}")
        if not any(weights):
            raise ZeroMeasure("the zero measure generates no conditional probabilities")

    @classmethod
    def from_mapping(cls, carrier: Carrier, mapping: Mapping[str, RationalLike]):
        unknown = [a for a in mapping if a not in carrier]
        if unknown:
            raise KeyError(f"unknown atom {unknown[0]!r}")
        return cls(carrier, tuple(as_rational(mapping.get(a, 0)) for a in carrier))

    @classmethod
    def counting(cls, carrier: Carrier) -> SigmaFiniteMeasure:
        return cls(carrier, (Fraction(1),) * len(carrier))

    def __call__(self, atom: str) -> Fraction:
        return self.weights[self.carrier.index(atom)]

    def items(self):
        return zip(self.carrier.atoms, self.weights)

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def support(self) -> Event:
        return Event(self.carrier, frozenset(a for a, w in self.items() if w != 0))


def integrate(f, m: SigmaFiniteMeasure) -> Fraction:
    """Exact sum of ``f(w) * m(w)`` over the carrier."""
    f = as_function(f)
    _same_carrier(f.carrier, m.carrier)
    return sum((v * w for v, w in zip(f.values, m.weights)), Fraction(0))


def mass(B: Event, m: SigmaFiniteMeasure) -> Fraction:
    _same_carrier(B.carrier, m.carrier)
    return sum((w for a, w in m.items() if a in B.members), Fraction(0))


def scale(m: SigmaFiniteMeasure, c: RationalLike) -> SigmaFiniteMeasure:
    c = as_rational(c)
    if c <= 0:
        raise NonPositiveScale(f"scale factor must be positive, got {c}")
    return SigmaFiniteMeasure(m.carrier, tuple(c * w for w in m.weights))


def restrict(m: SigmaFiniteMeasure, B: Event) -> SigmaFiniteMeasure:
    _same_carrier(m.carrier, B.carrier)
    weights = tuple(w if a in B.members else Fraction(0) for a, w in m.items())
    if not any(weights):
        raise NullRestriction(f"{B.label()} has zero mass; restriction is the zero measure")
    return SigmaFiniteMeasure(m.carrier, weights)


@dataclass(frozen=True)
class Statistic:
    """A total map from a domain carrier to a codomain carrier."""

    domain: Carrier
    codomain: Carrier
    images: tuple[str, ...]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if len(images) != len(self.domain):
            raise ValueError("statistic must map every domain atom")
        for atom, t in zip(self.domain, images):
            if t not in self.codomain:
                raise KeyError(f"atom {atom!r} maps to unknown codomain atom {t!r}")

    @classmethod
    def from_mapping(cls, domain: Carrier, codomain: Carrier, mapping: Mapping[str, str]):
        missing = [a for a in domain if a not in mapping]
        if missing:
            raise KeyError(f"statistic undefined at atom {missing[0]!r}")
        unknown = [a for a in mapping if a not in domain]
        if unknown:
            raise KeyError(f"unknown atom {unknown[0]!r}")
        return cls(domain, codomain, tuple(mapping[a] for a in domain))

    @classmethod
    def from_function(cls, domain: Carrier, codomain: Carrier, fn: Callable[[str], str]):
        return cls(domain, codomain, tuple(fn(a) for a in domain))

    @classmethod
    def identity(cls, carrier: Carrier) -> Statistic:
        return cls(carrier, carrier, carrier.atoms)

    def __call__(self, atom: str) -> str:
        return self.images[self.domain.index(atom)]

    def items(self):
        return zip(self.domain.atoms, self.images)

    def fiber(self, t: str) -> Event:
        if t not in self.codomain:
            raise KeyError(f"unknown codomain atom {t!r}")
        return Event(self.domain, frozenset(a for a, s in self.items() if s == t))

    def preimage(self, C: Event) -> Event:
        _same_carrier(C.carrier, self.codomain)
        return Event(self.domain, frozenset(a for a, s in self.items() if s in C.members))

    def pullback(self, phi: NonNegFunction) -> NonNegFunction:
        """The composite ``phi(T)`` as a function on the domain."""
        _same_carrier(phi.carrier, self.codomain)
        return NonNegFunction(self.domain, tuple(phi(t) for t in self.images))

    def then(self, other: Statistic) -> Statistic:
        """Composition ``other ∘ self``."""
        _same_carrier(self.codomain, other.domain)
        return Statistic(self.domain, other.codomain, tuple(other(t) for t in self.images))


def pushforward(m: SigmaFiniteMeasure, T: Statistic) -> SigmaFiniteMeasure:
    _same_carrier(m.carrier, T.domain)
    sums = dict.fromkeys(T.codomain.atoms, Fraction(0))
    for t, w in zip(T.images, m.weights):
        sums[t] += w
    return SigmaFiniteMeasure(T.codomain, tuple(sums.values()))
