"""Rényi states, bunches and conditional families.

A :class:`RenyiState` is a measure known only up to a positive factor. It
assigns ``P(A|B) = mu(A B) / mu(B)`` to every event ``B`` of positive mass,
and nothing else: total mass is not part of the state.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

from .checks import Check, Report
from .errors import (
    BunchAxiomError,
    CarrierTooLarge,
    DegenerateFamily,
    IncompatibleCarriers,
    InvalidBunch,
    InvalidFamily,
    NotElementary,
    NotRepresentable,
)
from .measure import (
    Carrier,
    Event,
    NonNegFunction,
    SigmaFiniteMeasure,
    as_function,
    integrate,
    mass,
)


def states_equal(P: RenyiState | SigmaFiniteMeasure, Q: RenyiState | SigmaFiniteMeasure) -> bool:
    """True iff the two representatives differ by one positive factor."""
    p = _representative(P)
    q = _representative(Q)
    if p.carrier != q.carrier:
        return False
    for wp, wq in zip(p.weights, q.weights):
        if wp or wq:
            if not (wp and wq):
                return False
            c = wq / wp
            break
    return all(wq == c * wp for wp, wq in zip(p.weights, q.weights))


def _representative(P) -> SigmaFiniteMeasure:
    return P.representative if isinstance(P, RenyiState) else P


@dataclass(frozen=True, eq=False)
class RenyiState:
    """The class ``[mu] = {c mu | c > 0}`` held through one representative."""

    representative: SigmaFiniteMeasure

    @property
    def carrier(self) -> Carrier:
        return self.representative.carrier

    def normalized(self) -> tuple[Fraction, ...]:
        """Representative rescaled so its first nonzero weight is 1."""
        w = self.representative.weights
        first = next(x for x in w if x)
        return tuple(x / first for x in w)

    def __eq__(self, other):
        if not isinstance(other, RenyiState):
            return NotImplemented
        return states_equal(self, other)

    def __hash__(self):
        return hash((self.carrier, self.normalized()))

    def __repr__(self):
        body = ", ".join(f"{a}: {w}" for a, w in self.representative.items())
        return f"RenyiState[{body}]"


def is_elementary_condition(P: RenyiState, B: Event) -> bool:
    return mass(B, P.representative) > 0


def condition(P: RenyiState, A, B: Event) -> Fraction:
    """``P(A|B)`` for a nonnegative function (or event) ``A``."""
    mu = P.representative
    A = as_function(A)
    if A.carrier != B.carrier:
        raise IncompatibleCarriers("A and B live on different carriers")
    denominator = mass(B, mu)
    if denominator == 0:
        raise NotElementary(f"{B.label()} has zero mass and is not an elementary condition")
    return integrate(A * B, mu) / denominator


def _sorted_events(events: Iterable[Event]) -> tuple[Event, ...]:
    return tuple(sorted(set(events), key=lambda e: (len(e), e.sort_key())))


@dataclass(frozen=True)
class Bunch:
    """A finite family of conditioning events.

    Construction does not enforce the axioms; use :func:`validate_bunch` or
    :func:`close_under_union`. Members are deduplicated and kept in a
    canonical order (by size, then carrier position).
    """

    carrier: Carrier
    conditions: tuple[Event, ...]

    def __post_init__(self):
        for B in self.conditions:
            if B.carrier != self.carrier:
                raise IncompatibleCarriers("bunch member lives on a different carrier")
        object.__setattr__(self, "conditions", _sorted_events(self.conditions))

    def __iter__(self):
        return iter(self.conditions)

    def __len__(self):
        return len(self.conditions)

    def __contains__(self, B):
        return B in self.conditions

    def nested_pairs(self):
        """All pairs ``(B, C)`` of members with ``B ⊆ C``, reflexive pairs included."""
        for C in self.conditions:
            for B in self.conditions:
                if B.members <= C.members:
                    yield B, C


def validate_bunch(bunch: Bunch) -> Report:
    conditions = bunch.conditions
    empty = next((B for B in conditions if not B), None)
    axiom1 = Check(
        "axiom 1 (empty set excluded)",
        empty is None,
        "" if empty is None else "the empty event is a member",
        empty,
    )

    members = set(conditions)
    missing = None
    for B, C in combinations(conditions, 2):
        if (B | C) not in members:
            missing = (B, C)
            break
    axiom2 = Check(
        "axiom 2 (closed under union)",
        missing is None,
        "" if missing is None else f"union of {missing[0].label()} and {missing[1].label()} is missing",
        missing,
    )

    covered = frozenset().union(*(B.members for B in conditions))
    uncovered = bunch.carrier.event(set(bunch.carrier.atoms) - covered)
    axiom3 = Check(
        "axiom 3 (covers the carrier)",
        not uncovered,
        "" if not uncovered else f"atoms {uncovered.label()} are not covered",
        uncovered if uncovered else None,
    )
    return Report((axiom1, axiom2, axiom3))


def close_under_union(conditions: Iterable[Event], carrier: Carrier | None = None) -> Bunch:
    """Smallest union-closed family containing ``conditions``."""
    conditions = list(conditions)
    if carrier is None:
        if not conditions:
            raise BunchAxiomError(3, "no conditions given, nothing covers the carrier")
        carrier = conditions[0].carrier
    if any(not B for B in conditions):
        raise BunchAxiomError(1, "the empty event cannot be a condition")
    family = set(conditions)
    covered = frozenset().union(*(B.members for B in family))
    if covered != frozenset(carrier.atoms):
        missing = carrier.event(set(carrier.atoms) - covered)
        raise BunchAxiomError(3, f"atoms {missing.label()} are not covered")
    frontier = set(family)
    while frontier:
        fresh = set()
        for B in frontier:
            for C in family:
                U = B | C
                if U not in family:
                    fresh.add(U)
        family |= fresh
        frontier = fresh
    return Bunch(carrier, tuple(family))


def maximal_bunch(P: RenyiState, limit: int = 2**16) -> Bunch:
    """All events of positive mass. Enumerates ``2**n`` subsets, so guarded by ``limit``."""
    carrier = P.carrier
    n = len(carrier)
    if 2**n > limit:
        raise CarrierTooLarge(
            f"2**{n} subsets exceed the limit {limit}; "
            "use is_elementary_condition to test single events instead"
        )
    weights = P.representative.weights
    conditions = []
    for bits in range(1, 2**n):
        if any(weights[i] for i in range(n) if bits >> i & 1):
            conditions.append(carrier.event(carrier.atoms[i] for i in range(n) if bits >> i & 1))
    return Bunch(carrier, tuple(conditions))


@dataclass(frozen=True)
class ConditionalFamily:
    """Probability vectors ``F(.|B)`` indexed by the members of a bunch."""

    bunch: Bunch
    table: Mapping[Event, NonNegFunction]

    def __post_init__(self):
        table = dict(self.table)
        object.__setattr__(self, "table", table)
        extra = [B for B in table if B not in self.bunch]
        if extra:
            raise InvalidFamily(f"table for {extra[0].label()} which is not in the bunch")
        for B in self.bunch:
            if B not in table:
                raise InvalidFamily(f"no table for condition {B.label()}")
            vector = table[B]
            if vector.carrier != self.bunch.carrier:
                raise IncompatibleCarriers(f"table for {B.label()} on a different carrier")
            outside = [a for a, v in vector.items() if v and a not in B]
            if outside:
                raise InvalidFamily(
                    f"table for {B.label()} puts mass on {outside[0]!r} outside the condition"
                )
            total = sum(vector.values, Fraction(0))
            if total != 1:
                raise InvalidFamily(f"table for {B.label()} sums to {total}, not 1")

    @property
    def carrier(self) -> Carrier:
        return self.bunch.carrier

    def prob(self, A, B: Event) -> Fraction:
        """``F(A|B)`` for an event or function ``A``."""
        A = as_function(A)
        if A.carrier != self.carrier:
            raise IncompatibleCarriers("event and family live on different carriers")
        return sum((a * p for a, p in zip(A.values, self.table[B].values)), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, ConditionalFamily):
            return NotImplemented
        return self.bunch == other.bunch and self.table == other.table

    __hash__ = None


def generate_family(P: RenyiState, bunch: Bunch) -> ConditionalFamily:
    """The family ``{P(.|B) | B in bunch}`` induced by a state."""
    if bunch.carrier != P.carrier:
        raise IncompatibleCarriers("bunch and state live on different carriers")
    table = {}
    for B in bunch:
        total = mass(B, P.representative)
        if total == 0:
            raise NotElementary(f"{B.label()} has zero mass and is not an elementary condition")
        table[B] = NonNegFunction(
            P.carrier,
            tuple(w / total if a in B else Fraction(0) for a, w in P.representative.items()),
        )
    return ConditionalFamily(bunch, table)


def check_consistency(F: ConditionalFamily) -> Report:
    """Check ``F(A|B) = F(AB|C) / F(B|C)`` for nested ``B ⊆ C`` with ``F(B|C) > 0``.

    Both sides are additive in ``A``, so singletons ``A = {a}``, ``a in B``,
    suffice.
    """
    bunch_report = validate_bunch(F.bunch)
    if not bunch_report.passed:
        raise InvalidBunch(bunch_report)
    checked = 0
    for B, C in F.bunch.nested_pairs():
        b_given_c = F.prob(B, C)
        if b_given_c == 0:
            continue
        vec_b = F.table[B]
        vec_c = F.table[C]
        for a in B:
            lhs = vec_b(a)
            rhs = vec_c(a) / b_given_c
            checked += 1
            if lhs != rhs:
                A = F.carrier.event([a])
                return Report((Check(
                    "consistency",
                    False,
                    f"P({A.label()}|{B.label()}) = {lhs} but "
                    f"P({A.label()}|{C.label()}) / P({B.label()}|{C.label()}) = {rhs}",
                    (A, B, C, lhs, rhs),
                ),))
    return Report((Check("consistency", True, f"{checked} instances hold"),))


def reconstruct(F: ConditionalFamily) -> RenyiState:
    """Recover a generating state from a consistent conditional family.

    Each condition ``B`` gets a scale ``lam[B]`` with ``mu|_B = lam[B] F(.|B)``.
    Through the union ``U = B ∪ C`` the scales satisfy
    ``lam[B] = lam[U] F(B|U)``. The lexicographically first condition is the
    reference with scale 1; every other condition is tied to it through their
    union, which is a member by the union axiom. The result is then checked
    against every table, so a returned state is a certificate.
    """
    bunch_report = validate_bunch(F.bunch)
    if not bunch_report.passed:
        raise InvalidBunch(bunch_report)
    conditions = F.bunch.conditions

    for B, C in combinations(conditions, 2):
        U = B | C
        for X in (B, C):
            if F.prob(X, U) == 0:
                raise DegenerateFamily(
                    f"P({X.label()}|{U.label()}) = 0; relative scale of "
                    f"{B.label()} and {C.label()} is undetermined",
                    (B, C),
                )

    reference = min(conditions, key=Event.sort_key)
    lam = {reference: Fraction(1)}
    for C in conditions:
        if C != reference:
            U = reference | C
            lam[C] = F.prob(C, U) / F.prob(reference, U)

    source = {}
    weights = []
    for a in F.carrier:
        B = reference if a in reference else next(B for B in conditions if a in B)
        source[a] = B
        weights.append(lam[B] * F.table[B](a))
    mu = SigmaFiniteMeasure(F.carrier, tuple(weights))

    for B in conditions:
        vector = F.table[B]
        for a in B:
            if mu(a) != lam[B] * vector(a):
                raise NotRepresentable(
                    f"tables for {source[a].label()} and {B.label()} disagree at atom {a!r}",
                    (source[a], B),
                )
    for B, C in combinations(conditions, 2):
        U = B | C
        if lam[B] != lam[U] * F.prob(B, U) or lam[C] != lam[U] * F.prob(C, U):
            raise NotRepresentable(
                f"scales of {B.label()} and {C.label()} do not agree through {U.label()}",
                (B, C),
            )
    return RenyiState(mu)
