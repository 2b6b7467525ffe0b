from fractions import Fraction
from itertools import chain, combinations
import random

import pytest
from hypothesis import given, settings, strategies as st

from renyi import (
    Bunch,
    Carrier,
    ConditionalFamily,
    NonNegFunction,
    RenyiState,
    SigmaFiniteMeasure,
    check_consistency,
    close_under_union,
    condition,
    generate_family,
    is_elementary_condition,
    maximal_bunch,
    reconstruct,
    scale,
    states_equal,
    validate_bunch,
)
from renyi.errors import (
    BunchAxiomError,
    CarrierTooLarge,
    DegenerateFamily,
    InvalidBunch,
    InvalidFamily,
    NotElementary,
    NotRepresentable,
)

import generators as gen

AB = Carrier(("a", "b"))
ABC = Carrier(("a", "b", "c"))
DIE = Carrier(tuple("123456"))


def state(*weights, carrier=ABC):
    return RenyiState(SigmaFiniteMeasure(carrier, weights))


def subsets(E):
    items = list(E)
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))


def brute_force_consistent(F):
    """The consistency relation over every A ⊆ B, not just singletons."""
    for C in F.bunch:
        for B in F.bunch:
            if not B.members <= C.members:
                continue
            b_given_c = F.prob(B, C)
            if b_given_c == 0:
                continue
            for A in subsets(B):
                A = F.carrier.event(A)
                if F.prob(A, B) != F.prob(A & B, C) / b_given_c:
                    return False
    return True


class TestCondition:
    def test_fair_die_evens(self):
        die = RenyiState(SigmaFiniteMeasure.counting(DIE))
        assert condition(die, DIE.event("246"), DIE.full) == Fraction(1, 2)

    def test_ratio(self):
        # 1 / (1 + 2)
        assert condition(state(1, 2, 3), ABC.event("a"), ABC.event("ab")) == Fraction(1, 3)

    def test_null_condition(self):
        with pytest.raises(NotElementary):
            condition(state(1, 2, 0), ABC.event("a"), ABC.event("c"))

    def test_function_argument(self):
        f = NonNegFunction(ABC, (3, 0, 1))
        # (3*1 + 1*3) / 6
        assert condition(state(1, 2, 3), f, ABC.full) == 1


class TestElementary:
    def test_zero_mass(self):
        assert not is_elementary_condition(state(1, 0, 3), ABC.event("b"))

    def test_full(self):
        assert is_elementary_condition(state(1, 0, 3), ABC.full)

    def test_partial(self):
        assert is_elementary_condition(state(1, 0, 3), ABC.event("ab"))


class TestMaximalBunch:
    def test_two_atoms(self):
        b = maximal_bunch(state(1, 1, carrier=AB))
        assert set(b) == {AB.event("a"), AB.event("b"), AB.full}

    def test_drops_null(self):
        b = maximal_bunch(state(1, 0, carrier=AB))
        assert set(b) == {AB.event("a"), AB.full}

    def test_guard(self):
        big = Carrier(tuple(f"x{i}" for i in range(40)))
        with pytest.raises(CarrierTooLarge, match="is_elementary_condition"):
            maximal_bunch(RenyiState(SigmaFiniteMeasure.counting(big)), limit=2**20)

    def test_count_matches_enumeration(self):
        # 2^3 subsets minus those inside the null atom set {b}: {} and {b}
        assert len(maximal_bunch(state(1, 0, 3))) == 6


class TestValidateBunch:
    def test_valid(self):
        report = validate_bunch(Bunch(AB, (AB.event("a"), AB.event("b"), AB.full)))
        assert report.passed

    def test_missing_union(self):
        report = validate_bunch(Bunch(AB, (AB.event("a"), AB.event("b"))))
        assert not report.passed
        check = report.first_failure
        assert check.name.startswith("axiom 2")
        assert set(check.witness) == {AB.event("a"), AB.event("b")}

    def test_empty_member(self):
        report = validate_bunch(Bunch(AB, (AB.empty, AB.full)))
        assert report.first_failure.name.startswith("axiom 1")

    def test_cover_failure(self):
        report = validate_bunch(Bunch(ABC, (ABC.event("ab"),)))
        assert report.first_failure.name.startswith("axiom 3")
        assert report.first_failure.witness == ABC.event("c")


class TestCloseUnderUnion:
    def test_adds_union(self):
        b = close_under_union([AB.event("a"), AB.event("b")])
        assert set(b) == {AB.event("a"), AB.event("b"), AB.full}
        assert validate_bunch(b).passed

    def test_fixed_point(self):
        members = [AB.event("a"), AB.event("b"), AB.full]
        assert set(close_under_union(members)) == set(members)

    def test_cover_failure(self):
        with pytest.raises(BunchAxiomError) as info:
            close_under_union([AB.event("a")])
        assert info.value.axiom == 3

    def test_empty_member(self):
        with pytest.raises(BunchAxiomError) as info:
            close_under_union([AB.empty, AB.full])
        assert info.value.axiom == 1


def table(carrier, **values):
    return NonNegFunction.from_mapping(carrier, values)


class TestConsistency:
    def test_generated_family(self):
        bunch = close_under_union([ABC.event("ab"), ABC.event("bc")])
        F = generate_family(state(1, 2, 3), bunch)
        assert check_consistency(F).passed

    def test_hand_checked_violation(self):
        bunch = Bunch(ABC, (ABC.event("ab"), ABC.full))
        F = ConditionalFamily(bunch, {
            ABC.event("ab"): table(ABC, a=Fraction(1, 2), b=Fraction(1, 2)),
            ABC.full: table(ABC, a=Fraction(1, 6), b=Fraction(1, 3), c=Fraction(1, 2)),
        })
        report = check_consistency(F)
        assert not report.passed
        A, B, C, lhs, rhs = report.first_failure.witness
        assert (A, B, C) == (ABC.event("a"), ABC.event("ab"), ABC.full)
        assert lhs == Fraction(1, 2)
        # (1/6) / (1/2)
        assert rhs == Fraction(1, 3)

    def test_no_nested_pairs(self):
        bunch = Bunch(AB, (AB.full,))
        F = ConditionalFamily(bunch, {AB.full: table(AB, a=Fraction(1, 4), b=Fraction(3, 4))})
        assert check_consistency(F).passed

    def test_invalid_bunch(self):
        bunch = Bunch(AB, (AB.event("a"), AB.event("b")))
        F = ConditionalFamily(bunch, {AB.event("a"): table(AB, a=1), AB.event("b"): table(AB, b=1)})
        with pytest.raises(InvalidBunch):
            check_consistency(F)

    def test_family_tables_must_sum_to_one(self):
        with pytest.raises(InvalidFamily, match="sums to"):
            ConditionalFamily(Bunch(AB, (AB.full,)), {AB.full: table(AB, a=1, b=1)})

    def test_family_tables_supported_in_condition(self):
        with pytest.raises(InvalidFamily, match="outside"):
            ConditionalFamily(
                Bunch(AB, (AB.event("a"), AB.full)),
                {AB.event("a"): table(AB, b=1), AB.full: table(AB, b=1)},
            )


class TestReconstruct:
    def test_round_trip(self):
        bunch = Bunch(ABC, (ABC.event("ab"), ABC.event("bc"), ABC.full))
        P = state(1, 2, 3)
        Q = reconstruct(generate_family(P, bunch))
        assert states_equal(Q, P)

    def test_reference_scaled_to_one(self):
        bunch = Bunch(ABC, (ABC.event("ab"), ABC.event("bc"), ABC.full))
        Q = reconstruct(generate_family(state(1, 2, 3), bunch))
        # reference condition {a,b} has mass 1
        assert Q.representative.weights == (Fraction(1, 3), Fraction(2, 3), 1)

    def test_single_condition(self):
        sixth = Fraction(1, 6)
        F = ConditionalFamily(Bunch(DIE, (DIE.full,)), {DIE.full: NonNegFunction.constant(DIE, sixth)})
        assert states_equal(reconstruct(F), SigmaFiniteMeasure.counting(DIE))

    def test_perturbed_overlap_rejected(self):
        bunch = Bunch(ABC, (ABC.event("ab"), ABC.event("bc"), ABC.full))
        F = generate_family(state(1, 2, 3), bunch)
        table_ = dict(F.table)
        table_[ABC.event("bc")] = table(ABC, b=Fraction(1, 5), c=Fraction(4, 5))
        with pytest.raises(NotRepresentable) as info:
            reconstruct(ConditionalFamily(bunch, table_))
        assert ABC.event("bc") in info.value.pair

    def test_degenerate_pair(self):
        bunch = Bunch(AB, (AB.event("a"), AB.event("b"), AB.full))
        F = ConditionalFamily(bunch, {
            AB.event("a"): table(AB, a=1),
            AB.event("b"): table(AB, b=1),
            AB.full: table(AB, a=1),
        })
        with pytest.raises(DegenerateFamily) as info:
            reconstruct(F)
        assert set(info.value.pair) == {AB.event("a"), AB.event("b")}


class TestStatesEqual:
    def test_scaled(self):
        assert states_equal(state(1, 2, 3), state(2, 4, 6))

    def test_different(self):
        assert not states_equal(state(1, 2, 3), state(1, 2, 4))

    def test_zero_pattern(self):
        assert states_equal(state(1, 0, 3), state(2, 0, 6))
        assert not states_equal(state(1, 0, 3), state(1, 1, 3))
        assert not states_equal(state(0, 1, 1), state(1, 1, 1))

    def test_operator_and_hash(self):
        assert state(1, 2, 3) == state(3, 6, 9)
        assert hash(state(1, 2, 3)) == hash(state(3, 6, 9))


@given(st.data())
def test_scale_invariance(data):
    m = data.draw(gen.measures())
    A = data.draw(gen.functions_on(m.carrier))
    B = data.draw(gen.events_on(m.carrier))
    c = data.draw(gen.rationals(allow_zero=False))
    P = RenyiState(m)
    if not is_elementary_condition(P, B):
        return
    assert condition(RenyiState(scale(m, c)), A, B) == condition(P, A, B)


@given(st.data())
def test_nested_consistency_closure(data):
    m = data.draw(gen.measures())
    C = data.draw(gen.events_on(m.carrier))
    B = data.draw(gen.events_on(m.carrier)) & C
    A = data.draw(gen.functions_on(m.carrier))
    P = RenyiState(m)
    if not is_elementary_condition(P, B):
        return
    assert condition(P, A, B) == condition(P, A * B, C) / condition(P, B, C)


@given(gen.measures(max_size=7))
def test_maximal_bunch_is_a_bunch(m):
    assert validate_bunch(maximal_bunch(RenyiState(m))).passed


@given(gen.measures())
def test_condition_on_itself(m):
    P = RenyiState(m)
    rng = random.Random(len(m.carrier))
    B = gen.elementary_event(rng, m)
    assert condition(P, B, B) == 1


@settings(max_examples=60)
@given(gen.seeded_rng())
def test_round_trip_property(rng):
    m = gen.measure(rng)
    bunch = gen.bunch_on_support(rng, m)
    assert states_equal(reconstruct(generate_family(RenyiState(m), bunch)), m)


@settings(max_examples=60)
@given(gen.seeded_rng())
def test_check_consistency_matches_brute_force(rng):
    m = gen.measure(rng, n=rng.randint(2, 5))
    bunch = gen.bunch_on_support(rng, m)
    F = generate_family(RenyiState(m), bunch)
    assert check_consistency(F).passed and brute_force_consistent(F)
    perturbable = [B for B in bunch if sum(1 for a in B if F.table[B](a)) >= 1 and len(B) >= 2]
    if not perturbable:
        return
    B = rng.choice(perturbable)
    donor = rng.choice([a for a in B if F.table[B](a)])
    receiver = rng.choice([a for a in B if a != donor])
    delta = F.table[B](donor) / 2
    vec = dict(F.table[B].items())
    vec[donor] -= delta
    vec[receiver] += delta
    table_ = dict(F.table)
    table_[B] = NonNegFunction.from_mapping(m.carrier, vec)
    G = ConditionalFamily(bunch, table_)
    assert check_consistency(G).passed == brute_force_consistent(G)
