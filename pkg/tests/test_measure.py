from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from renyi import (
    Carrier,
    NonNegFunction,
    SigmaFiniteMeasure,
    Statistic,
    integrate,
    mass,
    pushforward,
    restrict,
    scale,
)
from renyi.errors import IncompatibleCarriers, NonPositiveScale, NullRestriction, ZeroMeasure

from generators import events_on, functions_on, measures, rationals, statistics_on

ABC = Carrier(("a", "b", "c"))
DIE = Carrier(tuple("123456"))


def m123():
    return SigmaFiniteMeasure(ABC, (1, 2, 3))


def parity():
    return Statistic.from_function(
        DIE, Carrier(("even", "odd")), lambda a: "even" if int(a) % 2 == 0 else "odd"
    )


class TestCarrier:
    def test_rejects_duplicates(self):
        with pytest.raises(ValueError, match="duplicate"):
            Carrier(("a", "a"))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Carrier(())

    def test_event_iterates_in_carrier_order(self):
        assert list(ABC.event(["c", "a"])) == ["a", "c"]

    def test_event_unknown_atom(self):
        with pytest.raises(KeyError):
            ABC.event(["z"])

    def test_empty_event_representable(self):
        assert not ABC.empty
        assert len(ABC.empty) == 0


class TestConstruction:
    def test_zero_measure_banned(self):
        with pytest.raises(ZeroMeasure):
            SigmaFiniteMeasure(ABC, (0, 0, 0))

    def test_negative_weight(self):
        with pytest.raises(ValueError):
            SigmaFiniteMeasure(ABC, (1, Fraction(-1, 2), 0))

    def test_float_refused(self):
        with pytest.raises(TypeError):
            SigmaFiniteMeasure(ABC, (0.5, 1, 1))

    def test_string_rationals(self):
        assert SigmaFiniteMeasure(ABC, ("1/2", "3", 0)).weights == (Fraction(1, 2), 3, 0)

    def test_negative_function_value(self):
        with pytest.raises(ValueError):
            NonNegFunction(ABC, (0, -1, 0))


def test_integrate_constant_one():
    # 1 + 2 + 3
    assert integrate(NonNegFunction.constant(ABC, 1), m123()) == 6


def test_integrate_zero():
    assert integrate(NonNegFunction.constant(ABC, 0), m123()) == 0


def test_integrate_indicator():
    assert integrate(ABC.event(["a"]).indicator(), m123()) == 1


def test_integrate_carrier_mismatch():
    with pytest.raises(IncompatibleCarriers):
        integrate(NonNegFunction.constant(DIE, 1), m123())


def test_mass_examples():
    counting = SigmaFiniteMeasure.counting(DIE)
    assert mass(DIE.event("246"), counting) == 3
    assert mass(DIE.empty, counting) == 0
    assert mass(ABC.full, m123()) == 6


def test_scale():
    assert scale(m123(), 2).weights == (2, 4, 6)
    assert scale(m123(), 1) == m123()
    uniform = scale(SigmaFiniteMeasure.counting(DIE), Fraction(1, 6))
    assert uniform.weights == (Fraction(1, 6),) * 6
    assert uniform.total == 1


@pytest.mark.parametrize("c", [0, -1, Fraction(-1, 3)])
def test_scale_nonpositive(c):
    with pytest.raises(NonPositiveScale):
        scale(m123(), c)


def test_restrict():
    assert restrict(m123(), ABC.event("ab")).weights == (1, 2, 0)
    assert restrict(m123(), ABC.full) == m123()
    with pytest.raises(NullRestriction):
        restrict(SigmaFiniteMeasure(ABC, (1, 2, 0)), ABC.event("c"))


def test_pushforward_parity():
    P_T = pushforward(SigmaFiniteMeasure.counting(DIE), parity())
    assert dict(P_T.items()) == {"even": 3, "odd": 3}


def test_pushforward_identity():
    assert pushforward(m123(), Statistic.identity(ABC)) == m123()


def test_pushforward_constant():
    T = Statistic.from_function(ABC, Carrier(("*",)), lambda a: "*")
    assert pushforward(m123(), T).weights == (6,)


def test_statistic_rejects_unknown_image():
    with pytest.raises(KeyError):
        Statistic(ABC, Carrier(("x",)), ("x", "x", "y"))


@given(st.data())
def test_integrate_additive(data):
    m = data.draw(measures())
    f = data.draw(functions_on(m.carrier))
    g = data.draw(functions_on(m.carrier))
    assert integrate(f + g, m) == integrate(f, m) + integrate(g, m)


@given(st.data())
def test_integrate_homogeneous(data):
    m = data.draw(measures())
    f = data.draw(functions_on(m.carrier))
    c = data.draw(rationals(allow_zero=False))
    assert integrate(f, scale(m, c)) == c * integrate(f, m)


@given(st.data())
def test_mass_finitely_additive(data):
    m = data.draw(measures())
    B = data.draw(events_on(m.carrier))
    C = data.draw(events_on(m.carrier))
    C = C & B.complement()
    assert mass(B | C, m) == mass(B, m) + mass(C, m)


@given(st.data())
def test_pushforward_preserves_total(data):
    m = data.draw(measures())
    T = data.draw(statistics_on(m.carrier))
    assert pushforward(m, T).total == m.total


@given(st.data())
def test_pushforward_composes(data):
    m = data.draw(measures())
    T = data.draw(statistics_on(m.carrier))
    S = data.draw(statistics_on(T.codomain))
    assert pushforward(pushforward(m, T), S) == pushforward(m, T.then(S))
