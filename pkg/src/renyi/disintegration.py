"""Conditional Rényi states given a statistic.

For a state ``[mu]`` on ``Omega``, a statistic ``T: Omega -> Omega_T`` and a
measure ``nu`` on ``Omega_T`` that dominates the pushforward ``P_T``, the
kernel at ``t`` is the fiber restriction of ``mu`` divided by ``nu(t)``::

    P^t(w) = mu(w) [T(w) = t] / nu(t)

so that ``sum_t phi(t) P^t(A) nu(t) = integral of phi(T) A dmu`` for every
``phi`` and ``A``. Kernels are only determined up to a factor ``c(t)`` that is
positive where ``P_T`` is; on a finite carrier every kernel is a measure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .checks import Check, Report
from .errors import DominationFailure, IncompatibleCarriers, NotElementary, OutsideSupport
from .measure import (
    Carrier,
    Event,
    NonNegFunction,
    SigmaFiniteMeasure,
    Statistic,
    as_function,
    as_rational,
    integrate,
    mass,
    pushforward,
)
from .state import RenyiState, is_elementary_condition

NU_MODES = ("counting", "pushforward", "supplied")


@dataclass(frozen=True)
class DominatingMeasure:
    measure: SigmaFiniteMeasure

    @property
    def carrier(self) -> Carrier:
        return self.measure.carrier

    def __call__(self, t: str) -> Fraction:
        return self.measure(t)

    def check(self, P_T: SigmaFiniteMeasure) -> None:
        if P_T.carrier != self.carrier:
            raise IncompatibleCarriers("nu must live on the codomain of the statistic")
        for (t, p), v in zip(P_T.items(), self.measure.weights):
            if p > 0 and v == 0:
                raise DominationFailure(t)


def choose_dominating(
    P: RenyiState,
    T: Statistic,
    mode: str = "counting",
    nu: SigmaFiniteMeasure | None = None,
) -> DominatingMeasure:
    P_T = pushforward(P.representative, T)
    if mode == "counting":
        return DominatingMeasure(SigmaFiniteMeasure.counting(T.codomain))
    if mode == "pushforward":
        return DominatingMeasure(P_T)
    if mode == "supplied":
        if nu is None:
            raise ValueError("mode 'supplied' needs a measure")
        chosen = DominatingMeasure(nu)
        chosen.check(P_T)
        return chosen
    raise ValueError(f"unknown nu mode {mode!r}; expected one of {NU_MODES}")


@dataclass(frozen=True)
class ConditionalState:
    """A representative of the family ``t -> P^t`` together with its ``nu``.

    ``kernels[t]`` is a nonnegative table on ``Omega`` supported in the fiber
    over ``t``; it is the zero table where ``nu(t) = 0``.
    """

    base: RenyiState
    statistic: Statistic
    nu: DominatingMeasure
    kernels: Mapping[str, NonNegFunction]

    def __post_init__(self):
        object.__setattr__(self, "kernels", dict(self.kernels))
        for t, kernel in self.kernels.items():
            fiber = self.statistic.fiber(t)
            if any(v and a not in fiber for a, v in kernel.items()):
                raise ValueError(f"kernel at {t!r} is not supported in its fiber")

    @property
    def pushforward(self) -> SigmaFiniteMeasure:
        return pushforward(self.base.representative, self.statistic)

    def kernel(self, t: str) -> NonNegFunction:
        return self.kernels[t]

    def rescale(self, factors: Mapping[str, object]) -> ConditionalState:
        """Another representative of the same class: ``P^t -> c(t) P^t``.

        ``c`` must be positive wherever ``P_T`` is.
        """
        P_T = self.pushforward
        kernels = {}
        for t in self.statistic.codomain:
            c = as_rational(factors.get(t, 1))
            if c < 0 or (c == 0 and P_T(t) > 0):
                raise ValueError(f"rescaling factor at {t!r} must be positive on the support of P_T")
            kernels[t] = self.kernels[t] * c
        return ConditionalState(self.base, self.statistic, self.nu, kernels)


def disintegrate(P: RenyiState, T: Statistic, nu: DominatingMeasure) -> ConditionalState:
    mu = P.representative
    if T.domain != mu.carrier:
        raise IncompatibleCarriers("statistic domain differs from the state's carrier")
    nu.check(pushforward(mu, T))
    zero = Fraction(0)
    kernels = {}
    for t in T.codomain:
        v = nu(t)
        if v == 0:
            kernels[t] = NonNegFunction(mu.carrier, (zero,) * len(mu.carrier))
        else:
            kernels[t] = NonNegFunction(
                mu.carrier,
                tuple(w / v if s == t else zero for w, s in zip(mu.weights, T.images)),
            )
    return ConditionalState(P, T, nu, kernels)


def kernel_mass(C: ConditionalState, A, t: str) -> Fraction:
    """``P^t(A)`` for the stored representative."""
    A = as_function(A)
    kernel = C.kernels[t]
    if A.carrier != kernel.carrier:
        raise IncompatibleCarriers("function and kernel live on different carriers")
    return sum((a * k for a, k in zip(A.values, kernel.values)), Fraction(0))


def conditional_given(C: ConditionalState, A, B: Event, t: str) -> Fraction:
    """``P^t(A|B)``: the density of ``P(phi(T) A | B)`` against ``P_T(dt|B)``.

    Defined only where ``mu({T = t} ∩ B) > 0``; elsewhere it raises rather than
    inventing a value. Never depends on ``nu``.
    """
    mu = C.base.representative
    A = as_function(A)
    if not is_elementary_condition(C.base, B):
        raise NotElementary(f"{B.label()} has zero mass and is not an elementary condition")
    region = C.statistic.fiber(t) & B
    denominator = mass(region, mu)
    if denominator == 0:
        raise OutsideSupport(
            f"P_T({{{t}}}|{B.label()}) = 0; the conditional is undefined at t = {t!r}"
        )
    return integrate(A * region, mu) / denominator


def conditional_pushforward(C: ConditionalState, B: Event, t: str) -> Fraction:
    """``P_T({t}|B)``."""
    mu = C.base.representative
    total = mass(B, mu)
    if total == 0:
        raise NotElementary(f"{B.label()} has zero mass and is not an elementary condition")
    return mass(C.statistic.fiber(t) & B, mu) / total


def verify_factorization(C: ConditionalState, A, B: Event) -> Report:
    """Check ``P^t(AB) = P^t(A|B) P^t(B)`` and ``P_T({t}|B) P(B) = P^t(B) nu(t)`` at every t."""
    A = as_function(A)
    mu = C.base.representative
    if not is_elementary_condition(C.base, B):
        raise NotElementary(f"{B.label()} has zero mass and is not an elementary condition")
    P_B = mass(B, mu)
    AB = A * B
    items = []
    for t in C.statistic.codomain:
        lhs = kernel_mass(C, AB, t)
        pt_b = kernel_mass(C, B, t)
        if pt_b > 0:
            ratio = conditional_given(C, A, B, t)
            rhs = ratio * pt_b
            items.append(Check(
                f"factorization at {t}",
                lhs == rhs,
                f"P^t(AB) = {lhs}, P^t(A|B) P^t(B) = {ratio} * {pt_b} = {rhs}",
                (t, lhs, rhs),
            ))
        else:
            items.append(Check(
                f"factorization at {t}",
                lhs == 0,
                f"P^t(B) = 0 and P^t(AB) = {lhs}",
                (t, lhs, Fraction(0)),
            ))
        push = conditional_pushforward(C, B, t)
        left = push * P_B
        right = pt_b * C.nu(t)
        items.append(Check(
            f"pushforward identity at {t}",
            left == right,
            f"P_T({{t}}|B) P(B) = {left}, P^t(B) nu(t) = {right}",
            (t, left, right),
        ))
    return Report(tuple(items))


def kolmogorov_conditional(P: RenyiState, A, T: Statistic, t: str) -> Fraction:
    """Elementary ``E(A | T = t)``; undefined where ``P_T(t) = 0``."""
    P_T = pushforward(P.representative, T)
    if P_T(t) == 0:
        raise OutsideSupport(f"P_T({t!r}) = 0; E(A | T = {t}) is undefined")
    C = disintegrate(P, T, DominatingMeasure(P_T))
    return conditional_given(C, A, P.carrier.full, t)
