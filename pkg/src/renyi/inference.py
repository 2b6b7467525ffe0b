"""Report-producing workflows behind the CLI, plus truncation families.

Each ``run_*`` function returns ``(report, status)`` where ``report`` is a
plain nested dict for :mod:`renyi.report` and ``status`` is a process exit
code. No arithmetic happens here beyond calls into the library.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .disintegration import (
    choose_dominating,
    disintegrate,
    kernel_mass,
    verify_factorization,
)
from .errors import (
    EXIT_OK,
    EXIT_PRECONDITION,
    EXIT_VERIFICATION,
    InvalidFamily,
    ModelParseError,
    NotElementary,
    RenyiError,
)
from .measure import Carrier, SigmaFiniteMeasure, Statistic, mass
from .model import ModelSpec, parse_assignments, parse_rational, split_sections
from .report import NOTE
from .state import (
    Bunch,
    RenyiState,
    check_consistency,
    condition,
    generate_family,
    is_elementary_condition,
    reconstruct,
    validate_bunch,
)


def _table(measure_like) -> dict:
    return {a: w for a, w in measure_like.items()}


def _require_measure(model: ModelSpec) -> RenyiState:
    if model.measure is None:
        raise InvalidFamily("model declares no [measure] section")
    return RenyiState(model.measure)


def _resolve(model: ModelSpec, name: str | None, default_full: bool):
    if name is None:
        if default_full:
            return "Omega", model.carrier.full
        raise ModelParseError("an event name is required", field="event")
    if name == "Omega" and name not in model.events:
        return name, model.carrier.full
    try:
        return name, model.lookup(name)
    except KeyError:
        raise ModelParseError(f"no event or function named {name!r}", field=name) from None


def run_condition(model: ModelSpec, event: str, given: str | None = None):
    P = _require_measure(model)
    a_name, A = _resolve(model, event, default_full=False)
    b_name, B = _resolve(model, given, default_full=True)
    if not hasattr(B, "members"):
        raise ModelParseError(f"{b_name!r} is a function, not an event", field=b_name)
    value = condition(P, A, B)
    report = {
        "command": "condition",
        "event": a_name,
        "given": b_name,
        f"P({a_name}|{b_name})": value,
        "note": NOTE,
    }
    return report, EXIT_OK


def _nu_from_text(text: str, codomain: Carrier) -> SigmaFiniteMeasure:
    """A ``t = weight`` listing, optionally under a ``[measure]`` header."""
    if not text.lstrip().startswith("["):
        text = "[measure]\n" + text
    sections = split_sections(text, allowed=("measure",))
    weights = {}
    for section in sections:
        for lineno, key, value in parse_assignments(section):
            if key not in codomain:
                raise ModelParseError(f"unknown codomain atom {key!r}", line=lineno, field=key)
            weights[key] = parse_rational(value, lineno, f"nu.{key}")
    return SigmaFiniteMeasure.from_mapping(codomain, weights)


def run_disintegrate(
    model: ModelSpec,
    nu_mode: str = "counting",
    nu_text: str | None = None,
    pairs: Sequence[tuple[str, str | None]] = (),
):
    P = _require_measure(model)
    if model.statistic is None:
        raise InvalidFamily("model declares no [statistic] section")
    T = model.statistic
    supplied = _nu_from_text(nu_text, T.codomain) if nu_mode == "supplied" else None
    nu = choose_dominating(P, T, nu_mode, supplied)
    C = disintegrate(P, T, nu)

    if not pairs:
        pairs = [(name, None) for name in list(model.events) + list(model.functions)]

    kernels = {}
    masses = {}
    for t in T.codomain:
        fiber = T.fiber(t)
        kernels[t] = {a: C.kernel(t)(a) for a in fiber}
        masses[t] = kernel_mass(C, model.carrier.full, t)

    checks = []
    all_pass = True
    for a_name, b_name in pairs:
        a_name, A = _resolve(model, a_name, default_full=False)
        b_name, B = _resolve(model, b_name, default_full=True)
        entry = {"event": a_name, "given": b_name}
        if not is_elementary_condition(P, B):
            entry["verdict"] = "SKIPPED"
            entry["reason"] = f"{b_name} is not an elementary condition"
            checks.append(entry)
            continue
        result = verify_factorization(C, A, B)
        entry["verdict"] = "PASS" if result.passed else "FAIL"
        entry["checks"] = len(result.items)
        failures = [item.detail for item in result.items if not item.passed]
        if failures:
            entry["failures"] = failures
            all_pass = False
        checks.append(entry)

    report = {
        "command": "disintegrate",
        "nu_mode": nu_mode,
        "pushforward": _table(C.pushforward),
        "nu": _table(nu.measure),
        "kernels": kernels,
        "kernel_mass": masses,
        "factorization": checks,
        "verdict": "PASS" if all_pass else "FAIL",
        "note": NOTE,
    }
    return report, EXIT_OK if all_pass else EXIT_VERIFICATION


def _bunch_section(report) -> dict:
    return {
        item.name: "pass" if item.passed else f"FAIL ({item.detail})"
        for item in report.items
    }


def run_check(model: ModelSpec):
    F = model.family()
    names = {B: name for name, B in model.bunch.items()}
    bunch_report = validate_bunch(F.bunch)
    report = {"command": "check", "bunch": _bunch_section(bunch_report)}
    if not bunch_report.passed:
        report["verdict"] = "INVALID BUNCH"
        return report, EXIT_PRECONDITION

    consistency = check_consistency(F)
    if not consistency.passed:
        A, B, C, lhs, rhs = consistency.first_failure.witness
        report["verdict"] = "INCONSISTENT"
        report["witness"] = {
            "A": A.label(),
            "B": names.get(B, B.label()),
            "C": names.get(C, C.label()),
            "P(A|B)": lhs,
            "P(AB|C)/P(B|C)": rhs,
        }
        report["note"] = NOTE
        return report, EXIT_VERIFICATION

    report["verdict"] = "CONSISTENT"
    try:
        state = reconstruct(F)
    except RenyiError as exc:
        report["reconstruction"] = f"FAIL ({exc})"
        report["note"] = NOTE
        return report, exc.exit_code
    report["reconstructed_measure"] = _table(state.representative)
    round_trip = generate_family(state, F.bunch) == F
    report["round_trip"] = "PASS" if round_trip else "FAIL"
    if model.measure is not None:
        report["equals_declared_measure"] = state == RenyiState(model.measure)
    report["note"] = NOTE
    return report, EXIT_OK if round_trip else EXIT_VERIFICATION


def run_validate(model: ModelSpec):
    report = {
        "command": "validate",
        "atoms": len(model.carrier),
        "total_mass": model.measure.total if model.measure is not None else None,
        "statistic": "yes" if model.statistic is not None else "no",
        "events": list(model.events),
        "functions": list(model.functions),
    }
    status = EXIT_OK
    if model.bunch:
        bunch_report = validate_bunch(Bunch(model.carrier, tuple(model.bunch.values())))
        report["bunch"] = _bunch_section(bunch_report)
        if not bunch_report.passed:
            status = EXIT_VERIFICATION
    report["verdict"] = "VALID" if status == EXIT_OK else "INVALID"
    return report, status


@dataclass(frozen=True)
class TruncationFamily:
    """Flat prior on ``theta in {-N..N}`` with a location likelihood.

    ``likelihood`` maps offsets ``d = x - theta`` to weights; ``None`` means the
    constant likelihood 1 at the observed ``x`` for every ``theta``. Window
    ``N`` has atoms ``theta|x`` with weight ``1 * likelihood(x - theta)``.
    """

    likelihood: tuple[tuple[int, Fraction], ...] | None
    observed: int
    query: frozenset

    def window(self, N: int) -> ModelSpec:
        if N < 0:
            raise ValueError("window size must be nonnegative")
        atoms = []
        weights = []
        images = []
        for theta in range(-N, N + 1):
            if self.likelihood is None:
                rows = [(self.observed, Fraction(1))]
            else:
                rows = [(theta + d, w) for d, w in self.likelihood]
            for x, w in rows:
                atoms.append(f"{theta}|{x}")
                weights.append(w)
                images.append(str(theta))
        carrier = Carrier(tuple(atoms))
        thetas = Carrier(tuple(str(t) for t in range(-N, N + 1)))
        measure = SigmaFiniteMeasure(carrier, tuple(weights))
        statistic = Statistic(carrier, thetas, tuple(images))
        data = carrier.event(a for a in atoms if int(a.split("|")[1]) == self.observed)
        query = carrier.event(a for a in atoms if int(a.split("|")[0]) in self.query)
        return ModelSpec(
            carrier, measure, thetas, statistic, events={"data": data, "query": query}
        )


def parse_family(text: str) -> TruncationFamily:
    sections = split_sections(text, allowed=("family",))
    if len(sections) != 1:
        raise ModelParseError("expected exactly one [family] section")
    fields = {key: (lineno, value) for lineno, key, value in parse_assignments(sections[0])}
    for required in ("likelihood", "observed", "query"):
        if required not in fields:
            raise ModelParseError(f"missing {required!r}", line=sections[0].line, field=required)
    unknown = set(fields) - {"prior", "likelihood", "observed", "query"}
    if unknown:
        key = sorted(unknown)[0]
        raise ModelParseError(f"unknown key {key!r}", line=fields[key][0], field=key)
    if "prior" in fields and fields["prior"][1] != "flat":
        raise ModelParseError("only the flat prior is supported", line=fields["prior"][0], field="prior")

    def integer(key, token):
        try:
            return int(token)
        except ValueError:
            raise ModelParseError(f"expected an integer, got {token!r}", line=fields[key][0], field=key) from None

    lineno, text_lik = fields["likelihood"]
    if text_lik == "constant":
        likelihood = None
    else:
        entries = {}
        for token in text_lik.split():
            if ":" not in token:
                raise ModelParseError(f"expected offset:weight, got {token!r}", line=lineno, field="likelihood")
            d, w = token.split(":", 1)
            d = integer("likelihood", d)
            if d in entries:
                raise ModelParseError(f"repeated offset {d}", line=lineno, field="likelihood")
            entries[d] = parse_rational(w, lineno, "likelihood")
        if not any(entries.values()):
            raise ModelParseError("likelihood is identically zero", line=lineno, field="likelihood")
        likelihood = tuple(sorted(entries.items()))
    observed = integer("observed", fields["observed"][1])
    query = frozenset(integer("query", tok) for tok in fields["query"][1].split())
    return TruncationFamily(likelihood, observed, query)


def emit_family(family: TruncationFamily) -> str:
    lik = "constant" if family.likelihood is None else " ".join(f"{d}:{w}" for d, w in family.likelihood)
    return (
        "[family]\n"
        "prior = flat\n"
        f"likelihood = {lik}\n"
        f"observed = {family.observed}\n"
        f"query = {' '.join(str(q) for q in sorted(family.query))}\n"
    )


def posterior_sequence(family: TruncationFamily, windows: Iterable[int]) -> list[tuple[int, Fraction, Fraction]]:
    """``(N, P(query | data), mass of data)`` for each window."""
    out = []
    for N in windows:
        spec = family.window(N)
        P = RenyiState(spec.measure)
        data = spec.events["data"]
        if not is_elementary_condition(P, data):
            raise NotElementary(f"the observed data has zero mass in window N = {N}")
        out.append((N, condition(P, spec.events["query"], data), mass(data, spec.measure)))
    return out


def run_posterior(family: TruncationFamily, windows: Sequence[int]):
    sequence = posterior_sequence(family, windows)
    values = [value for _, value, _ in sequence]
    diffs = [abs(b - a) for a, b in zip(values, values[1:])]
    stabilized = len(values) >= 2 and all(v == values[0] for v in values)
    report = {
        "command": "posterior",
        "windows": [
            {"N": N, "posterior": value, "data_mass": data_mass}
            for N, value, data_mass in sequence
        ],
        "max_successive_difference": max(diffs) if diffs else None,
        "stabilized": stabilized,
        "note": NOTE,
    }
    return report, EXIT_OK
