"""Line-oriented model files.

Example::

    # a fair die
    [carrier]
    1 2 3 4 5 6

    [measure]
    1 = 1
    2 = 1
    ...

    [codomain]
    even odd

    [statistic]
    1 = odd
    2 = even
    ...

    [events]
    evens = 2 4 6
    low = 1 2

    [function face]
    1 = 1
    2 = 2
    ...

    [bunch]
    B1 = 1 2
    B2 = 1 2 3 4 5 6

    [table B1]
    1 = 1/2
    2 = 1/2

Numbers are integers or ``p/q``; decimals are refused. ``#`` starts a
comment. In ``[function]`` and ``[table]`` sections unlisted atoms are 0; the
``[measure]`` section must list every atom.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidFamily, ModelParseError, ZeroMeasure
from .measure import Carrier, NonNegFunction, SigmaFiniteMeasure, Statistic
from .state import Bunch, ConditionalFamily

_NAME = re.compile(r"^[^\s#=\[\]]+$")
_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_HEADER = re.compile(r"^\[\s*([a-z]+)(?:\s+([^\s\]]+))?\s*\]$")

SINGLE_SECTIONS = ("carrier", "measure", "codomain", "statistic", "events", "bunch")
NAMED_SECTIONS = ("function", "table")


@dataclass(frozen=True)
class Section:
    kind: str
    name: str | None
    line: int
    body: tuple[tuple[int, str], ...]


def split_sections(text: str, allowed=SINGLE_SECTIONS + NAMED_SECTIONS) -> list[Section]:
    sections = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        if content.startswith("["):
            m = _HEADER.match(content)
            if not m:
                raise ModelParseError(f"malformed section header {content!r}", line=lineno)
            kind, name = m.groups()
            if kind not in allowed:
                raise ModelParseError(f"unknown section [{kind}]", line=lineno)
            if (kind in NAMED_SECTIONS) != (name is not None):
                raise ModelParseError(
                    f"section [{kind}] {'needs' if kind in NAMED_SECTIONS else 'takes no'} name",
                    line=lineno,
                )
            current = Section(kind, name, lineno, ())
            sections.append(current)
            continue
        if current is None:
            raise ModelParseError("content before the first section header", line=lineno)
        sections[-1] = current = Section(
            current.kind, current.name, current.line, current.body + ((lineno, content),)
        )
    return sections


def parse_rational(token: str, line=None, field=None) -> Fraction:
    if not _RATIONAL.match(token):
        raise ModelParseError(f"malformed rational {token!r}", line=line, field=field)
    value = Fraction(token)
    if value < 0:
        raise ModelParseError(f"negative value {token}", line=line, field=field)
    return value


def parse_assignments(section: Section) -> list[tuple[int, str, str]]:
    """``key = value`` lines, keys unique within the section."""
    out = []
    seen = set()
    for lineno, content in section.body:
        if "=" not in content:
            raise ModelParseError(f"expected 'key = value', got {content!r}", line=lineno)
        key, value = (part.strip() for part in content.split("=", 1))
        if not _NAME.match(key):
            raise ModelParseError(f"bad name {key!r}", line=lineno)
        if key in seen:
            raise ModelParseError(f"duplicate entry {key!r}", line=lineno, field=key)
        seen.add(key)
        out.append((lineno, key, value))
    return out


@dataclass(frozen=True)
class ModelSpec:
    carrier: Carrier
    measure: SigmaFiniteMeasure | None = None
    codomain: Carrier | None = None
    statistic: Statistic | None = None
    events: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)
    bunch: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)

    def family(self) -> ConditionalFamily:
        """The declared conditional family. Bunch axioms are not checked here."""
        if not self.bunch:
            raise InvalidFamily("model declares no bunch")
        bunch = Bunch(self.carrier, tuple(self.bunch.values()))
        table = {self.bunch[name]: vec for name, vec in self.tables.items()}
        return ConditionalFamily(bunch, table)

    def lookup(self, name: str):
        """A named event or function."""
        if name in self.events:
            return self.events[name]
        if name in self.functions:
            return self.functions[name]
        raise KeyError(f"no event or function named {name!r}")


def _atoms(tokens, carrier, lineno, field):
    for atom in tokens:
        if atom not in carrier:
            raise ModelParseError(f"unknown atom {atom!r}", line=lineno, field=field)
    if len(set(tokens)) != len(tokens):
        raise ModelParseError("repeated atom in event", line=lineno, field=field)
    return carrier.event(tokens)


def _table(section, carrier) -> NonNegFunction:
    values = {}
    for lineno, key, value in parse_assignments(section):
        if key not in carrier:
            raise ModelParseError(f"unknown atom {key!r}", line=lineno, field=key)
        values[key] = parse_rational(value, lineno, f"{section.name}.{key}")
    return NonNegFunction.from_mapping(carrier, values)


def _carrier(sections, kind, required):
    found = [s for s in sections if s.kind == kind]
    if not found:
        if required:
            raise ModelParseError(f"missing [{kind}] section")
        return None
    section = found[0]
    atoms = [tok for _, content in section.body for tok in content.split()]
    if not atoms:
        raise ModelParseError(f"[{kind}] declares no atoms", line=section.line)
    seen = set()
    for tok in atoms:
        if not _NAME.match(tok):
            raise ModelParseError(f"bad atom label {tok!r}", line=section.line)
        if tok in seen:
            raise ModelParseError(f"duplicate atom {tok!r}", line=section.line, field=kind)
        seen.add(tok)
    return Carrier(tuple(atoms))


def parse_model(text: str) -> ModelSpec:
    sections = split_sections(text)
    seen = set()
    for s in sections:
        key = (s.kind, s.name)
        if key in seen:
            label = s.kind if s.name is None else f"{s.kind} {s.name}"
            raise ModelParseError(f"duplicate section [{label}]", line=s.line)
        seen.add(key)
    by_kind = {s.kind: s for s in sections if s.name is None}

    carrier = _carrier(sections, "carrier", required=True)

    measure = None
    if "measure" in by_kind:
        weights = {}
        for lineno, key, value in parse_assignments(by_kind["measure"]):
            if key not in carrier:
                raise ModelParseError(f"unknown atom {key!r}", line=lineno, field=key)
            weights[key] = parse_rational(value, lineno, f"measure.{key}")
        missing = [a for a in carrier if a not in weights]
        if missing:
            raise ModelParseError(
                f"no weight for atom {missing[0]!r}", line=by_kind["measure"].line, field="measure"
            )
        try:
            measure = SigmaFiniteMeasure.from_mapping(carrier, weights)
        except ZeroMeasure as exc:
            raise ModelParseError(str(exc), line=by_kind["measure"].line, field="measure") from None

    codomain = _carrier(sections, "codomain", required=False)
    statistic = None
    if "statistic" in by_kind:
        section = by_kind["statistic"]
        images = {}
        for lineno, key, value in parse_assignments(section):
            if key not in carrier:
                raise ModelParseError(f"unknown atom {key!r}", line=lineno, field=key)
            if not _NAME.match(value):
                raise ModelParseError(f"bad codomain label {value!r}", line=lineno, field=key)
            if codomain is not None and value not in codomain:
                raise ModelParseError(f"unknown codomain atom {value!r}", line=lineno, field=key)
            images[key] = value
        missing = [a for a in carrier if a not in images]
        if missing:
            raise ModelParseError(
                f"statistic undefined at atom {missing[0]!r}", line=section.line, field="statistic"
            )
        if codomain is None:
            codomain = Carrier(tuple(dict.fromkeys(images[a] for a in carrier)))
        statistic = Statistic.from_mapping(carrier, codomain, images)

    events = {}
    if "events" in by_kind:
        for lineno, key, value in parse_assignments(by_kind["events"]):
            events[key] = _atoms(value.split(), carrier, lineno, key)

    functions = {}
    for s in sections:
        if s.kind == "function":
            if s.name in events:
                raise ModelParseError(f"{s.name!r} is both an event and a function", line=s.line)
            functions[s.name] = _table(s, carrier)

    bunch = {}
    if "bunch" in by_kind:
        for lineno, key, value in parse_assignments(by_kind["bunch"]):
            bunch[key] = _atoms(value.split(), carrier, lineno, key)
        dup = [n for n in bunch if list(bunch.values()).count(bunch[n]) > 1]
        if dup:
            raise ModelParseError(f"condition {dup[0]!r} repeats another condition", field=dup[0])

    tables = {}
    for s in sections:
        if s.kind == "table":
            if s.name not in bunch:
                raise ModelParseError(f"table for undeclared condition {s.name!r}", line=s.line)
            tables[s.name] = _table(s, carrier)
    if tables:
        for name in bunch:
            if name not in tables:
                raise ModelParseError(f"no table for condition {name!r}", field=name)
        for name, vec in tables.items():
            outside = [a for a, v in vec.items() if v and a not in bunch[name]]
            if outside:
                raise ModelParseError(
                    f"mass on atom {outside[0]!r} outside the condition", field=f"{name}.{outside[0]}"
                )
            total = sum(vec.values, Fraction(0))
            if total != 1:
                raise ModelParseError(f"table sums to {total}, not 1", field=name)

    return ModelSpec(carrier, measure, codomain, statistic, events, functions, bunch, tables)


def _fmt(x: Fraction) -> str:
    return str(x)


def emit_model(spec: ModelSpec) -> str:
    """Canonical text for ``spec``; ``parse_model`` inverts it exactly."""
    out = ["[carrier]", " ".join(spec.carrier.atoms)]
    if spec.measure is not None:
        out += ["", "[measure]"]
        out += [f"{a} = {_fmt(w)}" for a, w in spec.measure.items()]
    if spec.statistic is not None:
        out += ["", "[codomain]", " ".join(spec.statistic.codomain.atoms)]
        out += ["", "[statistic]"]
        out += [f"{a} = {t}" for a, t in spec.statistic.items()]
    elif spec.codomain is not None:
        out += ["", "[codomain]", " ".join(spec.codomain.atoms)]
    if spec.events:
        out += ["", "[events]"]
        out += [f"{name} = {' '.join(E)}".rstrip() for name, E in spec.events.items()]
    for name, f in spec.functions.items():
        out += ["", f"[function {name}]"]
        out += [f"{a} = {_fmt(v)}" for a, v in f.items()]
    if spec.bunch:
        out += ["", "[bunch]"]
        out += [f"{name} = {' '.join(B)}".rstrip() for name, B in spec.bunch.items()]
    for name, vec in spec.tables.items():
        out += ["", f"[table {name}]"]
        out += [f"{a} = {_fmt(v)}" for a, v in vec.items() if a in spec.bunch[name]]
    return "\n".join(out) + "\n"
