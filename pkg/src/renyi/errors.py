"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures onto
distinct process statuses without inspecting messages.
"""

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_PRECONDITION = 4
EXIT_VERIFICATION = 5


class RenyiError(Exception):
    exit_code = EXIT_PRECONDITION


class IncompatibleCarriers(RenyiError, ValueError):
    """Two objects that must share a carrier do not."""


class NonPositiveScale(RenyiError, ValueError):
    pass


class NullRestriction(RenyiError, ValueError):
    """Restricting a measure to an event produced the zero measure."""


class ZeroMeasure(RenyiError, ValueError):
    pass


class NotElementary(RenyiError, ValueError):
    """The conditioning event has zero mass under the state."""


class CarrierTooLarge(RenyiError, ValueError):
    pass


class BunchAxiomError(RenyiError, ValueError):
    def __init__(self, axiom, message):
        super().__init__(f"bunch axiom {axiom} violated: {message}")
        self.axiom = axiom


class InvalidBunch(RenyiError, ValueError):
    def __init__(self, report):
        failed = [item for item in report.items if not item.passed]
        detail = "; ".join(f"{item.name}: {item.detail}" for item in failed)
        super().__init__(f"invalid bunch: {detail}")
        self.report = report


class InvalidFamily(RenyiError, ValueError):
    pass


class DegenerateFamily(RenyiError, ValueError):
    def __init__(self, message, pair):
        super().__init__(message)
        self.pair = pair


class NotRepresentable(RenyiError, ValueError):
    exit_code = EXIT_VERIFICATION

    def __init__(self, message, pair):
        super().__init__(f"family not representable: {message}")
        self.pair = pair


class DominationFailure(RenyiError, ValueError):
    def __init__(self, atom):
        super().__init__(
            f"nu does not dominate the pushforward at atom {atom!r}"
        )
        self.atom = atom


class OutsideSupport(RenyiError, ValueError):
    """The requested value is only defined almost everywhere and t lies off
    the relevant support."""


class ModelParseError(RenyiError, ValueError):
    exit_code = EXIT_PARSE

    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field
        self.reason = message
