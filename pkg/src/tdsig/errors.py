class TdsigError(Exception):
    """Root of every error raised by the protocol modules."""


class NotInvertible(TdsigError):
    def __init__(self, value, modulus):
        super().__init__(f"{value} has no inverse modulo {modulus}")
        self.value = value
        self.modulus = modulus


class NegativeExponentNonInvertible(NotInvertible):
    pass


class DuplicatePoint(TdsigError):
    def __init__(self, point, modulus):
        super().__init__(f"evaluation point {point} collides with another point modulo {modulus}")
        self.point = point
        self.modulus = modulus


class ZeroPoint(TdsigError):
    def __init__(self, point, modulus):
        super().__init__(f"evaluation point {point} is zero modulo {modulus}")
        self.point = point
        self.modulus = modulus


class InvalidParams(TdsigError):
    def __init__(self, violations):
        super().__init__("invalid system parameters: " + "; ".join(violations))
        self.violations = list(violations)


class GenerationTimeout(TdsigError):
    pass


class UnscriptedQuery(TdsigError):
    pass


class ThresholdExceedsGroup(TdsigError):
    pass


class InconsistentShares(TdsigError):
    pass


class DuplicateMember(TdsigError):
    def __init__(self, member_id):
        super().__init__(f"member {member_id!r} appears more than once")
        self.member_id = member_id


class CountMismatch(TdsigError):
    def __init__(self, expected, actual):
        super().__init__(f"expected {expected} partial signatures, got {actual}")
        self.expected = expected
        self.actual = actual


class NonceReuse(TdsigError):
    pass


class ProtocolOrderViolation(TdsigError):
    def __init__(self, move, state):
        super().__init__(f"move {move} is not allowed in state {state}")
        self.move = move
        self.state = state


class TapeExhausted(TdsigError):
    pass


class FormatError(TdsigError):
    pass


class ConfigError(TdsigError):
    pass


class CeremonyError(TdsigError):
    """A module error surfaced while a party handled a protocol phase."""

    def __init__(self, party, phase, message):
        super().__init__(f"{party} failed during {phase}: {message}")
        self.party = party
        self.phase = phase


class MissingInput(TdsigError):
    """A party reached a step without an input an earlier phase should have supplied."""


class AggregateMismatch(TdsigError):
    pass
