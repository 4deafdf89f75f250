"""Fault injection: tamper with a ceremony in flight and report where it was caught."""
import dataclasses
import logging
from dataclasses import dataclass
from typing import Optional, Union

from tdsig.errors import CeremonyError, ConfigError, FormatError
from tdsig.harness.ceremony import CeremonyConfig, CeremonyResult, execute
from tdsig.harness.messages import Phase

logger = logging.getLogger(__name__)

DETECTED_AT_VERIFY = "threshold_verify"
DETECTED_INCOMPLETE = "incomplete"
DETECTED_CEREMONY_ERROR = "ceremony_error"

CEREMONY_PHASES = (Phase.DEALING, Phase.PUBLISH, Phase.ROUND1_BROADCAST, Phase.ROUND1_DIRECT, Phase.ROUND2, Phase.DELIVER)


@dataclass(frozen=True)
class CorruptPartial:
    member: str
    delta: int

    def __str__(self):
        return f"corrupt_partial:{self.member}:{self.delta}"


@dataclass(frozen=True)
class SubstituteS:
    value: int

    def __str__(self):
        return f"substitute_S:{self.value}"


@dataclass(frozen=True)
class Impersonate:
    member: str

    def __str__(self):
        return f"impersonate:{self.member}"


@dataclass(frozen=True)
class DropMessage:
    phase: Phase

    def __str__(self):
        return f"drop_message:{self.phase.value}"


Fault = Union[CorruptPartial, SubstituteS, Impersonate, DropMessage]


def parse_fault(text):
    kind, _, rest = text.partition(":")
    args = rest.split(":") if rest else []
    try:
        if kind == "corrupt_partial" and len(args) == 2:
            return CorruptPartial(args[0], int(args[1]))
        if kind == "substitute_S" and len(args) == 1:
            return SubstituteS(int(args[0]))
        if kind == "impersonate" and len(args) == 1:
            return Impersonate(args[0])
        if kind == "drop_message" and len(args) == 1:
            return DropMessage(Phase(args[0]))
    except ValueError as e:
        raise FormatError(f"bad fault {text!r}: {e}") from e
    raise FormatError(f"unknown fault {text!r}; expected corrupt_partial:<member>:<delta>, substitute_S:<value>, "
                      f"impersonate:<member> or drop_message:<phase>")


@dataclass
class FaultReport:
    fault: Fault
    detected_at: Optional[str]
    result: Optional[CeremonyResult] = None
    error: Optional[CeremonyError] = None

    @property
    def detected(self):
        return self.detected_at is not None

    def summary(self):
        if self.detected_at is None:
            return f"{self.fault}: NOT DETECTED"
        if self.error is not None:
            return f"{self.fault}: detected at {self.detected_at} ({self.error})"
        return f"{self.fault}: detected at {self.detected_at}"


def _corrupt_partial(fault, q):
    sender = CeremonyConfig.signer_id(fault.member)

    def intercept(envelope):
        if envelope.phase == Phase.ROUND2 and envelope.sender == sender:
            payload = envelope.payload
            payload = dataclasses.replace(payload, s=(payload.s + fault.delta) % q)
            return dataclasses.replace(envelope, payload=payload)
        return envelope

    return intercept


def _substitute_S(fault):
    def intercept(envelope):
        if envelope.phase == Phase.DELIVER:
            return dataclasses.replace(envelope, payload=dataclasses.replace(envelope.payload, S=fault.value))
        return envelope

    return intercept


def _drop_message(fault):
    dropped = []

    def intercept(envelope):
        # only the first envelope of the phase goes missing
        if envelope.phase == fault.phase and not dropped:
            dropped.append(envelope)
            return None
        return envelope

    return intercept


def inject_fault(config, fault, dealing=None):
    """
    Run a ceremony with one fault and say where it surfaced.

    Never raises for ceremony failures: a CeremonyError is itself a detection
    point. detected_at is None only if the receiver accepted the signature.
    """
    if isinstance(fault, (CorruptPartial, Impersonate)) and fault.member not in config.active:
        raise ConfigError(f"{fault}: {fault.member!r} is not in the signing subset")
    if isinstance(fault, DropMessage) and fault.phase not in CEREMONY_PHASES:
        raise ConfigError(f"{fault}: no such envelope in a signing ceremony")
    interceptors, impostors = [], []
    if isinstance(fault, CorruptPartial):
        interceptors.append(_corrupt_partial(fault, config.params.q))
    elif isinstance(fault, SubstituteS):
        interceptors.append(_substitute_S(fault))
    elif isinstance(fault, Impersonate):
        impostors.append(fault.member)
    elif isinstance(fault, DropMessage):
        interceptors.append(_drop_message(fault))
    else:
        raise TypeError(f"not a fault: {fault!r}")

    try:
        result = execute(config, dealing, interceptors, impostors)
    except CeremonyError as e:
        logger.debug(f"{fault} surfaced as a ceremony error: {e}")
        return FaultReport(fault, DETECTED_CEREMONY_ERROR, error=e)

    if not result.complete or result.verification is None:
        return FaultReport(fault, DETECTED_INCOMPLETE, result)
    if not result.accepted:
        return FaultReport(fault, DETECTED_AT_VERIFY, result)
    logger.warning(f"{fault} was not detected")
    return FaultReport(fault, None, result)
