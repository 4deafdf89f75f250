"""Party identities, protocol phases and the typed payload each phase carries."""
from dataclasses import dataclass, fields
from enum import Enum
from typing import Union

from tdsig.shamir import Share
from tdsig.threshold import GroupSignature


class Role(str, Enum):
    SDC = "SDC"
    SIGNER = "Signer"
    COMBINER = "Combiner"
    RECEIVER = "Receiver"
    THIRD_PARTY = "ThirdParty"


@dataclass(frozen=True)
class PartyId:
    role: Role
    label: str

    def __str__(self):
        return f"{self.role.value}:{self.label}"

    @classmethod
    def parse(cls, text: str) -> "PartyId":
        role, _, label = text.partition(":")
        return cls(Role(role), label)


BROADCAST = "*"


class Phase(str, Enum):
    DEALING = "dealing"
    PUBLISH = "publish"
    ROUND1_BROADCAST = "round1-broadcast"
    ROUND1_DIRECT = "round1-direct"
    ROUND2 = "round2"
    DELIVER = "deliver"
    CONFIRM_PRESENT = "confirm-present"
    CONFIRM_1 = "confirm-move-1"
    CONFIRM_2 = "confirm-move-2"
    CONFIRM_3 = "confirm-move-3"
    CONFIRM_4 = "confirm-move-4"
    CONFIRM_ABORT = "confirm-abort"


@dataclass(frozen=True)
class GroupKey:
    y_G: int
    t: int
    n: int


@dataclass(frozen=True)
class BroadcastCommitment:
    member_id: str
    w: int


@dataclass(frozen=True)
class DirectCommitment:
    member_id: str
    z: int


@dataclass(frozen=True)
class PartialSubmission:
    member_id: str
    s: int
    R: int


@dataclass(frozen=True)
class Presentation:
    S: int
    W: int
    R: int
    m: bytes
    mu: int
    Z: int

    @property
    def signature(self) -> GroupSignature:
        return GroupSignature(self.S, self.W, self.R, self.m)


@dataclass(frozen=True)
class ConfirmCommit:
    w: int


@dataclass(frozen=True)
class ConfirmResponse:
    beta: int
    gamma: int


@dataclass(frozen=True)
class ConfirmOpening:
    u: int
    v: int


@dataclass(frozen=True)
class ConfirmReveal:
    alpha: int


@dataclass(frozen=True)
class ConfirmAbort:
    reason: str


PHASE_PAYLOADS = {
    Phase.DEALING: Share,
    Phase.PUBLISH: GroupKey,
    Phase.ROUND1_BROADCAST: BroadcastCommitment,
    Phase.ROUND1_DIRECT: DirectCommitment,
    Phase.ROUND2: PartialSubmission,
    Phase.DELIVER: GroupSignature,
    Phase.CONFIRM_PRESENT: Presentation,
    Phase.CONFIRM_1: ConfirmCommit,
    Phase.CONFIRM_2: ConfirmResponse,
    Phase.CONFIRM_3: ConfirmOpening,
    Phase.CONFIRM_4: ConfirmReveal,
    Phase.CONFIRM_ABORT: ConfirmAbort,
}


@dataclass(frozen=True)
class Envelope:
    sender: PartyId
    to: Union[PartyId, str]
    phase: Phase
    payload: object

    def __post_init__(self):
        expected = PHASE_PAYLOADS[self.phase]
        if not isinstance(self.payload, expected):
            raise TypeError(f"{self.phase.value} carries {expected.__name__}, got {type(self.payload).__name__}")
        # only w_i travels on the broadcast channel
        if (self.to == BROADCAST) != (self.phase == Phase.ROUND1_BROADCAST):
            raise ValueError(f"phase {self.phase.value} cannot be sent to {self.to}")

    @property
    def is_broadcast(self) -> bool:
        return self.to == BROADCAST


def payload_fields(payload) -> list:
    return [(f.name, getattr(payload, f.name)) for f in fields(payload)]
