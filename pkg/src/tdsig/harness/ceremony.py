"""
Ceremony driver: wires the parties onto a bus and runs dealing, both signing
rounds and delivery, or a confirmation session between the receiver and a
third party.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from tdsig.dirsig import VerificationResult
from tdsig.errors import ConfigError
from tdsig.harness.bus import Interceptor, MessageBus, ThreadedMessageBus
from tdsig.harness.messages import Envelope, PartyId, Phase, Role
from tdsig.harness.parties import Combiner, Impersonator, Receiver, ShareDistributionCenter, Signer, ThirdParty
from tdsig.params import HashOracle, KeyPair, SystemParams, keypair_from_secret
from tdsig.rng import RandomSource, Tape, live_source
from tdsig.shamir import Dealing, GroupRecord
from tdsig.threshold import GroupSignature
from tdsig.zkproof import ConfirmationTranscript, Outcome

logger = logging.getLogger(__name__)

LIVE = "live"
SCRIPTED = "scripted"
MODES = (LIVE, SCRIPTED)

_RESERVED = (" ", "\t", ":", "=", "*")


def _check_label(kind: str, label: str):
    if not label or any(ch in label for ch in _RESERVED):
        raise ConfigError(f"{kind} label {label!r} must be non-empty and free of whitespace, ':', '=' and '*'")


@dataclass(frozen=True)
class CeremonyConfig:
    params: SystemParams
    roster: Tuple[Tuple[str, int], ...]
    t: int
    active: Tuple[str, ...]
    message: bytes
    receiver: KeyPair
    mode: str = LIVE
    tapes: Mapping[str, Tuple[int, ...]] = field(default_factory=dict)
    secret: Optional[int] = None
    seed: Optional[str] = None
    ceremony_id: str = "ceremony"
    threaded: bool = False
    y_G: Optional[int] = None
    sdc_label: str = "sdc"
    combiner_label: str = "DC"
    receiver_label: str = "B"
    third_party_label: str = "C"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"randomness mode must be one of {MODES}, got {self.mode!r}")
        ids = [member_id for member_id, _ in self.roster]
        for member_id in ids:
            _check_label("member", member_id)
        for label in (self.sdc_label, self.combiner_label, self.receiver_label, self.third_party_label):
            _check_label("party", label)
        if len(set(ids)) != len(ids):
            raise ConfigError(f"roster member ids must be unique: {ids}")
        if not 1 <= self.t <= len(ids):
            raise ConfigError(f"threshold {self.t} must lie in [1, {len(ids)}]")
        unknown = [member_id for member_id in self.active if member_id not in ids]
        if unknown:
            raise ConfigError(f"active members {unknown} are not on the roster")
        if len(set(self.active)) != len(self.active) or len(self.active) != self.t:
            raise ConfigError(f"the signing subset must name exactly t={self.t} distinct members")
        if self.mode == SCRIPTED:
            needed = [str(self.signer_id(member_id)) for member_id in self.active]
            missing = [label for label in needed if label not in self.tapes]
            if missing:
                raise ConfigError(f"scripted mode needs randomness tapes for {missing}")

    @property
    def sdc_id(self) -> PartyId:
        return PartyId(Role.SDC, self.sdc_label)

    @property
    def combiner_id(self) -> PartyId:
        return PartyId(Role.COMBINER, self.combiner_label)

    @property
    def receiver_id(self) -> PartyId:
        return PartyId(Role.RECEIVER, self.receiver_label)

    @property
    def third_party_id(self) -> PartyId:
        return PartyId(Role.THIRD_PARTY, self.third_party_label)

    @staticmethod
    def signer_id(member_id: str) -> PartyId:
        return PartyId(Role.SIGNER, member_id)

    @property
    def active_members(self) -> List[Tuple[str, int]]:
        points = dict(self.roster)
        return [(member_id, points[member_id]) for member_id in self.active]

    def source(self, party_id: PartyId) -> RandomSource:
        """The randomness a party draws from: its tape in scripted mode, a live source otherwise."""
        label = str(party_id)
        if self.mode == SCRIPTED:
            if label not in self.tapes:
                raise ConfigError(f"no randomness tape for {label}")
            return Tape(self.tapes[label], label)
        return live_source(self.seed, label)

    def bus(self, interceptors: Iterable[Interceptor] = ()) -> MessageBus:
        return ThreadedMessageBus(interceptors) if self.threaded else MessageBus(interceptors)


@dataclass
class CeremonyResult:
    signature: Optional[GroupSignature]
    transcript: List[Envelope]
    verification: Optional[VerificationResult]
    record: Optional[GroupRecord]

    @property
    def complete(self) -> bool:
        return self.signature is not None

    @property
    def accepted(self) -> bool:
        return self.verification is not None and bool(self.verification.accept)


@dataclass
class ConfirmationResult:
    transcript: ConfirmationTranscript
    envelopes: List[Envelope]

    @property
    def outcome(self) -> Optional[Outcome]:
        return self.transcript.outcome


def execute(config: CeremonyConfig, dealing: Optional[Dealing] = None,
             interceptors: Iterable[Interceptor] = (), impostors: Sequence[str] = ()) -> CeremonyResult:
    params = config.params
    receiver_id, combiner_id = config.receiver_id, config.combiner_id
    y_G = dealing.y_G if dealing is not None else None

    with config.bus(interceptors) as bus:
        sdc = None
        if dealing is None:
            sdc = ShareDistributionCenter(config.sdc_label, params, config.roster, config.t, config.secret,
                                          config.source(config.sdc_id), receiver_id)
            bus.register(sdc)

        signers = {}
        for member_id, _ in config.roster:
            signer_cls = Impersonator if member_id in impostors else Signer
            share = None
            if dealing is not None and member_id not in impostors:
                share = dealing.share_for(member_id)
            active = member_id in config.active
            rng = config.source(config.signer_id(member_id)) if active else None
            signers[member_id] = signer_cls(member_id, params, config.receiver.y, config.active_members,
                                            config.message, rng, combiner_id, config.ceremony_id, share)
            bus.register(signers[member_id])

        combiner = Combiner(config.combiner_label, params, config.active, config.message, receiver_id)
        bus.register(combiner)
        receiver = Receiver(config.receiver_label, params, config.receiver, y_G=y_G)
        bus.register(receiver)

        if sdc is not None:
            bus.act(sdc, Phase.DEALING.value, lambda party: party.deal(bus))
            bus.run()
        for member_id in config.active:
            bus.act(signers[member_id], Phase.ROUND1_BROADCAST.value, lambda party: party.start_round1(bus))
        bus.run()
        transcript = list(bus.transcript)

    record = sdc.record if sdc is not None else dealing.record
    if receiver.signature is None:
        logger.debug("ceremony ended without a delivered signature")
    return CeremonyResult(receiver.signature, transcript, receiver.verification, record)


def run_ceremony(config: CeremonyConfig, dealing: Optional[Dealing] = None) -> CeremonyResult:
    """
    Run one signing ceremony end to end.

    Args:
        config: roster, threshold, signing subset, message and randomness
        dealing: shares from an earlier dealing; the SDC deals afresh when absent

    Returns:
        CeremonyResult: the group signature, every envelope in send order and
        the receiver's verification

    Raises:
        CeremonyError: a party failed; carries the party and phase
    """
    return execute(config, dealing)


def run_confirmation_session(config: CeremonyConfig, signature: GroupSignature, y_G: int,
                             receiver: Optional[Receiver] = None,
                             third_party: Optional[ThirdParty] = None) -> ConfirmationResult:
    """The receiver presents a held signature to the third party and the two run the four confirmation moves."""
    params = config.params
    if receiver is None:
        receiver = Receiver(config.receiver_label, params, config.receiver, config.source(config.receiver_id), y_G)
    if third_party is None:
        third_party = ThirdParty(config.third_party_label, params, config.receiver.y,
                                 config.source(config.third_party_id))

    with config.bus() as bus:
        bus.register(receiver)
        bus.register(third_party)

        def present(party: Receiver):
            party.hold(signature)
            party.present(bus, third_party.party_id)

        bus.act(receiver, Phase.CONFIRM_PRESENT.value, present)
        bus.run()
        envelopes = list(bus.transcript)
    logger.debug(f"confirmation finished: {third_party.transcript.outcome}")
    return ConfirmationResult(third_party.transcript, envelopes)


WORKED_EXAMPLE_MESSAGE = b"m"


def worked_example_config(threaded: bool = False) -> CeremonyConfig:
    """The small published illustration: p=23, q=11, g=18, f(x) = 3 + 5x, H = {A, F}."""
    oracle = HashOracle.scripted([((16, 12), WORKED_EXAMPLE_MESSAGE, 5)])
    params = SystemParams(23, 11, 18, oracle)
    tapes: Dict[str, Tuple[int, ...]] = {
        "SDC:sdc": (5,),
        "Signer:A": (2, 7, 4),
        "Signer:F": (5, 9, 3),
        "Receiver:B": (17,),
        "ThirdParty:C": (11, 13),
    }
    return CeremonyConfig(
        params=params,
        roster=(("A", 9), ("C", 12), ("E", 14), ("F", 16)),
        t=2,
        active=("A", "F"),
        message=WORKED_EXAMPLE_MESSAGE,
        receiver=keypair_from_secret(params, 6),
        mode=SCRIPTED,
        tapes=tapes,
        secret=3,
        ceremony_id="worked-example",
        threaded=threaded,
    )
