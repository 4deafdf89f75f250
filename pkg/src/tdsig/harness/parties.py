"""
Protocol parties. Each party only touches its own state and talks to the
others exclusively through the bus; receive() routes an envelope by phase.
"""
import logging
import threading
from typing import Dict, Optional, Sequence, Tuple

from tdsig.errors import AggregateMismatch, CeremonyError, MissingInput
from tdsig.harness.messages import (
    BROADCAST, BroadcastCommitment, ConfirmAbort, ConfirmCommit, ConfirmOpening, ConfirmResponse,
    ConfirmReveal, DirectCommitment, Envelope, GroupKey, PartialSubmission, PartyId, Phase, Presentation, Role,
)
from tdsig.params import KeyPair, SystemParams
from tdsig.rng import RandomSource
from tdsig.shamir import GroupRecord, ModifiedShare, Share, deal, modified_share
from tdsig.threshold import (
    Commitment, GroupSignature, NonceStore, PartialSignature, PublicAggregate, aggregate, combine, product_mod,
    round1_commit, round2_partial_sign, threshold_verify,
)
from tdsig.zkproof import (
    ConfirmationContext, ConfirmationSession, Move, prover_check_opening, prover_respond, verifier_commit,
    verifier_final_check,
)

logger = logging.getLogger(__name__)


class Party:
    role: Role

    def __init__(self, label: str):
        self.party_id = PartyId(self.role, label)
        self.lock = threading.RLock()

    def receive(self, envelope: Envelope, bus):
        raise CeremonyError(str(self.party_id), envelope.phase.value, "unexpected message")

    def send(self, bus, to, phase: Phase, payload):
        bus.send(Envelope(self.party_id, to, phase, payload))


class ShareDistributionCenter(Party):
    role = Role.SDC

    def __init__(self, label: str, params: SystemParams, roster: Sequence[Tuple[str, int]], t: int,
                 secret: Optional[int], rng: RandomSource, receiver: PartyId):
        super().__init__(label)
        self.params = params
        self.roster = tuple(roster)
        self.t = t
        self.secret = secret
        self.rng = rng
        self.receiver = receiver
        self.record: Optional[GroupRecord] = None

    def deal(self, bus):
        # the dealer polynomial is not kept past this call
        dealing = deal(self.params, self.secret, self.t, self.roster, self.rng)
        self.secret = None
        for share in dealing.shares:
            self.send(bus, PartyId(Role.SIGNER, share.member_id), Phase.DEALING, share)
        self.record = dealing.record
        self.send(bus, self.receiver, Phase.PUBLISH, GroupKey(dealing.y_G, dealing.record.t, dealing.record.n))


class Signer(Party):
    role = Role.SIGNER

    def __init__(self, label: str, params: SystemParams, y_receiver: int, active: Sequence[Tuple[str, int]],
                 message: bytes, rng: RandomSource, combiner: PartyId, ceremony_id: str,
                 share: Optional[Share] = None):
        super().__init__(label)
        self.params = params
        self.y_receiver = y_receiver
        self.active = tuple(active)
        self.active_ids = [member_id for member_id, _ in self.active]
        self.message = message
        self.rng = rng
        self.combiner = combiner
        self.ceremony_id = ceremony_id
        self.share = share
        self.nonces = NonceStore()
        self.w: Dict[str, int] = {}
        self.z: Dict[str, int] = {}
        self.started = False
        self.partial: Optional[PartialSignature] = None

    @property
    def member_id(self) -> str:
        return self.party_id.label

    def receive(self, envelope: Envelope, bus):
        payload = envelope.payload
        if envelope.phase == Phase.DEALING:
            self.share = payload
        elif envelope.phase == Phase.ROUND1_BROADCAST:
            if payload.member_id in self.active_ids and self.member_id in self.active_ids:
                self.w[payload.member_id] = payload.w
                self._maybe_sign(bus)
        elif envelope.phase == Phase.ROUND1_DIRECT:
            self.z[payload.member_id] = payload.z
            self._maybe_sign(bus)
        else:
            super().receive(envelope, bus)

    def start_round1(self, bus):
        if self.member_id not in self.active_ids:
            return
        nonces, commitment = round1_commit(self.params, self.y_receiver, self.rng, self.member_id, self.ceremony_id)
        self.nonces.put(nonces)
        self.started = True
        self.w[self.member_id] = commitment.w
        self.z[self.member_id] = commitment.z
        self.send(bus, BROADCAST, Phase.ROUND1_BROADCAST, BroadcastCommitment(self.member_id, commitment.w))
        for other in self.active_ids:
            if other != self.member_id:
                self.send(bus, PartyId(Role.SIGNER, other), Phase.ROUND1_DIRECT,
                          DirectCommitment(self.member_id, commitment.z))
        self._maybe_sign(bus)

    def modified_share(self) -> ModifiedShare:
        if self.share is None:
            raise MissingInput(f"{self.member_id} holds no share")
        return modified_share(self.share, [u for _, u in self.active], self.params)

    def _maybe_sign(self, bus):
        if not self.started or self.partial is not None:
            return
        if not all(member_id in self.w and member_id in self.z for member_id in self.active_ids):
            return
        commitments = [Commitment(member_id, self.w[member_id], self.z[member_id]) for member_id in self.active_ids]
        agg = aggregate(self.params, commitments, self.message)
        ms = self.modified_share()
        self.partial = round2_partial_sign(self.nonces.take(self.ceremony_id), ms, agg.R, self.params.q)
        logger.debug(f"{self.party_id} sends its partial signature, W={agg.W} R={agg.R}")
        self.send(bus, self.combiner, Phase.ROUND2, PartialSubmission(self.member_id, self.partial.s, agg.R))


class Impersonator(Signer):
    """Takes a member's place without its share: guesses the modified share at random."""

    def receive(self, envelope: Envelope, bus):
        if envelope.phase == Phase.DEALING:
            return
        super().receive(envelope, bus)

    def modified_share(self) -> ModifiedShare:
        # drawn after k1, k2
        return ModifiedShare(self.member_id, self.rng.randrange(0, self.params.q))


class Combiner(Party):
    """The designated combiner: sees w_i and s_i, never z_i, holds no secret."""
    role = Role.COMBINER

    def __init__(self, label: str, params: SystemParams, active_ids: Sequence[str], message: bytes,
                 receiver: PartyId):
        super().__init__(label)
        self.params = params
        self.active_ids = list(active_ids)
        self.message = message
        self.receiver = receiver
        self.w: Dict[str, int] = {}
        self.submissions: Dict[str, PartialSubmission] = {}
        self.signature: Optional[GroupSignature] = None

    def receive(self, envelope: Envelope, bus):
        payload = envelope.payload
        if envelope.phase == Phase.ROUND1_BROADCAST:
            if payload.member_id in self.active_ids:
                self.w[payload.member_id] = payload.w
        elif envelope.phase == Phase.ROUND2:
            self.submissions[payload.member_id] = payload
            if len(self.submissions) == len(self.active_ids):
                self._combine(bus)
        else:
            super().receive(envelope, bus)

    def _combine(self, bus):
        missing = [member_id for member_id in self.active_ids if member_id not in self.w]
        if missing:
            raise MissingInput(f"no w received from {missing}")
        r_values = {submission.R for submission in self.submissions.values()}
        if len(r_values) != 1:
            raise AggregateMismatch(f"signers disagree on R: {sorted(r_values)}")
        # R is forwarded as received from H, without endorsement
        view = PublicAggregate(product_mod([self.w[member_id] for member_id in self.active_ids], self.params.p),
                               r_values.pop())
        partials = [PartialSignature(s.member_id, s.s) for s in self.submissions.values()]
        self.signature = combine(partials, view, self.message, self.params.q, expected_count=len(self.active_ids))
        self.send(bus, self.receiver, Phase.DELIVER, self.signature)


class Receiver(Party):
    """B: verifies the group signature and later proves it valid to a third party."""
    role = Role.RECEIVER

    def __init__(self, label: str, params: SystemParams, keypair: KeyPair, rng: Optional[RandomSource] = None,
                 y_G: Optional[int] = None):
        super().__init__(label)
        self.params = params
        self.keypair = keypair
        self.rng = rng
        self.y_G = y_G
        self.signature: Optional[GroupSignature] = None
        self.verification = None
        self.session = ConfirmationSession()
        self._prover = None
        self._w: Optional[int] = None

    def receive(self, envelope: Envelope, bus):
        payload = envelope.payload
        if envelope.phase == Phase.PUBLISH:
            self.y_G = payload.y_G
        elif envelope.phase == Phase.DELIVER:
            self.hold(payload)
        elif envelope.phase == Phase.CONFIRM_1:
            self._respond(envelope.sender, payload, bus)
        elif envelope.phase == Phase.CONFIRM_3:
            self._open(envelope.sender, payload, bus)
        else:
            super().receive(envelope, bus)

    def hold(self, signature: GroupSignature):
        if self.y_G is None:
            raise MissingInput("group public key was never published")
        self.signature = signature
        self.verification = threshold_verify(self.params, self.y_G, self.keypair, signature)
        logger.debug(f"{self.party_id} verified the group signature: accept={self.verification.accept}")

    def present(self, bus, third_party: PartyId):
        if self.verification is None:
            raise MissingInput("no signature to present")
        sig = self.signature
        self.send(bus, third_party, Phase.CONFIRM_PRESENT,
                  Presentation(sig.S, sig.W, sig.R, sig.m, self.verification.mu, self.verification.Z))

    def _respond(self, sender: PartyId, payload: ConfirmCommit, bus):
        if self.rng is None:
            raise MissingInput("receiver has no randomness source for the confirmation")
        self.session.record_commitment(payload.w)
        self._w = payload.w
        self._prover, beta, gamma = prover_respond(self.params, self.keypair.x, payload.w, self.rng)
        self.session.record_response(beta, gamma)
        self.send(bus, sender, Phase.CONFIRM_2, ConfirmResponse(beta, gamma))

    def _open(self, sender: PartyId, payload: ConfirmOpening, bus):
        self.session.require(Move.OPEN)
        if not prover_check_opening(self.params, self._w, payload.u, payload.v, self.verification.mu):
            self.session.record_abort(payload.u, payload.v)
            self.send(bus, sender, Phase.CONFIRM_ABORT, ConfirmAbort("opening does not match w"))
            return
        self.session.record_opening(payload.u, payload.v)
        self.session.record_reveal(self._prover.alpha, None)
        self.send(bus, sender, Phase.CONFIRM_4, ConfirmReveal(self._prover.alpha))


class ThirdParty(Party):
    """C: checks R, then runs the verifier side of the confirmation protocol."""
    role = Role.THIRD_PARTY

    def __init__(self, label: str, params: SystemParams, y_B: int, rng: RandomSource):
        super().__init__(label)
        self.params = params
        self.y_B = y_B
        self.rng = rng
        self.session = ConfirmationSession()
        self.context: Optional[ConfirmationContext] = None
        self._verifier = None

    @property
    def transcript(self):
        return self.session.transcript

    def receive(self, envelope: Envelope, bus):
        payload = envelope.payload
        if envelope.phase == Phase.CONFIRM_PRESENT:
            self._start(envelope.sender, payload, bus)
        elif envelope.phase == Phase.CONFIRM_2:
            self.session.record_response(payload.beta, payload.gamma)
            self.send(bus, envelope.sender, Phase.CONFIRM_3, ConfirmOpening(self._verifier.u, self._verifier.v))
        elif envelope.phase == Phase.CONFIRM_4:
            self.session.record_opening(self._verifier.u, self._verifier.v)
            t = self.session.transcript
            accepted = verifier_final_check(self.params, t.beta, t.gamma, self.context.mu, self.context.Z,
                                            self.y_B, self._verifier.u, self._verifier.v, payload.alpha)
            self.session.record_reveal(payload.alpha, accepted)
        elif envelope.phase == Phase.CONFIRM_ABORT:
            self.session.record_abort(self._verifier.u, self._verifier.v)
        else:
            super().receive(envelope, bus)

    def _start(self, sender: PartyId, payload: Presentation, bus):
        self.context = ConfirmationContext(payload.mu, payload.Z, self.y_B, payload.signature)
        if not self.context.passes_gate(self.params):
            logger.debug(f"{self.party_id} stops: R does not match h(Z, W, m)")
            self.session.record_stop()
            return
        self._verifier, w = verifier_commit(self.params, payload.mu, self.rng)
        self.session.record_commitment(w)
        self.send(bus, sender, Phase.CONFIRM_1, ConfirmCommit(w))
