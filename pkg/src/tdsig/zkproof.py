"""
Interactive confirmation protocol: the receiver B convinces a third party C
that log_mu Z = log_g y_B without handing C anything C could show to others.

    C -> B   w = mu^u * g^v                      (move 1)
    B -> C   beta = w * g^alpha, gamma = beta^x_B (move 2)
    C -> B   u, v     B checks w = mu^u * g^v      (move 3)
    B -> C   alpha    C checks beta = mu^u g^(v+alpha),
                               gamma = Z^u y_B^(v+alpha)  (move 4)

B only reveals alpha after the opening in move 3 checks out; otherwise the
run ends as aborted. If C's own pre-check R == h(Z, W, m) fails, C stops
before move 1.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple, Union

from tdsig.dirsig import DirectedSignature, recomputed_matches
from tdsig.errors import ProtocolOrderViolation
from tdsig.modmath import mod_exp
from tdsig.params import KeyPair, SystemParams
from tdsig.rng import RandomSource
from tdsig.threshold import GroupSignature

logger = logging.getLogger(__name__)


class Outcome(str, Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    ABORTED = "aborted"
    STOPPED = "stopped"


class ProtocolState(str, Enum):
    INIT = "init"
    COMMITTED = "committed"
    RESPONDED = "responded"
    OPENED = "opened"
    DONE = "done"


class Move(str, Enum):
    COMMIT = "confirm-move-1"
    RESPOND = "confirm-move-2"
    OPEN = "confirm-move-3"
    REVEAL = "confirm-move-4"
    ABORT = "confirm-abort"
    STOP = "confirm-stop"


# move -> (required state, next state)
TRANSITIONS = {
    Move.STOP: (ProtocolState.INIT, ProtocolState.DONE),
    Move.COMMIT: (ProtocolState.INIT, ProtocolState.COMMITTED),
    Move.RESPOND: (ProtocolState.COMMITTED, ProtocolState.RESPONDED),
    Move.OPEN: (ProtocolState.RESPONDED, ProtocolState.OPENED),
    Move.ABORT: (ProtocolState.RESPONDED, ProtocolState.DONE),
    Move.REVEAL: (ProtocolState.OPENED, ProtocolState.DONE),
}


@dataclass(frozen=True)
class ConfirmationContext:
    mu: int
    Z: int
    y_B: int
    sig: Union[GroupSignature, DirectedSignature]

    def passes_gate(self, params: SystemParams) -> bool:
        """C's pre-check: every element in (0, p) and R == h(Z, W, m)."""
        p = params.p
        if not all(0 < value < p for value in (self.mu, self.Z, self.y_B)):
            return False
        return recomputed_matches(params.hash_oracle, self.Z, self.sig.W, self.sig.m, self.sig.R, params)


@dataclass(frozen=True)
class VerifierState:
    u: int
    v: int
    w: int


@dataclass(frozen=True)
class ProverState:
    alpha: int
    beta: int
    gamma: int


@dataclass
class ConfirmationTranscript:
    w: Optional[int] = None
    beta: Optional[int] = None
    gamma: Optional[int] = None
    u: Optional[int] = None
    v: Optional[int] = None
    alpha: Optional[int] = None
    outcome: Optional[Outcome] = None


class ConfirmationSession:
    """Move sequencing for one run; any move out of order raises ProtocolOrderViolation."""

    def __init__(self):
        self.state = ProtocolState.INIT
        self.transcript = ConfirmationTranscript()

    def require(self, move: Move):
        required, _ = TRANSITIONS[move]
        if self.state != required:
            raise ProtocolOrderViolation(move.value, self.state.value)

    def _advance(self, move: Move):
        self.require(move)
        self.state = TRANSITIONS[move][1]

    def record_stop(self):
        self._advance(Move.STOP)
        self.transcript.outcome = Outcome.STOPPED

    def record_commitment(self, w: int):
        self._advance(Move.COMMIT)
        self.transcript.w = w

    def record_response(self, beta: int, gamma: int):
        self._advance(Move.RESPOND)
        self.transcript.beta, self.transcript.gamma = beta, gamma

    def record_opening(self, u: int, v: int):
        self._advance(Move.OPEN)
        self.transcript.u, self.transcript.v = u, v

    def record_abort(self, u: int, v: int):
        self._advance(Move.ABORT)
        self.transcript.u, self.transcript.v = u, v
        self.transcript.outcome = Outcome.ABORTED

    def record_reveal(self, alpha: int, accepted: Optional[bool] = None):
        """The prover side records alpha without a verdict; only the verifier sets one."""
        self._advance(Move.REVEAL)
        self.transcript.alpha = alpha
        if accepted is not None:
            self.transcript.outcome = Outcome.ACCEPTED if accepted else Outcome.REJECTED

    @property
    def done(self) -> bool:
        return self.state == ProtocolState.DONE


def verifier_commit(params: SystemParams, mu: int, rng: RandomSource) -> Tuple[VerifierState, int]:
    """Draw u from [1, q) (u = 0 is a vacuous challenge) and v from [0, q)."""
    u = rng.randrange(1, params.q)
    v = rng.randrange(0, params.q)
    w = int(mod_exp(mu, u, params.p) * mod_exp(params.g, v, params.p) % params.p)
    return VerifierState(u, v, w), w


def prover_respond(params: SystemParams, x_B: int, w: int, rng: RandomSource) -> Tuple[ProverState, int, int]:
    if not 0 < w < params.p:
        raise ValueError(f"commitment w={w} is outside (0, p)")
    alpha = rng.randrange(0, params.q)
    beta = int(w * mod_exp(params.g, alpha, params.p) % params.p)
    gamma = int(mod_exp(beta, x_B, params.p))
    return ProverState(alpha, beta, gamma), beta, gamma


def prover_check_opening(params: SystemParams, w: int, u: int, v: int, mu: int) -> bool:
    p = params.p
    return w == mod_exp(mu, u, p) * mod_exp(params.g, v, p) % p


def verifier_final_check(params: SystemParams, beta: int, gamma: int, mu: int, Z: int, y_B: int,
                         u: int, v: int, alpha: int) -> bool:
    p, g = params.p, params.g
    beta_ok = beta == mod_exp(mu, u, p) * mod_exp(g, v + alpha, p) % p
    gamma_ok = gamma == mod_exp(Z, u, p) * mod_exp(y_B, v + alpha, p) % p
    return beta_ok and gamma_ok


Intercept = Callable[[Move, tuple], tuple]


def _passthrough(move: Move, payload: tuple) -> tuple:
    return payload


def run_confirmation(params: SystemParams, context: ConfirmationContext, prover_key: KeyPair,
                     rng_prover: RandomSource, rng_verifier: RandomSource,
                     intercept: Optional[Intercept] = None) -> ConfirmationTranscript:
    """
    Run the four moves in order between an in-process prover and verifier.

    Args:
        params: system parameters (its hash oracle serves the pre-check)
        context: mu, Z, y_B and the signature under confirmation
        prover_key: the receiver's keypair
        rng_prover: draws alpha
        rng_verifier: draws u then v
        intercept: optional hook (move, payload) -> payload applied to each message in flight

    Returns:
        ConfirmationTranscript: every exchanged value and the outcome
    """
    channel = intercept or _passthrough
    session = ConfirmationSession()
    if not context.passes_gate(params):
        logger.debug("confirmation stopped: R does not match h(Z, W, m)")
        session.record_stop()
        return session.transcript

    verifier, w = verifier_commit(params, context.mu, rng_verifier)
    (w_received,) = channel(Move.COMMIT, (w,))
    session.record_commitment(w_received)

    prover, beta, gamma = prover_respond(params, prover_key.x, w_received, rng_prover)
    beta, gamma = channel(Move.RESPOND, (beta, gamma))
    session.record_response(beta, gamma)

    u, v = channel(Move.OPEN, (verifier.u, verifier.v))
    if not prover_check_opening(params, w_received, u, v, context.mu):
        logger.debug("confirmation aborted: opening does not match w")
        session.record_abort(u, v)
        return session.transcript
    session.record_opening(u, v)

    (alpha,) = channel(Move.REVEAL, (prover.alpha,))
    accepted = verifier_final_check(params, beta, gamma, context.mu, context.Z, context.y_B,
                                    verifier.u, verifier.v, alpha)
    session.record_reveal(alpha, accepted)
    return session.transcript
