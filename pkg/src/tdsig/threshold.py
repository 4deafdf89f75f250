"""
Two-round threshold directed signing.

Round 1: each active member i draws (k1, k2) and publishes w_i = g^(k2 - k1)
openly and z_i = y_B^k2 only to the other active members. Every active member
then forms W = prod w_i, Z = prod z_i (both mod p) and R = h(Z, W, m).
Round 2: member i sends s_i = k1 - MS_i * R mod q to the designated combiner,
which sums them into S and hands {S, W, R, m} to the receiver.

The combiner never sees z_i and holds no secret. It cannot check a single
partial signature either: the only available check needs x_B, so a bad s_i
surfaces at threshold_verify.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple, Union

from tdsig.dirsig import REJECTED, VerificationResult, in_range, recomputed_matches
from tdsig.errors import CountMismatch, DuplicateMember, NonceReuse
from tdsig.modmath import Residue, mod_exp
from tdsig.params import HashOracle, KeyPair, SystemParams, hash_to_zq
from tdsig.rng import RandomSource
from tdsig.shamir import ModifiedShare

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SignerNonces:
    k1: int
    k2: int
    ceremony_id: str = ""


@dataclass(frozen=True)
class Commitment:
    member_id: str
    w: int
    z: int


@dataclass(frozen=True)
class PartialSignature:
    member_id: str
    s: int


@dataclass(frozen=True)
class GroupSignature:
    S: int
    W: int
    R: int
    m: bytes


@dataclass(frozen=True)
class PublicAggregate:
    W: int
    R: int


@dataclass(frozen=True)
class CeremonyAggregate:
    W: int
    Z: int
    R: int

    def public(self) -> PublicAggregate:
        return PublicAggregate(self.W, self.R)


class NonceStore:
    """
    A signer's nonces, keyed by ceremony id.

    Nonces are handed out once: take() removes them, and a ceremony id can
    never be stored a second time.
    """

    def __init__(self):
        self._live: Dict[str, SignerNonces] = {}
        self._used = set()

    def put(self, nonces: SignerNonces):
        if nonces.ceremony_id in self._used:
            raise NonceReuse(f"ceremony {nonces.ceremony_id!r} already drew nonces")
        self._used.add(nonces.ceremony_id)
        self._live[nonces.ceremony_id] = nonces

    def take(self, ceremony_id: str) -> SignerNonces:
        try:
            return self._live.pop(ceremony_id)
        except KeyError:
            raise NonceReuse(f"no unused nonces for ceremony {ceremony_id!r}") from None

    def __contains__(self, ceremony_id: str) -> bool:
        return ceremony_id in self._live


def commitment_from_nonces(params: SystemParams, y_receiver: int, nonces: SignerNonces, member_id: str) -> Commitment:
    w = mod_exp(params.g, nonces.k2 - nonces.k1, params.p)
    z = mod_exp(y_receiver, nonces.k2, params.p)
    return Commitment(member_id, int(w), int(z))


def round1_commit(params: SystemParams, y_receiver: int, rng: RandomSource, member_id: str = "",
                  ceremony_id: str = "") -> Tuple[SignerNonces, Commitment]:
    """
    Draw K_i1 then K_i2 from [1, q) and commit to them.

    Returns:
        (SignerNonces, Commitment): nonces stay with the signer
    """
    k1 = rng.randrange(1, params.q)
    k2 = rng.randrange(1, params.q)
    nonces = SignerNonces(k1, k2, ceremony_id)
    return nonces, commitment_from_nonces(params, y_receiver, nonces, member_id)


def product_mod(values: Sequence[int], p: int) -> int:
    result = 1
    for value in values:
        result = result * value % p
    return result


def _reject_duplicates(member_ids: Sequence[str]):
    seen = set()
    for member_id in member_ids:
        if member_id in seen:
            raise DuplicateMember(member_id)
        seen.add(member_id)


def aggregate(params: SystemParams, commitments: Sequence[Commitment], m: bytes,
              oracle: Optional[HashOracle] = None) -> CeremonyAggregate:
    if not commitments:
        raise ValueError("aggregate needs at least one commitment")
    _reject_duplicates([c.member_id for c in commitments])
    oracle = oracle or params.hash_oracle
    W = product_mod([c.w for c in commitments], params.p)
    Z = product_mod([c.z for c in commitments], params.p)
    R = hash_to_zq(oracle, Z, W, m, params)
    return CeremonyAggregate(W, Z, int(R))


def round2_partial_sign(nonces: SignerNonces, ms: ModifiedShare, R: int, q: int) -> PartialSignature:
    return PartialSignature(ms.member_id, int(Residue(nonces.k1 - ms.ms * R, q)))


def combine(partials: Sequence[PartialSignature], aggregate: Union[CeremonyAggregate, PublicAggregate],
            m: bytes, q: int, expected_count: Optional[int] = None) -> GroupSignature:
    """
    S = sum of s_i mod q, packaged with the aggregate's W and R.

    Args:
        partials: one partial signature per active member
        aggregate: anything carrying W and R (the combiner only has PublicAggregate)
        m: the signed message
        q: subgroup order
        expected_count: the threshold t; CountMismatch when the partials differ from it
    """
    _reject_duplicates([partial.member_id for partial in partials])
    if expected_count is not None and len(partials) != expected_count:
        raise CountMismatch(expected_count, len(partials))
    S = sum(partial.s for partial in partials) % q
    logger.debug(f"combined {len(partials)} partials into S={S}")
    return GroupSignature(S, aggregate.W, aggregate.R, bytes(m))


def threshold_verify(params: SystemParams, y_G: int, receiver: KeyPair, sig: GroupSignature,
                     oracle: Optional[HashOracle] = None) -> VerificationResult:
    """Receiver B: mu = g^S * y_G^R * W, Z = mu^x_B, accept iff R == h(Z, W, m)."""
    if not in_range(params, sig.S, sig.W, sig.R):
        return REJECTED
    oracle = oracle or params.hash_oracle
    p = params.p
    mu = mod_exp(params.g, sig.S, p) * mod_exp(y_G, sig.R, p) * sig.W % p
    Z = int(mod_exp(mu, receiver.x, p))
    accept = recomputed_matches(oracle, Z, sig.W, sig.m, sig.R, params)
    logger.debug(f"threshold verification mu={mu} accept={accept}")
    return VerificationResult(accept, mu, Z)
