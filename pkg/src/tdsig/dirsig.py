"""
Single-signer signatures: baseline Schnorr and the directed signature that
only the designated receiver can verify.

Nonce roles for the directed signature: W = g^(k1 - k2), Z = y_B^k1 and
S = k2 - x*R. The threshold module mirrors this (W = prod g^(k2 - k1),
Z = prod y_B^k2, s_i = k1 - MS_i*R).

There is deliberately no verification function that takes only public
values: directed_verify needs the receiver's KeyPair.
"""
import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional

from tdsig.errors import UnscriptedQuery
from tdsig.modmath import Residue, mod_exp
from tdsig.params import HashOracle, KeyPair, SystemParams, hash_to_zq
from tdsig.rng import RandomSource

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DirectedSignature:
    S: int
    W: int
    R: int
    m: bytes


@dataclass(frozen=True)
class SchnorrSignature:
    r: int
    s: int


class VerificationResult(NamedTuple):
    accept: bool
    mu: Optional[int]
    Z: Optional[int]


REJECTED = VerificationResult(False, None, None)


def in_range(params: SystemParams, S: int, W: int, R: int) -> bool:
    return 0 <= S < params.q and 0 < W < params.p and 0 <= R < params.q


def recomputed_matches(oracle: HashOracle, Z: int, W: int, m: bytes, R: int, params: SystemParams) -> bool:
    try:
        return hash_to_zq(oracle, Z, W, m, params) == R
    except UnscriptedQuery:
        # no table entry, so the scripted value cannot equal R
        return False


def schnorr_sign(params: SystemParams, signer: KeyPair, m: bytes, rng: RandomSource,
                 oracle: Optional[HashOracle] = None) -> SchnorrSignature:
    oracle = oracle or params.hash_oracle
    k = rng.randrange(1, params.q)
    r = oracle.query((mod_exp(params.g, k, params.p),), m, params)
    s = Residue(k - signer.x * r, params.q)
    return SchnorrSignature(int(r), int(s))


def schnorr_verify(params: SystemParams, y_signer: int, m: bytes, sig: SchnorrSignature,
                   oracle: Optional[HashOracle] = None) -> bool:
    if not (0 <= sig.r < params.q and 0 <= sig.s < params.q):
        return False
    oracle = oracle or params.hash_oracle
    commitment = mod_exp(params.g, sig.s, params.p) * mod_exp(y_signer, sig.r, params.p) % params.p
    try:
        return oracle.query((commitment,), m, params) == sig.r
    except UnscriptedQuery:
        return False


def directed_sign(params: SystemParams, signer: KeyPair, y_receiver: int, m: bytes, rng: RandomSource,
                  oracle: Optional[HashOracle] = None) -> DirectedSignature:
    """
    Sign m so that only the holder of y_receiver's secret key can verify it.

    Args:
        params: system parameters
        signer: signer keypair
        y_receiver: receiver public key y_B
        m: message bytes
        rng: draws K_a1 then K_a2 from [1, q)
        oracle: hash oracle, defaults to the one attached to params

    Returns:
        DirectedSignature: {S, W, R, m}
    """
    oracle = oracle or params.hash_oracle
    p, q = params.p, params.q
    k1 = rng.randrange(1, q)
    k2 = rng.randrange(1, q)
    W = mod_exp(params.g, k1 - k2, p)
    Z = mod_exp(y_receiver, k1, p)
    R = hash_to_zq(oracle, Z, W, m, params)
    S = Residue(k2 - signer.x * R, q)
    logger.debug(f"directed signature W={W} R={R} S={S}")
    return DirectedSignature(int(S), int(W), int(R), bytes(m))


def directed_verify(params: SystemParams, y_signer: int, receiver: KeyPair, sig: DirectedSignature,
                    oracle: Optional[HashOracle] = None) -> VerificationResult:
    """
    Receiver-side check R == h(mu^x_B, W, m) with mu = g^S * y_A^R * W.

    mu and Z are returned so the confirmation protocol can use them.
    Out-of-range fields are rejected before any arithmetic.
    """
    if not in_range(params, sig.S, sig.W, sig.R):
        return REJECTED
    oracle = oracle or params.hash_oracle
    p = params.p
    mu = mod_exp(params.g, sig.S, p) * mod_exp(y_signer, sig.R, p) * sig.W % p
    Z = int(mod_exp(mu, receiver.x, p))
    return VerificationResult(recomputed_matches(oracle, Z, sig.W, sig.m, sig.R, params), mu, Z)
