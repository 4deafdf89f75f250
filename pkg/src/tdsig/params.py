"""
System parameters (p, q, g), user keypairs and the hash oracle h.

Note on a discrepancy in the scheme's source description: the baseline Schnorr
signature is written there as S = k - x*r (mod p), while the directed
signature writes the analogous value mod q. Exponents of an order-q element
only make sense mod q, so every module here reduces exponent arithmetic mod q
and treats "mod p" in that one place as a typo.
"""
import hashlib
import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Tuple

from Crypto.Util.number import isPrime

from tdsig import config
from tdsig.errors import GenerationTimeout, InvalidParams, UnscriptedQuery
from tdsig.modmath import Residue, mod_exp
from tdsig.rng import RandomSource

logger = logging.getLogger(__name__)

STANDARD = "standard"
SCRIPTED = "scripted"
HASH_KINDS = (STANDARD, SCRIPTED)


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    return bool(isPrime(n, false_positive_prob=config.PRIMALITY_FALSE_POSITIVE))


def encode_hash_input(elements: Sequence[int], m: bytes, p: int) -> bytes:
    """
    Injective encoding of (elements..., m): each group element as a fixed-width
    big-endian string of p's byte length, the message as raw bytes, every field
    prefixed by its 4-byte big-endian length.
    """
    width = (p.bit_length() + 7) // 8
    out = bytearray()
    for element in elements:
        encoded = (element % p).to_bytes(width, "big")
        out += len(encoded).to_bytes(4, "big") + encoded
    out += len(m).to_bytes(4, "big") + bytes(m)
    return bytes(out)


@dataclass(frozen=True)
class HashOracle:
    """
    The hash h mapping group elements and a message into Z_q.

    The scripted kind is a finite lookup table keyed by (elements, message) and
    exists so a fixed illustration can pin a hash value by fiat.
    """
    kind: str = STANDARD
    script: Mapping[Tuple[Tuple[int, ...], bytes], int] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in HASH_KINDS:
            raise ValueError(f"unknown hash oracle kind {self.kind!r}")

    @classmethod
    def scripted(cls, entries: Iterable[Tuple[Sequence[int], bytes, int]]) -> "HashOracle":
        table = {}
        for elements, m, value in entries:
            table[(tuple(int(e) for e in elements), bytes(m))] = int(value)
        return cls(SCRIPTED, table)

    def query(self, elements: Sequence[int], m: bytes, params: "SystemParams") -> Residue:
        key = (tuple(int(e) for e in elements), bytes(m))
        if self.kind == SCRIPTED:
            if key not in self.script:
                raise UnscriptedQuery(f"hash oracle has no entry for elements={key[0]} m={key[1].hex()}")
            return Residue(self.script[key], params.q)
        digest = hashlib.sha256(encode_hash_input(key[0], key[1], params.p)).digest()
        return Residue(int.from_bytes(digest, "big"), params.q)


@dataclass(frozen=True)
class SystemParams:
    p: int
    q: int
    g: int
    hash_oracle: HashOracle = field(default_factory=HashOracle)


@dataclass(frozen=True)
class KeyPair:
    x: int
    y: int


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations


def validate_params(params: SystemParams, allow_toy: bool = False) -> ValidationReport:
    """
    Check every SystemParams invariant and report all violations, not just the first.

    Args:
        params: the parameters to check
        allow_toy: waive the production bit-length bounds on p and q

    Returns:
        ValidationReport: empty violations list when the parameters are valid
    """
    p, q, g = params.p, params.q, params.g
    report = ValidationReport()

    p_prime = is_probable_prime(p)
    q_prime = is_probable_prime(q)
    if not p_prime:
        report.violations.append(f"p={p} is not prime")
    if not q_prime:
        report.violations.append(f"q={q} is not prime")
    if q < 2 or (p - 1) % q != 0:
        report.violations.append(f"q={q} does not divide p - 1")
    if g <= 1:
        report.violations.append("g must exceed 1")
    if g >= p:
        report.violations.append("g must be less than p")
    if p > 2 and 1 < g < p and pow(g, q, p) != 1:
        report.violations.append(f"g={g} does not have order q (g^q mod p = {pow(g, q, p)})")

    if not allow_toy:
        if not (1 << (config.PRODUCTION_P_BITS - 1)) < p < (1 << config.PRODUCTION_P_BITS):
            report.violations.append(f"p must satisfy 2^{config.PRODUCTION_P_BITS - 1} < p < 2^{config.PRODUCTION_P_BITS} (use allow_toy for small parameters)")
        if not (1 << (config.PRODUCTION_Q_BITS - 1)) < q < (1 << config.PRODUCTION_Q_BITS):
            report.violations.append(f"q must satisfy 2^{config.PRODUCTION_Q_BITS - 1} < q < 2^{config.PRODUCTION_Q_BITS} (use allow_toy for small parameters)")

    oracle = params.hash_oracle
    if oracle.kind == SCRIPTED:
        for (elements, m), value in oracle.script.items():
            if not 0 <= value < q:
                report.violations.append(f"scripted hash value {value} for elements={elements} is outside [0, q)")

    if report.violations:
        logger.debug(f"params p={p} q={q} g={g} failed validation: {report.violations}")
    return report


def require_valid(params: SystemParams, allow_toy: bool = False) -> SystemParams:
    report = validate_params(params, allow_toy=allow_toy)
    if not report.valid:
        raise InvalidParams(report.violations)
    return params


def _find_generator(p: int, q: int, rng: RandomSource, max_attempts: int) -> Optional[int]:
    for _ in range(max_attempts):
        k = rng.randrange(1, p)
        g = pow(k, (p - 1) // q, p)
        if g > 1:
            return g
    return None


def generate_params(p_bits: int, q_bits: int, rng: RandomSource, oracle: Optional[HashOracle] = None,
                    max_attempts: Optional[int] = None) -> SystemParams:
    """
    Generate (p, q, g) with q | p - 1 and g of order q.

    Args:
        p_bits: bit length of p
        q_bits: bit length of q, strictly smaller than p_bits
        rng: randomness source for candidates
        oracle: hash oracle to attach (standard when None)
        max_attempts: total candidate budget before GenerationTimeout

    Returns:
        SystemParams: parameters that pass validate_params
    """
    if q_bits < 4 or p_bits < 4 or q_bits >= p_bits:
        raise ValueError(f"need 4 <= q_bits < p_bits, got p_bits={p_bits} q_bits={q_bits}")
    budget = max_attempts if max_attempts is not None else config.GENERATION_ATTEMPTS
    oracle = oracle or HashOracle()
    per_q = 4 * p_bits
    attempts = 0

    while attempts < budget:
        attempts += 1
        q = rng.getrandbits(q_bits) | (1 << (q_bits - 1)) | 1
        if not is_probable_prime(q):
            continue

        # p = k*q + 1 with k even and p exactly p_bits long
        k_min = -(-((1 << (p_bits - 1)) - 1) // q)
        k_max = ((1 << p_bits) - 2) // q
        half_min, half_max = -(-k_min // 2), k_max // 2
        if half_min > half_max:
            continue

        for _ in range(per_q):
            if attempts >= budget:
                break
            attempts += 1
            p = 2 * rng.randrange(half_min, half_max + 1) * q + 1
            if not is_probable_prime(p):
                continue
            g = _find_generator(p, q, rng, budget)
            if g is None:
                break
            logger.debug(f"generated params after {attempts} attempts: p={p} q={q} g={g}")
            return SystemParams(p, q, g, oracle)

    raise GenerationTimeout(f"no ({p_bits}, {q_bits})-bit parameters found within {budget} attempts")


def toy_params(q: int, oracle: Optional[HashOracle] = None) -> SystemParams:
    """Smallest p = k*q + 1 (k even) that is prime, and the smallest g > 1 of order q."""
    if not is_probable_prime(q):
        raise InvalidParams([f"q={q} is not prime"])
    k = 2
    while not is_probable_prime(k * q + 1):
        k += 2
    p = k * q + 1
    h = 2
    while pow(h, k, p) == 1:
        h += 1
    return SystemParams(p, q, pow(h, k, p), oracle or HashOracle())


def keypair_from_secret(params: SystemParams, x: int) -> KeyPair:
    if not 1 <= x < params.q:
        raise ValueError(f"secret key must lie in [1, q), got {x}")
    return KeyPair(x, int(mod_exp(params.g, x, params.p)))


def keygen(params: SystemParams, rng: RandomSource) -> KeyPair:
    return keypair_from_secret(params, rng.randrange(1, params.q))


def hash_to_zq(oracle: HashOracle, Z: int, W: int, m: bytes, params: SystemParams) -> Residue:
    """R = h(Z, W, m) mod q."""
    return oracle.query((Z, W), m, params)
