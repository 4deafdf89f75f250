"""
Share distribution center (SDC) side of the scheme: dealing the group secret
into Shamir shares, publishing y_G = g^f(0), reconstruction, and the
per-ceremony modified shares MS_i.

Evaluation points are accepted as integers and reduced mod q internally;
distinctness and nonzeroness are enforced after reduction.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from tdsig.errors import InconsistentShares, InvalidParams, ThresholdExceedsGroup
from tdsig.modmath import Residue, check_points, lagrange_coeff_at_zero, mod_exp, mod_inv
from tdsig.params import SystemParams, is_probable_prime
from tdsig.rng import RandomSource

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DealerPolynomial:
    coefficients: Tuple[int, ...]
    threshold: int
    group_size: int

    @property
    def secret(self) -> int:
        return self.coefficients[0]

    def evaluate(self, x: int, q: int) -> int:
        # Horner
        result = 0
        for coefficient in reversed(self.coefficients):
            result = (result * x + coefficient) % q
        return result


@dataclass(frozen=True)
class Share:
    member_id: str
    u: int
    v: int


@dataclass(frozen=True)
class ModifiedShare:
    member_id: str
    ms: int


@dataclass(frozen=True)
class GroupRecord:
    y_G: int
    t: int
    n: int
    members: Tuple[Tuple[str, int], ...]


@dataclass(frozen=True)
class Dealing:
    shares: Tuple[Share, ...]
    record: GroupRecord
    polynomial: Optional[DealerPolynomial] = None

    @property
    def y_G(self) -> int:
        return self.record.y_G

    def share_for(self, member_id: str) -> Share:
        for share in self.shares:
            if share.member_id == member_id:
                return share
        raise KeyError(member_id)


def deal(params: SystemParams, secret: Optional[int], t: int, members: Sequence[Tuple[str, int]],
         rng: RandomSource, keep_polynomial: bool = False) -> Dealing:
    """
    Pick f of degree < t with f(0) = secret and hand out v_i = f(u_i) mod q.

    Args:
        params: system parameters; q must be prime
        secret: group secret in [1, q), drawn from rng when None
        t: threshold
        members: roster of (member_id, u)
        rng: draws the secret (when absent) and then a_1 .. a_{t-1}
        keep_polynomial: retain the dealer polynomial in the result (tests only)

    Returns:
        Dealing: the shares, the public group record and, if asked, f
    """
    q = params.q
    if not is_probable_prime(q):
        raise InvalidParams([f"q={q} must be prime for Lagrange interpolation"])
    n = len(members)
    if t < 1:
        raise ValueError(f"threshold must be at least 1, got {t}")
    if t > n:
        raise ThresholdExceedsGroup(f"threshold {t} exceeds group size {n}")
    ids = [member_id for member_id, _ in members]
    if len(set(ids)) != len(ids):
        raise ValueError(f"member ids must be unique: {ids}")
    check_points([u for _, u in members], q)

    if secret is None:
        secret = rng.randrange(1, q)
    elif not 1 <= secret < q:
        raise ValueError(f"group secret must lie in [1, q), got {secret}")

    coefficients = (secret,) + tuple(rng.randrange(0, q) for _ in range(t - 1))
    polynomial = DealerPolynomial(coefficients, t, n)
    shares = tuple(Share(member_id, u, polynomial.evaluate(u % q, q)) for member_id, u in members)
    y_G = int(mod_exp(params.g, secret, params.p))
    logger.debug(f"dealt {n} shares at threshold {t}, y_G={y_G}")

    record = GroupRecord(y_G, t, n, tuple((member_id, u) for member_id, u in members))
    return Dealing(shares, record, polynomial if keep_polynomial else None)


def reconstruct_secret(shares: Sequence[Share], params: SystemParams) -> int:
    points = [share.u for share in shares]
    total = 0
    for i, share in enumerate(shares):
        total += share.v * lagrange_coeff_at_zero(i, points, params.q)
    return total % params.q


def _poly_mul_linear(poly: List[int], root: int, q: int) -> List[int]:
    """poly(x) * (x - root), coefficients low degree first."""
    out = [0] * (len(poly) + 1)
    for k, c in enumerate(poly):
        out[k + 1] = (out[k + 1] + c) % q
        out[k] = (out[k] - root * c) % q
    return out


def _interpolate(points: Sequence[Tuple[int, int]], q: int) -> List[int]:
    xs = check_points([x for x, _ in points], q, allow_zero=True)
    coefficients = [0] * len(points)
    for i, (x_i, (_, y_i)) in enumerate(zip(xs, points)):
        basis = [1]
        denominator = 1
        for j, x_j in enumerate(xs):
            if j == i:
                continue
            basis = _poly_mul_linear(basis, x_j, q)
            denominator = denominator * (x_i - x_j) % q
        scale = y_i * mod_inv(denominator, q) % q
        for k, c in enumerate(basis):
            coefficients[k] = (coefficients[k] + scale * c) % q
    return coefficients


def reconstruct_polynomial(shares: Sequence[Share], params: SystemParams,
                           t: Union[int, GroupRecord]) -> DealerPolynomial:
    """
    Full Lagrange interpolation of f from t shares; any extra shares must lie on it.

    t is the dealing's threshold, or the published GroupRecord carrying it.

    Raises:
        InconsistentShares: a share beyond the first t disagrees with the fit
    """
    q = params.q
    if isinstance(t, GroupRecord):
        t = t.t
    if t < 1 or len(shares) < t:
        raise ValueError(f"need at least {t} shares, got {len(shares)}")
    check_points([share.u for share in shares], q)

    basis_shares = shares[:t]
    coefficients = _interpolate([(share.u, share.v) for share in basis_shares], q)
    polynomial = DealerPolynomial(tuple(coefficients), t, len(shares))
    for share in shares[t:]:
        if polynomial.evaluate(share.u % q, q) != share.v % q:
            raise InconsistentShares(f"share of {share.member_id!r} does not lie on the degree-{t - 1} fit")
    return polynomial


def polynomial_through(shares: Sequence[Share], secret: int, params: SystemParams) -> DealerPolynomial:
    """The unique polynomial of degree <= len(shares) through every share and (0, secret)."""
    q = params.q
    check_points([share.u for share in shares], q)
    points = [(0, secret % q)] + [(share.u, share.v) for share in shares]
    return DealerPolynomial(tuple(_interpolate(points, q)), len(points), len(points))


def modified_share(share: Share, active_points: Sequence[int], params: SystemParams) -> ModifiedShare:
    """MS_i = v_i * lagrange coefficient at zero of u_i over the active subset."""
    q = params.q
    reduced = check_points(active_points, q)
    try:
        index = reduced.index(share.u % q)
    except ValueError:
        raise ValueError(f"point of {share.member_id!r} is not among the active points") from None
    coefficient = lagrange_coeff_at_zero(index, active_points, q)
    return ModifiedShare(share.member_id, int(Residue(share.v * coefficient, q)))
