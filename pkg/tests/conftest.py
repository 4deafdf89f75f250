import random

import pytest

from tdsig.harness.ceremony import LIVE, CeremonyConfig, worked_example_config
from tdsig.params import HashOracle, SystemParams, keypair_from_secret, toy_params
from tdsig.rng import Tape
from tdsig.shamir import Share

WORKED_MESSAGE = b"m"
WORKED_ROSTER = (("A", 9), ("C", 12), ("E", 14), ("F", 16))


@pytest.fixture
def worked_oracle():
    return HashOracle.scripted([
        ((16, 12), WORKED_MESSAGE, 5),  # threshold ceremony: h(Z=16, W=12, m)
        ((18, 8), WORKED_MESSAGE, 5),   # single-signer directed signature
        ((6,), WORKED_MESSAGE, 5),      # Schnorr commitment g^7
    ])


@pytest.fixture
def worked_params(worked_oracle):
    return SystemParams(23, 11, 18, worked_oracle)


@pytest.fixture
def receiver_key(worked_params):
    return keypair_from_secret(worked_params, 6)


@pytest.fixture
def signer_key(worked_params):
    return keypair_from_secret(worked_params, 3)


@pytest.fixture
def worked_shares():
    return [Share("A", 9, 4), Share("C", 12, 8), Share("E", 14, 7), Share("F", 16, 6)]


@pytest.fixture
def worked_config():
    return worked_example_config()


@pytest.fixture
def tape():
    return lambda *values: Tape(values)


@pytest.fixture
def rng():
    return random.Random(20240101)


@pytest.fixture
def standard_params():
    return toy_params(1019)


@pytest.fixture(scope="session")
def wide_params():
    # q = 2^31 - 1, so a chance hash match is negligible over a hundred trials
    return toy_params(2**31 - 1)


@pytest.fixture
def live_config_factory():
    def make(q=1019, n=4, t=2, seed="live", threaded=False):
        params = toy_params(q)
        roster = tuple((f"M{i}", i) for i in range(1, n + 1))
        receiver = keypair_from_secret(params, 1 + random.Random(seed).randrange(params.q - 1))
        return CeremonyConfig(
            params=params,
            roster=roster,
            t=t,
            active=tuple(member_id for member_id, _ in roster[:t]),
            message=b"hello",
            receiver=receiver,
            mode=LIVE,
            seed=seed,
            threaded=threaded,
        )

    return make
