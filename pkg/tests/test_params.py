import random

import pytest

from tdsig.errors import GenerationTimeout, InvalidParams, UnscriptedQuery
from tdsig.params import (
    SCRIPTED, STANDARD, HashOracle, SystemParams, encode_hash_input, generate_params, hash_to_zq, is_probable_prime,
    keygen, keypair_from_secret, require_valid, toy_params, validate_params,
)


def test_worked_params_valid_as_toy(worked_params):
    assert validate_params(worked_params, allow_toy=True).valid


def test_worked_params_fail_production_bounds(worked_params):
    report = validate_params(worked_params)
    assert not report.valid
    assert len(report.violations) == 2
    assert all("allow_toy" in violation for violation in report.violations)


def test_every_violation_is_reported():
    report = validate_params(SystemParams(24, 12, 1), allow_toy=True)
    text = " ".join(report.violations)
    assert "p=24 is not prime" in text
    assert "q=12 is not prime" in text
    assert "does not divide" in text
    assert "g must exceed 1" in text


def test_wrong_order_generator():
    # 5 generates all of Z_23^*, so its order is 22 rather than 11
    report = validate_params(SystemParams(23, 11, 5), allow_toy=True)
    assert any("order" in violation for violation in report.violations)


def test_scripted_value_outside_zq_is_a_violation():
    params = SystemParams(23, 11, 18, HashOracle.scripted([((1, 2), b"m", 11)]))
    assert not validate_params(params, allow_toy=True).valid


def test_require_valid_raises():
    with pytest.raises(InvalidParams) as e:
        require_valid(SystemParams(23, 11, 5), allow_toy=True)
    assert e.value.violations


def test_toy_params_smallest_p():
    params = toy_params(11)
    assert (params.p, params.q) == (23, 11)
    assert pow(params.g, 11, 23) == 1 and params.g != 1
    assert validate_params(params, allow_toy=True).valid


@pytest.mark.parametrize("q", [11, 101, 1019, 10007])
def test_toy_params_are_valid(q):
    assert validate_params(toy_params(q), allow_toy=True).valid


def test_toy_params_rejects_composite_q():
    with pytest.raises(InvalidParams):
        toy_params(15)


def test_generate_params_small():
    params = generate_params(64, 24, random.Random(7))
    assert params.p.bit_length() == 64
    assert params.q.bit_length() == 24
    assert validate_params(params, allow_toy=True).valid


def test_generated_params_always_validate():
    rng = random.Random(32)
    for _ in range(100):
        params = generate_params(32, 16, rng)
        assert (params.p.bit_length(), params.q.bit_length()) == (32, 16)
        assert validate_params(params, allow_toy=True).valid, params


def test_generate_params_timeout():
    with pytest.raises(GenerationTimeout):
        generate_params(64, 24, random.Random(7), max_attempts=1)


def test_generate_params_bad_bits():
    with pytest.raises(ValueError):
        generate_params(24, 24, random.Random(1))


def test_is_probable_prime():
    assert is_probable_prime(10007)
    assert not is_probable_prime(10007 * 10009)
    assert not is_probable_prime(1)


def test_keypair_from_secret(worked_params):
    assert keypair_from_secret(worked_params, 6).y == 8
    with pytest.raises(ValueError):
        keypair_from_secret(worked_params, 0)


def test_keygen_draws_from_source(worked_params, tape):
    keypair = keygen(worked_params, tape(3))
    assert (keypair.x, keypair.y) == (3, 13)


def test_scripted_oracle_lookup(worked_params):
    assert hash_to_zq(worked_params.hash_oracle, 16, 12, b"m", worked_params) == 5
    with pytest.raises(UnscriptedQuery):
        hash_to_zq(worked_params.hash_oracle, 16, 13, b"m", worked_params)


def test_standard_oracle_is_deterministic_and_in_range():
    params = toy_params(1019)
    oracle = params.hash_oracle
    assert oracle.kind == STANDARD
    first = oracle.query((5, 7), b"abc", params)
    assert first == oracle.query((5, 7), b"abc", params)
    assert 0 <= first < params.q


def test_hash_encoding_is_injective_across_field_boundaries():
    assert encode_hash_input((1, 2), b"", 23) != encode_hash_input((1,), b"\x02", 23)
    assert encode_hash_input((1,), b"ab", 23) != encode_hash_input((1,), b"a", 23)


def test_oracle_kind_checked():
    with pytest.raises(ValueError):
        HashOracle("md5")
    assert HashOracle.scripted([]).kind == SCRIPTED
