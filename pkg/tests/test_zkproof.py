import random

import pytest
from hypothesis import given, settings, strategies as st

from tdsig.dirsig import directed_sign, directed_verify
from tdsig.errors import ProtocolOrderViolation
from tdsig.params import keygen, toy_params
from tdsig.threshold import GroupSignature
from tdsig.zkproof import (
    ConfirmationContext, ConfirmationSession, Move, Outcome, ProtocolState, prover_check_opening, prover_respond,
    run_confirmation, verifier_commit, verifier_final_check,
)


@pytest.fixture
def worked_context(receiver_key):
    return ConfirmationContext(mu=3, Z=16, y_B=receiver_key.y, sig=GroupSignature(3, 12, 5, b"m"))


def test_worked_confirmation(worked_params, worked_context, receiver_key, tape):
    transcript = run_confirmation(worked_params, worked_context, receiver_key, tape(17), tape(11, 13))
    assert (transcript.w, transcript.beta, transcript.gamma) == (2, 16, 4)
    assert (transcript.u, transcript.v, transcript.alpha) == (11, 13, 17)
    assert transcript.outcome == Outcome.ACCEPTED
    assert verifier_final_check(worked_params, 16, 4, 3, 16, 8, 11, 13, 17)


def test_gate_stops_forged_signature(worked_params, receiver_key, tape):
    forged = ConfirmationContext(mu=3, Z=16, y_B=receiver_key.y, sig=GroupSignature(7, 12, 4, b"m"))
    transcript = run_confirmation(worked_params, forged, receiver_key, tape(17), tape(11, 13))
    assert transcript.outcome == Outcome.STOPPED
    assert transcript.w is None


def test_bad_opening_aborts(worked_params, worked_context, receiver_key, tape):
    def intercept(move, payload):
        if move == Move.OPEN:
            u, v = payload
            return u, v + 1
        return payload

    transcript = run_confirmation(worked_params, worked_context, receiver_key, tape(17), tape(11, 13), intercept)
    assert transcript.outcome == Outcome.ABORTED
    assert transcript.alpha is None


def test_tampered_response_rejected(worked_params, worked_context, receiver_key, tape):
    def intercept(move, payload):
        if move == Move.RESPOND:
            beta, gamma = payload
            return beta, gamma * 2 % 23
        return payload

    transcript = run_confirmation(worked_params, worked_context, receiver_key, tape(17), tape(11, 13), intercept)
    assert transcript.outcome == Outcome.REJECTED


def test_session_rejects_out_of_order_moves():
    session = ConfirmationSession()
    with pytest.raises(ProtocolOrderViolation):
        session.record_response(1, 2)
    session.record_commitment(2)
    with pytest.raises(ProtocolOrderViolation):
        session.record_opening(1, 1)
    session.record_response(16, 4)
    with pytest.raises(ProtocolOrderViolation):
        session.record_reveal(17, True)
    session.record_opening(11, 13)
    session.record_reveal(17)
    assert session.done
    assert session.transcript.outcome is None
    with pytest.raises(ProtocolOrderViolation):
        session.record_stop()


def test_stop_only_before_commitment():
    session = ConfirmationSession()
    session.record_stop()
    assert session.state == ProtocolState.DONE
    assert session.transcript.outcome == Outcome.STOPPED


def test_prover_rejects_out_of_range_commitment(worked_params, tape):
    with pytest.raises(ValueError):
        prover_respond(worked_params, 6, 0, tape(17))


def test_soundness_sweep_false_statement(worked_params, receiver_key, tape):
    # claim Z' = 9 for mu = 3, while mu^x_B = 16
    mu, false_Z = 3, 9
    accepting_u = set()
    for u in range(11):
        for v in range(11):
            verifier, w = verifier_commit(worked_params, mu, tape(u, v))
            prover, beta, gamma = prover_respond(worked_params, receiver_key.x, w, tape(5))
            assert prover_check_opening(worked_params, w, u, v, mu)
            if verifier_final_check(worked_params, beta, gamma, mu, false_Z, receiver_key.y, u, v, prover.alpha):
                accepting_u.add(u)
    assert accepting_u == {0}


@settings(max_examples=50, deadline=None)
@given(q=st.sampled_from([11, 23, 101, 1019]), seed=st.integers(min_value=0, max_value=2**32))
def test_completeness_over_random_contexts(q, seed):
    params = toy_params(q)
    rng = random.Random(seed)
    signer, receiver = keygen(params, rng), keygen(params, rng)
    sig = directed_sign(params, signer, receiver.y, b"payload", rng)
    result = directed_verify(params, signer.y, receiver, sig)
    assert result.accept
    context = ConfirmationContext(result.mu, result.Z, receiver.y, sig)
    transcript = run_confirmation(params, context, receiver, rng, rng)
    assert transcript.outcome == Outcome.ACCEPTED
