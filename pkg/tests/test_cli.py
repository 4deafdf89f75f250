import io
from importlib import resources

import pytest

from tdsig import cli
from tdsig.formats import (
    dump_group_record, dump_params, dump_signature, load_config, load_group_record, load_share, read_file,
)
from tdsig.harness.ceremony import run_ceremony
from tdsig.threshold import GroupSignature


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = cli.dispatch(list(argv), out, err)
    return status, out.getvalue(), err.getvalue()


@pytest.fixture
def worked_cfg():
    return str(resources.files("tdsig").joinpath("data/worked_example.cfg"))


@pytest.fixture
def params_file(tmp_path, worked_params):
    path = tmp_path / "worked.params"
    path.write_text(dump_params(worked_params))
    return str(path)


@pytest.fixture
def signature_file(tmp_path):
    def write(sig):
        path = tmp_path / "sig.txt"
        path.write_text(dump_signature(sig))
        return str(path)

    return write


def test_replay_prints_golden_transcript():
    status, out, _ = run("replay-paper")
    golden = resources.files("tdsig").joinpath("data/worked_example.transcript").read_text(encoding="utf-8")
    assert status == 0
    assert out == golden + "ACCEPT\n"


def test_replay_is_stable():
    assert run("replay-paper")[1] == run("replay-paper")[1]


def test_params_validate_toy(params_file):
    assert run("params-validate", "--params", params_file, "--allow-toy")[:2] == (0, "VALID\n")


def test_params_validate_production_bounds(params_file):
    status, out, _ = run("params-validate", "--params", params_file)
    assert status == 1
    assert out.startswith("INVALID\n")


def test_verify_accepts_and_rejects(tmp_path, params_file, signature_file):
    group = tmp_path / "group.txt"
    group.write_text("y_G=13\nt=2\nn=4\n")
    key = tmp_path / "receiver.key"
    key.write_text("x=6\ny=8\n")
    args = ["verify", "--params", params_file, "--group-key", str(group), "--receiver-key", str(key)]

    status, out, _ = run(*args, "--sig", signature_file(GroupSignature(3, 12, 5, b"m")))
    assert (status, out) == (0, "ACCEPT\n")
    status, out, _ = run(*args, "--sig", signature_file(GroupSignature(7, 12, 5, b"m")))
    assert (status, out) == (1, "REJECT\n")


def test_verify_is_a_thin_adapter(mocker, tmp_path, params_file, signature_file):
    spy = mocker.spy(cli, "threshold_verify")
    group = tmp_path / "group.txt"
    group.write_text("y_G=13\nt=2\nn=4\n")
    key = tmp_path / "receiver.key"
    key.write_text("x=6\n")
    run("verify", "--params", params_file, "--group-key", str(group), "--receiver-key", str(key),
        "--sig", signature_file(GroupSignature(3, 12, 5, b"m")))
    spy.assert_called_once()
    assert spy.spy_return.accept


def test_ceremony_writes_transcript(tmp_path, worked_cfg):
    transcript = tmp_path / "out.transcript"
    status, out, _ = run("ceremony", "--config", worked_cfg, "--out-transcript", str(transcript))
    assert status == 0
    assert out == "S=3\nW=12\nR=5\nm=6d\nACCEPT\n"
    assert len(transcript.read_text().splitlines()) == 12


def test_confirm_redeals_for_group_key(worked_cfg, signature_file, mocker):
    spy = mocker.spy(cli, "run_confirmation_session")
    status, out, _ = run("confirm", "--config", worked_cfg, "--sig", signature_file(GroupSignature(3, 12, 5, b"m")))
    assert status == 0
    assert out.splitlines()[-1] == "ACCEPT"
    assert spy.call_args.args[2] == 13


def test_confirm_forged_signature_stops(worked_cfg, signature_file):
    status, out, _ = run("confirm", "--config", worked_cfg, "--sig", signature_file(GroupSignature(7, 12, 5, b"m")))
    assert status == 1
    assert out.splitlines()[-1] == "STOP"


UNSEEDED_CFG = (
    "p=23\nq=11\ng=18\n"
    "member=A,9\nmember=C,12\nmember=E,14\nmember=F,16\n"
    "t=2\nm=6d\nreceiver_x=6\n"
)


def test_confirm_refuses_to_guess_the_group_key(tmp_path, signature_file):
    cfg = tmp_path / "unseeded.cfg"
    cfg.write_text(UNSEEDED_CFG)
    status, out, err = run("confirm", "--config", str(cfg), "--sig", signature_file(GroupSignature(3, 12, 5, b"m")))
    assert status == 2
    assert out == ""
    assert "--group-key" in err


def test_confirm_reads_group_key_file(tmp_path, signature_file):
    cfg = tmp_path / "unseeded.cfg"
    cfg.write_text(UNSEEDED_CFG)
    result = run_ceremony(read_file(cfg, load_config))
    assert result.accepted
    group = tmp_path / "group.txt"
    group.write_text(dump_group_record(result.record))
    status, out, _ = run("confirm", "--config", str(cfg), "--sig", signature_file(result.signature),
                         "--group-key", str(group))
    assert status == 0
    assert out.splitlines()[-1] == "ACCEPT"


def test_inject_substitute_S(worked_cfg):
    status, out, _ = run("inject", "--config", worked_cfg, "--fault", "substitute_S:7")
    assert status == 1
    assert out == "substitute_S:7: detected at threshold_verify\nREJECT\n"


def test_inject_impersonation_on_worked_example(worked_cfg):
    status, out, _ = run("inject", "--config", worked_cfg, "--fault", "impersonate:A")
    assert status == 1
    assert out == "impersonate:A: detected at threshold_verify\nREJECT\n"


def test_inject_drop_message(worked_cfg):
    status, out, _ = run("inject", "--config", worked_cfg, "--fault", "drop_message:round2")
    assert status == 1
    assert out.splitlines()[-1] == "INCOMPLETE"


def test_inject_bad_fault_is_usage_error(worked_cfg):
    status, _, err = run("inject", "--config", worked_cfg, "--fault", "explode")
    assert status == 2
    assert "unknown fault" in err


def test_deal_writes_shares(tmp_path, params_file):
    secret = tmp_path / "secret.txt"
    secret.write_text("secret=3\n")
    out_dir = tmp_path / "dealt"
    status, out, _ = run("deal", "--params", params_file, "--secret", str(secret), "--t", "2",
                         "--roster", "A:9,C:12,E:14,F:16", "--out-dir", str(out_dir), "--seed", "s")
    assert status == 0
    assert out.splitlines()[0] == "y_G=13"
    assert read_file(out_dir / "group.txt", load_group_record).y_G == 13
    share = read_file(out_dir / "share_A.txt", load_share)
    assert (share.member_id, share.u) == ("A", 9)


def test_keygen_and_params_gen(tmp_path, params_file):
    key = tmp_path / "k.key"
    status, out, _ = run("keygen", "--params", params_file, "--out", str(key), "--seed", "s")
    assert status == 0 and out.startswith("y=")
    assert key.read_text().startswith("x=")

    generated = tmp_path / "gen.params"
    status, _, _ = run("params-gen", "--p-bits", "64", "--q-bits", "24", "--out", str(generated), "--seed", "s")
    assert status == 0
    assert run("params-validate", "--params", str(generated), "--allow-toy")[0] == 0


def test_usage_errors():
    status, _, err = run()
    assert status == 2
    assert "usage:" in err
    status, _, err = run("sign-everything")
    assert status == 2
    status, _, err = run("verify", "--params", "x")
    assert status == 2


def test_missing_file_is_io_error(tmp_path):
    status, _, err = run("params-validate", "--params", str(tmp_path / "missing.params"))
    assert status == 2
    assert "cannot read" in err
