"""
Command-line front end. Every verb is a thin adapter over the protocol modules:
it loads files, calls one public operation and reports line by line.

Exit status: 0 success or accept, 1 reject or abort, 2 usage or IO error.
"""
import argparse
import dataclasses
import logging
import os
import sys

from tdsig import __version__, config
from tdsig.errors import CeremonyError, ConfigError, TdsigError
from tdsig.formats import (
    dump_group_record, dump_key, dump_params, dump_share, dump_signature, load_config, load_group_record,
    load_key, load_params, load_secret, load_signature, parse_roster, read_file, write_file,
)
from tdsig.harness.ceremony import LIVE, run_ceremony, run_confirmation_session, worked_example_config
from tdsig.harness.faults import inject_fault, parse_fault
from tdsig.harness.transcript import format_transcript, write_transcript
from tdsig.params import generate_params, keygen, validate_params
from tdsig.rng import live_source
from tdsig.shamir import deal
from tdsig.threshold import threshold_verify
from tdsig.zkproof import Outcome

logger = logging.getLogger(__name__)

OK, REJECT, USAGE = 0, 1, 2

VERDICTS = {
    Outcome.ACCEPTED: "ACCEPT",
    Outcome.REJECTED: "REJECT",
    Outcome.ABORTED: "ABORT",
    Outcome.STOPPED: "STOP",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def response(status, *lines):
    return status, list(lines)


def params_gen(args):
    params = generate_params(args.p_bits, args.q_bits, live_source(args.seed, "params-gen"))
    write_file(args.out, dump_params(params))
    return response(OK, *dump_params(params).splitlines())


def params_validate(args):
    params = read_file(args.params, load_params)
    report = validate_params(params, allow_toy=args.allow_toy)
    if report.valid:
        return response(OK, "VALID")
    return response(REJECT, "INVALID", *report.violations)


def keygen_cmd(args):
    params = read_file(args.params, load_params)
    keypair = keygen(params, live_source(args.seed, "keygen"))
    write_file(args.out, dump_key(keypair))
    return response(OK, f"y={keypair.y}")


def deal_cmd(args):
    params = read_file(args.params, load_params)
    secret = read_file(args.secret, load_secret) if args.secret else None
    roster = parse_roster(args.roster)
    dealing = deal(params, secret, args.t, roster, live_source(args.seed, "deal"))
    os.makedirs(args.out_dir, exist_ok=True)
    group_path = os.path.join(args.out_dir, "group.txt")
    write_file(group_path, dump_group_record(dealing.record))
    lines = [f"y_G={dealing.y_G}", group_path]
    for share in dealing.shares:
        share_path = os.path.join(args.out_dir, f"share_{share.member_id}.txt")
        write_file(share_path, dump_share(share))
        lines.append(share_path)
    return response(OK, *lines)


def _ceremony_config(args):
    ceremony_config = read_file(args.config, load_config)
    if getattr(args, "seed", None) is not None:
        ceremony_config = dataclasses.replace(ceremony_config, seed=args.seed)
    return ceremony_config


def ceremony_cmd(args):
    result = run_ceremony(_ceremony_config(args))
    if args.out_transcript:
        write_transcript(args.out_transcript, result.transcript)
    if not result.complete:
        return response(REJECT, "INCOMPLETE")
    lines = dump_signature(result.signature).splitlines()
    return response(OK if result.accepted else REJECT, *lines, "ACCEPT" if result.accepted else "REJECT")


def verify_cmd(args):
    params = read_file(args.params, load_params)
    record = read_file(args.group_key, load_group_record)
    receiver = read_file(args.receiver_key, load_key, params=params)
    sig = read_file(args.sig, load_signature)
    result = threshold_verify(params, record.y_G, receiver, sig)
    if result.accept:
        return response(OK, "ACCEPT")
    return response(REJECT, "REJECT")


def _group_key(args, ceremony_config):
    if args.group_key:
        return read_file(args.group_key, load_group_record).y_G
    if ceremony_config.y_G is not None:
        return ceremony_config.y_G
    if ceremony_config.secret is None and ceremony_config.mode == LIVE and ceremony_config.seed is None:
        # an unseeded re-deal would draw a fresh group key
        raise ConfigError("cannot recover y_G: pass --group-key, or set y_G, secret or seed in the config")
    return deal(ceremony_config.params, ceremony_config.secret, ceremony_config.t, ceremony_config.roster,
                ceremony_config.source(ceremony_config.sdc_id)).y_G


def confirm_cmd(args):
    ceremony_config = _ceremony_config(args)
    sig = read_file(args.sig, load_signature)
    y_G = _group_key(args, ceremony_config)
    session = run_confirmation_session(ceremony_config, sig, y_G)
    outcome = session.outcome
    lines = format_transcript(session.envelopes).splitlines()
    return response(OK if outcome == Outcome.ACCEPTED else REJECT, *lines, VERDICTS.get(outcome, "INCOMPLETE"))


def replay_worked_example(args):
    worked = worked_example_config()
    ceremony = run_ceremony(worked)
    session = run_confirmation_session(worked, ceremony.signature, ceremony.record.y_G)
    accepted = ceremony.accepted and session.outcome == Outcome.ACCEPTED
    lines = format_transcript(ceremony.transcript + session.envelopes).splitlines()
    return response(OK if accepted else REJECT, *lines, "ACCEPT" if accepted else "REJECT")


def inject_cmd(args):
    report = inject_fault(_ceremony_config(args), parse_fault(args.fault))
    if not report.detected:
        return response(OK, report.summary(), "ACCEPT")
    verdict = "REJECT" if report.result is not None and report.result.complete else "INCOMPLETE"
    return response(REJECT, report.summary(), verdict)


def build_parser():
    parser = _Parser(prog="tdsig", description="Threshold directed signatures")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    verbs = parser.add_subparsers(dest="verb", metavar="<verb>", parser_class=_Parser)
    verbs.required = True

    p = verbs.add_parser("params-gen", help="generate (p, q, g)")
    p.add_argument("--p-bits", type=int, default=config.PRODUCTION_P_BITS)
    p.add_argument("--q-bits", type=int, default=config.PRODUCTION_Q_BITS)
    p.add_argument("--out", required=True)
    p.add_argument("--seed")
    p.set_defaults(handler=params_gen)

    p = verbs.add_parser("params-validate", help="check a parameter file")
    p.add_argument("--params", required=True)
    p.add_argument("--allow-toy", action="store_true")
    p.set_defaults(handler=params_validate)

    p = verbs.add_parser("keygen", help="generate a keypair")
    p.add_argument("--params", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed")
    p.set_defaults(handler=keygen_cmd)

    p = verbs.add_parser("deal", help="deal the group secret into shares")
    p.add_argument("--params", required=True)
    p.add_argument("--secret", help="file holding secret=<value>; drawn at random when omitted")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--roster", required=True, help="id:u,id:u,...")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed")
    p.set_defaults(handler=deal_cmd)

    p = verbs.add_parser("ceremony", help="run a signing ceremony")
    p.add_argument("--config", required=True)
    p.add_argument("--out-transcript")
    p.add_argument("--seed")
    p.set_defaults(handler=ceremony_cmd)

    p = verbs.add_parser("verify", help="receiver-side verification")
    p.add_argument("--params", required=True)
    p.add_argument("--group-key", required=True)
    p.add_argument("--receiver-key", required=True)
    p.add_argument("--sig", required=True)
    p.set_defaults(handler=verify_cmd)

    p = verbs.add_parser("confirm", help="prove a signature valid to a third party")
    p.add_argument("--config", required=True)
    p.add_argument("--sig", required=True)
    p.add_argument("--group-key", help="group record holding y_G")
    p.set_defaults(handler=confirm_cmd)

    p = verbs.add_parser("replay-paper", help="replay the worked example end to end")
    p.set_defaults(handler=replay_worked_example)

    p = verbs.add_parser("inject", help="run a ceremony with one fault")
    p.add_argument("--config", required=True)
    p.add_argument("--fault", required=True,
                   help="corrupt_partial:<member>:<delta> | substitute_S:<value> | impersonate:<member> | "
                        "drop_message:<phase>")
    p.set_defaults(handler=inject_cmd)
    return parser


def dispatch(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        err.write(parser.format_usage())
        err.write(f"tdsig: error: {e}\n")
        return USAGE
    except SystemExit as e:
        return OK if e.code in (None, 0) else USAGE

    logging.basicConfig(stream=err, level=logging.DEBUG if args.verbose else config.LOG_LEVEL,
                        format="%(levelname)s %(name)s: %(message)s")
    logger.debug(f"verb {args.verb}")
    try:
        status, lines = args.handler(args)
    except CeremonyError as e:
        err.write(f"tdsig {args.verb}: {e}\n")
        out.write("ABORT\n")
        return REJECT
    except (TdsigError, ValueError) as e:
        err.write(f"tdsig {args.verb}: {e}\n")
        return USAGE
    for line in lines:
        out.write(line + "\n")
    return status


def main():
    sys.exit(dispatch())
