"""
Flat key=value text files for parameters, keys, shares, group records,
signatures and ceremony configs.

Field elements are decimal, messages hex. Blank lines and '#' comments are
ignored; an unknown key is a FormatError. Keys that may repeat (member,
script, tape.*) keep their file order. A line without "=" that holds an arrow
is a scripted hash entry, `Z,W,hex(m)->R`, the same as `script=Z,W,hex(m)->R`.
"""
import logging
import os

from tdsig.errors import FormatError
from tdsig.harness.ceremony import LIVE, CeremonyConfig
from tdsig.params import SCRIPTED, STANDARD, HashOracle, KeyPair, SystemParams, keypair_from_secret
from tdsig.shamir import GroupRecord, Share
from tdsig.threshold import GroupSignature

logger = logging.getLogger(__name__)

ENCODING = "utf-8"
_ARROWS = ("->", "→")


def parse_pairs(text, source="<text>"):
    pairs = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line and any(arrow in line for arrow in _ARROWS):
            pairs.append(("script", line))
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise FormatError(f"{source}:{line_no}: expected key=value, got {raw.strip()!r}")
        pairs.append((key.strip(), value.strip()))
    return pairs


def _single(pairs, allowed, source):
    values = {}
    for key, value in pairs:
        if key not in allowed:
            raise FormatError(f"{source}: unknown key {key!r}")
        if key in values:
            raise FormatError(f"{source}: key {key!r} given twice")
        values[key] = value
    return values


def _int(values, key, source):
    if key not in values:
        raise FormatError(f"{source}: missing {key}")
    try:
        return int(values[key], 10)
    except ValueError:
        raise FormatError(f"{source}: {key} must be a decimal integer, got {values[key]!r}") from None


def parse_hex(value, source="<text>"):
    try:
        return bytes.fromhex(value)
    except ValueError:
        raise FormatError(f"{source}: {value!r} is not a hex message") from None


def _int_list(value, key, source):
    try:
        return tuple(int(part, 10) for part in value.split(",") if part.strip())
    except ValueError:
        raise FormatError(f"{source}: {key} must be comma-separated decimals, got {value!r}") from None


def read_file(path, loader, **kwargs):
    try:
        with open(path, encoding=ENCODING) as f:
            text = f.read()
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e}") from e
    return loader(text, source=str(path), **kwargs)


def write_file(path, text):
    try:
        with open(path, "w", encoding=ENCODING) as f:
            f.write(text)
    except OSError as e:
        raise FormatError(f"cannot write {path}: {e}") from e
    logger.debug(f"wrote {path}")


# parameters

def _parse_script_entry(value, source):
    for arrow in _ARROWS:
        if arrow in value:
            left, right = value.split(arrow, 1)
            break
    else:
        raise FormatError(f"{source}: script entry {value!r} needs '<elements>,<hex m>-><R>'")
    *elements, m_hex = [part.strip() for part in left.split(",")]
    try:
        return tuple(int(e, 10) for e in elements), parse_hex(m_hex, source), int(right.strip(), 10)
    except ValueError:
        raise FormatError(f"{source}: bad script entry {value!r}") from None


PARAM_KEYS = ("p", "q", "g", "hash", "script")


def _params_from_pairs(pairs, source):
    entries = [_parse_script_entry(value, source) for key, value in pairs if key == "script"]
    values = _single([(k, v) for k, v in pairs if k != "script"], PARAM_KEYS, source)
    kind = values.get("hash", SCRIPTED if entries else STANDARD)
    if kind == STANDARD and entries:
        raise FormatError(f"{source}: script entries need hash=scripted")
    if kind == SCRIPTED:
        oracle = HashOracle.scripted(entries)
    elif kind == STANDARD:
        oracle = HashOracle()
    else:
        raise FormatError(f"{source}: unknown hash kind {kind!r}")
    return SystemParams(_int(values, "p", source), _int(values, "q", source), _int(values, "g", source), oracle)


def load_params(text, source="<params>"):
    return _params_from_pairs(parse_pairs(text, source), source)


def dump_params(params):
    lines = [f"p={params.p}", f"q={params.q}", f"g={params.g}", f"hash={params.hash_oracle.kind}"]
    for (elements, m), value in params.hash_oracle.script.items():
        lines.append(",".join([str(e) for e in elements] + [m.hex()]) + f"->{value}")
    return "\n".join(lines) + "\n"


# keys

def load_key(text, source="<key>", params=None):
    values = _single(parse_pairs(text, source), ("x", "y"), source)
    x = _int(values, "x", source)
    if params is not None:
        keypair = keypair_from_secret(params, x)
        if "y" in values and _int(values, "y", source) != keypair.y:
            raise FormatError(f"{source}: y does not match g^x")
        return keypair
    return KeyPair(x, _int(values, "y", source))


def dump_key(keypair):
    return f"x={keypair.x}\ny={keypair.y}\n"


# shares and group records

def load_share(text, source="<share>"):
    values = _single(parse_pairs(text, source), ("id", "member", "u", "v"), source)
    if ("id" in values) == ("member" in values):
        raise FormatError(f"{source}: give the member id once, as id=")
    member_id = values.get("id", values.get("member"))
    return Share(member_id, _int(values, "u", source), _int(values, "v", source))


def dump_share(share):
    return f"id={share.member_id}\nu={share.u}\nv={share.v}\n"


def _member(value, source):
    member_id, sep, u = value.partition(",")
    if not sep or not member_id.strip():
        raise FormatError(f"{source}: member entry {value!r} needs '<id>,<u>'")
    try:
        return member_id.strip(), int(u.strip(), 10)
    except ValueError:
        raise FormatError(f"{source}: member point {u!r} is not a decimal integer") from None


def load_group_record(text, source="<group>"):
    pairs = parse_pairs(text, source)
    members = tuple(_member(value, source) for key, value in pairs if key == "member")
    values = _single([(k, v) for k, v in pairs if k != "member"], ("y_G", "t", "n"), source)
    record = GroupRecord(_int(values, "y_G", source), _int(values, "t", source), _int(values, "n", source), members)
    if members and len(members) != record.n:
        raise FormatError(f"{source}: n={record.n} but {len(members)} members listed")
    return record


def dump_group_record(record):
    lines = [f"y_G={record.y_G}", f"t={record.t}", f"n={record.n}"]
    lines += [f"member={member_id},{u}" for member_id, u in record.members]
    return "\n".join(lines) + "\n"


# signatures

def load_signature(text, source="<signature>"):
    values = _single(parse_pairs(text, source), ("S", "W", "R", "m"), source)
    if "m" not in values:
        raise FormatError(f"{source}: missing m")
    return GroupSignature(_int(values, "S", source), _int(values, "W", source), _int(values, "R", source),
                          parse_hex(values["m"], source))


def dump_signature(sig):
    return f"S={sig.S}\nW={sig.W}\nR={sig.R}\nm={sig.m.hex()}\n"


# ceremony configs

CONFIG_KEYS = PARAM_KEYS + (
    "params", "member", "t", "active", "m", "mode", "seed", "secret", "receiver_x", "ceremony_id",
    "threaded", "y_G", "sdc", "combiner", "receiver", "third_party",
)
_LABELS = {"sdc": "sdc_label", "combiner": "combiner_label", "receiver": "receiver_label",
           "third_party": "third_party_label"}


def _bool(value, key, source):
    lowered = value.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise FormatError(f"{source}: {key} must be true or false, got {value!r}")


def load_config(text, source="<config>", base_dir=None):
    """
    Parse a ceremony config.

    Parameters come either inline (p, q, g, hash, script) or from a params
    file named by params=, resolved against the config file's directory.
    Randomness tapes are tape.<Role>:<label>=v1,v2,...
    """
    pairs = parse_pairs(text, source)
    if base_dir is None and not source.startswith("<"):
        base_dir = os.path.dirname(os.path.abspath(source))

    tapes = {}
    rest = []
    for key, value in pairs:
        if key.startswith("tape."):
            label = key[len("tape."):]
            if label in tapes:
                raise FormatError(f"{source}: tape {label} given twice")
            tapes[label] = _int_list(value, key, source)
        elif key not in CONFIG_KEYS:
            raise FormatError(f"{source}: unknown key {key!r}")
        else:
            rest.append((key, value))

    param_pairs = [(k, v) for k, v in rest if k in PARAM_KEYS]
    roster = tuple(_member(v, source) for k, v in rest if k == "member")
    values = _single([(k, v) for k, v in rest if k not in PARAM_KEYS and k != "member"], CONFIG_KEYS, source)

    if "params" in values:
        if param_pairs:
            raise FormatError(f"{source}: give either params= or inline p, q, g, not both")
        path = values["params"]
        if base_dir and not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        params = read_file(path, load_params)
    else:
        params = _params_from_pairs(param_pairs, source)

    if "receiver_x" not in values:
        raise FormatError(f"{source}: missing receiver_x")
    if "m" not in values:
        raise FormatError(f"{source}: missing m")
    active = tuple(part.strip() for part in values.get("active", "").split(",") if part.strip())
    t = _int(values, "t", source)
    if not active:
        active = tuple(member_id for member_id, _ in roster[:t])

    kwargs = {_LABELS[key]: values[key] for key in _LABELS if key in values}
    optional_ints = {key: _int(values, key, source) for key in ("secret", "y_G") if key in values}
    return CeremonyConfig(
        params=params,
        roster=roster,
        t=t,
        active=active,
        message=parse_hex(values["m"], source),
        receiver=keypair_from_secret(params, _int(values, "receiver_x", source)),
        mode=values.get("mode", LIVE),
        tapes=tapes,
        seed=values.get("seed"),
        ceremony_id=values.get("ceremony_id", "ceremony"),
        threaded=_bool(values.get("threaded", "false"), "threaded", source),
        **optional_ints,
        **kwargs,
    )


def dump_config(config):
    lines = dump_params(config.params).splitlines()
    lines += [f"member={member_id},{u}" for member_id, u in config.roster]
    lines += [
        f"t={config.t}",
        f"active={','.join(config.active)}",
        f"m={config.message.hex()}",
        f"receiver_x={config.receiver.x}",
        f"mode={config.mode}",
        f"ceremony_id={config.ceremony_id}",
    ]
    for key, value in (("secret", config.secret), ("seed", config.seed), ("y_G", config.y_G)):
        if value is not None:
            lines.append(f"{key}={value}")
    if config.threaded:
        lines.append("threaded=true")
    for key, attr in _LABELS.items():
        if getattr(config, attr) != getattr(CeremonyConfig, attr):
            lines.append(f"{key}={getattr(config, attr)}")
    lines += [f"tape.{label}={','.join(str(v) for v in values)}" for label, values in config.tapes.items()]
    return "\n".join(lines) + "\n"


def load_secret(text, source="<secret>"):
    values = _single(parse_pairs(text, source), ("secret",), source)
    return _int(values, "secret", source)


def parse_roster(value, source="--roster"):
    """'A:9,C:12' -> (('A', 9), ('C', 12))"""
    roster = []
    for item in value.split(","):
        member_id, sep, u = item.strip().partition(":")
        if not sep or not member_id:
            raise FormatError(f"{source}: roster entry {item!r} needs '<id>:<u>'")
        try:
            roster.append((member_id, int(u, 10)))
        except ValueError:
            raise FormatError(f"{source}: member point {u!r} is not a decimal integer") from None
    return tuple(roster)
