"""
Ceremony transcripts as text, one record per line:

    <phase> <sender> <receiver|*> key=value ...

Field elements are decimal, messages hex. The same format is used for the
confirmation moves, so a full replay is one file.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from tdsig.config import TRANSCRIPT_ENCODING
from tdsig.errors import FormatError
from tdsig.harness.messages import BROADCAST, Envelope, Phase, Role, payload_fields

logger = logging.getLogger(__name__)

# values that must never leave their owner on the open channel
SECRET_KEYS = frozenset({"v", "k1", "k2", "x", "x_B", "z"})

# a share's v travels only inside dealing; the verifier's v is public once move 3 is sent
V_PHASES = frozenset({Phase.DEALING.value, Phase.CONFIRM_3.value})


def format_value(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, (bytes, bytearray)):
        return bytes(value).hex()
    if isinstance(value, Enum):
        return str(value.value)
    return str(value)


@dataclass(frozen=True)
class TranscriptRecord:
    phase: str
    sender: str
    to: str
    fields: Tuple[Tuple[str, str], ...]

    @property
    def is_broadcast(self) -> bool:
        return self.to == BROADCAST

    def get(self, key: str) -> Optional[str]:
        for name, value in self.fields:
            if name == key:
                return value
        return None

    def keys(self) -> List[str]:
        return [name for name, _ in self.fields]

    def line(self) -> str:
        parts = [self.phase, self.sender, self.to] + [f"{name}={value}" for name, value in self.fields]
        return " ".join(parts)

    @classmethod
    def of(cls, envelope: Envelope) -> "TranscriptRecord":
        fields = tuple((name, format_value(value)) for name, value in payload_fields(envelope.payload))
        return cls(envelope.phase.value, str(envelope.sender), str(envelope.to), fields)


Transcript = Sequence[Union[Envelope, TranscriptRecord]]


def as_records(transcript: Transcript) -> List[TranscriptRecord]:
    return [item if isinstance(item, TranscriptRecord) else TranscriptRecord.of(item) for item in transcript]


def format_transcript(transcript: Transcript) -> str:
    return "".join(record.line() + "\n" for record in as_records(transcript))


def parse_line(line: str, line_no: int = 0) -> TranscriptRecord:
    parts = line.split()
    if len(parts) < 3:
        raise FormatError(f"line {line_no}: expected '<phase> <sender> <receiver> key=value ...'")
    phase, sender, to = parts[:3]
    try:
        Phase(phase)
    except ValueError:
        raise FormatError(f"line {line_no}: unknown phase {phase!r}") from None
    fields = []
    for part in parts[3:]:
        name, sep, value = part.partition("=")
        if not sep or not name:
            raise FormatError(f"line {line_no}: malformed field {part!r}")
        fields.append((name, value))
    return TranscriptRecord(phase, sender, to, tuple(fields))


def load_transcript(text: str) -> List[TranscriptRecord]:
    records = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        records.append(parse_line(stripped, line_no))
    return records


def read_transcript(path) -> List[TranscriptRecord]:
    try:
        with open(path, encoding=TRANSCRIPT_ENCODING) as f:
            return load_transcript(f.read())
    except OSError as e:
        raise FormatError(f"cannot read transcript {path}: {e}") from e


def write_transcript(path, transcript: Transcript):
    with open(path, "w", encoding=TRANSCRIPT_ENCODING) as f:
        f.write(format_transcript(transcript))


@dataclass(frozen=True)
class LintViolation:
    index: int
    record: TranscriptRecord
    reason: str

    def __str__(self):
        return f"record {self.index} ({self.record.phase} {self.record.sender} -> {self.record.to}): {self.reason}"


def _signer_label(party: str) -> Optional[str]:
    role, _, label = party.partition(":")
    return label if role == Role.SIGNER.value else None


def lint_transcript(transcript: Transcript, active: Optional[Iterable[str]] = None) -> List[LintViolation]:
    """
    Check the secrecy discipline of a transcript.

    Args:
        transcript: envelopes or parsed records
        active: ids of the signing subset H; taken from the round-1 broadcasts when omitted

    Returns:
        list: every violation found, empty for a clean transcript
    """
    records = as_records(transcript)
    if active is None:
        active = {r.get("member_id") for r in records if r.phase == Phase.ROUND1_BROADCAST.value}
    active = set(active)
    violations = []
    for index, record in enumerate(records):
        keys = set(record.keys())
        if record.is_broadcast:
            for key in sorted(keys & SECRET_KEYS):
                violations.append(LintViolation(index, record, f"secret field {key} on the broadcast channel"))
            continue
        for key in sorted(keys & {"k1", "k2", "x", "x_B"}):
            violations.append(LintViolation(index, record, f"secret field {key} sent to {record.to}"))
        if "z" in keys:
            sender, receiver = _signer_label(record.sender), _signer_label(record.to)
            if record.phase != Phase.ROUND1_DIRECT.value or sender not in active or receiver not in active:
                violations.append(LintViolation(index, record, "z outside the signing subset"))
        if "v" in keys and record.phase not in V_PHASES:
            violations.append(LintViolation(index, record, f"v sent during {record.phase}"))
    for violation in violations:
        logger.debug(f"lint: {violation}")
    return violations


def combiner_view(transcript: Transcript, combiner: str = "Combiner:DC") -> List[TranscriptRecord]:
    """Everything the combiner received: its direct inbox plus every broadcast it did not send."""
    return [
        record for record in as_records(transcript)
        if record.to == combiner or (record.is_broadcast and record.sender != combiner)
    ]
