"""On-disk formats: FASTA carriers, session files and channel configs."""

from __future__ import annotations

import configparser
import os
from importlib import resources
from pathlib import Path

from .alignment import ScoringScheme
from .codec import NUCLEOTIDES, CryptoMap, SigmaMap
from .errors import BadFasta, ConfigError
from .netsim import ChannelSpec
from .pipeline import SessionConfig

SESSION_KEYS = (
    "mac_key",
    "sigma",
    "crypto",
    "scoring",
    "n_packets",
    "total_message_bits",
    "template_policy",
    "carriers",
    "max_packet_bits",
)
REQUIRED_KEYS = set(SESSION_KEYS) - {"max_packet_bits"}


def parse_fasta(text: str) -> list[tuple[str, str]]:
    """Parse FASTA text into ``(header, sequence)`` records.

    Sequences are uppercased and stripped of whitespace; any remaining
    symbol outside ACGT rejects the record.
    """
    records: list[tuple[str, list[str]]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith(";"):
            continue
        if line.startswith(">"):
            records.append((line[1:].strip(), []))
            continue
        if not records:
            raise BadFasta(f"line {lineno}: sequence data before the first '>' header")
        chunk = "".join(line.split()).upper()
        bad = set(chunk) - set(NUCLEOTIDES)
        if bad:
            raise BadFasta(
                f"line {lineno}: record {records[-1][0]!r} has symbols outside ACGT: {''.join(sorted(bad))}"
            )
        records[-1][1].append(chunk)
    out = []
    for header, chunks in records:
        seq = "".join(chunks)
        if not seq:
            raise BadFasta(f"record {header!r} has no sequence")
        out.append((header, seq))
    return out


def read_carriers(path) -> list[tuple[str, str]]:
    try:
        text = Path(path).read_text()
    except UnicodeDecodeError as exc:
        raise BadFasta(f"{path}: not a text file") from exc
    records = parse_fasta(text)
    if not 2 <= len(records) <= 3:
        raise BadFasta(f"{path}: need 2-3 carrier records, found {len(records)}")
    return records


def write_fasta(path, records, width: int = 60) -> None:
    lines = []
    for header, seq in records:
        lines.append(f">{header}")
        lines.extend(seq[i:i + width] for i in range(0, len(seq), width))
    Path(path).write_text("\n".join(lines) + "\n")


def fixture_path(name: str = "carriers.fasta") -> Path:
    """Path of a shipped carrier fixture (``carriers.fasta`` or ``bulk_carriers.fasta``)."""
    return Path(str(resources.files("spatialstego") / "data" / name))


def fixture_carriers(name: str = "carriers.fasta") -> tuple[str, ...]:
    return tuple(seq for _, seq in read_carriers(fixture_path(name)))


def load_session(path) -> SessionConfig:
    path = Path(path)
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        if key not in SESSION_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        values[key] = value.strip()
    missing = REQUIRED_KEYS - values.keys()
    if missing:
        raise ConfigError(f"{path}: missing keys {', '.join(sorted(missing))}")

    try:
        mac_key = bytes.fromhex(values["mac_key"])
        scoring = ScoringScheme(*(int(x) for x in values["scoring"].split(",")))
        n_packets = int(values["n_packets"])
        total = int(values["total_message_bits"])
        max_bits = int(values["max_packet_bits"]) if values.get("max_packet_bits") else None
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    carriers_path = Path(values["carriers"])
    if not carriers_path.is_absolute():
        carriers_path = path.parent / carriers_path
    carriers = tuple(seq for _, seq in read_carriers(carriers_path))

    return SessionConfig(
        mac_key=mac_key,
        carriers=carriers,
        n_packets=n_packets,
        total_message_bits=total,
        sigma=SigmaMap(values["sigma"]),
        crypto=CryptoMap.parse(values["crypto"]),
        scoring=scoring,
        template_policy=values["template_policy"],
        max_packet_bits=max_bits,
    )


def dump_session(cfg: SessionConfig, carriers_path) -> str:
    s = cfg.scoring
    lines = [
        f"mac_key={cfg.mac_key.hex()}",
        f"sigma={cfg.sigma.images}",
        f"crypto={cfg.crypto.describe()}",
        f"scoring={s.match},{s.mismatch},{s.gap}",
        f"n_packets={cfg.n_packets}",
        f"total_message_bits={cfg.total_message_bits}",
        f"template_policy={cfg.template_policy}",
        f"carriers={carriers_path}",
    ]
    if cfg.max_packet_bits is not None:
        lines.append(f"max_packet_bits={cfg.max_packet_bits}")
    return "\n".join(lines) + "\n"


def write_session(path, cfg: SessionConfig, carriers_path) -> None:
    path = Path(path)
    path.write_text(dump_session(cfg, carriers_path))
    os.chmod(path, 0o600)


CHANNEL_KEYS = {"delay_ms", "reorder", "duplicate_prob", "drop_prob", "tamper_prob", "seed"}


def load_channels(path) -> list[ChannelSpec]:
    """Read one :class:`ChannelSpec` per section, in file order.

    Example stanza::

        [fast]
        delay_ms = 5,40
        reorder = yes
        tamper_prob = 0
        seed = 7
    """
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    channels = []
    for name in parser.sections():
        section = parser[name]
        unknown = set(section) - CHANNEL_KEYS
        if unknown:
            raise ConfigError(f"{path}: channel {name!r} has unknown keys {sorted(unknown)}")
        try:
            lo, _, hi = section.get("delay_ms", "0").partition(",")
            channels.append(ChannelSpec(
                delay_ms=(int(lo), int(hi or lo)),
                reorder=section.getboolean("reorder", True),
                duplicate_prob=section.getfloat("duplicate_prob", 0.0),
                drop_prob=section.getfloat("drop_prob", 0.0),
                tamper_prob=section.getfloat("tamper_prob", 0.0),
                rng_seed=section.getint("seed", len(channels)),
            ))
        except ValueError as exc:
            raise ConfigError(f"{path}: channel {name!r}: {exc}") from exc
    if not channels:
        raise ConfigError(f"{path}: no channel sections")
    return channels
