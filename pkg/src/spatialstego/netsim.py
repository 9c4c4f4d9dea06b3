"""Envelope wire format and a seeded multi-channel transport simulator.

The simulator runs on a virtual millisecond clock. Envelope ``k`` goes out
on channel ``k % len(channels)``; each channel draws delays and faults
from its own seeded RNG, so a run is reproducible from the channel seeds.
"""

from __future__ import annotations

import random
import socket
import threading
from dataclasses import dataclass, field
from typing import Optional

from . import auth
from .codec import NUCLEOTIDES
from .errors import (
    BadAlphabet,
    BadTagLength,
    BadVersion,
    ConfigError,
    MissingLine,
    SpatialError,
    WireFormatError,
)
from .pipeline import SessionConfig, StegoEnvelope, receiver_decode, verify_envelope

_HEX = set("0123456789abcdef")


def serialize(e: StegoEnvelope) -> bytes:
    return f"{e.version}\n{e.seq_bits}\n{e.sequence}\n{e.mac.hex()}\n".encode("ascii")


def parse(data: bytes) -> StegoEnvelope:
    """Strict inverse of :func:`serialize`; validates before any crypto."""
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise BadAlphabet("envelope is not ASCII") from exc
    lines = text.split("\n")
    if lines[-1] != "":
        raise MissingLine("envelope must end with a newline")
    lines = lines[:-1]
    if len(lines) < 4:
        raise MissingLine(f"envelope has {len(lines)} lines, expected 4")
    if len(lines) > 4:
        raise WireFormatError(f"envelope has {len(lines)} lines, expected 4")
    version, seq_bits, sequence, tag = lines
    if version != auth.VERSION:
        raise BadVersion(f"unsupported envelope version {version!r}")
    if not seq_bits or seq_bits.strip("01"):
        raise BadAlphabet(f"sequence number must be 0/1 digits: {seq_bits!r}")
    if not sequence or sequence.strip(NUCLEOTIDES):
        raise BadAlphabet("sequence line must be non-empty A/C/G/T")
    if len(tag) != 2 * auth.TAG_BYTES:
        raise BadTagLength(f"tag must be {2 * auth.TAG_BYTES} hex chars, got {len(tag)}")
    if not set(tag) <= _HEX:
        raise BadAlphabet("tag must be lowercase hex")
    return StegoEnvelope(seq_bits, sequence, bytes.fromhex(tag), version)


@dataclass(frozen=True)
class ChannelSpec:
    delay_ms: tuple[int, int] = (0, 0)
    reorder: bool = True
    duplicate_prob: float = 0.0
    drop_prob: float = 0.0
    tamper_prob: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        lo, hi = self.delay_ms
        if not 0 <= lo <= hi:
            raise ConfigError(f"bad delay range {self.delay_ms}")
        for name in ("duplicate_prob", "drop_prob", "tamper_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {p}")


@dataclass(frozen=True)
class Event:
    time_ms: int
    event: str
    seq_bits: str
    channel: int

    def __str__(self):
        return f"{self.time_ms} {self.event} {self.seq_bits} {self.channel}"


@dataclass
class SimulationResult:
    log: list[Event]
    arrivals: list[StegoEnvelope]
    arrival_times: list[int] = field(default_factory=list)

    def log_lines(self) -> list[str]:
        return [str(e) for e in self.log]


def tamper(e: StegoEnvelope, rng: random.Random) -> StegoEnvelope:
    """Substitute one residue of the sequence with a different nucleotide."""
    pos = rng.randrange(len(e.sequence))
    new = rng.choice([nt for nt in NUCLEOTIDES if nt != e.sequence[pos]])
    seq = e.sequence[:pos] + new + e.sequence[pos + 1:]
    return StegoEnvelope(e.seq_bits, seq, e.mac, e.version)


def simulate_send(envelopes, channels, send_interval_ms: int = 0) -> SimulationResult:
    if not channels:
        raise ConfigError("need at least one channel")
    rngs = [random.Random(c.rng_seed) for c in channels]
    last_arrival = [0] * len(channels)
    log: list[Event] = []
    pending = []  # (arrival time, tie-break order, channel, envelope)
    order = 0
    for k, env in enumerate(envelopes):
        cid = k % len(channels)
        spec, rng = channels[cid], rngs[cid]
        sent = k * send_interval_ms
        log.append(Event(sent, "send", env.seq_bits, cid))
        if rng.random() < spec.drop_prob:
            log.append(Event(sent, "drop", env.seq_bits, cid))
            continue
        copies = 2 if rng.random() < spec.duplicate_prob else 1
        for _ in range(copies):
            arrival = sent + rng.randint(*spec.delay_ms)
            if not spec.reorder:
                arrival = max(arrival, last_arrival[cid])
                last_arrival[cid] = arrival
            copy = env
            if rng.random() < spec.tamper_prob:
                copy = tamper(env, rng)
                log.append(Event(sent, "tamper", env.seq_bits, cid))
            pending.append((arrival, order, cid, copy))
            order += 1
    pending.sort(key=lambda p: (p[0], p[1]))
    arrivals, times = [], []
    for arrival, _, cid, env in pending:
        log.append(Event(arrival, "deliver", env.seq_bits, cid))
        arrivals.append(env)
        times.append(arrival)
    log.sort(key=lambda e: e.time_ms)
    return SimulationResult(log, arrivals, times)


class Collector:
    """Receiver-side buffer: authenticates, de-duplicates, waits for N packets.

    Insertions are serialised with a lock so concurrent transports can feed
    one collector.
    """

    def __init__(self, cfg: SessionConfig):
        self.cfg = cfg
        self._lock = threading.Lock()
        self._accepted: dict[str, StegoEnvelope] = {}
        self.rejected: list[str] = []
        self.duplicates: list[str] = []
        self.malformed = 0

    def add(self, env: StegoEnvelope) -> bool:
        ok = verify_envelope(env, self.cfg)
        with self._lock:
            if not ok:
                self.rejected.append(env.seq_bits)
                return False
            if env.seq_bits in self._accepted:
                self.duplicates.append(env.seq_bits)
                return False
            self._accepted[env.seq_bits] = env
            return True

    def add_wire(self, data: bytes) -> bool:
        try:
            env = parse(data)
        except (WireFormatError, BadAlphabet):
            with self._lock:
                self.malformed += 1
            return False
        return self.add(env)

    @property
    def envelopes(self) -> list[StegoEnvelope]:
        with self._lock:
            return list(self._accepted.values())

    @property
    def ready(self) -> bool:
        with self._lock:
            return len(self._accepted) >= self.cfg.n_packets

    def decode(self) -> bytes:
        return receiver_decode(self.envelopes, self.cfg)


@dataclass
class TransferReport:
    result: SimulationResult
    accepted: list[str]
    rejected: list[str]
    duplicates: list[str]
    plaintext: Optional[bytes] = None
    error: Optional[Exception] = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.plaintext is not None


def run_transfer(envelopes, channels, cfg: SessionConfig, timeout_ms: Optional[int] = None,
                 send_interval_ms: int = 0) -> TransferReport:
    """Simulate delivery, collect at the receiver and decode.

    Arrivals later than ``timeout_ms`` are ignored. Missing packets surface
    as a :class:`~spatialstego.errors.WrongCount` in ``report.error``.
    """
    result = simulate_send(envelopes, channels, send_interval_ms)
    collector = Collector(cfg)
    for env, t in zip(result.arrivals, result.arrival_times):
        if timeout_ms is not None and t > timeout_ms:
            continue
        collector.add(env)
    report = TransferReport(
        result, [e.seq_bits for e in collector.envelopes], collector.rejected, collector.duplicates
    )
    try:
        report.plaintext = collector.decode()
    except SpatialError as exc:
        report.error = exc
    return report


def loopback_transfer(envelopes, collector: Collector, timeout: float = 10.0) -> None:
    """Send each envelope over its own local TCP connection, concurrently."""
    server = socket.create_server(("127.0.0.1", 0))
    server.settimeout(timeout)
    port = server.getsockname()[1]
    envelopes = list(envelopes)
    errors: list[BaseException] = []

    def handle(conn):
        with conn:
            conn.settimeout(timeout)
            chunks = []
            while True:
                chunk = conn.recv(65536)
                if not chunk:
                    break
                chunks.append(chunk)
        collector.add_wire(b"".join(chunks))

    def serve():
        workers = []
        try:
            for _ in envelopes:
                conn, _ = server.accept()
                t = threading.Thread(target=handle, args=(conn,))
                t.start()
                workers.append(t)
        except BaseException as exc:
            errors.append(exc)
        for t in workers:
            t.join(timeout)

    def send(env):
        try:
            with socket.create_connection(("127.0.0.1", port), timeout=timeout) as sock:
                sock.sendall(serialize(env))
        except BaseException as exc:
            errors.append(exc)

    with server:
        acceptor = threading.Thread(target=serve)
        acceptor.start()
        senders = [threading.Thread(target=send, args=(env,)) for env in envelopes]
        for t in senders:
            t.start()
        for t in senders:
            t.join(timeout)
        acceptor.join(timeout)
    if errors:
        raise errors[0]
