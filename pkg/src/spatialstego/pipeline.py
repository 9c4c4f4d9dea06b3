"""Sender and receiver transforms over a shared session configuration."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import auth
from .alignment import DEFAULT_SCORING, ScoringScheme, VariablePositions, carrier_positions
from .codec import (
    CryptoMap,
    SigmaMap,
    bits_to_text,
    check_nucleotides,
    crypto_apply,
    sigma_decode,
    sigma_encode,
    text_to_bits,
)
from .errors import (
    BadVersion,
    CapacityExceeded,
    ConfigError,
    MacFailure,
    MessageSizeMismatch,
    SeqMismatch,
    TotalSizeMismatch,
    WrongCount,
)
from .fragmentation import (
    Fragment,
    FramedStream,
    TearPlan,
    deframe,
    encode_path,
    frame,
    header_width_nt,
    join,
    read_size,
    tear,
)
from .stego import detect_template, embed, extract


@dataclass(frozen=True)
class SessionConfig:
    """Everything both peers share out of band."""

    mac_key: bytes
    carriers: tuple[str, ...]
    n_packets: int
    total_message_bits: int
    sigma: SigmaMap = SigmaMap()
    crypto: CryptoMap = CryptoMap()
    scoring: ScoringScheme = DEFAULT_SCORING
    template_policy: str = "round_robin"
    max_packet_bits: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "carriers", tuple(self.carriers))
        auth._check_key(self.mac_key)
        if not 2 <= len(self.carriers) <= 3:
            raise ConfigError(f"need 2-3 carriers, got {len(self.carriers)}")
        for carrier in self.carriers:
            if not carrier:
                raise ConfigError("carriers must be non-empty")
            check_nucleotides(carrier)
        if len(set(self.carriers)) != len(self.carriers):
            raise ConfigError("carriers must be pairwise distinct")
        if self.n_packets < 2:
            raise ConfigError(f"n_packets must be >= 2, got {self.n_packets}")
        bits = self.total_message_bits
        if bits <= 0 or bits % 2:
            raise ConfigError(f"total_message_bits must be even and positive, got {bits}")
        if self.n_packets > bits // 2:
            raise ConfigError(f"{bits} bits cannot be torn into {self.n_packets} fragments")
        self.template_for(0)
        if self.max_packet_bits is not None and bits > self.max_packet_bits:
            raise ConfigError(f"message of {bits} bits exceeds max_packet_bits={self.max_packet_bits}")

    def template_for(self, k: int) -> int:
        """Carrier index used for the ``k``-th fragment in leaf order."""
        policy = self.template_policy
        if policy == "round_robin":
            return k % len(self.carriers)
        if policy.startswith("fixed:"):
            try:
                index = int(policy[len("fixed:"):])
            except ValueError:
                index = -1
            if 0 <= index < len(self.carriers):
                return index
        raise ConfigError(f"bad template policy {policy!r}")

    @property
    def header_nt(self) -> int:
        return header_width_nt(self.total_message_bits)

    def positions(self) -> list[VariablePositions]:
        return carrier_positions(self.carriers, self.scoring)


@dataclass(frozen=True)
class StegoEnvelope:
    seq_bits: str
    sequence: str
    mac: bytes
    version: str = auth.VERSION


@dataclass
class SenderTrace:
    """Intermediate values of one sender run."""

    bits: str
    cipher: str
    encoded: str
    fragments: list[Fragment]
    streams: list[FramedStream]
    templates: list[int] = field(default_factory=list)


def prepare(plaintext: bytes, cfg: SessionConfig, plan: TearPlan) -> SenderTrace:
    """Cipher, sigma-encode, tear and frame without embedding."""
    if 8 * len(plaintext) != cfg.total_message_bits:
        raise MessageSizeMismatch(
            f"plaintext is {8 * len(plaintext)} bits, session expects {cfg.total_message_bits}"
        )
    if plan.n_leaves != cfg.n_packets:
        raise ConfigError(f"plan has {plan.n_leaves} leaves, session expects {cfg.n_packets}")
    bits = text_to_bits(plaintext)
    cipher = crypto_apply(cfg.crypto, bits)
    encoded = sigma_encode(cfg.sigma, cipher)
    fragments = tear(encoded, plan)
    streams = [frame(f, cfg) for f in fragments]
    templates = [cfg.template_for(k) for k in range(len(fragments))]
    return SenderTrace(bits, cipher, encoded, fragments, streams, templates)


def packet_seed(filler_seed, k: int) -> str:
    return f"{filler_seed}/{k}"


def sender_encode(plaintext: bytes, cfg: SessionConfig, plan: TearPlan, filler_seed=0) -> list[StegoEnvelope]:
    trace = prepare(plaintext, cfg, plan)
    vps = cfg.positions()
    for k, (stream, t) in enumerate(zip(trace.streams, trace.templates)):
        if len(stream) > vps[t].capacity:
            raise CapacityExceeded(
                f"fragment {k} needs {len(stream)} nt but carrier {t} has {vps[t].capacity} variable positions"
            )
    envelopes = []
    for k, (fragment, stream, t) in enumerate(zip(trace.fragments, trace.streams, trace.templates)):
        stego = embed(cfg.carriers[t], vps[t], stream, packet_seed(filler_seed, k))
        seq_bits = encode_path(fragment.path, cfg.n_packets)
        tag = auth.compute_mac(cfg.mac_key, seq_bits, stego.residues)
        envelopes.append(StegoEnvelope(seq_bits, stego.residues, tag))
    return envelopes


def verify_envelope(env: StegoEnvelope, cfg: SessionConfig) -> bool:
    return env.version == auth.VERSION and auth.verify_mac(cfg.mac_key, env.seq_bits, env.sequence, env.mac)


def open_envelope(env: StegoEnvelope, cfg: SessionConfig, vps=None) -> Fragment:
    """Extract and deframe one already-authenticated envelope."""
    vps = vps if vps is not None else cfg.positions()
    t = detect_template(env.sequence, cfg.carriers, vps)
    fragment = deframe(extract(env.sequence, vps[t]), cfg)
    if encode_path(fragment.path, cfg.n_packets) != env.seq_bits:
        raise SeqMismatch(
            f"envelope says {env.seq_bits}, embedded trailer says {encode_path(fragment.path, cfg.n_packets)}"
        )
    return fragment


def receiver_decode(envelopes, cfg: SessionConfig) -> bytes:
    envelopes = list(envelopes)
    for env in envelopes:
        if env.version != auth.VERSION:
            raise BadVersion(f"unsupported envelope version {env.version!r}")
        if not auth.verify_mac(cfg.mac_key, env.seq_bits, env.sequence, env.mac):
            raise MacFailure(env.seq_bits)
    if len(envelopes) != cfg.n_packets:
        raise WrongCount(f"expected {cfg.n_packets} envelopes, got {len(envelopes)}")

    vps = cfg.positions()
    fragments = [open_envelope(env, cfg, vps) for env in envelopes]
    encoded = join(fragments)
    if 2 * len(encoded) != cfg.total_message_bits:
        raise TotalSizeMismatch(
            f"joined message has {2 * len(encoded)} bits, session expects {cfg.total_message_bits}"
        )
    return bits_to_text(crypto_apply(cfg.crypto, sigma_decode(cfg.sigma, encoded)))


@dataclass
class PacketReport:
    seq_bits: str
    mac_ok: bool
    template: int
    header: str
    size: int
    payload: str
    trailer: str
    path: tuple[int, ...]
    filler: str


def inspect_envelope(env: StegoEnvelope, cfg: SessionConfig) -> PacketReport:
    """Break an envelope down into its framed parts, without requiring a valid MAC."""
    mac_ok = verify_envelope(env, cfg)
    vps = cfg.positions()
    t = detect_template(env.sequence, cfg.carriers, vps)
    raw = extract(env.sequence, vps[t])
    fragment = deframe(raw, cfg)
    hn = cfg.header_nt
    size = read_size(raw[:hn], cfg)
    trailer_nt = cfg.n_packets - 1
    return PacketReport(
        seq_bits=env.seq_bits,
        mac_ok=mac_ok,
        template=t,
        header=raw[:hn],
        size=size,
        payload=fragment.payload,
        trailer=raw[hn + size - trailer_nt:hn + size],
        path=fragment.path,
        filler=raw[hn + size:],
    )
