"""Per-packet HMAC-SHA-256 tags over sequence number and stego sequence."""

from __future__ import annotations

import hashlib
import hmac

from .errors import KeyTooShort

VERSION = "SPATIAL/1"
TAG_BYTES = 32
MIN_KEY_BYTES = 16


def _check_key(key: bytes) -> bytes:
    if len(key) < MIN_KEY_BYTES:
        raise KeyTooShort(f"MAC key must be at least {MIN_KEY_BYTES} bytes, got {len(key)}")
    return key


def mac_message(seq_bits: str, sequence: str) -> bytes:
    return f"{VERSION}:{seq_bits}:{sequence}".encode("ascii")


def hmac_sha256(key: bytes, message: bytes) -> bytes:
    return hmac.new(key, message, hashlib.sha256).digest()


def compute_mac(key: bytes, seq_bits: str, sequence: str) -> bytes:
    return hmac_sha256(_check_key(key), mac_message(seq_bits, sequence))


def verify_mac(key: bytes, seq_bits: str, sequence: str, tag: bytes) -> bool:
    expected = compute_mac(key, seq_bits, sequence)
    return hmac.compare_digest(expected, tag)
