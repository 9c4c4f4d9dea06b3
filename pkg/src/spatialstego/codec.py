"""Bit- and nucleotide-level transforms.

Bit strings are plain ``str`` objects over ``'0'``/``'1'`` and nucleotide
sequences are ``str`` objects over ``ACGT``. Keeping both as strings makes
the golden values directly comparable with hand-written fixtures.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import cycle, permutations

from .errors import BadAlphabet, ConfigError, EmptyKey, LengthNotByteAligned, OddBitLength

NUCLEOTIDES = "ACGT"
DIBITS = ("00", "01", "10", "11")

_BIT_FLIP = str.maketrans("01", "10")


def check_bits(bits: str) -> str:
    if bits.strip("01"):
        raise BadAlphabet(f"bit string contains symbols other than 0/1: {bits!r}")
    return bits


def check_nucleotides(seq: str) -> str:
    if seq.strip(NUCLEOTIDES):
        bad = sorted(set(seq) - set(NUCLEOTIDES))
        raise BadAlphabet(f"sequence contains non-ACGT symbols: {''.join(bad)!r}")
    return seq


def text_to_bits(plaintext: bytes) -> str:
    """Expand bytes into their 8-bit big-endian binary form."""
    return "".join(f"{byte:08b}" for byte in plaintext)


def bits_to_text(bits: str) -> bytes:
    check_bits(bits)
    if len(bits) % 8:
        raise LengthNotByteAligned(f"{len(bits)} bits is not a whole number of bytes")
    return bytes(int(bits[i:i + 8], 2) for i in range(0, len(bits), 8))


def int_to_bits(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


@dataclass(frozen=True)
class CryptoMap:
    """A keyed involution on bit strings.

    ``complement`` flips every bit (the demo map T(0)=1, T(1)=0).
    ``xor-keystream`` XORs with the key bits repeated cyclically.
    """

    kind: str = "complement"
    key_material: bytes = b""

    KINDS = ("complement", "xor-keystream")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ConfigError(f"unknown crypto map kind {self.kind!r}")
        if self.kind == "xor-keystream" and not self.key_material:
            raise EmptyKey("xor-keystream crypto map needs non-empty key material")

    @classmethod
    def complement(cls) -> "CryptoMap":
        return cls("complement")

    @classmethod
    def xor(cls, key: bytes) -> "CryptoMap":
        return cls("xor-keystream", bytes(key))

    def describe(self) -> str:
        if self.kind == "complement":
            return "complement"
        return "xor:" + self.key_material.hex()

    @classmethod
    def parse(cls, text: str) -> "CryptoMap":
        text = text.strip()
        if text == "complement":
            return cls.complement()
        if text.startswith("xor:"):
            try:
                key = bytes.fromhex(text[4:])
            except ValueError as exc:
                raise ConfigError(f"bad xor key hex: {text[4:]!r}") from exc
            return cls.xor(key)
        raise ConfigError(f"unknown crypto map {text!r}")


def crypto_apply(m: CryptoMap, bits: str) -> str:
    check_bits(bits)
    if m.kind == "complement":
        return bits.translate(_BIT_FLIP)
    if not m.key_material:
        raise EmptyKey("xor-keystream crypto map needs non-empty key material")
    keystream = cycle(text_to_bits(m.key_material))
    return "".join("1" if b != k else "0" for b, k in zip(bits, keystream))


@dataclass(frozen=True)
class SigmaMap:
    """Bijection between dibits and nucleotides.

    ``images`` lists the nucleotides that 00, 01, 10 and 11 map to, so the
    demo map is ``SigmaMap("ACGT")``.
    """

    images: str = NUCLEOTIDES

    def __post_init__(self):
        if len(self.images) != 4 or set(self.images) != set(NUCLEOTIDES):
            raise ConfigError(f"sigma images must be a permutation of ACGT, got {self.images!r}")

    @classmethod
    def all_maps(cls) -> list["SigmaMap"]:
        return [cls("".join(p)) for p in permutations(NUCLEOTIDES)]

    @property
    def inverse(self) -> dict[str, str]:
        return {nt: DIBITS[i] for i, nt in enumerate(self.images)}


def sigma_encode(s: SigmaMap, bits: str) -> str:
    check_bits(bits)
    if len(bits) % 2:
        raise OddBitLength(f"cannot group {len(bits)} bits into dibits")
    table = dict(zip(DIBITS, s.images))
    return "".join(table[bits[i:i + 2]] for i in range(0, len(bits), 2))


def sigma_decode(s: SigmaMap, seq: str) -> str:
    check_nucleotides(seq)
    inverse = s.inverse
    return "".join(inverse[nt] for nt in seq)
