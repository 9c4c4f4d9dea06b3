"""Substitution embedding of framed streams into a template carrier."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .alignment import VariablePositions
from .codec import NUCLEOTIDES, check_nucleotides
from .errors import AmbiguousTemplate, CapacityExceeded, LengthMismatch, UnknownCarrier
from .fragmentation import FramedStream


@dataclass(frozen=True)
class StegoSequence:
    residues: str
    template_index: int


def embed(template: str, vp: VariablePositions, stream: FramedStream | str, filler_seed) -> StegoSequence:
    """Write ``stream`` into the variable positions of ``template``.

    Positions are consumed in increasing order; any left over after the
    stream receive seeded random nucleotides. Everything else is copied.
    """
    data = stream.stream if isinstance(stream, FramedStream) else stream
    check_nucleotides(data)
    if len(template) != vp.template_length:
        raise LengthMismatch(f"template has {len(template)} nt, positions expect {vp.template_length}")
    if len(data) > vp.capacity:
        raise CapacityExceeded(
            f"framed stream of {len(data)} nt exceeds the {vp.capacity} variable positions "
            f"of carrier {vp.template_index}"
        )
    rng = random.Random(filler_seed)
    residues = list(template)
    for n, pos in enumerate(vp.positions):
        residues[pos] = data[n] if n < len(data) else rng.choice(NUCLEOTIDES)
    return StegoSequence("".join(residues), vp.template_index)


def extract(stego: str, vp: VariablePositions) -> str:
    if len(stego) != vp.template_length:
        raise LengthMismatch(f"sequence has {len(stego)} nt, template has {vp.template_length}")
    return "".join(stego[p] for p in vp.positions)


def matches_template(stego: str, carrier: str, vp: VariablePositions) -> bool:
    if len(stego) != len(carrier):
        return False
    free = set(vp.positions)
    return all(s == c for i, (s, c) in enumerate(zip(stego, carrier)) if i not in free)


def detect_template(stego: str, carriers, vps) -> int:
    if not carriers:
        raise UnknownCarrier("no carriers configured")
    hits = [k for k, (carrier, vp) in enumerate(zip(carriers, vps)) if matches_template(stego, carrier, vp)]
    if not hits:
        raise UnknownCarrier("sequence matches no carrier outside its variable positions")
    if len(hits) > 1:
        raise AmbiguousTemplate(f"sequence matches carriers {hits}")
    return hits[0]
