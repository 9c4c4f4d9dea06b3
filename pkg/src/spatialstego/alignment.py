"""Deterministic global alignment of carrier sequences.

Sender and receiver must derive the same variable columns from the same
carriers, so every tie is broken by a fixed rule: traceback prefers the
diagonal, then a gap in ``b``, then a gap in ``a``; the star centre is the
carrier with the highest summed pairwise score, lowest index on ties.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, TooFewCarriers, TooManyCarriers

GAP = "-"


@dataclass(frozen=True)
class ScoringScheme:
    match: int = 1
    mismatch: int = -1
    gap: int = -2

    def __post_init__(self):
        if not self.match > self.mismatch:
            raise ConfigError("scoring needs match > mismatch")
        if not self.gap < 0:
            raise ConfigError("scoring needs a negative gap penalty")

    def pair(self, x: str, y: str) -> int:
        return self.match if x == y else self.mismatch


DEFAULT_SCORING = ScoringScheme()


class PairwiseAlignment(NamedTuple):
    row_a: str
    row_b: str
    score: int


@dataclass(frozen=True)
class MsaResult:
    rows: tuple[str, ...]

    def __post_init__(self):
        if len({len(r) for r in self.rows}) > 1:
            raise ValueError("MSA rows differ in length")

    @property
    def column_count(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def ungapped(self, k: int) -> str:
        return self.rows[k].replace(GAP, "")


@dataclass(frozen=True)
class VariablePositions:
    template_index: int
    positions: tuple[int, ...]
    template_length: int

    @property
    def capacity(self) -> int:
        return len(self.positions)


def _codes(seq: str) -> np.ndarray:
    return np.frombuffer(seq.encode("ascii"), dtype=np.uint8)


def _score_matrix(a: str, b: str, s: ScoringScheme) -> np.ndarray:
    n, m = len(a), len(b)
    g = s.gap
    H = np.empty((n + 1, m + 1), dtype=np.int64)
    cols = np.arange(m + 1, dtype=np.int64)
    H[0] = g * cols
    bc = _codes(b)
    ac = _codes(a)
    for i in range(1, n + 1):
        prev = H[i - 1]
        sub = np.where(bc == ac[i - 1], s.match, s.mismatch)
        t = np.empty(m + 1, dtype=np.int64)
        t[0] = g * i
        np.maximum(prev[:-1] + sub, prev[1:] + g, out=t[1:])
        # horizontal gaps: H[j] = max_{k<=j} t[k] + g*(j-k)
        H[i] = np.maximum.accumulate(t - g * cols) + g * cols
    return H


def needleman_wunsch(a: str, b: str, s: ScoringScheme = DEFAULT_SCORING) -> PairwiseAlignment:
    """Global alignment with linear gap costs."""
    H = _score_matrix(a, b, s)
    g = s.gap
    out_a, out_b = [], []
    i, j = len(a), len(b)
    while i or j:
        here = H[i, j]
        if i and j and here == H[i - 1, j - 1] + s.pair(a[i - 1], b[j - 1]):
            i, j = i - 1, j - 1
            out_a.append(a[i])
            out_b.append(b[j])
        elif i and here == H[i - 1, j] + g:
            i -= 1
            out_a.append(a[i])
            out_b.append(GAP)
        else:
            j -= 1
            out_a.append(GAP)
            out_b.append(b[j])
    return PairwiseAlignment("".join(reversed(out_a)), "".join(reversed(out_b)), int(H[len(a), len(b)]))


def alignment_score(a: str, b: str, s: ScoringScheme = DEFAULT_SCORING) -> int:
    return int(_score_matrix(a, b, s)[len(a), len(b)])


def _merge(rows: list[str], centre: int, pair: PairwiseAlignment) -> list[str]:
    """Add ``pair.row_b`` to an MSA whose centre row is aligned as ``pair.row_a``."""
    msa_centre = rows[centre]
    cols = [[] for _ in range(len(rows) + 1)]
    i = j = 0
    while i < len(msa_centre) or j < len(pair.row_a):
        if i < len(msa_centre) and msa_centre[i] == GAP:
            for k, row in enumerate(rows):
                cols[k].append(row[i])
            cols[-1].append(GAP)
            i += 1
        elif j < len(pair.row_a) and pair.row_a[j] == GAP:
            for k in range(len(rows)):
                cols[k].append(GAP)
            cols[-1].append(pair.row_b[j])
            j += 1
        else:
            for k, row in enumerate(rows):
                cols[k].append(row[i])
            cols[-1].append(pair.row_b[j])
            i += 1
            j += 1
    return ["".join(c) for c in cols]


def star_msa(carriers, s: ScoringScheme = DEFAULT_SCORING) -> MsaResult:
    carriers = tuple(carriers)
    if len(carriers) < 2:
        raise TooFewCarriers(f"need 2-3 carriers, got {len(carriers)}")
    if len(carriers) > 3:
        raise TooManyCarriers(f"need 2-3 carriers, got {len(carriers)}")
    if not all(carriers):
        raise ConfigError("carriers must be non-empty")
    return _star_msa(carriers, s)


@lru_cache(maxsize=32)
def _star_msa(carriers: tuple[str, ...], s: ScoringScheme) -> MsaResult:
    k = len(carriers)
    if k == 2:
        pair = needleman_wunsch(carriers[0], carriers[1], s)
        return MsaResult((pair.row_a, pair.row_b))

    pairs = {}
    for x in range(k):
        for y in range(x + 1, k):
            pairs[x, y] = needleman_wunsch(carriers[x], carriers[y], s)
    totals = [sum(p.score for (x, y), p in pairs.items() if c in (x, y)) for c in range(k)]
    centre = max(range(k), key=lambda c: (totals[c], -c))

    rows = [carriers[centre]]
    order = [centre]
    for other in range(k):
        if other == centre:
            continue
        if centre < other:
            pair = pairs[centre, other]
        else:
            flipped = pairs[other, centre]
            pair = PairwiseAlignment(flipped.row_b, flipped.row_a, flipped.score)
        rows = _merge(rows, 0, pair)
        order.append(other)
    by_carrier = dict(zip(order, rows))
    return MsaResult(tuple(by_carrier[c] for c in range(k)))


def variable_columns(m: MsaResult, template_index: int) -> VariablePositions:
    """Template coordinates of columns where the aligned rows disagree."""
    if not 0 <= template_index < len(m.rows):
        raise ConfigError(f"template index {template_index} out of range")
    template = m.rows[template_index]
    positions = []
    coord = 0
    for col, symbol in enumerate(template):
        if symbol == GAP:
            continue
        if any(row[col] != symbol for row in m.rows):
            positions.append(coord)
        coord += 1
    return VariablePositions(template_index, tuple(positions), coord)


def carrier_positions(carriers, s: ScoringScheme = DEFAULT_SCORING) -> list[VariablePositions]:
    msa = star_msa(carriers, s)
    return [variable_columns(msa, k) for k in range(len(msa.rows))]
