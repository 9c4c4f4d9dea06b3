"""Regenerate the shipped carrier fixtures.

``carriers.fasta``: three ~900 nt gene-like carriers derived from one
random ancestor, ~2.5% independent substitutions each (~5% pairwise) plus
one short indel apiece so every carrier has a distinct length.

``bulk_carriers.fasta``: three unrelated random carriers of ~2400 nt,
whose alignment leaves well over 1100 variable positions per carrier.
"""

import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from spatialstego.files import write_fasta  # noqa: E402

NT = "ACGT"
DATA = Path(__file__).resolve().parents[1] / "src" / "spatialstego" / "data"


def mutate(seq, rng, rate):
    out = list(seq)
    for i in range(3, len(out) - 3):
        if rng.random() < rate:
            out[i] = rng.choice([n for n in NT if n != out[i]])
    return "".join(out)


def main():
    rng = random.Random(20100402)
    ancestor = "ATG" + "".join(rng.choice(NT) for _ in range(894)) + "TAA"
    c0 = mutate(ancestor, rng, 0.025)
    c1 = mutate(ancestor, rng, 0.025)
    c1 = c1[:300] + c1[303:]
    c2 = mutate(ancestor, rng, 0.025)
    c2 = c2[:600] + "GCA" + c2[600:]
    write_fasta(DATA / "carriers.fasta", [
        ("carrier_a synthetic olfactory-receptor-like stand-in", c0),
        ("carrier_b synthetic olfactory-receptor-like stand-in", c1),
        ("carrier_c synthetic olfactory-receptor-like stand-in", c2),
    ])

    rng = random.Random(4096)
    bulk = ["ATG" + "".join(rng.choice(NT) for _ in range(n)) for n in (2397, 2387, 2407)]
    write_fasta(DATA / "bulk_carriers.fasta", [
        (f"bulk_{k} unrelated random carrier", seq) for k, seq in enumerate(bulk)
    ])


if __name__ == "__main__":
    main()
