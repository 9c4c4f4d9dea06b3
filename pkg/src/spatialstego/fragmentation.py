"""Tearing the encoded message into fragments, numbering and framing them.

A fragment's packet number is its root-to-leaf path in the tear tree, e.g.
``(2, 2, 1)`` for the first child of the second child of the second child of
the root. Each path digit occupies one dibit, ``00`` being reserved as
left padding, which caps every node at three children.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .codec import (
    check_nucleotides,
    crypto_apply,
    int_to_bits,
    sigma_decode,
    sigma_encode,
)
from .errors import (
    BadWidth,
    ConfigError,
    DuplicatePath,
    EmptyPath,
    IncompleteTree,
    InvalidPlan,
    PathTooDeep,
    PlanLengthMismatch,
    PrefixConflict,
    SizeOverflow,
    TruncatedStream,
    ZeroDigitAfterPadding,
)

MAX_ARITY = 3

TearPath = tuple[int, ...]


@dataclass(frozen=True)
class Fragment:
    payload: str
    path: TearPath


@dataclass(frozen=True)
class FramedStream:
    header: str
    payload: str
    trailer: str

    @property
    def stream(self) -> str:
        return self.header + self.payload + self.trailer

    def __len__(self) -> int:
        return len(self.header) + len(self.payload) + len(self.trailer)


class TearPlan:
    """Shape of a tear tree with fragment lengths at the leaves.

    ``tree`` is the list of the root's children; each child is either a
    leaf length (``int``) or a nested list of 2-3 children. The demo plan
    is ``TearPlan([23, [8, [9, 32]]])``.
    """

    def __init__(self, tree):
        if isinstance(tree, int):
            tree = [tree]
        self.tree = _freeze(tree)
        self._validate()

    def _validate(self):
        root = self.tree
        if not 1 <= len(root) <= MAX_ARITY:
            raise InvalidPlan(f"root must have 1-{MAX_ARITY} children, got {len(root)}")
        if len(root) == 1 and not isinstance(root[0], int):
            raise InvalidPlan("a single root child must be a leaf")

        def walk(node, top):
            if isinstance(node, int):
                if node < 1:
                    raise InvalidPlan(f"leaf length must be >= 1, got {node}")
                return
            if not top and not 2 <= len(node) <= MAX_ARITY:
                raise InvalidPlan(f"internal node must have 2-{MAX_ARITY} children, got {len(node)}")
            for child in node:
                walk(child, False)

        walk(root, True)

    def leaves(self) -> list[tuple[TearPath, int]]:
        """(path, length) for every leaf, left to right."""
        out = []

        def walk(node, prefix):
            for index, child in enumerate(node, start=1):
                path = prefix + (index,)
                if isinstance(child, int):
                    out.append((path, child))
                else:
                    walk(child, path)

        walk(self.tree, ())
        return out

    @property
    def n_leaves(self) -> int:
        return len(self.leaves())

    @property
    def total(self) -> int:
        return sum(length for _, length in self.leaves())

    @property
    def depth(self) -> int:
        return max(len(path) for path, _ in self.leaves())

    def to_json(self) -> str:
        return json.dumps(_thaw(self.tree), separators=(",", ":"))

    @classmethod
    def parse(cls, text: str) -> "TearPlan":
        try:
            tree = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidPlan(f"tear plan is not valid JSON: {exc}") from exc
        if not isinstance(tree, (int, list)):
            raise InvalidPlan("tear plan must be a nested list of integers")
        return cls(tree)

    @classmethod
    def random(cls, total: int, n_leaves: int, rng: random.Random) -> "TearPlan":
        """Recursive binary tears at uniform cut points until ``n_leaves`` leaves."""
        if not 1 <= n_leaves <= total:
            raise InvalidPlan(f"cannot tear {total} nucleotides into {n_leaves} fragments")
        root: list = [total]
        splittable = [(root, 0)]  # (parent list, index) of leaves with length >= 2
        if total < 2:
            splittable = []
        for _ in range(n_leaves - 1):
            parent, index = splittable.pop(rng.randrange(len(splittable)))
            length = parent[index]
            cut = rng.randint(1, length - 1)
            if parent is root and len(root) == 1:
                root[:] = [cut, length - cut]
                node = root
            else:
                node = [cut, length - cut]
                parent[index] = node
            for i in (0, 1):
                if node[i] >= 2:
                    splittable.append((node, i))
        return cls(root)

    def __eq__(self, other):
        return isinstance(other, TearPlan) and self.tree == other.tree

    def __hash__(self):
        return hash(self.tree)

    def __repr__(self):
        return f"TearPlan({self.to_json()})"


def _freeze(node):
    if isinstance(node, bool):
        raise InvalidPlan("tear plan leaves must be integers")
    if isinstance(node, int):
        return node
    if isinstance(node, (list, tuple)):
        return tuple(_freeze(child) for child in node)
    raise InvalidPlan(f"tear plan node must be int or list, got {type(node).__name__}")


def _thaw(node):
    return node if isinstance(node, int) else [_thaw(child) for child in node]


def tear(e: str, plan: TearPlan) -> list[Fragment]:
    leaves = plan.leaves()
    if plan.total != len(e):
        raise PlanLengthMismatch(f"plan covers {plan.total} nucleotides but E has {len(e)}")
    fragments = []
    offset = 0
    for path, length in leaves:
        fragments.append(Fragment(e[offset:offset + length], path))
        offset += length
    return fragments


def check_tree(paths) -> list[TearPath]:
    """Validate that ``paths`` are exactly the leaves of a tear tree.

    Returns the paths in left-to-right leaf order.
    """
    ordered = sorted(paths)
    if not ordered:
        raise IncompleteTree("no fragments")
    for a, b in zip(ordered, ordered[1:]):
        if a == b:
            raise DuplicatePath(f"path {list(a)} appears twice")
        if b[:len(a)] == a:
            raise PrefixConflict(f"path {list(a)} is a prefix of {list(b)}")

    children: dict[TearPath, set[int]] = {}
    for path in ordered:
        for depth in range(len(path)):
            children.setdefault(path[:depth], set()).add(path[depth])
    for node, kids in children.items():
        if kids != set(range(1, len(kids) + 1)):
            raise IncompleteTree(f"node {list(node)} has non-contiguous children {sorted(kids)}")
        is_root = node == ()
        leaf_only_root = is_root and kids == {1} and (1,) in ordered
        if len(kids) < 2 and not leaf_only_root:
            raise IncompleteTree(f"node {list(node)} is missing a sibling of {sorted(kids)}")
    return ordered


def join(fragments: list[Fragment]) -> str:
    by_path = {}
    paths = []
    for fragment in fragments:
        paths.append(fragment.path)
        by_path[fragment.path] = fragment.payload
    return "".join(by_path[path] for path in check_tree(paths))


def encode_path(path: TearPath, n_packets: int) -> str:
    width = n_packets - 1
    if not path:
        raise EmptyPath("empty tear path")
    if len(path) > width:
        raise PathTooDeep(f"path of depth {len(path)} does not fit N={n_packets}")
    for digit in path:
        if not 1 <= digit <= MAX_ARITY:
            raise InvalidPlan(f"path digit {digit} outside 1..{MAX_ARITY}")
    return "00" * (width - len(path)) + "".join(int_to_bits(d, 2) for d in path)


def decode_path(bits: str, n_packets: int) -> TearPath:
    if len(bits) != 2 * (n_packets - 1) or bits.strip("01"):
        raise BadWidth(f"packet number must be {2 * (n_packets - 1)} bits, got {bits!r}")
    digits = [int(bits[i:i + 2], 2) for i in range(0, len(bits), 2)]
    path = []
    for digit in digits:
        if digit:
            path.append(digit)
        elif path:
            raise ZeroDigitAfterPadding(f"00 pair after a path digit in {bits}")
    if not path:
        raise EmptyPath(f"packet number {bits} holds no path digits")
    return tuple(path)


def header_width_nt(total_message_bits: int) -> int:
    if total_message_bits < 1:
        raise ConfigError("total_message_bits must be >= 1")
    bits = total_message_bits.bit_length()
    return (bits + bits % 2) // 2


def frame(f: Fragment, cfg) -> FramedStream:
    """Wrap a fragment as size header, payload, packet-number trailer.

    The size counts payload plus trailer nucleotides and passes through the
    crypto map; the trailer is sigma-encoded without the crypto map.
    """
    n = cfg.n_packets
    width = 2 * header_width_nt(cfg.total_message_bits)
    size = len(f.payload) + n - 1
    if size >= 1 << width:
        raise SizeOverflow(f"size {size} does not fit a {width}-bit header")
    header = sigma_encode(cfg.sigma, crypto_apply(cfg.crypto, int_to_bits(size, width)))
    trailer = sigma_encode(cfg.sigma, encode_path(f.path, n))
    return FramedStream(header, f.payload, trailer)


def read_size(header: str, cfg) -> int:
    return int(crypto_apply(cfg.crypto, sigma_decode(cfg.sigma, header)) or "0", 2)


def deframe(extracted: str, cfg) -> Fragment:
    check_nucleotides(extracted)
    hn = header_width_nt(cfg.total_message_bits)
    trailer_nt = cfg.n_packets - 1
    if len(extracted) < hn:
        raise TruncatedStream(f"stream of {len(extracted)} nt is shorter than the {hn}-nt header")
    size = read_size(extracted[:hn], cfg)
    if size <= trailer_nt:
        raise TruncatedStream(f"size field {size} leaves no room for a payload")
    if len(extracted) < hn + size:
        raise TruncatedStream(f"size field claims {size} nt but only {len(extracted) - hn} follow")
    body = extracted[hn:hn + size]
    payload, trailer = body[:size - trailer_nt], body[size - trailer_nt:]
    path = decode_path(sigma_decode(cfg.sigma, trailer), cfg.n_packets)
    return Fragment(payload, path)
