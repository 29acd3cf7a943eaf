"""Bitstring algebra for thread addressing.

Finite bitstrings are plain ``str`` values over the alphabet ``"01"``; the
empty string plays the role of epsilon and is written ``e`` in textual form.
Infinite bitstrings are restricted to the eventually constant ones: a finite
prefix followed by an all-zero or all-one tail.  Every thread address a
desk-scale play can produce is of this shape, and the all-one tails supply
essentially infinite witnesses for tests.

The fusion/defusion pair interleaves n bitstrings into one and splits one
back into n by residue classes of positions (positions count from 1).  It is
the address-translation workhorse of the strategy transformers.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

ZEROS = "0"
ONES = "1"

_FUSION_FREE_CAP = 14  # refuse to enumerate more than 2**14 fusions


class BitsError(ValueError):
    pass


def check_bits(w: str) -> str:
    if any(c not in "01" for c in w):
        raise BitsError(f"not a bitstring: {w!r}")
    return w


@dataclass(frozen=True)
class InfBits:
    """An eventually constant infinite bitstring: ``prefix`` then ``tail`` forever.

    Instances are canonicalized on construction (the prefix never ends with
    the tail bit), so equality and hashing coincide with equality of the
    denoted infinite strings.
    """

    prefix: str = ""
    tail: str = ZEROS

    def __post_init__(self):
        check_bits(self.prefix)
        if self.tail not in (ZEROS, ONES):
            raise BitsError(f"tail must be '0' or '1', got {self.tail!r}")
        object.__setattr__(self, "prefix", self.prefix.rstrip(self.tail))

    def bit(self, i: int) -> str:
        """The i'th bit, 1-based."""
        if i < 1:
            raise BitsError("bit positions are 1-based")
        return self.prefix[i - 1] if i <= len(self.prefix) else self.tail

    def take(self, n: int) -> str:
        """The length-n initial segment."""
        return (self.prefix + self.tail * n)[:n]

    def startswith(self, u: str) -> bool:
        p = self.prefix
        if len(u) <= len(p):
            return p.startswith(u)
        return u.startswith(p) and u[len(p):].strip(self.tail) == ""

    @property
    def essentially_finite(self) -> bool:
        """True iff the string contains finitely many 1s."""
        return self.tail == ZEROS

    def one_count(self) -> int:
        """Number of 1s; defined only for essentially finite strings."""
        if not self.essentially_finite:
            raise BitsError("infinitely many 1s")
        return self.prefix.count("1")

    def __str__(self) -> str:
        return f"{self.prefix or 'e'}:{self.tail}*"

    @classmethod
    def parse(cls, text: str) -> "InfBits":
        """Parse the textual form ``w:0*`` / ``w:1*`` (``e`` or empty for epsilon)."""
        head, sep, tail = text.partition(":")
        if sep != ":" or tail not in ("0*", "1*"):
            raise BitsError(f"bad infinite bitstring spec: {text!r}")
        if head == "e":
            head = ""
        return cls(check_bits(head), tail[0])


def zeros(prefix: str = "") -> InfBits:
    return InfBits(prefix, ZEROS)


def ones(prefix: str = "") -> InfBits:
    return InfBits(prefix, ONES)


def format_bits(w: str) -> str:
    return w or "e"


def parse_bits(text: str) -> str:
    if text == "e":
        return ""
    return check_bits(text)


def is_prefix(u: str, x) -> bool:
    """True iff finite ``u`` is a (not necessarily proper) initial segment of ``x``."""
    check_bits(u)
    if isinstance(x, InfBits):
        return x.startswith(u)
    return check_bits(x).startswith(u)


def shortlex(i: int) -> str:
    """The i'th finite bitstring (i >= 1) in shortlex order: e,0,1,00,01,10,11,000,...

    Strings of length L occupy indices 2**L .. 2**(L+1)-1, so every finite
    bitstring is reached exactly once.
    """
    if i < 1:
        raise BitsError("shortlex is 1-based")
    length = i.bit_length() - 1
    offset = i - (1 << length)
    return format(offset, "b").zfill(length) if length else ""


def _fusion_length(lengths: list[int]) -> int:
    n = len(lengths)
    return max(n * l - n + i for i, l in enumerate(lengths, start=1))


def fusions(xs) -> tuple[str, ...]:
    """All shortest interleavings of finite bitstrings ``xs``.

    Bit j of input i is pinned at position j*n - n + i of the result, where
    n = len(xs); positions left unconstrained range over both bits, hence the
    result is a set.  All members share the same length.
    """
    xs = [check_bits(x) for x in xs]
    if not xs:
        raise BitsError("fusion of an empty family")
    n = len(xs)
    total = _fusion_length([len(x) for x in xs])
    slots: list[str | None] = [None] * total
    for i, x in enumerate(xs, start=1):
        for j, b in enumerate(x, start=1):
            slots[j * n - n + i - 1] = b
    free = [k for k, s in enumerate(slots) if s is None]
    if len(free) > _FUSION_FREE_CAP:
        raise BitsError(f"fusion would have 2**{len(free)} members")
    out = []
    for fill in product("01", repeat=len(free)):
        for k, b in zip(free, fill):
            slots[k] = b
        out.append("".join(slots))  # type: ignore[arg-type]
    for k in free:
        slots[k] = None
    return tuple(sorted(out))


def fuse_inf(xs) -> InfBits:
    """The unique fusion of essentially finite infinite bitstrings.

    Position j*n - n + i of the result carries bit j of xs[i-1]; since every
    input is eventually zero, so is the interleaving.
    """
    xs = list(xs)
    if not xs:
        raise BitsError("fusion of an empty family")
    for x in xs:
        if not isinstance(x, InfBits) or not x.essentially_finite:
            raise BitsError("fuse_inf needs essentially finite infinite bitstrings")
    n = len(xs)
    depth = max((len(x.prefix) for x in xs), default=0)
    out = []
    for j in range(1, depth + 1):
        for x in xs:
            out.append(x.bit(j))
    return InfBits("".join(out), ZEROS)


def _defuse_finite(z: str, n: int) -> tuple[str, ...]:
    return tuple("".join(z[k] for k in range(i - 1, len(z), n)) for i in range(1, n + 1))


def defusion(z, n: int):
    """Split ``z`` into n components by position residues (1-based, mod n).

    Component i collects the bits at positions j with j mod n == i (residue 0
    belongs to component n).  Infinite inputs yield infinite components with
    the same tail kind.
    """
    if n < 1:
        raise BitsError("defusion arity must be positive")
    if isinstance(z, InfBits):
        parts = _defuse_finite(z.prefix, n)
        return tuple(InfBits(p, z.tail) for p in parts)
    return _defuse_finite(check_bits(z), n)
