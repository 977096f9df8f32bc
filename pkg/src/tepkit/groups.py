"""Canonical element arithmetic for the built-in groups.

Three families are supported: the lattices Z^d, the free groups F_n
(n >= 2) and the discrete Heisenberg group in exponential coordinates.
Elements are plain immutable values (tuples or strings); the group object
carries the operations and the canonical total order used to sort shapes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

Element = Union[Tuple[int, ...], str]

_INT_LIMIT = 2**31

_FREE_LETTERS = "abcdefghijklmnopqrstuvwxyz"


class GroupMismatchError(ValueError):
    """Raised when elements from different groups are combined."""


class Group:
    """Base for the built-in group families."""

    kind: str

    def identity(self) -> Element:
        raise NotImplementedError

    def mul(self, g: Element, h: Element) -> Element:
        raise NotImplementedError

    def inv(self, g: Element) -> Element:
        raise NotImplementedError

    def check(self, g: Element) -> None:
        """Validate the canonical encoding of ``g``; raise ValueError if bad."""
        raise NotImplementedError

    def key(self, g: Element):
        """Sort key realizing the canonical total order on elements."""
        raise NotImplementedError

    def element_to_json(self, g: Element):
        raise NotImplementedError

    def element_from_json(self, data) -> Element:
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Group) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(str(self.to_json()))

    def __repr__(self):
        return f"{type(self).__name__}({self.to_json()})"


class LatticeGroup(Group):
    """Z^d with componentwise addition; elements are integer d-tuples."""

    kind = "lattice"

    def __init__(self, d: int):
        if d < 1:
            raise ValueError("lattice dimension must be >= 1")
        self.d = d

    def identity(self):
        return (0,) * self.d

    def mul(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inv(self, g):
        return tuple(-a for a in g)

    def check(self, g):
        if not (isinstance(g, tuple) and len(g) == self.d):
            raise ValueError(f"expected an integer {self.d}-tuple, got {g!r}")
        for a in g:
            if not isinstance(a, int):
                raise ValueError(f"non-integer coordinate in {g!r}")
            if abs(a) >= _INT_LIMIT:
                raise ValueError(f"coordinate {a} out of supported range")

    def key(self, g):
        return g

    def element_to_json(self, g):
        return list(g)

    def element_from_json(self, data):
        g = tuple(int(a) for a in data)
        self.check(g)
        return g

    def to_json(self):
        return {"kind": "lattice", "d": self.d}


def _letter_ok(c: str, n: int) -> bool:
    return c.lower() in _FREE_LETTERS[:n]


def free_reduce(word: str) -> str:
    """Cancel adjacent inverse pairs; capitals are inverse generators."""
    out: list[str] = []
    for c in word:
        if out and out[-1] != c and out[-1].lower() == c.lower():
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def free_inverse(word: str) -> str:
    return "".join(c.swapcase() for c in reversed(word))


class FreeGroup(Group):
    """F_n as reduced words; 'a'..'z' are generators, capitals their inverses."""

    kind = "free"

    def __init__(self, n: int):
        if not 2 <= n <= 26:
            raise ValueError("free rank must be between 2 and 26")
        self.n = n
        self._rank = {}
        for i, c in enumerate(_FREE_LETTERS[: self.n]):
            self._rank[c] = 2 * i
            self._rank[c.upper()] = 2 * i + 1

    def identity(self):
        return ""

    def mul(self, g, h):
        # Concatenate and cancel across the seam only; both sides reduced.
        i = len(g)
        j = 0
        while i > 0 and j < len(h) and g[i - 1] != h[j] and g[i - 1].lower() == h[j].lower():
            i -= 1
            j += 1
        return g[:i] + h[j:]

    def inv(self, g):
        return free_inverse(g)

    def check(self, g):
        if not isinstance(g, str):
            raise ValueError(f"expected a word, got {g!r}")
        for c in g:
            if not _letter_ok(c, self.n):
                raise ValueError(f"letter {c!r} outside the first {self.n} generators")
        if free_reduce(g) != g:
            raise ValueError(f"word {g!r} is not reduced")

    def key(self, g):
        return (len(g), tuple(self._rank[c] for c in g))

    def element_to_json(self, g):
        return g

    def element_from_json(self, data):
        g = free_reduce(str(data))
        self.check(g)
        return g

    def to_json(self):
        return {"kind": "free", "n": self.n}

    # -- Cayley-tree helpers used by the tree convex geometry -------------

    def distance(self, g: str, h: str) -> int:
        p = self._common_prefix(g, h)
        return (len(g) - p) + (len(h) - p)

    @staticmethod
    def _common_prefix(g: str, h: str) -> int:
        p = 0
        m = min(len(g), len(h))
        while p < m and g[p] == h[p]:
            p += 1
        return p

    def geodesic(self, g: str, h: str) -> list[str]:
        """Vertices of the tree geodesic from g to h, endpoints included."""
        p = self._common_prefix(g, h)
        path = [g[:i] for i in range(len(g), p - 1, -1)]
        path.extend(h[: i + 1] for i in range(p, len(h)))
        return path

    def ball(self, center: str, radius: int) -> list[str]:
        """All elements at tree distance <= radius from center."""
        if radius < 0:
            return []
        seen = {center}
        frontier = [center]
        for _ in range(radius):
            nxt = []
            for w in frontier:
                for s in self._rank:
                    v = self.mul(w, s)
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            frontier = nxt
        return sorted(seen, key=self.key)


class HeisenbergGroup(Group):
    """Discrete Heisenberg group in exponential coordinates.

    An element is (a, b, c2) standing for (a, b, c2/2) in R^3 with the
    product (a,b,c)*(a',b',c') = (a+a', b+b', c+c'+(ab'-a'b)/2); the
    parity constraint c2 == a*b (mod 2) carves out the discrete lattice.
    """

    kind = "heisenberg"

    def identity(self):
        return (0, 0, 0)

    def mul(self, g, h):
        a, b, c2 = g
        a2, b2, d2 = h
        return (a + a2, b + b2, c2 + d2 + a * b2 - a2 * b)

    def inv(self, g):
        a, b, c2 = g
        return (-a, -b, -c2)

    def check(self, g):
        if not (isinstance(g, tuple) and len(g) == 3 and all(isinstance(x, int) for x in g)):
            raise ValueError(f"expected an integer triple, got {g!r}")
        a, b, c2 = g
        if (c2 - a * b) % 2 != 0:
            raise ValueError(f"parity violated in {g!r}: need c2 == a*b mod 2")
        for x in g:
            if abs(x) >= _INT_LIMIT:
                raise ValueError(f"coordinate {x} out of supported range")

    def key(self, g):
        return g

    def element_to_json(self, g):
        return list(g)

    def element_from_json(self, data):
        g = tuple(int(x) for x in data)
        self.check(g)
        return g

    def to_json(self):
        return {"kind": "heisenberg"}


def group_from_json(data) -> Group:
    kind = data["kind"] if isinstance(data, dict) else data
    if kind == "lattice":
        return LatticeGroup(int(data["d"]))
    if kind == "free":
        return FreeGroup(int(data["n"]))
    if kind == "heisenberg":
        return HeisenbergGroup()
    raise ValueError(f"unknown group kind {kind!r}")


@dataclass(frozen=True)
class Shape:
    """A canonical finite subset of a group.

    Members are strictly sorted under the group's canonical order, so equal
    shapes have identical encodings and hash equal.
    """

    group: Group
    members: Tuple[Element, ...]

    def __post_init__(self):
        keys = [self.group.key(m) for m in self.members]
        if any(k2 <= k1 for k1, k2 in zip(keys, keys[1:])):
            raise ValueError("shape members must be strictly sorted; use shape()")

    def __contains__(self, g):
        return g in self._member_set

    @property
    def _member_set(self):
        ms = self.__dict__.get("_ms")
        if ms is None:
            ms = frozenset(self.members)
            object.__setattr__(self, "_ms", ms)
        return ms

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def to_json(self):
        return {
            "group": self.group.to_json(),
            "members": [self.group.element_to_json(m) for m in self.members],
        }

    @staticmethod
    def from_json(data) -> "Shape":
        group = group_from_json(data["group"])
        return shape(group, (group.element_from_json(m) for m in data["members"]))


def shape(group: Group, members: Iterable[Element]) -> Shape:
    """Canonicalize a collection of elements into a Shape."""
    uniq = set(members)
    for m in uniq:
        group.check(m)
    return Shape(group, tuple(sorted(uniq, key=group.key)))


def translate_shape(g: Element, s: Shape) -> Shape:
    """Left translate: {g * x : x in s}."""
    s.group.check(g)
    return shape(s.group, (s.group.mul(g, x) for x in s.members))


def sample_element(group: Group, rng, radius: int = 4) -> Element:
    """A random element of bounded size, for property spot-checks."""
    if isinstance(group, LatticeGroup):
        return tuple(rng.randint(-radius, radius) for _ in range(group.d))
    if isinstance(group, FreeGroup):
        letters = _FREE_LETTERS[: group.n]
        word = ""
        for _ in range(rng.randint(0, radius)):
            choices = [
                s
                for c in letters
                for s in (c, c.upper())
                if not (word and word[-1] != s and word[-1].lower() == s.lower())
            ]
            word += rng.choice(choices)
        return word
    if isinstance(group, HeisenbergGroup):
        a = rng.randint(-radius, radius)
        b = rng.randint(-radius, radius)
        c2 = a * b + 2 * rng.randint(-radius, radius)
        return (a, b, c2)
    raise ValueError(f"cannot sample from {group!r}")


def difference_set(s: Shape) -> Shape:
    """The set {x^-1 * y : x, y in s}, used for midpointedness checks."""
    if not s.members:
        raise ValueError("difference set of an empty shape")
    grp = s.group
    out = set()
    for x in s.members:
        xi = grp.inv(x)
        for y in s.members:
            out.add(grp.mul(xi, y))
    return shape(grp, out)
