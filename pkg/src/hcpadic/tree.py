"""Finite Cayley trees and hard-core configurations on them.

Vertices are numbered breadth first, so every sphere W_m is a contiguous
index range and the ball V_m is a prefix of the vertex list.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

DEFAULT_MAX_VERTICES = 2_000_000
DEFAULT_ENUMERATION_CAP = 16

STATES = (0, 1, 2)


class CapExceeded(RuntimeError):
    """A size guard was hit (tree too large or enumeration too expensive)."""


def level_size(k: int, m: int) -> int:
    """|W_m| on the Cayley tree of order k."""
    if m == 0:
        return 1
    return (k + 1) * k ** (m - 1)


@dataclass(frozen=True)
class TreeLayout:
    k: int
    depth: int
    parent: tuple[int, ...]
    level: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]
    offsets: tuple[int, ...]  # offsets[m] = index of first vertex in W_m

    root = 0

    @property
    def size(self) -> int:
        return len(self.parent)

    def sphere(self, m: int) -> range:
        """Vertex indices of W_m."""
        return range(self.offsets[m], self.offsets[m + 1])

    def ball_size(self, m: int, include_root: bool = True) -> int:
        """|V_m|; with ``include_root=False`` the union W_1 .. W_m."""
        if m < 0:
            return 0
        return self.offsets[m + 1] - (0 if include_root else 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        for x in range(1, self.size):
            yield self.parent[x], x


def build_tree(k: int, n: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> TreeLayout:
    if k < 1:
        raise ValueError("order k must be >= 1")
    if n < 0:
        raise ValueError("depth n must be >= 0")
    total = sum(level_size(k, m) for m in range(n + 1))
    if total > max_vertices:
        raise CapExceeded(f"|V_{n}| = {total} exceeds the cap of {max_vertices} vertices")
    parent, level = [-1], [0]
    children: list[list[int]] = [[]]
    offsets = [0, 1]
    frontier = [0]
    for m in range(1, n + 1):
        nxt = []
        for x in frontier:
            for _ in range(k + 1 if x == 0 else k):
                y = len(parent)
                parent.append(x)
                level.append(m)
                children.append([])
                children[x].append(y)
                nxt.append(y)
        frontier = nxt
        offsets.append(len(parent))
    return TreeLayout(
        k=k,
        depth=n,
        parent=tuple(parent),
        level=tuple(level),
        children=tuple(tuple(c) for c in children),
        offsets=tuple(offsets),
    )


@dataclass(frozen=True)
class Configuration:
    layout: TreeLayout
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.layout.size:
            raise ValueError(
                f"configuration has {len(self.values)} values for {self.layout.size} vertices"
            )
        if any(s not in STATES for s in self.values):
            raise ValueError("states must be 0, 1 or 2")

    def __getitem__(self, x: int) -> int:
        return self.values[x]

    def to_string(self) -> str:
        return "".join(map(str, self.values))

    @classmethod
    def from_string(cls, layout: TreeLayout, text: str) -> Configuration:
        return cls(layout, tuple(int(ch) for ch in text.strip()))

    def restrict(self, layout: TreeLayout) -> Configuration:
        """Restriction to a smaller ball built with the same k."""
        return Configuration(layout, self.values[: layout.size])


def compatible(a: int, b: int) -> bool:
    """Neighbour states allowed by the hard-core rule (sum not 0 or 3)."""
    return a + b not in (0, 3)


def is_admissible(c: Configuration) -> bool:
    v = c.values
    return all(compatible(v[x], v[y]) for x, y in c.layout.edges())


def occupied_count(c: Configuration, include_root: bool = True) -> int:
    start = 0 if include_root else 1
    return sum(1 for s in c.values[start:] if s >= 1)


def iter_admissible_states(
    layout: TreeLayout,
    fixed: Mapping[int, int] | Sequence[int] | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
    include_root: bool = True,
) -> Iterator[tuple[int | None, ...]]:
    """Admissible state tuples, depth first over vertex index, states 0, 1, 2.

    ``fixed`` is either a mapping vertex -> state or a prefix of states.  With
    ``include_root=False`` the root is left out (its entry is None) and the
    spheres W_1, ..., W_n are enumerated on their own.
    """
    size = layout.size
    if size - (0 if include_root else 1) > cap:
        raise CapExceeded(f"|V_{layout.depth}| = {size} exceeds the enumeration cap {cap}")
    if fixed is None:
        fixed = {}
    elif not isinstance(fixed, Mapping):
        fixed = dict(enumerate(fixed))
    for x, s in fixed.items():
        if not 0 <= x < size or s not in STATES:
            raise ValueError(f"bad fixed assignment {x} -> {s}")
    choices = [(fixed[x],) if x in fixed else STATES for x in range(size)]
    if not include_root:
        choices[0] = (None,)
    parent = layout.parent
    state: list[int | None] = [0] * size

    def extend(x: int) -> Iterator[tuple[int | None, ...]]:
        if x == size:
            yield tuple(state)
            return
        px = parent[x]
        for s in choices[x]:
            if px >= 0 and state[px] is not None and not compatible(state[px], s):
                continue
            state[x] = s
            yield from extend(x + 1)

    yield from extend(0)


def enumerate_admissible(
    layout: TreeLayout,
    fixed: Mapping[int, int] | Sequence[int] | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Iterator[Configuration]:
    for values in iter_admissible_states(layout, fixed, cap):
        yield Configuration(layout, values)
