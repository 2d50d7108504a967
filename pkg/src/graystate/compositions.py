"""Bounded integer compositions (fixed-digit-sum ditstrings) and their Gray codes.

A ditstring is stored as a tuple in index order ``(m_1, ..., m_n)``; position 1
is the rightmost digit when displayed, so ``display((2, 1, 0)) == "012"``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from math import comb
from typing import Iterator, NamedTuple, Optional, Sequence

from .errors import (
    DimensionCapError,
    EmptySectorError,
    InvalidGrayCodeError,
    InvalidSpecError,
    SearchFailure,
)

Ditstring = tuple[int, ...]

DEFAULT_MAX_DIM = 2**24
MAX_DIM_ENV = "GRAYSTATE_MAX_DIM"


@dataclass(frozen=True)
class CompositionSpec:
    """The sector of ``n`` digits in ``0..two_s`` summing to ``k``."""

    n: int
    k: int
    two_s: int

    def __post_init__(self):
        for name in ("n", "k", "two_s"):
            if not isinstance(getattr(self, name), int):
                raise InvalidSpecError(f"{name} must be an integer")
        if self.n < 1:
            raise InvalidSpecError(f"n must be >= 1, got {self.n}")
        if self.two_s < 1:
            raise InvalidSpecError(f"two_s must be >= 1, got {self.two_s}")
        if self.k < 0:
            raise InvalidSpecError(f"k must be >= 0, got {self.k}")

    @property
    def d(self) -> int:
        return self.two_s + 1

    @property
    def s(self) -> float:
        return self.two_s / 2

    @property
    def is_empty(self) -> bool:
        return self.k > self.n * self.two_s

    def contains(self, m: Sequence[int]) -> bool:
        return (
            len(m) == self.n
            and all(0 <= x <= self.two_s for x in m)
            and sum(m) == self.k
        )


def max_dim_cap() -> int:
    """Current cap on sector size; ``GRAYSTATE_MAX_DIM`` overrides the default."""
    raw = os.environ.get(MAX_DIM_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_DIM
    try:
        return int(raw)
    except ValueError:
        raise InvalidSpecError(f"{MAX_DIM_ENV} must be an integer, got {raw!r}")


def dimension(spec: CompositionSpec) -> int:
    """Number of ditstrings in the sector, by inclusion-exclusion."""
    n, k, d = spec.n, spec.k, spec.d
    if spec.is_empty:
        return 0
    total = 0
    for l in range(k // d + 1):
        total += (-1) ** l * comb(n, l) * comb(k - l * d + n - 1, n - 1)
    return total


def display(m: Sequence[int]) -> str:
    """Render a ditstring as ``m_n ... m_1``; comma-separated when d > 10."""
    if all(0 <= x <= 9 for x in m):
        return "".join(str(x) for x in reversed(m))
    return ",".join(str(x) for x in reversed(m))


def parse_ditstring(text: str, n: Optional[int] = None) -> Ditstring:
    """Inverse of :func:`display`."""
    text = text.strip()
    if "," in text or (n == 1 and text.isdigit()):
        # a single wide digit prints without a comma
        try:
            digits = [int(t) for t in text.split(",")]
        except ValueError:
            raise InvalidSpecError(f"cannot parse ditstring {text!r}") from None
    else:
        if not text.isdigit():
            raise InvalidSpecError(f"cannot parse ditstring {text!r}")
        digits = [int(c) for c in text]
    m = tuple(reversed(digits))
    if n is not None and len(m) != n:
        raise InvalidSpecError(f"ditstring {text!r} has {len(m)} digits, expected {n}")
    return m


def _check_cap(spec: CompositionSpec, max_dim: Optional[int]) -> int:
    dim = dimension(spec)
    if dim == 0:
        raise EmptySectorError(
            f"no ditstrings with digit sum {spec.k} for n={spec.n}, two_s={spec.two_s}"
        )
    cap = max_dim_cap() if max_dim is None else max_dim
    if dim > cap:
        raise DimensionCapError(f"sector dimension {dim} exceeds cap {cap}")
    return dim


def enumerate_sector(spec: CompositionSpec) -> list[Ditstring]:
    """All sector ditstrings in ascending lexicographic order of ``(m_1, ..., m_n)``."""
    n, k, top = spec.n, spec.k, spec.two_s
    out: list[Ditstring] = []
    prefix: list[int] = []

    def rec(pos: int, remaining: int) -> None:
        slots = n - pos
        if slots == 0:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        # remaining digits must be able to absorb what is left
        lo = max(0, remaining - top * (slots - 1))
        hi = min(top, remaining)
        for v in range(lo, hi + 1):
            prefix.append(v)
            rec(pos + 1, remaining - v)
            prefix.pop()

    if not spec.is_empty:
        rec(0, k)
    return out


# --------------------------------------------------------------------------
# Walsh's non-recursive Gray code

@dataclass(frozen=True)
class WalshState:
    """A composition ``g = (g_1, ..., g_n)`` together with its sector."""

    spec: CompositionSpec
    g: Ditstring

    @property
    def suffix_sums(self) -> tuple[int, ...]:
        sums = [0] * self.spec.n
        acc = 0
        for i in range(self.spec.n - 1, -1, -1):
            sums[i] = acc
            acc += self.g[i]
        return tuple(sums)

    @property
    def prefix_capacities(self) -> tuple[int, ...]:
        return tuple(self.spec.two_s * i for i in range(self.spec.n))

    def bounds(self) -> list[tuple[int, int]]:
        """Per-part ``(L_i, U_i)`` given the current suffix sums."""
        k, top = self.spec.k, self.spec.two_s
        return [
            _part_bounds(k, top, s_i, m_i)
            for s_i, m_i in zip(self.suffix_sums, self.prefix_capacities)
        ]


def _part_bounds(k: int, top: int, suffix: int, capacity: int) -> tuple[int, int]:
    return max(0, k - suffix - capacity), min(top, k - suffix)


def _first_last(k: int, top: int, suffix: int, capacity: int) -> tuple[int, int]:
    lo, hi = _part_bounds(k, top, suffix, capacity)
    return (lo, hi) if suffix % 2 == 0 else (hi, lo)


def walsh_initial(spec: CompositionSpec) -> WalshState:
    """The lexicographically largest composition (greedy fill from part 1)."""
    if spec.is_empty:
        raise EmptySectorError(
            f"no ditstrings with digit sum {spec.k} for n={spec.n}, two_s={spec.two_s}"
        )
    g = []
    remaining = spec.k
    for _ in range(spec.n):
        v = min(spec.two_s, remaining)
        g.append(v)
        remaining -= v
    return WalshState(spec, tuple(g))


def walsh_successor(state: WalshState) -> Optional[WalshState]:
    """Next composition in Walsh's order, or ``None`` if ``state`` is the final one."""
    spec = state.spec
    k, top = spec.k, spec.two_s
    g = list(state.g)
    suffix = list(state.suffix_sums)

    pivot = None
    for i in range(1, spec.n):
        _, last = _first_last(k, top, suffix[i], top * i)
        if g[i] != last:
            pivot = i
            break
    if pivot is None:
        return None

    step = 1 if suffix[pivot] % 2 == 0 else -1
    g[pivot] += step

    # every suffix sum below the pivot now includes the changed part
    for j in range(pivot - 1, -1, -1):
        first, _ = _first_last(k, top, suffix[j] + step, top * j)
        if g[j] != first:
            g[j] = first
            break
    else:  # pragma: no cover - part 1 is pinned by the digit sum
        raise InvalidGrayCodeError(f"no second pivot for {state.g}")
    return WalshState(spec, tuple(g))


def walsh_iter(spec: CompositionSpec) -> Iterator[Ditstring]:
    state: Optional[WalshState] = walsh_initial(spec)
    while state is not None:
        yield state.g
        state = walsh_successor(state)


# --------------------------------------------------------------------------
# Gray code container and checks

@dataclass(frozen=True)
class GrayCode:
    spec: CompositionSpec
    entries: tuple[Ditstring, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Ditstring]:
        return iter(self.entries)

    def __getitem__(self, l: int) -> Ditstring:
        return self.entries[l]

    def index(self) -> dict[Ditstring, int]:
        return {m: l for l, m in enumerate(self.entries)}

    def to_text(self) -> str:
        lines = [f"# {self.spec.n} {self.spec.k} {self.spec.two_s}"]
        lines.extend(display(m) for m in self.entries)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "GrayCode":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("#"):
            raise InvalidSpecError("missing '# n k two_s' header")
        n, k, two_s = (int(t) for t in lines[0][1:].split())
        spec = CompositionSpec(n, k, two_s)
        return cls(spec, tuple(parse_ditstring(ln, n) for ln in lines[1:]))

    def to_dict(self) -> dict:
        return {
            "n": self.spec.n,
            "k": self.spec.k,
            "two_s": self.spec.two_s,
            "entries": [list(m) for m in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "GrayCode":
        spec = CompositionSpec(int(data["n"]), int(data["k"]), int(data["two_s"]))
        return cls(spec, tuple(tuple(int(x) for x in m) for m in data["entries"]))

    @classmethod
    def from_json(cls, text: str) -> "GrayCode":
        return cls.from_dict(json.loads(text))


def walsh_gray_code(spec: CompositionSpec, max_dim: Optional[int] = None) -> GrayCode:
    """Walsh's Gray code, starting from the lexicographically largest composition."""
    _check_cap(spec, max_dim)
    return GrayCode(spec, tuple(walsh_iter(spec)))


class GrayCheck(NamedTuple):
    ok: bool
    index: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _step_of(a: Sequence[int], b: Sequence[int]) -> Optional[tuple[int, int]]:
    """0-based ``(i, j)`` with ``b = a + e_i - e_j``, or None."""
    up = down = None
    for r, (x, y) in enumerate(zip(a, b)):
        diff = y - x
        if diff == 0:
            continue
        if diff == 1 and up is None:
            up = r
        elif diff == -1 and down is None:
            down = r
        else:
            return None
    if up is None or down is None:
        return None
    return up, down


def verify_gray_property(code: GrayCode) -> GrayCheck:
    """Check that ``code`` lists every sector ditstring once with the Gray property.

    On failure ``index`` points at the first offending entry (for a bad
    transition, the index of the earlier entry of the pair).
    """
    spec = code.spec
    seen: set[Ditstring] = set()
    for l, m in enumerate(code.entries):
        if not spec.contains(m):
            return GrayCheck(False, l, f"entry {display(m)} is not in the sector")
        if m in seen:
            return GrayCheck(False, l, f"entry {display(m)} is repeated")
        seen.add(m)
        if l > 0 and _step_of(code.entries[l - 1], m) is None:
            return GrayCheck(
                False, l - 1, f"entries {l - 1} and {l} are not at Manhattan distance 2"
            )
    dim = dimension(spec)
    if len(code.entries) != dim:
        return GrayCheck(
            False, len(code.entries), f"length {len(code.entries)} != dimension {dim}"
        )
    return GrayCheck(True)


@dataclass(frozen=True)
class GrayStep:
    """Transition ``l -> l+1``: digit ``i`` is raised, digit ``j`` lowered (1-based)."""

    l: int
    i: int
    j: int
    m_i: int
    m_j: int


def gray_steps(code: GrayCode) -> list[GrayStep]:
    check = verify_gray_property(code)
    if not check:
        raise InvalidGrayCodeError(f"invalid Gray code at index {check.index}: {check.reason}")
    steps = []
    for l in range(len(code) - 1):
        a, b = code.entries[l], code.entries[l + 1]
        i, j = _step_of(a, b)
        steps.append(GrayStep(l, i + 1, j + 1, a[i], a[j]))
    return steps


def replay_steps(start: Ditstring, steps: Sequence[GrayStep]) -> list[Ditstring]:
    """Rebuild the ditstring sequence from its first entry and the step list."""
    out = [tuple(start)]
    cur = list(start)
    for st in steps:
        cur[st.i - 1] += 1
        cur[st.j - 1] -= 1
        out.append(tuple(cur))
    return out


# --------------------------------------------------------------------------
# Hamiltonian-path search with Warnsdorff's rule

def sector_graph(spec: CompositionSpec) -> tuple[list[Ditstring], list[list[int]]]:
    """Vertices (lexicographic) and adjacency lists for Manhattan distance 2."""
    verts = enumerate_sector(spec)
    where = {m: v for v, m in enumerate(verts)}
    adj: list[list[int]] = []
    for m in verts:
        nbrs = []
        for i in range(spec.n):
            if m[i] == spec.two_s:
                continue
            for j in range(spec.n):
                if j == i or m[j] == 0:
                    continue
                nb = list(m)
                nb[i] += 1
                nb[j] -= 1
                nbrs.append(where[tuple(nb)])
        nbrs.sort()  # vertex ids are already in lexicographic order
        adj.append(nbrs)
    return verts, adj


def warnsdorff_gray_code(
    spec: CompositionSpec,
    start: Optional[Sequence[int]] = None,
    max_dim: Optional[int] = None,
    max_expansions: int = 10_000_000,
) -> GrayCode:
    """Gray code from a backtracking Hamiltonian-path search.

    Candidates are ordered by their number of unvisited neighbours, ties
    broken by lexicographic order. ``start`` defaults to the lexicographically
    largest ditstring.
    """
    _check_cap(spec, max_dim)
    verts, adj = sector_graph(spec)
    total = len(verts)
    if start is None:
        first = total - 1
    else:
        start = tuple(start)
        if not spec.contains(start):
            raise InvalidSpecError(f"start {display(start)} is not in the sector")
        first = verts.index(start)

    visited = [False] * total
    free_degree = [len(a) for a in adj]

    def visit(v: int) -> None:
        visited[v] = True
        for u in adj[v]:
            free_degree[u] -= 1

    def unvisit(v: int) -> None:
        visited[v] = False
        for u in adj[v]:
            free_degree[u] += 1

    def ranked(v: int) -> list[int]:
        cands = [u for u in adj[v] if not visited[u]]
        cands.sort(key=lambda u: (free_degree[u], u))
        return cands

    path = [first]
    visit(first)
    stack = [iter(ranked(first))]
    expansions = 0
    while len(path) < total:
        if not stack:
            raise SearchFailure(
                f"no Hamiltonian path from {display(verts[first])} in sector "
                f"(n={spec.n}, k={spec.k}, two_s={spec.two_s})"
            )
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            unvisit(path.pop())
            continue
        expansions += 1
        if expansions > max_expansions:
            raise SearchFailure(f"search budget of {max_expansions} expansions exhausted")
        path.append(nxt)
        visit(nxt)
        stack.append(iter(ranked(nxt)))
    return GrayCode(spec, tuple(verts[v] for v in path))


def gray_code(spec: CompositionSpec, generator: str = "walsh", **kwargs) -> GrayCode:
    if generator == "walsh":
        return walsh_gray_code(spec, **kwargs)
    if generator == "warnsdorff":
        return warnsdorff_gray_code(spec, **kwargs)
    raise InvalidSpecError(f"unknown generator {generator!r}")
