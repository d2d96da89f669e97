"""Colorings of increasing tuples and type-homogeneous subsets.

A coloring assigns one of c colors to every increasing n-tuple of a base
structure.  A subset is type-homogeneous when the color of a tuple inside it
depends only on the tuple's quantifier-free type; the witness is the induced
map from realized types to colors.

Candidate subsets are always closed under the class functions before anything
else happens, so types computed in the ambient base agree with types computed
in the induced structure, and for chi_color only positional subsets (the j-th
element carrying residue j) are admitted, since only those induce members.

`find_type_homogeneous` runs a depth-first backtracking search over elements
in increasing order, include-first, pruning on witness conflicts and on
cheap soundness bounds for bigness; the first subset found is therefore the
lexicographically least qualifying one, which keeps every search result
deterministic and reproducible.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .structures import (
    FinStructure,
    is_member,
    subset_closure,
    subset_induces_member,
    subset_is_big,
    tree_meet,
    tree_root,
)
from .tuple_types import TupleType, tuple_type


class Coloring:
    """Total map from increasing `arity`-tuples of `base` to colors 0..colors-1.

    The table may deliberately cover only part of the tuple space when a
    search is restricted to a subset of the universe (extraction does this);
    `is_total` reports whether the full space is covered.
    """

    __slots__ = ("base", "arity", "colors", "table", "_types")

    def __init__(self, base: FinStructure, arity: int, colors: int, table: dict):
        if arity < 1:
            raise ValueError("arity must be at least 1")
        if colors < 1:
            raise ValueError("colors must be at least 1")
        self.base = base
        self.arity = arity
        self.colors = colors
        self.table = dict(table)
        self._types: dict[tuple, TupleType] = {}

    @classmethod
    def from_function(cls, base: FinStructure, arity: int, colors: int, fn) -> "Coloring":
        table = {}
        for tup in itertools.combinations(range(base.size), arity):
            c = fn(tup)
            if not 0 <= c < colors:
                raise ValueError(f"color {c} for {tup} outside palette {colors}")
            table[tup] = c
        return cls(base, arity, colors, table)

    def color(self, tup: tuple[int, ...]) -> int:
        try:
            return self.table[tup]
        except KeyError:
            raise ValueError(f"coloring has no entry for tuple {tup}") from None

    def type_of(self, tup: tuple[int, ...]) -> TupleType:
        t = self._types.get(tup)
        if t is None:
            t = tuple_type(self.base, tup)
            self._types[tup] = t
        return t

    def all_tuples(self):
        return itertools.combinations(range(self.base.size), self.arity)

    def is_total(self) -> bool:
        return all(tup in self.table for tup in self.all_tuples())

    def entries(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.table.items())

    def copy(self) -> "Coloring":
        return Coloring(self.base, self.arity, self.colors, self.table)

    def to_doc(self) -> dict:
        from .structures import to_doc as structure_doc

        return {
            "base": structure_doc(self.base),
            "arity": self.arity,
            "colors": self.colors,
            "entries": [[*tup, c] for tup, c in self.entries()],
        }

    @staticmethod
    def from_doc(doc: dict) -> "Coloring":
        from .structures import from_doc as structure_from

        base = structure_from(doc["base"])
        arity = doc["arity"]
        table = {}
        for row in doc["entries"]:
            table[tuple(row[:arity])] = row[arity]
        return Coloring(base, arity, doc["colors"], table)


def random_coloring(s: FinStructure, arity: int, colors: int, seed: int) -> Coloring:
    """Seeded uniform coloring.

    Colors are drawn by random.Random(seed).randrange(colors) over the
    increasing tuples in lexicographic order, so a seed fixes the coloring
    completely.
    """
    rng = random.Random(seed)
    table = {}
    for tup in itertools.combinations(range(s.size), arity):
        table[tup] = rng.randrange(colors)
    return Coloring(s, arity, colors, table)


@dataclass(frozen=True)
class HomogeneityWitness:
    """Map from realized tuple types to colors, sorted by type code."""

    entries: tuple[tuple[TupleType, int], ...]

    def as_dict(self) -> dict[TupleType, int]:
        return dict(self.entries)

    def color_of(self, t: TupleType) -> int:
        for entry_type, color in self.entries:
            if entry_type == t:
                return color
        raise KeyError(t)

    def to_doc(self) -> list:
        return [[t.to_doc(), c] for t, c in self.entries]

    @staticmethod
    def from_doc(doc: list) -> "HomogeneityWitness":
        return HomogeneityWitness(
            tuple((TupleType.from_doc(t), c) for t, c in doc)
        )


def _witness_from_map(mapping: dict[TupleType, int]) -> HomogeneityWitness:
    return HomogeneityWitness(
        tuple(sorted(mapping.items(), key=lambda e: e[0].sort_key()))
    )


def type_homogeneity_witness(col: Coloring, subset) -> HomogeneityWitness | None:
    """Witness map for the closure of `subset`, or None when two tuples of the
    same type carry different colors.

    Raises ValueError when the closure does not induce a member of the class.
    """
    closed = subset_closure(col.base, subset)
    if not subset_induces_member(col.base, closed):
        raise ValueError("subset does not induce a member of the class")
    mapping: dict[TupleType, int] = {}
    for tup in itertools.combinations(closed, col.arity):
        t = col.type_of(tup)
        c = col.color(tup)
        if mapping.setdefault(t, c) != c:
            return None
    return _witness_from_map(mapping)


@dataclass
class SearchResult:
    subset: tuple[int, ...] | None
    witness: HomogeneityWitness | None
    exhaustive: bool
    nodes: int

    @property
    def found(self) -> bool:
        return self.subset is not None


class _Budget(Exception):
    pass


def _tree_min_size(mu: int, height: int) -> int:
    size = 0
    layer = 1
    for _ in range(height + 1):
        size += layer
        layer *= mu
    return size


def _feasible(base: FinStructure, level: int, chosen: list[int], rest: list[int]) -> bool:
    """Sound pruning bound: can some subset of chosen + rest containing all of
    chosen still induce a level-big member?  Overapproximates, never rejects a
    completable state."""
    kind = base.cls.kind
    total = len(chosen) + len(rest)
    if kind in ("or", "ordered_graph", "hypergraph"):
        return total >= level
    if kind == "chi_or":
        counts = [0] * base.cls.chi
        for e in chosen:
            counts[base.part_of(e)] += 1
        for e in rest:
            counts[base.part_of(e)] += 1
        return all(c >= level for c in counts)
    if kind == "chi_color":
        return total >= base.cls.chi * level
    if kind == "ceq":
        counts: dict[int, int] = {}
        for e in chosen:
            b = base.block_of(e)
            counts[b] = counts.get(b, 0) + 1
        for e in rest:
            b = base.block_of(e)
            counts[b] = counts.get(b, 0) + 1
        return sum(1 for c in counts.values() if c >= level) >= level
    if kind == "n_tree":
        if level == 0:
            return True
        if total < _tree_min_size(level, base.cls.height):
            return False
        root = tree_root(base)
        if root is None or base.level[root] != 0:
            return False
        return root in chosen or root in rest
    raise AssertionError(kind)


def find_type_homogeneous(
    col: Coloring,
    level: int,
    budget: int | None = None,
    within=None,
) -> SearchResult:
    """Search for a closed, member-inducing, level-big, type-homogeneous
    subset of the base.

    Returns the lexicographically least such subset with its witness.  An
    absent result is a proof of nonexistence only when `exhaustive` is true;
    a budget (in visited search nodes) can cut the search short, which the
    flag records.  `within` restricts the search to a subset of the universe.
    """
    base = col.base
    if level < 0:
        raise ValueError("level must be nonnegative")
    if not is_member(base):
        raise ValueError("coloring base is not a member of its class")
    order = sorted(set(within)) if within is not None else list(range(base.size))
    n = col.arity
    kind = base.cls.kind
    chosen: list[int] = []
    chosen_set: set[int] = set()
    witness: dict[TupleType, int] = {}
    nodes = 0

    def try_include(e: int) -> list[TupleType] | None:
        if kind == "n_tree":
            for x in chosen:
                m = tree_meet(base, x, e)
                if m != x and m != e and m not in chosen_set:
                    return None
        if kind == "chi_color":
            if e % base.cls.chi != len(chosen) % base.cls.chi:
                return None
        added: list[TupleType] = []
        for combo in itertools.combinations(chosen, n - 1):
            tup = combo + (e,)
            t = col.type_of(tup)
            c = col.color(tup)
            known = witness.get(t)
            if known is None:
                witness[t] = c
                added.append(t)
            elif known != c:
                for a in added:
                    del witness[a]
                return None
        return added

    def dfs(i: int, changed: bool) -> tuple[int, ...] | None:
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise _Budget
        if changed and subset_is_big(base, chosen, level):
            return tuple(chosen)
        if i == len(order):
            return None
        if not _feasible(base, level, chosen, order[i:]):
            return None
        e = order[i]
        added = try_include(e)
        if added is not None:
            chosen.append(e)
            chosen_set.add(e)
            found = dfs(i + 1, True)
            if found is not None:
                return found
            chosen.pop()
            chosen_set.remove(e)
            for t in added:
                del witness[t]
        return dfs(i + 1, False)

    exhaustive = True
    try:
        if level == 0:
            found: tuple[int, ...] | None = ()
        else:
            found = dfs(0, False)
    except _Budget:
        found = None
        exhaustive = False
    if found is None:
        return SearchResult(None, None, exhaustive, nodes)
    verified = type_homogeneity_witness(col, found)
    if verified is None or not subset_is_big(base, found, level):
        raise AssertionError("search returned a subset that fails re-verification")
    return SearchResult(found, verified, True, nodes)


def iter_big_member_subsets(base: FinStructure, level: int, within=None):
    """Yield every closed, member-inducing, level-big subset in lexicographic
    order.  Intended for small universes (the exhaustive partition check)."""
    order = sorted(set(within)) if within is not None else list(range(base.size))
    kind = base.cls.kind
    chosen: list[int] = []
    chosen_set: set[int] = set()

    def ok_include(e: int) -> bool:
        if kind == "n_tree":
            for x in chosen:
                m = tree_meet(base, x, e)
                if m != x and m != e and m not in chosen_set:
                    return False
        if kind == "chi_color":
            if e % base.cls.chi != len(chosen) % base.cls.chi:
                return False
        return True

    def dfs(i: int, changed: bool):
        if changed and subset_is_big(base, chosen, level):
            yield tuple(chosen)
        if i == len(order):
            return
        if not _feasible(base, level, chosen, order[i:]):
            return
        e = order[i]
        if ok_include(e):
            chosen.append(e)
            chosen_set.add(e)
            yield from dfs(i + 1, True)
            chosen.pop()
            chosen_set.remove(e)
        yield from dfs(i + 1, False)

    if level == 0:
        yield ()
    yield from dfs(0, False)
