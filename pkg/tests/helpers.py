"""Shared test utilities.

The brute-force routines here recompute closures, type equality, and type
counts directly from raw structure payloads, deliberately bypassing the
package's canonical type encoder so the two can check each other.  The
generators build random class members and random blueprint extraction
targets for seeded property loops.
"""

from __future__ import annotations

import itertools
import random

from ramseylab.blueprints import Blueprint
from ramseylab.diagrams import Diagram, OutputSignature, TargetStructure
from ramseylab.structures import ClassKind, FinStructure, make_canonical
from ramseylab.tuple_types import enumerate_types

SMALL_KINDS = (
    ClassKind("or"),
    ClassKind("chi_or", chi=2),
    ClassKind("chi_or", chi=3),
    ClassKind("chi_color", chi=2),
    ClassKind("chi_color", chi=3),
    ClassKind("n_tree", height=2),
    ClassKind("ceq"),
    ClassKind("ordered_graph"),
    ClassKind("hypergraph", edge_arity=2, palette=2),
)


# brute-force typing, independent of the canonical encoder


def _chain(s: FinStructure, e: int) -> list[int]:
    out = [e]
    while s.parent[out[-1]] >= 0:
        out.append(s.parent[out[-1]])
    return out


def closure_bruteforce(s: FinStructure, elems) -> tuple[int, ...]:
    """Close under the tree meet by plain fixpoint iteration."""
    chosen = set(elems)
    if s.cls.kind == "n_tree" and chosen:
        while True:
            new = set()
            for a, b in itertools.combinations(sorted(chosen), 2):
                bs = set(_chain(s, b))
                meet = next(x for x in _chain(s, a) if x in bs)
                if meet not in chosen:
                    new.add(meet)
            if not new:
                break
            chosen |= new
    return tuple(sorted(chosen))


def _block_index(s: FinStructure, e: int) -> int:
    for idx, block in enumerate(s.blocks):
        if e in block:
            return idx
    raise ValueError(f"element {e} in no block")


def _atoms(s: FinStructure, closed: tuple[int, ...]):
    """Atomic fingerprint of a closed fragment over its positions."""
    kind = s.cls.kind
    m = len(closed)
    if kind == "or":
        return ()
    if kind == "chi_or":
        return tuple(s.parts[e] for e in closed)
    if kind == "chi_color":
        return tuple(e % s.cls.chi for e in closed)
    if kind == "ceq":
        return tuple(
            (i, j)
            for i, j in itertools.combinations(range(m), 2)
            if _block_index(s, closed[i]) == _block_index(s, closed[j])
        )
    if kind == "ordered_graph":
        return tuple(
            (i, j)
            for i, j in itertools.combinations(range(m), 2)
            if tuple(sorted((closed[i], closed[j]))) in s.edges
        )
    if kind == "hypergraph":
        table = {subset: color for subset, color in s.hyper}
        out = []
        for r in range(s.cls.edge_arity):
            for ps in itertools.combinations(range(m), r):
                out.append((ps, table[tuple(closed[i] for i in ps)]))
        return tuple(out)
    if kind == "n_tree":
        inside = set(closed)
        parents = []
        for e in closed:
            hit = next((x for x in _chain(s, e)[1:] if x in inside), None)
            parents.append(closed.index(hit) if hit is not None else -1)
        return (tuple(s.level[e] for e in closed), tuple(parents))
    raise AssertionError(kind)


def same_type_bruteforce(s: FinStructure, t1, t2) -> bool:
    """Whether two increasing tuples of s have the same quantifier-free type:
    their closures must be order-isomorphic with the tuples at matching
    positions and identical atomic fingerprints."""
    c1 = closure_bruteforce(s, t1)
    c2 = closure_bruteforce(s, t2)
    if len(c1) != len(c2):
        return False
    if tuple(c1.index(e) for e in t1) != tuple(c2.index(e) for e in t2):
        return False
    return _atoms(s, c1) == _atoms(s, c2)


def brute_type_count(cls: ClassKind, n: int, level: int | None = None) -> int:
    """Number of type classes among increasing n-tuples of the canonical
    max(level, n)-big member, decided pairwise by `same_type_bruteforce`."""
    lv = n if level is None else max(level, n)
    base = make_canonical(cls, lv)
    reps: list[tuple[int, ...]] = []
    for tup in itertools.combinations(range(base.size), n):
        if not any(same_type_bruteforce(base, tup, r) for r in reps):
            reps.append(tup)
    return len(reps)


# random members


def random_member(cls: ClassKind, rng: random.Random, max_size: int = 8) -> FinStructure:
    """A uniformly sloppy random member of the class, at most max_size big."""
    kind = cls.kind
    n = rng.randrange(max_size + 1)
    if kind == "or" or kind == "chi_color":
        return FinStructure(cls, n)
    if kind == "chi_or":
        parts = sorted(rng.randrange(cls.chi) for _ in range(n))
        return FinStructure(cls, n, parts=tuple(parts))
    if kind == "n_tree":
        return _random_tree(cls, rng, max(n, 1))
    if kind == "ceq":
        blocks = []
        i = 0
        while i < n:
            width = rng.randrange(1, n - i + 1)
            blocks.append(tuple(range(i, i + width)))
            i += width
        return FinStructure(cls, n, blocks=tuple(blocks))
    if kind == "ordered_graph":
        edges = frozenset(
            (i, j)
            for i, j in itertools.combinations(range(n), 2)
            if rng.randrange(2)
        )
        return FinStructure(cls, n, edges=edges)
    if kind == "hypergraph":
        entries = []
        for r in range(cls.edge_arity):
            for subset in itertools.combinations(range(n), r):
                entries.append((subset, rng.randrange(cls.palette)))
        return FinStructure(cls, n, hyper=tuple(entries))
    raise AssertionError(kind)


def _random_tree(cls: ClassKind, rng: random.Random, max_size: int) -> FinStructure:
    parent: list[int] = []
    level: list[int] = []
    budget = [max_size]

    def grow(par: int, lev: int) -> None:
        if budget[0] <= 0 or lev > cls.height:
            return
        me = len(parent)
        parent.append(par)
        level.append(lev)
        budget[0] -= 1
        if lev < cls.height:
            for _ in range(rng.randrange(3)):
                grow(me, rng.randrange(lev + 1, cls.height + 1))

    grow(-1, rng.randrange(cls.height + 1))
    return FinStructure(cls, len(parent), parent=tuple(parent), level=tuple(level))


def unary_blueprint() -> Blueprint:
    """One unary function over linear orders; f saturates after one step, so
    term models stay one element bigger than their index."""
    cls = ClassKind("or")
    sig = OutputSignature(functions=(("f", 1),))
    t1 = enumerate_types(cls, 1, 1)[0]
    t2 = enumerate_types(cls, 2, 2)[0]
    d1 = Diagram(sig, 1, 2, (0, 1, 1))
    d2 = Diagram(sig, 2, 2, (0, 1, 2, 2, 2, 2))
    return Blueprint(cls, sig, 2, 2, (1, 2), ((t1, d1), (t2, d2)))


# blueprint extraction targets with a known indiscernible assignment


def fiber_target(size: int, seed: int) -> tuple[TargetStructure, tuple[int, ...]]:
    """A target made of `size` rotation-closed fibers of size+1 points each.

    Unary functions f_1..f_size rotate every fiber, so each fiber is the
    depth-1 orbit of its base point and depth-2 terms all collapse onto
    depth-at-most-1 representatives.  The seeded relations depend only on
    fiber coordinates and on the order of the fibers, which makes the base
    points an indiscernible sequence: extraction keeps the whole index and
    the extract / model / extract round trip reproduces the blueprint
    exactly.
    """
    if size < 1:
        raise ValueError("need at least one fiber")
    k = size + 1
    rng = random.Random(seed)
    total = size * k
    sig = OutputSignature(
        functions=tuple((f"f{s}", 1) for s in range(1, k)),
        relations=(("R", 2), ("U", 1)),
    )
    functions = {
        f"f{s}": {
            (x,): (x // k) * k + ((x % k) + s) % k for x in range(total)
        }
        for s in range(1, k)
    }
    unary_bits = [rng.randrange(2) for _ in range(k)]
    unary = frozenset((x,) for x in range(total) if unary_bits[x % k])
    pair_bits = {
        (cmp_, j1, j2): rng.randrange(2)
        for cmp_ in (-1, 0, 1)
        for j1 in range(k)
        for j2 in range(k)
    }
    pairs = frozenset(
        (x, y)
        for x in range(total)
        for y in range(total)
        if pair_bits[((x // k > y // k) - (x // k < y // k), x % k, y % k)]
    )
    target = TargetStructure(
        sig, total, functions, {"R": pairs, "U": unary}, {}
    )
    assignment = tuple(i * k for i in range(size))
    return target, assignment
