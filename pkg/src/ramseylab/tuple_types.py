"""Quantifier-free types of increasing tuples.

The type of an increasing tuple records the induced structure on the closure
of the tuple under the class functions (the tree meet; no other kind has
functions), relabeled along the order, together with the positions the tuple
occupies inside that closure.  Because the designated order is rigid, the
relabeled fragment is already canonical and two tuples have the same type
exactly when their canonical codes agree byte for byte; no isomorphism search
is ever needed.

The code serializes the fragment's atomic data, which for chi_color and
n_tree is read off the ambient structure (residues of positions, ambient
level labels), so fragments need not themselves be class members.  Types are
invariant under extending the ambient structure to any member containing the
closure: every recorded atom mentions closure elements only.
"""

from __future__ import annotations

import base64
import itertools
import json
from dataclasses import dataclass

from .structures import (
    ClassKind,
    FinStructure,
    make_canonical,
    subset_closure,
)


@dataclass(frozen=True)
class TupleType:
    """Canonical quantifier-free type: class, arity, fragment code."""

    cls: ClassKind
    arity: int
    code: bytes

    def sort_key(self) -> tuple:
        return (self.arity, self.code)

    def to_doc(self) -> dict:
        return {
            "class": self.cls.to_doc(),
            "arity": self.arity,
            "code": base64.b64encode(self.code).decode("ascii"),
        }

    @staticmethod
    def from_doc(doc: dict) -> "TupleType":
        return TupleType(
            cls=ClassKind.from_doc(doc["class"]),
            arity=doc["arity"],
            code=base64.b64decode(doc["code"]),
        )


def _encode(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("ascii")


def _fragment_payload(s: FinStructure, closed: tuple[int, ...], gens: list[int]) -> dict:
    """Atomic data of the closure fragment, relabeled to 0..m-1."""
    pos = {e: i for i, e in enumerate(closed)}
    kind = s.cls.kind
    payload: dict = {"m": len(closed), "gen": gens}
    if kind == "or":
        return payload
    if kind == "chi_or":
        payload["parts"] = [s.part_of(e) for e in closed]
        return payload
    if kind == "chi_color":
        payload["res"] = [s.residue_of(e) for e in closed]
        return payload
    if kind == "ceq":
        pattern: list[int] = []
        seen: dict[int, int] = {}
        for e in closed:
            b = s.block_of(e)
            if b not in seen:
                seen[b] = len(seen)
            pattern.append(seen[b])
        payload["blocks"] = pattern
        return payload
    if kind == "ordered_graph":
        payload["edges"] = [
            [pos[a], pos[b]]
            for a, b in itertools.combinations(closed, 2)
            if s.has_edge(a, b)
        ]
        return payload
    if kind == "hypergraph":
        colors = []
        for r in range(s.cls.edge_arity):
            for sub in itertools.combinations(closed, r):
                colors.append([[pos[e] for e in sub], s.hyper_color(sub)])
        payload["colors"] = colors
        return payload
    if kind == "n_tree":
        from .structures import tree_ancestors

        inside = set(closed)
        parent = []
        for e in closed:
            par = -1
            for anc in tree_ancestors(s, e):
                if anc in inside:
                    par = pos[anc]
                    break
            parent.append(par)
        payload["parent"] = parent
        payload["level"] = [s.level[e] for e in closed]
        return payload
    raise AssertionError(kind)


def tuple_type(s: FinStructure, tup: tuple[int, ...]) -> TupleType:
    """Type of an increasing tuple of s, computed in the ambient structure."""
    tup = tuple(tup)
    if not tup:
        raise ValueError("tuple must be nonempty")
    for a, b in zip(tup, tup[1:]):
        if a >= b:
            raise ValueError(f"tuple {tup} is not strictly increasing")
    if tup[0] < 0 or tup[-1] >= s.size:
        raise ValueError(f"tuple {tup} outside universe of size {s.size}")
    closed = subset_closure(s, tup)
    pos = {e: i for i, e in enumerate(closed)}
    gens = [pos[e] for e in tup]
    return TupleType(s.cls, len(tup), _encode(_fragment_payload(s, closed, gens)))


def _renumber_first_occurrence(values: list[int]) -> list[int]:
    seen: dict[int, int] = {}
    out = []
    for v in values:
        if v not in seen:
            seen[v] = len(seen)
        out.append(seen[v])
    return out


def restrict_type(p: TupleType, positions: tuple[int, ...]) -> TupleType:
    """Type of the subtuple at the given 0-based positions.

    Equals tuple_type applied to the subtuple of any realization of p; the
    computation runs inside the decoded fragment, which is ambient enough by
    type invariance.
    """
    positions = tuple(positions)
    if not positions:
        raise ValueError("positions must be nonempty")
    for a, b in zip(positions, positions[1:]):
        if a >= b:
            raise ValueError(f"positions {positions} not strictly increasing")
    if positions[0] < 0 or positions[-1] >= p.arity:
        raise ValueError(f"positions {positions} outside arity {p.arity}")
    payload = json.loads(p.code)
    gens = payload["gen"]
    sub = [gens[i] for i in positions]
    kind = p.cls.kind
    if kind == "n_tree":
        frag = FinStructure(
            p.cls,
            payload["m"],
            parent=tuple(payload["parent"]),
            level=tuple(payload["level"]),
        )
        return tuple_type(frag, tuple(sub))
    out: dict = {"m": len(sub), "gen": list(range(len(sub)))}
    if kind == "chi_or":
        out["parts"] = [payload["parts"][e] for e in sub]
    elif kind == "chi_color":
        out["res"] = [payload["res"][e] for e in sub]
    elif kind == "ceq":
        out["blocks"] = _renumber_first_occurrence([payload["blocks"][e] for e in sub])
    elif kind == "ordered_graph":
        old = {tuple(e) for e in payload["edges"]}
        pos = {e: i for i, e in enumerate(sub)}
        out["edges"] = [
            [pos[a], pos[b]]
            for a, b in itertools.combinations(sub, 2)
            if (a, b) in old
        ]
    elif kind == "hypergraph":
        table = {tuple(subset): color for subset, color in payload["colors"]}
        pos = {e: i for i, e in enumerate(sub)}
        colors = []
        for r in range(p.cls.edge_arity):
            for chosen in itertools.combinations(sub, r):
                colors.append([[pos[e] for e in chosen], table[tuple(chosen)]])
        out["colors"] = colors
    elif kind != "or":
        raise AssertionError(kind)
    return TupleType(p.cls, len(sub), _encode(out))


def enumerate_types(cls: ClassKind, n: int, level: int | None = None) -> list[TupleType]:
    """Distinct types realized by increasing n-tuples of the canonical
    max(level, n)-big structure, in first-occurrence order over the
    lexicographic tuple enumeration.

    Types realized at level n stay realized at every higher level because the
    canonical structures form an embedding chain, so raising `level` can only
    extend the list.
    """
    if n < 1:
        raise ValueError("arity must be at least 1")
    lv = n if level is None else max(level, n)
    base = make_canonical(cls, lv)
    seen: set[bytes] = set()
    out: list[TupleType] = []
    for tup in itertools.combinations(range(base.size), n):
        t = tuple_type(base, tup)
        if t.code not in seen:
            seen.add(t.code)
            out.append(t)
    return out
