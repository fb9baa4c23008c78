"""Free inverse monoid: word problem, factors, the factor automaton, rational membership.

An element of the free inverse monoid is stored as its Munn tree embedded in
the Cayley tree of the free group: the set of reduced words spanned by the
path, plus the reduced word where the path ends. The embedding is unique, so
this pair is a canonical form and equality is tuple equality.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .automata import isomorphic, munn_tree
from .words import EMPTY, Alphabet, Word, LATIN


class NotIdempotent(ValueError):
    pass


def _step(end: tuple, c: int) -> tuple:
    if end and end[-1] == c ^ 1:
        return end[:-1]
    return end + (c,)


class FimElement:
    """Element of the free inverse monoid in Cayley-tree canonical form."""

    __slots__ = ("vertices", "end", "_hash")

    def __init__(self, vertices: Iterable[tuple], end: tuple):
        self.vertices = frozenset(vertices)
        self.end = tuple(end)
        if () not in self.vertices or self.end not in self.vertices:
            raise ValueError("a Munn tree contains its root and its end point")
        self._hash = hash((self.vertices, self.end))

    @classmethod
    def of(cls, w: Word) -> "FimElement":
        end: tuple = ()
        verts = {end}
        for c in w.letters:
            end = _step(end, c)
            verts.add(end)
        return cls(verts, end)

    def __eq__(self, other):
        return isinstance(other, FimElement) and self.end == other.end and self.vertices == other.vertices

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FimElement({LATIN.format(self.word()) if self.max_generator() < 26 else self.word()})"

    def __len__(self):
        """Number of edges of the Munn tree."""
        return len(self.vertices) - 1

    def max_generator(self) -> int:
        return max((c >> 1 for v in self.vertices for c in v), default=-1)

    def times_letter(self, c: int) -> "FimElement":
        end = _step(self.end, c)
        if end in self.vertices:
            return FimElement._raw(self.vertices, end)
        return FimElement._raw(self.vertices | {end}, end)

    @classmethod
    def _raw(cls, vertices: frozenset, end: tuple) -> "FimElement":
        obj = cls.__new__(cls)
        obj.vertices = vertices
        obj.end = end
        obj._hash = hash((vertices, end))
        return obj

    def __mul__(self, other: "FimElement") -> "FimElement":
        shift = Word(self.end)
        verts = set(self.vertices)
        for v in other.vertices:
            verts.add((shift * Word(v)).free_reduce().letters)
        return FimElement(verts, (shift * Word(other.end)).free_reduce().letters)

    def inverse(self) -> "FimElement":
        back = Word(self.end).inverse()
        verts = {(back * Word(v)).free_reduce().letters for v in self.vertices}
        return FimElement(verts, back.letters)

    def is_idempotent(self) -> bool:
        return self.end == ()

    def word(self) -> Word:
        """Shortest canonical representative.

        Depth-first tour of the tree that leaves the branch towards the end
        point for last and never walks back up it.
        """
        children: dict[tuple, list[int]] = {}
        for v in self.vertices:
            if v:
                children.setdefault(v[:-1], []).append(v[-1])
        end = self.end
        out: list[int] = []

        def tour(v, on_path):
            ahead = end[len(v)] if on_path and len(v) < len(end) else None
            for c in sorted(children.get(v, ())):
                if c != ahead:
                    out.append(c)
                    tour(v + (c,), False)
                    out.append(c ^ 1)
            if ahead is not None:
                out.append(ahead)
                tour(v + (ahead,), True)

        tour((), True)
        return Word(out)

    def leaves(self) -> list[tuple]:
        """Non-root vertices of degree one."""
        parents = {v[:-1] for v in self.vertices if v}
        return sorted((v for v in self.vertices if v and v not in parents), key=lambda v: (len(v), v))


ONE = FimElement.of(EMPTY)


def fim_equal(u: Word, v: Word) -> bool:
    n = max(u.max_generator(), v.max_generator()) + 1
    return isomorphic(munn_tree(u, n), munn_tree(v, n))


def is_idempotent(w: Word) -> bool:
    return not w.free_reduce()


def is_factor(v: Word, u: Word) -> bool:
    """``v`` labels a path between some two vertices of MT(u)."""
    A = munn_tree(u, max(u.max_generator(), v.max_generator()) + 1)
    return any(A.run(v, q) is not None for q in range(A.n_states))


def factors(u: Word) -> set[FimElement]:
    """All factors of ``u`` in the free inverse monoid.

    Path labels of MT(u) are grown one letter at a time. A label is tracked
    as ``(end vertex, element)``; only the pairs first seen at the previous
    length are extended, and the search stops when a length adds no new pair.
    """
    A = munn_tree(u)
    rows = A.rows()
    seen = {(q, ONE) for q in range(A.n_states)}
    level = list(seen)
    while level:
        nxt = []
        for q, x in level:
            for c, r in enumerate(rows[q]):
                if r < 0:
                    continue
                pair = (r, x.times_letter(c))
                if pair not in seen:
                    seen.add(pair)
                    nxt.append(pair)
        level = nxt
    return {x for _, x in seen}


def _element_order(x: FimElement):
    w = x.word()
    return (len(x), len(w), w.letters)


def sorted_elements(xs: Iterable[FimElement]) -> list[FimElement]:
    return sorted(xs, key=_element_order)


@dataclass(frozen=True)
class DFA:
    """Deterministic automaton over letter codes (not necessarily involutive)."""

    n_states: int
    n_cols: int
    delta: tuple[tuple[int, ...], ...]
    initial: int
    terminals: frozenset[int]

    def run(self, w: Word, start: int | None = None) -> int | None:
        s = self.initial if start is None else start
        for c in w.letters:
            if c >= self.n_cols:
                return None
            s = self.delta[s][c]
            if s < 0:
                return None
        return s

    def accepts(self, w: Word) -> bool:
        end = self.run(w)
        return end is not None and end in self.terminals


@dataclass(frozen=True)
class FactorAutomaton:
    """The automaton C(u): one state per factor, ``v -a-> va`` whenever ``va`` is a factor."""

    states: tuple[FimElement, ...]
    dfa: DFA

    def accepts(self, w: Word) -> bool:
        return self.dfa.accepts(w)

    def __len__(self):
        return len(self.states)


def factor_automaton(u: Word, n_gens: int | None = None) -> FactorAutomaton:
    """Accepts exactly the words equal to ``u`` in the free inverse monoid."""
    states = tuple(sorted_elements(factors(u)))
    index = {x: k for k, x in enumerate(states)}
    n_cols = 2 * (u.max_generator() + 1 if n_gens is None else n_gens)
    delta = []
    for x in states:
        row = []
        for c in range(n_cols):
            row.append(index.get(x.times_letter(c), -1))
        delta.append(tuple(row))
    dfa = DFA(len(states), n_cols, tuple(delta), index[ONE], frozenset([index[FimElement.of(u)]]))
    return FactorAutomaton(states, dfa)


EPSILON = -1


@dataclass(frozen=True)
class NFA:
    """Finite automaton with several initial states and empty-word moves (label ``EPSILON``)."""

    n_states: int
    initial: frozenset[int]
    terminals: frozenset[int]
    edges: tuple[tuple[int, int, int], ...]  # (src, letter code or EPSILON, dst)

    @classmethod
    def from_json(cls, data: dict | str, alphabet: Alphabet | None = None) -> "NFA":
        if isinstance(data, str):
            data = json.loads(data)
        alphabet = alphabet or LATIN
        edges = []
        for e in data["edges"]:
            w = alphabet.parse(str(e["label"]))
            if len(w) > 1:
                raise ValueError(f"NFA edge label {e['label']!r} is longer than one letter")
            edges.append((int(e["from"]), w.letters[0] if w else EPSILON, int(e["to"])))
        n = int(data["states"])
        nfa = cls(n, frozenset(data["initial"]), frozenset(data["terminals"]), tuple(edges))
        for s in (*nfa.initial, *nfa.terminals, *(x for e in edges for x in (e[0], e[2]))):
            if not 0 <= s < n:
                raise ValueError(f"NFA state {s} out of range")
        return nfa

    def to_json(self, alphabet: Alphabet | None = None) -> dict:
        alphabet = alphabet or LATIN
        return {
            "states": self.n_states,
            "initial": sorted(self.initial),
            "terminals": sorted(self.terminals),
            "edges": [{"from": p, "label": "1" if c == EPSILON else alphabet.format(Word([c])), "to": q}
                      for p, c, q in self.edges],
        }

    @classmethod
    def from_words(cls, words: Iterable[Word]) -> "NFA":
        """Finite language as a union of simple paths."""
        edges = []
        initial, terminals = set(), set()
        n = 0
        for w in words:
            initial.add(n)
            for c in w.letters:
                edges.append((n, c, n + 1))
                n += 1
            terminals.add(n)
            n += 1
        return cls(max(n, 1), frozenset(initial), frozenset(terminals), tuple(edges))

    @classmethod
    def star(cls, w: Word) -> "NFA":
        """The language ``w*``."""
        L = len(w)
        if L == 0:
            return cls(1, frozenset([0]), frozenset([0]), ())
        edges = tuple((k, c, (k + 1) % L) for k, c in enumerate(w.letters))
        return cls(L, frozenset([0]), frozenset([0]), edges)

    def out_edges(self) -> list[list[tuple[int, int]]]:
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.n_states)]
        for p, c, q in self.edges:
            out[p].append((c, q))
        return out

    def max_generator(self) -> int:
        return max((c >> 1 for _, c, _ in self.edges if c != EPSILON), default=-1)


def rational_membership(u: Word, L: NFA) -> bool:
    """Whether some word of ``L`` equals ``u`` in the free inverse monoid."""
    n_gens = max(u.max_generator(), L.max_generator()) + 1
    C = factor_automaton(u, n_gens).dfa
    out = L.out_edges()
    start = [(p, C.initial) for p in sorted(L.initial)]
    seen = set(start)
    todo = deque(start)
    while todo:
        p, s = todo.popleft()
        if p in L.terminals and s in C.terminals:
            return True
        for c, q in out[p]:
            t = s if c == EPSILON else C.delta[s][c]
            if t >= 0 and (q, t) not in seen:
                seen.add((q, t))
                todo.append((q, t))
    return False


def covering_idempotents(e: Word) -> set[FimElement]:
    """Idempotents immediately above ``e``: drop one non-root leaf of its Munn tree."""
    if not is_idempotent(e):
        raise NotIdempotent(f"{e!r} does not reduce to the identity")
    x = FimElement.of(e)
    return {FimElement(x.vertices - {leaf}, ()) for leaf in x.leaves()}
