"""Finite involutive automata over A ∪ A⁻¹.

Only positive edges ``(p, g, q)`` are stored; each one also stands for the
inverse edge ``(q, g⁻¹, p)``, so every automaton here is involutive by
construction. Folding, products and contraction run through the array kernels
in :mod:`fragwords.kernels`.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .words import Alphabet, Word, LATIN


class NondeterministicAutomaton(ValueError):
    pass


class EmptyLanguage(ValueError):
    pass


class PathNotPresent(ValueError):
    pass


_NO_PAIRS = np.zeros(0, np.int64)


class InvAutomaton:
    """Involutive automaton with one initial state and a set of terminal states.

    ``edges`` is an ``(E, 3)`` array of positive edges ``(src, gen, dst)``,
    kept sorted and duplicate free. ``labels`` optionally names the states
    (product automata label them by tuples). Instances are treated as
    immutable; derived data (transition table, canonical key) is cached.
    """

    __slots__ = ("n_states", "n_gens", "initial", "terminals", "edges", "labels",
                 "_table", "_rows", "_connected", "_key")

    def __init__(self, n_states: int, edges, initial: int = 0, terminals: Iterable[int] = (0,),
                 n_gens: int | None = None, labels: Sequence | None = None):
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 3)
        if len(edges):
            edges = np.unique(edges, axis=0)
        if n_states < 1:
            raise ValueError("an automaton needs at least one state")
        if len(edges) and (edges[:, [0, 2]].min() < 0 or edges[:, [0, 2]].max() >= n_states):
            raise ValueError("edge endpoint out of range")
        used = int(edges[:, 1].max()) + 1 if len(edges) else 0
        if n_gens is None:
            n_gens = used
        elif used > n_gens:
            raise ValueError(f"edge uses generator {used - 1} but n_gens={n_gens}")
        if not 0 <= initial < n_states:
            raise ValueError("initial state out of range")
        terminals = frozenset(int(t) for t in terminals)
        if any(not 0 <= t < n_states for t in terminals):
            raise ValueError("terminal state out of range")
        edges.flags.writeable = False
        self.n_states = int(n_states)
        self.n_gens = int(n_gens)
        self.initial = int(initial)
        self.terminals = terminals
        self.edges = edges
        self.labels = tuple(labels) if labels is not None else None
        self._table = None
        self._rows = None
        self._connected = None
        self._key = None

    def __repr__(self):
        return (f"InvAutomaton(states={self.n_states}, edges={len(self.edges)}, "
                f"initial={self.initial}, terminals={sorted(self.terminals)})")

    @property
    def n_cols(self) -> int:
        return 2 * self.n_gens

    @property
    def terminal(self) -> int:
        if len(self.terminals) != 1:
            raise ValueError(f"automaton has {len(self.terminals)} terminal states")
        return next(iter(self.terminals))

    def with_endpoints(self, initial: int | None = None, terminals: Iterable[int] | None = None,
                       n_gens: int | None = None) -> "InvAutomaton":
        return InvAutomaton(
            self.n_states, self.edges,
            self.initial if initial is None else initial,
            self.terminals if terminals is None else terminals,
            n_gens=self.n_gens if n_gens is None else n_gens,
            labels=self.labels,
        )

    def all_terminal(self) -> "InvAutomaton":
        return self.with_endpoints(terminals=range(self.n_states))

    @property
    def table(self) -> np.ndarray:
        """Dense transition table; raises if two edges share a source and label."""
        if self._table is None:
            table = np.full((self.n_states, self.n_cols), -1, np.int64)
            e = self.edges
            if len(e):
                fwd = e[:, 0] * self.n_cols + 2 * e[:, 1]
                bwd = e[:, 2] * self.n_cols + 2 * e[:, 1] + 1
                slots = np.concatenate([fwd, bwd])
                if len(np.unique(slots)) != len(slots):
                    raise NondeterministicAutomaton("two edges leave a state with the same label")
                flat = table.reshape(-1)
                flat[fwd] = e[:, 2]
                flat[bwd] = e[:, 0]
            table.flags.writeable = False
            self._table = table
        return self._table

    def is_deterministic(self) -> bool:
        try:
            self.table
        except NondeterministicAutomaton:
            return False
        return True

    def rows(self) -> list[list[int]]:
        if self._rows is None:
            self._rows = self.table.tolist()
        return self._rows

    def neighbours(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n_states)]
        for p, _, q in self.edges.tolist():
            adj[p].append(q)
            adj[q].append(p)
        return adj

    def component(self, start: int | None = None) -> list[int]:
        start = self.initial if start is None else start
        adj = self.neighbours()
        seen = {start}
        todo = [start]
        while todo:
            p = todo.pop()
            for q in adj[p]:
                if q not in seen:
                    seen.add(q)
                    todo.append(q)
        return sorted(seen)

    def is_connected(self) -> bool:
        if self._connected is None:
            self._connected = len(self.component()) == self.n_states
        return self._connected

    def run(self, w: Word, start: int | None = None) -> int | None:
        """End state of the path labelled ``w`` from ``start`` (None if it falls off)."""
        rows = self.rows()
        s = self.initial if start is None else start
        n_cols = self.n_cols
        for c in w.letters:
            if c >= n_cols:
                return None
            s = rows[s][c]
            if s < 0:
                return None
        return s

    def positive_edges(self) -> list[tuple[int, int, int]]:
        return [tuple(e) for e in self.edges.tolist()]


def accepts(A: InvAutomaton, w: Word) -> bool:
    end = A.run(w)
    return end is not None and end in A.terminals


def reads(A: InvAutomaton, w: Word, start: int | None = None) -> bool:
    """True if ``w`` labels some path from ``start`` (any end state)."""
    return A.run(w, start) is not None


def path_states(A: InvAutomaton, w: Word, start: int, end: int) -> bool:
    """Whether ``w`` labels a path ``start -> end``; works for nondeterministic ``A``."""
    fwd: dict[tuple[int, int], list[int]] = {}
    for p, g, q in A.edges.tolist():
        fwd.setdefault((p, 2 * g), []).append(q)
        fwd.setdefault((q, 2 * g + 1), []).append(p)
    current = {start}
    for c in w.letters:
        current = {q for p in current for q in fwd.get((p, c), ())}
        if not current:
            return False
    return end in current


def linear_automaton(w: Word, n_gens: int | None = None) -> InvAutomaton:
    edges = []
    for j, c in enumerate(w.letters):
        g = c >> 1
        edges.append((j + 1, g, j) if c & 1 else (j, g, j + 1))
    if n_gens is None:
        n_gens = w.max_generator() + 1
    return InvAutomaton(len(w) + 1, edges, 0, (len(w),), n_gens=n_gens)


@dataclass(frozen=True)
class MergeRecord:
    """One identification made while folding or contracting.

    The classes of ``left`` and ``right`` were merged. For a fold,
    ``hinge = (p, p')`` were already equivalent and ``p -letter-> left``,
    ``p' -letter-> right`` were the clashing edges. For a forced merge
    (contraction), ``word`` labels a path ``left -> right`` in the original.
    """

    survivor: int
    absorbed: int
    left: int
    right: int
    hinge: tuple[int, int] | None = None
    letter: int | None = None
    word: Word | None = None


@dataclass
class FoldLog:
    """Quotient map of a fold, plus (when recorded) the merges and edge provenance."""

    quotient: np.ndarray
    merges: list[MergeRecord] = field(default_factory=list)
    edge_witness: dict[tuple[int, int], tuple[int, int]] | None = None

    @property
    def recorded(self) -> bool:
        return self.edge_witness is not None

    def replay(self, n_states: int) -> np.ndarray:
        """Rebuild the quotient map from the merge records alone."""
        parent = list(range(n_states))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for rec in self.merges:
            parent[find(rec.absorbed)] = find(rec.survivor)
        roots = [find(x) for x in range(n_states)]
        order: dict[int, int] = {}
        for r in roots:
            order.setdefault(r, len(order))
        return np.array([order[r] for r in roots], dtype=np.int64)


def _fold(n_states: int, n_gens: int, edges: np.ndarray, initial: int, terminals: Iterable[int],
          forced: Sequence[tuple[int, int, Word | None]] = (), record: bool = False,
          labels: Sequence | None = None) -> tuple[InvAutomaton, FoldLog]:
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 3)
    n_cols = 2 * n_gens
    if forced:
        pre_a = np.array([f[0] for f in forced], dtype=np.int64)
        pre_b = np.array([f[1] for f in forced], dtype=np.int64)
    else:
        pre_a = pre_b = _NO_PAIRS
    src = np.ascontiguousarray(edges[:, 0])
    gen = np.ascontiguousarray(edges[:, 1])
    dst = np.ascontiguousarray(edges[:, 2])
    root, table, via, events = kernels.fold_edges(n_states, n_cols, src, gen, dst, pre_a, pre_b)

    # number classes by their smallest member so the result is order independent
    uniq, first = np.unique(root, return_index=True)
    order = uniq[np.argsort(first)]
    new_id = np.full(n_states, -1, np.int64)
    new_id[order] = np.arange(len(order))
    quotient = new_id[root]

    sub = table[order]
    pos = sub[:, 0::2]
    rr, gg = np.nonzero(pos >= 0)
    new_edges = np.stack([rr, gg, quotient[pos[rr, gg]]], axis=1) if len(rr) else np.zeros((0, 3), np.int64)

    new_labels = None
    if labels is not None:
        new_labels = [labels[r] for r in order]
    folded = InvAutomaton(len(order), new_edges, int(quotient[initial]),
                          {int(quotient[t]) for t in terminals}, n_gens=n_gens, labels=new_labels)

    log = FoldLog(quotient)
    if record:
        def ends(occ):
            e = occ >> 1
            return (int(src[e]), int(dst[e])) if occ % 2 == 0 else (int(dst[e]), int(src[e]))

        for kind, survivor, absorbed, a, b in events.tolist():
            if kind == 1:
                p, q, word = forced[a]
                log.merges.append(MergeRecord(survivor, absorbed, int(p), int(q), word=word))
            else:
                ta, ha = ends(a)
                tb, hb = ends(b)
                c = 2 * int(gen[a >> 1]) + (a & 1)
                log.merges.append(MergeRecord(survivor, absorbed, ha, hb, hinge=(ta, tb), letter=c))
        witness = {}
        vr, vc = np.nonzero(via[order] >= 0)
        for r, c in zip(vr.tolist(), vc.tolist()):
            witness[(r, c)] = ends(int(via[order[r], c]))
        log.edge_witness = witness
    return folded, log


def fold(A: InvAutomaton, *, record: bool = False) -> tuple[InvAutomaton, FoldLog]:
    """Identify targets of equally labelled edges until deterministic."""
    return _fold(A.n_states, A.n_gens, A.edges, A.initial, A.terminals, record=record, labels=A.labels)


def munn_tree(w: Word, n_gens: int | None = None) -> InvAutomaton:
    return fold(linear_automaton(w, n_gens))[0]


def is_tree(A: InvAutomaton) -> bool:
    return A.is_connected() and len(A.edges) == A.n_states - 1


def isomorphic(A: InvAutomaton, B: InvAutomaton) -> bool:
    """Basepoint-preserving isomorphism of connected deterministic automata."""
    for X in (A, B):
        X.table
        if not X.is_connected():
            raise ValueError("isomorphism test needs connected automata; trim first")
    if A.n_states != B.n_states or len(A.edges) != len(B.edges) or len(A.terminals) != len(B.terminals):
        return False
    if A._key is not None and B._key is not None:
        return A._key == B._key
    ra, rb = A.rows(), B.rows()
    n_cols = max(A.n_cols, B.n_cols)
    phi = {A.initial: B.initial}
    seen_b = {B.initial}
    todo = [A.initial]
    while todo:
        p = todo.pop()
        pa, pb = ra[p], rb[phi[p]]
        for c in range(n_cols):
            q = pa[c] if c < A.n_cols else -1
            r = pb[c] if c < B.n_cols else -1
            if (q < 0) != (r < 0):
                return False
            if q < 0:
                continue
            if q in phi:
                if phi[q] != r:
                    return False
            else:
                if r in seen_b:
                    return False
                phi[q] = r
                seen_b.add(r)
                todo.append(q)
    return {phi[t] for t in A.terminals} == set(B.terminals)


def canonical_key(A: InvAutomaton) -> tuple:
    """Complete isomorphism invariant of a connected deterministic automaton.

    States are renumbered in breadth-first order from the initial state,
    trying letters in code order; determinism makes the numbering unique.
    """
    if A._key is None:
        if not A.is_connected():
            raise ValueError("canonical key needs a connected automaton")
        rows = A.rows()
        num = {A.initial: 0}
        queue = deque([A.initial])
        trans = []
        while queue:
            p = queue.popleft()
            for c in range(0, A.n_cols):
                q = rows[p][c]
                if q < 0:
                    continue
                if q not in num:
                    num[q] = len(num)
                    queue.append(q)
                if c % 2 == 0:
                    trans.append((num[p], c >> 1, num[q]))
        A._key = (A.n_states, tuple(sorted(trans)), tuple(sorted(num[t] for t in A.terminals)))
    return A._key


def included(A: InvAutomaton, B: InvAutomaton) -> bool:
    """L(A) ⊆ L(B) for deterministic ``A`` and ``B`` with ``A`` trim.

    Every path of a trim automaton extends to a successful one, so inclusion
    is a simulation: each letter ``A`` can read, ``B`` must read too, and
    terminal pairs must agree.
    """
    ra, rb = A.rows(), B.rows()
    start = (A.initial, B.initial)
    seen = {start}
    todo = [start]
    while todo:
        p, q = todo.pop()
        if p in A.terminals and q not in B.terminals:
            return False
        for c in range(A.n_cols):
            p2 = ra[p][c]
            if p2 < 0:
                continue
            q2 = rb[q][c] if c < B.n_cols else -1
            if q2 < 0:
                return False
            if (p2, q2) not in seen:
                seen.add((p2, q2))
                todo.append((p2, q2))
    return True


def readable_covered(A: InvAutomaton, Bs: Sequence[InvAutomaton]) -> bool:
    """Every word readable from A's initial state is readable in some ``B`` from its initial state."""
    if not Bs:
        return False
    ra = A.rows()
    rbs = [B.rows() for B in Bs]
    start = (A.initial, tuple(B.initial for B in Bs))
    seen = {start}
    todo = [start]
    while todo:
        p, qs = todo.pop()
        if all(q < 0 for q in qs):
            return False
        for c in range(A.n_cols):
            p2 = ra[p][c]
            if p2 < 0:
                continue
            qs2 = tuple(rb[q][c] if q >= 0 and c < len(rb[q]) else -1 for q, rb in zip(qs, rbs))
            if (p2, qs2) not in seen:
                seen.add((p2, qs2))
                todo.append((p2, qs2))
    return True


def restrict(A: InvAutomaton, keep: Iterable[int]) -> InvAutomaton:
    keep = sorted(set(keep))
    new = {old: k for k, old in enumerate(keep)}
    edges = [(new[p], g, new[q]) for p, g, q in A.edges.tolist() if p in new and q in new]
    labels = [A.labels[k] for k in keep] if A.labels is not None else None
    return InvAutomaton(len(keep), edges, new[A.initial], [new[t] for t in A.terminals if t in new],
                        n_gens=A.n_gens, labels=labels)


def trim(A: InvAutomaton) -> InvAutomaton:
    """Keep states on some initial-to-terminal path; raises EmptyLanguage if none."""
    fwd: list[list[int]] = [[] for _ in range(A.n_states)]
    for p, _, q in A.edges.tolist():
        fwd[p].append(q)
        fwd[q].append(p)  # the inverse edge
    reach = set(_closure_from([A.initial], fwd))
    # every edge has its inverse, so co-reachability uses the same adjacency
    coreach = set(_closure_from(list(A.terminals), fwd))
    keep = reach & coreach
    if not keep:
        raise EmptyLanguage("no terminal state is reachable from the initial state")
    return restrict(A, keep)


def _closure_from(starts, adj):
    seen = set(starts)
    todo = list(starts)
    while todo:
        p = todo.pop()
        for q in adj[p]:
            if q not in seen:
                seen.add(q)
                todo.append(q)
    return seen


def hat(A: InvAutomaton, i: int) -> InvAutomaton:
    """Add an ``a_i`` loop at every state."""
    if len(A.edges) and np.any(A.edges[:, 1] == i):
        raise ValueError(f"automaton already has edges labelled by generator {i}")
    loops = np.stack([np.arange(A.n_states), np.full(A.n_states, i), np.arange(A.n_states)], axis=1)
    edges = np.concatenate([A.edges, loops]) if len(A.edges) else loops
    return InvAutomaton(A.n_states, edges, A.initial, A.terminals,
                        n_gens=max(A.n_gens, i + 1), labels=A.labels)


def product(As: Sequence[InvAutomaton], loops: Sequence[int] | None = None) -> InvAutomaton:
    """Synchronized product over the reachable tuple states.

    ``loops[j]`` (if given) is a generator on which factor ``j`` behaves as if
    hatted, without materialising the loops. Terminal states are the
    reachable tuples of terminals.
    """
    if not As:
        raise ValueError("product of no automata")
    n_gens = As[0].n_gens
    if any(A.n_gens != n_gens for A in As):
        raise ValueError("alphabet mismatch between product factors")
    if loops is None:
        loops = [-1] * len(As)
    size = 1
    for A in As:
        size *= A.n_states
    if size >= 2 ** 62:
        raise OverflowError("product state space too large to index")
    max_n = max(A.n_states for A in As)
    tables = np.full((len(As), max_n, 2 * n_gens), -1, np.int64)
    for j, A in enumerate(As):
        if 2 * n_gens:
            tables[j, :A.n_states] = A.table
    sizes = np.array([A.n_states for A in As], np.int64)
    starts = np.array([A.initial for A in As], np.int64)
    tuples, src, gen, dst = kernels.product_bfs(tables, sizes, starts, np.asarray(loops, np.int64))
    labels = [tuple(t) for t in tuples.tolist()]
    term_sets = [A.terminals for A in As]
    terminals = [m for m, t in enumerate(labels) if all(x in ts for x, ts in zip(t, term_sets))]
    edges = np.stack([src, gen, dst], axis=1)
    return InvAutomaton(len(labels), edges, 0, terminals, n_gens=n_gens, labels=labels)


def contract(A: InvAutomaton, i: int, *, record: bool = False) -> tuple[InvAutomaton, FoldLog]:
    """Collapse every ``a_i`` edge, drop the resulting loops, fold.

    Initial and terminal states of the result are the images of those of ``A``.
    """
    mask = A.edges[:, 1] == i if len(A.edges) else np.zeros(0, bool)
    forced = [(p, q, Word([2 * i])) for p, _, q in A.edges[mask].tolist()]
    return _fold(A.n_states, A.n_gens, A.edges[~mask], A.initial, A.terminals,
                 forced=forced, record=record, labels=A.labels)


def lift_path(log: FoldLog, original: InvAutomaton, w: Word, start: int, end: int,
              source: int | None = None, target: int | None = None) -> Word:
    """Lift a path ``start -w-> end`` of a folded automaton back to ``original``.

    Returns a word labelling a path ``source -> target`` in ``original``, where
    ``source``/``target`` default to the original initial/terminal state when
    they map onto ``start``/``end`` and to the smallest preimage otherwise.
    The letters of ``w`` appear in order, separated by connector words that
    freely reduce to 1 once the contracted generator (if any) is deleted.
    """
    if not log.recorded:
        raise ValueError("lifting needs a fold log recorded with record=True")
    quotient = log.quotient
    source = _pick(quotient, start, source, [original.initial])
    target = _pick(quotient, end, target, sorted(original.terminals))

    forest: dict[int, list[tuple[int, int, bool]]] = {}
    for k, rec in enumerate(log.merges):
        forest.setdefault(rec.left, []).append((rec.right, k, True))
        forest.setdefault(rec.right, []).append((rec.left, k, False))
    expanded: dict[int, list[int]] = {}

    def connect(s: int, t: int) -> list[int]:
        if s == t:
            return []
        prev = {s: None}
        queue = deque([s])
        while queue and t not in prev:
            x = queue.popleft()
            for y, k, fwd in forest.get(x, ()):
                if y not in prev:
                    prev[y] = (x, k, fwd)
                    queue.append(y)
        if t not in prev:
            raise PathNotPresent(f"states {s} and {t} were never identified")
        steps = []
        y = t
        while prev[y] is not None:
            x, k, fwd = prev[y]
            steps.append((k, fwd))
            y = x
        out: list[int] = []
        for k, fwd in reversed(steps):
            seg = expand(k)
            out.extend(seg if fwd else [c ^ 1 for c in reversed(seg)])
        return out

    def expand(k: int) -> list[int]:
        if k not in expanded:
            rec = log.merges[k]
            if rec.word is not None:
                expanded[k] = list(rec.word.letters)
            else:
                c = rec.letter
                expanded[k] = [c ^ 1] + connect(rec.hinge[0], rec.hinge[1]) + [c]
        return expanded[k]

    out: list[int] = []
    here, state = source, start
    for c in w.letters:
        hit = log.edge_witness.get((state, c))
        if hit is None:
            raise PathNotPresent(f"no edge labelled {c} at folded state {state}")
        tail, head = hit
        out.extend(connect(here, tail))
        out.append(c)
        here, state = head, int(quotient[head])
    if state != end:
        raise PathNotPresent(f"path ends in {state}, expected {end}")
    out.extend(connect(here, target))
    return Word(out)


def _pick(quotient, folded_state, explicit, preferred):
    if explicit is not None:
        if quotient[explicit] != folded_state:
            raise PathNotPresent(f"state {explicit} does not map to {folded_state}")
        return explicit
    for s in preferred:
        if quotient[s] == folded_state:
            return s
    hits = np.nonzero(quotient == folded_state)[0]
    if not len(hits):
        raise PathNotPresent(f"folded state {folded_state} has no preimage")
    return int(hits[0])


def _label(alphabet: Alphabet | None, g: int) -> str:
    alphabet = alphabet or LATIN
    return alphabet.names[g] if g < len(alphabet) else f"x{g}"


def to_dot(A: InvAutomaton, alphabet: Alphabet | None = None, name: str = "automaton") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for s in range(A.n_states):
        shape = "doublecircle" if s in A.terminals else "circle"
        lines.append(f"  {s} [shape={shape}];")
    lines.append(f"  __start -> {A.initial};")
    for p, g, q in A.edges.tolist():
        lines.append(f'  {p} -> {q} [label="{_label(alphabet, g)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(A: InvAutomaton, alphabet: Alphabet | None = None) -> dict:
    return {
        "states": A.n_states,
        "initial": A.initial,
        "terminals": sorted(A.terminals),
        "edges": [{"from": p, "label": _label(alphabet, g), "to": q} for p, g, q in A.edges.tolist()],
    }


def from_json(data: dict | str, alphabet: Alphabet | None = None) -> InvAutomaton:
    if isinstance(data, str):
        data = json.loads(data)
    alphabet = alphabet or LATIN
    edges = []
    for e in data["edges"]:
        w = alphabet.parse(e["label"])
        if len(w) != 1:
            raise ValueError(f"edge label {e['label']!r} is not a single letter")
        c = w.letters[0]
        edges.append((e["to"], c >> 1, e["from"]) if c & 1 else (e["from"], c >> 1, e["to"]))
    return InvAutomaton(data["states"], edges, data["initial"], data["terminals"],
                        n_gens=len(alphabet) if alphabet is not LATIN else None)
