"""Inverse monoid presentations and Stephen's iterative closure.

Starting from the Munn tree of ``w``, every relation side readable between
two states gets the other side adjoined as a fresh path, then the automaton is
folded again. When two successive iterates are isomorphic the result is the
Schützenberger automaton of ``w``. Closure need not terminate, so it runs
under an iteration and state budget and reports exhaustion as a status.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
import numpy as np

from .automata import InvAutomaton, _fold, accepts, isomorphic, munn_tree
from .words import Alphabet, Word


class _Unknown:
    """Third truth value for semi-decision procedures. Refuses to act as a bool."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        raise TypeError("UNKNOWN has no truth value; compare with `is UNKNOWN`")

    def __repr__(self):
        return "UNKNOWN"

    def __reduce__(self):
        return (_Unknown, ())


UNKNOWN = _Unknown()


def is_unknown(x) -> bool:
    return x is UNKNOWN


@dataclass(frozen=True)
class Budget:
    max_iterations: int = 1000
    max_states: int = 100_000

    def __post_init__(self):
        if self.max_iterations < 1 or self.max_states < 1:
            raise ValueError("budget limits must be positive")


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class Presentation:
    alphabet: Alphabet
    relations: tuple[tuple[Word, Word], ...] = ()

    def __post_init__(self):
        rels = tuple((u, v) for u, v in self.relations)
        for u, v in rels:
            self.alphabet.check(u)
            self.alphabet.check(v)
        object.__setattr__(self, "relations", rels)

    @classmethod
    def free(cls, alphabet: Alphabet) -> "Presentation":
        return cls(alphabet, ())

    @property
    def is_free(self) -> bool:
        return not self.relations

    @classmethod
    def parse(cls, text: str) -> "Presentation":
        """``alphabet: a b`` on the first content line, then ``u = v`` lines."""
        alphabet = None
        rels = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if alphabet is None:
                alphabet = Alphabet.parse_declaration(line)
                continue
            lhs, sep, rhs = line.partition("=")
            if not sep or "=" in rhs:
                raise ValueError(f"line {lineno}: expected 'u = v', got {raw!r}")
            rels.append((alphabet.parse(lhs), alphabet.parse(rhs)))
        if alphabet is None:
            raise ValueError("presentation has no 'alphabet:' line")
        return cls(alphabet, tuple(rels))

    @classmethod
    def from_file(cls, path: str | Path) -> "Presentation":
        return cls.parse(Path(path).read_text())

    def format(self) -> str:
        lines = [self.alphabet.declaration()]
        lines += [f"{self.alphabet.format(u)} = {self.alphabet.format(v)}" for u, v in self.relations]
        return "\n".join(lines) + "\n"


@dataclass
class ClosureResult:
    status: str  # "converged" or "exhausted"
    automaton: InvAutomaton
    iterations: int
    state_counts: list[int] = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    is_finite = converged


def _run_all(table: np.ndarray, w: Word) -> np.ndarray:
    """End state of ``w`` from every state at once (-1 where it falls off)."""
    n, n_cols = table.shape
    s = np.arange(n, dtype=np.int64)
    for c in w.letters:
        if c >= n_cols:
            return np.full(n, -1, np.int64)
        ok = s >= 0
        s = np.where(ok, table[np.where(ok, s, 0), c], -1)
    return s


def expand_once(A: InvAutomaton, P: Presentation) -> InvAutomaton:
    """One round of all elementary expansions found in ``A``, then fold."""
    if not P.relations:
        return A
    table = A.table
    n = A.n_states
    n_gens = max(A.n_gens, len(P.alphabet))
    if n_gens > A.n_gens:
        table = np.pad(table, ((0, 0), (0, 2 * n_gens - A.n_cols)), constant_values=-1)
    blocks = [A.edges]
    forced: list[tuple[int, int, None]] = []
    fresh = n
    for u, v in P.relations:
        for x, y in ((u, v), (v, u)):
            ends_x = _run_all(table, x)
            ends_y = _run_all(table, y)
            need = np.nonzero((ends_x >= 0) & (ends_y != ends_x))[0]
            if not len(need):
                continue
            q1, q2 = need, ends_x[need]
            if len(y) == 0:
                forced.extend((int(a), int(b), None) for a, b in zip(q1, q2))
                continue
            m, L = len(need), len(y)
            # node j of path k: q1 for j=0, q2 for j=L, fresh states in between
            nodes = np.empty((m, L + 1), np.int64)
            nodes[:, 0] = q1
            nodes[:, L] = q2
            if L > 1:
                nodes[:, 1:L] = fresh + np.arange(m * (L - 1)).reshape(m, L - 1)
                fresh += m * (L - 1)
            for j, c in enumerate(y.letters):
                a, b = nodes[:, j], nodes[:, j + 1]
                src, dst = (b, a) if c & 1 else (a, b)
                blocks.append(np.stack([src, np.full(m, c >> 1), dst], axis=1))
    if fresh == n and not forced and len(blocks) == 1:
        return A
    edges = np.concatenate(blocks)
    return _fold(fresh, n_gens, edges, A.initial, A.terminals, forced=forced)[0]


def closure_automaton(A: InvAutomaton, P: Presentation, budget: Budget = DEFAULT_BUDGET) -> ClosureResult:
    """Iterate :func:`expand_once` from ``A`` until two iterates are isomorphic."""
    current = A
    counts = [current.n_states]
    for k in range(1, budget.max_iterations + 1):
        nxt = expand_once(current, P)
        counts.append(nxt.n_states)
        if nxt is current or isomorphic(nxt, current):
            return ClosureResult("converged", current, k, counts)
        current = nxt
        if current.n_states > budget.max_states:
            return ClosureResult("exhausted", current, k, counts)
    return ClosureResult("exhausted", current, budget.max_iterations, counts)


def closure(w: Word, P: Presentation, budget: Budget = DEFAULT_BUDGET) -> ClosureResult:
    P.alphabet.check(w)
    return closure_automaton(munn_tree(w, len(P.alphabet)), P, budget)


def word_problem(u: Word, v: Word, P: Presentation, budget: Budget = DEFAULT_BUDGET):
    """True/False when decided, UNKNOWN when a needed closure ran out of budget.

    A single converged closure that rejects the other word already separates
    the two elements, so False can be returned without the second closure.
    """
    cu = closure(u, P, budget)
    if cu.converged and not accepts(cu.automaton, v):
        return False
    cv = closure(v, P, budget)
    if cv.converged and not accepts(cv.automaton, u):
        return False
    if cu.converged and cv.converged:
        return True
    return UNKNOWN


def natural_order(u: Word, v: Word, P: Presentation, budget: Budget = DEFAULT_BUDGET):
    """Whether ``v >= u`` in the natural partial order (UNKNOWN if undecided)."""
    cu = closure(u, P, budget)
    if not cu.converged:
        return UNKNOWN
    return accepts(cu.automaton, v)


def relations_hold(A: InvAutomaton, P: Presentation) -> bool:
    """No elementary expansion changes ``A``."""
    B = expand_once(A, P)
    return B is A or isomorphic(B, A)
