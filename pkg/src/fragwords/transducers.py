"""Invertible transducers (Mealy machines) and the action of their state words.

A state word ``q_1 ... q_k`` (a :class:`Word` over the state alphabet, with
formal inverses) acts on input words right to left: ``q_k`` reads the input
first and ``q_1`` reads what the others produced. Inverse states swap input
and output. Input words are tuples of letter indices.
"""

from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path
from typing import Sequence

from .words import Alphabet, Word


class NotInvertible(ValueError):
    pass


class Transducer:
    """States ``Q``, input alphabet ``A``, transitions ``mu`` and outputs ``lam``.

    ``mu[q][a]`` is the next state and ``lam[q][a]`` the output letter.
    """

    def __init__(self, states: Sequence[str], letters: Sequence[str],
                 mu: Sequence[Sequence[int]], lam: Sequence[Sequence[int]], *, require_invertible: bool = True):
        self.states = Alphabet(states)
        self.letters = tuple(letters)
        if len(set(self.letters)) != len(self.letters) or any(not x or any(ch.isspace() for ch in x) for x in self.letters):
            raise ValueError(f"bad input alphabet {self.letters}")
        nq, na = len(self.states), len(self.letters)
        self.mu = tuple(tuple(int(x) for x in row) for row in mu)
        self.lam = tuple(tuple(int(x) for x in row) for row in lam)
        if len(self.mu) != nq or len(self.lam) != nq or any(len(r) != na for r in self.mu + self.lam):
            raise ValueError("transition tables must be |states| x |letters|")
        if any(not 0 <= x < nq for r in self.mu for x in r) or any(not 0 <= x < na for r in self.lam for x in r):
            raise ValueError("transition entry out of range")
        self.invertible = all(sorted(r) == list(range(na)) for r in self.lam)
        if require_invertible and not self.invertible:
            bad = next(self.states.names[q] for q, r in enumerate(self.lam) if sorted(r) != list(range(na)))
            raise NotInvertible(f"output map of state {bad!r} is not a permutation")
        # inverse output maps, materialised once
        self.lam_inv = None
        if self.invertible:
            inv = []
            for r in self.lam:
                row = [0] * na
                for a, b in enumerate(r):
                    row[b] = a
                inv.append(tuple(row))
            self.lam_inv = tuple(inv)
        self._letter_index = {x: k for k, x in enumerate(self.letters)}

    def __repr__(self):
        return f"Transducer(states={list(self.states)}, letters={list(self.letters)})"

    def __eq__(self, other):
        return (isinstance(other, Transducer) and self.states == other.states and self.letters == other.letters
                and self.mu == other.mu and self.lam == other.lam)

    def __hash__(self):
        return hash((self.states, self.letters, self.mu, self.lam))

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_letters(self) -> int:
        return len(self.letters)

    # serialisation

    @classmethod
    def from_json(cls, data: dict | str) -> "Transducer":
        if isinstance(data, str):
            data = json.loads(data)
        states = list(data["states"])
        letters = [str(x) for x in data["alphabet"]]
        si = {s: k for k, s in enumerate(states)}
        li = {x: k for k, x in enumerate(letters)}
        mu = [[0] * len(letters) for _ in states]
        lam = [[0] * len(letters) for _ in states]
        trans = data["transitions"]
        for s in states:
            row = trans.get(s)
            if row is None or set(row) != set(letters):
                raise ValueError(f"state {s!r} needs one transition per letter")
            for x, (nxt, out) in row.items():
                if nxt not in si or str(out) not in li:
                    raise ValueError(f"bad transition {s!r} --{x}--> {nxt!r} / {out!r}")
                mu[si[s]][li[x]] = si[nxt]
                lam[si[s]][li[x]] = li[str(out)]
        return cls(states, letters, mu, lam)

    @classmethod
    def from_file(cls, path: str | Path) -> "Transducer":
        return cls.from_json(Path(path).read_text())

    def to_json(self) -> dict:
        S, L = self.states.names, self.letters
        return {
            "states": list(S),
            "alphabet": list(L),
            "transitions": {
                S[q]: {L[a]: [S[self.mu[q][a]], L[self.lam[q][a]]] for a in range(self.n_letters)}
                for q in range(self.n_states)
            },
        }

    # input words

    def parse_input(self, text: str) -> tuple[int, ...]:
        text = text.strip()
        if not text:
            return ()
        tokens = text.split() if (" " in text or any(len(x) > 1 for x in self.letters)) else list(text)
        try:
            return tuple(self._letter_index[t] for t in tokens)
        except KeyError as exc:
            raise ValueError(f"unknown input letter {exc.args[0]!r}") from None

    def format_input(self, u: Sequence[int]) -> str:
        sep = "" if all(len(x) == 1 for x in self.letters) else " "
        return sep.join(self.letters[a] for a in u)

    def parse_states(self, text: str) -> Word:
        return self.states.parse(text)

    def format_states(self, w: Word) -> str:
        return self.states.format(w)

    # single signed state

    def _need_inverse(self):
        if not self.invertible:
            raise NotInvertible("inverse states need an invertible transducer")

    def out1(self, c: int, a: int) -> int:
        if c & 1:
            self._need_inverse()
            return self.lam_inv[c >> 1][a]
        return self.lam[c >> 1][a]

    def next1(self, c: int, a: int) -> int:
        """Section of the signed state ``c`` at letter ``a``, as a signed state."""
        if c & 1:
            self._need_inverse()
            return 2 * self.mu[c >> 1][self.lam_inv[c >> 1][a]] + 1
        return 2 * self.mu[c >> 1][a]


def _check_states(t: Transducer, w: Word):
    if w.max_generator() >= t.n_states:
        raise ValueError("state word uses an unknown state")


def act(t: Transducer, w: Word, u: Sequence[int]) -> tuple[int, ...]:
    """Image of input word ``u`` under the state word ``w``."""
    _check_states(t, w)
    out = list(u)
    for c in reversed(w.letters):
        for k, a in enumerate(out):
            out[k] = t.out1(c, a)
            c = t.next1(c, a)
    return tuple(out)


def section_letter(t: Transducer, w: Word, a: int) -> tuple[int, Word]:
    """``(output letter, section word)`` of ``w`` at a single letter."""
    pieces = [0] * len(w)
    x = a
    for j in range(len(w) - 1, -1, -1):
        c = w.letters[j]
        pieces[j] = t.next1(c, x)
        x = t.out1(c, x)
    return x, Word(pieces)


def restrict(t: Transducer, w: Word, u: Sequence[int]) -> Word:
    """Section of ``w`` at the input word ``u`` (letter for letter, not reduced)."""
    _check_states(t, w)
    for a in u:
        w = section_letter(t, w, a)[1]
    return w


def fresh_name(base: str, taken) -> str:
    name = base
    while name in taken:
        name += "'"
    return name


def extend_with_sink(t: Transducer) -> Transducer:
    """Add the states as letters plus a fresh identity sink ``e``.

    New letters are fixed by every state; state ``q`` restricts to the sink
    on letter ``q`` and to itself on every other new letter.
    """
    if not t.invertible:
        raise NotInvertible("extension is defined for invertible transducers")
    S = list(t.states.names)
    clash = set(S) & set(t.letters)
    if clash:
        raise ValueError(f"state names {sorted(clash)} collide with input letters")
    sink = fresh_name("e", set(S) | set(t.letters))
    states = S + [sink]
    letters = list(t.letters) + states
    na, nq = t.n_letters, t.n_states
    e = nq
    mu, lam = [], []
    for q in range(nq):
        mu.append(list(t.mu[q]) + [e if p == q else q for p in range(nq + 1)])
        lam.append(list(t.lam[q]) + [na + p for p in range(nq + 1)])
    mu.append([e] * len(letters))
    lam.append(list(range(len(letters))))
    return Transducer(states, letters, mu, lam)


def sink_of(t: Transducer) -> int | None:
    """Index of a state that fixes every letter and loops to itself, if any."""
    for q in range(t.n_states):
        if all(t.mu[q][a] == q and t.lam[q][a] == a for a in range(t.n_letters)):
            return q
    return None


def is_relation_bounded(t: Transducer, w: Word, depth: int) -> bool:
    """``w`` fixes every input word of length at most ``depth``.

    Bounded check only: True does not prove ``w`` is trivial in the group.
    Sections are freely reduced (a state next to its inverse acts trivially)
    and memoised per depth.
    """
    _check_states(t, w)
    if depth < 0:
        raise ValueError("depth must be non-negative")
    sink = sink_of(t)

    def simplify(v: Word) -> Word:
        if sink is not None:
            v = v.delete(sink)
        return v.free_reduce()

    @lru_cache(maxsize=None)
    def fixes(v: Word, d: int) -> bool:
        if d == 0 or not v:
            return True
        for a in range(t.n_letters):
            b, sec = section_letter(t, v, a)
            if b != a or not fixes(simplify(sec), d - 1):
                return False
        return True

    return fixes(simplify(w), depth)


def fragile_relation_check(t: Transducer, w: Word, depth: int) -> bool:
    """For a bounded-verified relation, whether ``w`` is fragile over the states it uses."""
    if not is_relation_bounded(t, w, depth):
        raise ValueError("word is not a relation up to the given depth")
    if not w.free_reduce():
        return False
    return all(not w.delete(g).free_reduce() for g in w.generators())
