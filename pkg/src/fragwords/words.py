"""Alphabets and signed words over A ∪ A⁻¹.

A word stores letter codes (``2*g`` for generator ``g``, ``2*g + 1`` for its
inverse) and knows nothing about symbol names; an :class:`Alphabet` maps
between codes and text. Two text syntaxes are accepted:

* compact: ``abAB`` (lowercase generator, uppercase inverse), single-letter
  names only;
* token: ``a b a^-1 b^-1``, whitespace separated.

The empty word is spelled ``1`` in both.
"""

from __future__ import annotations

import string
from typing import Iterable, Sequence


class WordSyntaxError(ValueError):
    """Unparseable word text. ``position`` is the offending character offset."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


def letter(g: int, sign: int = 1) -> int:
    if g < 0:
        raise IndexError(f"generator index {g} is negative")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return 2 * g + (sign < 0)


def generator_of(code: int) -> int:
    return code >> 1


def sign_of(code: int) -> int:
    return -1 if code & 1 else 1


class Word:
    """Immutable word over generators and their formal inverses."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[int] = ()):
        letters = tuple(int(c) for c in letters)
        for c in letters:
            if c < 0:
                raise ValueError(f"negative letter code {c}")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "_hash", hash(letters))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "Word":
        """Build from ``(generator, sign)`` pairs."""
        return cls(letter(g, s) for g, s in pairs)

    def pairs(self) -> list[tuple[int, int]]:
        return [(c >> 1, sign_of(c)) for c in self.letters]

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.letters[item])
        return self.letters[item]

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Word"):
        return (len(self), self.letters) < (len(other), other.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        return Word(self.letters * k)

    def __repr__(self):
        return f"Word({LATIN.format(self) if self.max_generator() < 26 else self.letters})"

    def inverse(self) -> "Word":
        return Word(c ^ 1 for c in reversed(self.letters))

    def generators(self) -> set[int]:
        return {c >> 1 for c in self.letters}

    def max_generator(self) -> int:
        return max((c >> 1 for c in self.letters), default=-1)

    def free_reduce(self) -> "Word":
        stack: list[int] = []
        for c in self.letters:
            if stack and stack[-1] == c ^ 1:
                stack.pop()
            else:
                stack.append(c)
        return Word(stack)

    def is_reduced(self) -> bool:
        ls = self.letters
        return all(ls[k] != ls[k + 1] ^ 1 for k in range(len(ls) - 1))

    def delete(self, g: int) -> "Word":
        """Erase every occurrence of generator ``g`` and its inverse."""
        return Word(c for c in self.letters if c >> 1 != g)

    def exponent_sum(self, g: int) -> int:
        return sum(sign_of(c) for c in self.letters if c >> 1 == g)


EMPTY = Word()


def free_reduce(w: Word) -> Word:
    return w.free_reduce()


def delete_letter(w: Word, i: int, alphabet: "Alphabet | None" = None) -> Word:
    if i < 0 or (alphabet is not None and i >= len(alphabet)):
        raise IndexError(f"generator index {i} out of range")
    return w.delete(i)


def is_dyck(w: Word) -> bool:
    return len(w.free_reduce()) == 0


def commutator(u: Word, v: Word) -> Word:
    return u * v * u.inverse() * v.inverse()


class Alphabet:
    """Ordered, duplicate-free list of generator names."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        for name in names:
            if not name or any(ch.isspace() for ch in name) or "^" in name or name == "1":
                raise ValueError(f"invalid generator name {name!r}")
        self.names = names
        self._index = {name: k for k, name in enumerate(names)}

    @classmethod
    def standard(cls, n: int) -> "Alphabet":
        """The first ``n`` lowercase latin letters."""
        if not 0 <= n <= 26:
            raise ValueError("standard alphabets have 0..26 letters")
        return cls(string.ascii_lowercase[:n])

    @classmethod
    def parse_declaration(cls, line: str) -> "Alphabet":
        head, sep, rest = line.partition(":")
        if not sep or head.strip() != "alphabet":
            raise ValueError(f"expected 'alphabet: ...', got {line!r}")
        return cls(rest.split())

    def declaration(self) -> str:
        return "alphabet: " + " ".join(self.names)

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Alphabet({' '.join(self.names)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"{name!r} is not in {self!r}") from None

    def without(self, i: int) -> list[int]:
        """Generator indices of A minus the ``i``-th letter."""
        return [g for g in range(len(self)) if g != i]

    @property
    def compact_ok(self) -> bool:
        return all(len(n) == 1 and n in string.ascii_lowercase for n in self.names)

    def generator(self, i: int) -> Word:
        return Word([2 * i])

    def parse(self, text: str) -> Word:
        stripped = text.strip()
        if stripped == "1" or stripped == "":
            return EMPTY
        if any(ch.isspace() for ch in stripped) or "^" in stripped or not self.compact_ok:
            return self._parse_tokens(text)
        codes = []
        for pos, ch in enumerate(text):
            if ch.isspace():
                continue
            name = ch.lower()
            if name not in self._index or not ch.isalpha():
                raise WordSyntaxError(f"unknown letter {ch!r}", text, pos)
            codes.append(2 * self._index[name] + ch.isupper())
        return Word(codes)

    def _parse_tokens(self, text: str) -> Word:
        codes = []
        pos = 0
        for token in text.split():
            pos = text.index(token, pos)
            name, exp = token, 1
            if "^" in token:
                name, _, power = token.partition("^")
                try:
                    exp = int(power)
                except ValueError:
                    raise WordSyntaxError(f"bad exponent in {token!r}", text, pos) from None
            if token == "1":
                pos += 1
                continue
            if name not in self._index:
                raise WordSyntaxError(f"unknown generator {name!r}", text, pos)
            code = 2 * self._index[name] + (exp < 0)
            codes.extend([code] * abs(exp))
            pos += len(token)
        return Word(codes)

    def check(self, w: Word) -> Word:
        if w.max_generator() >= len(self):
            raise ValueError(f"word uses generator {w.max_generator()} outside {self!r}")
        return w

    def format(self, w: Word, compact: bool | None = None) -> str:
        self.check(w)
        if not w:
            return "1"
        if compact is None:
            compact = self.compact_ok
        if compact:
            if not self.compact_ok:
                raise ValueError("compact syntax needs single lowercase letter names")
            return "".join(self.names[c >> 1].upper() if c & 1 else self.names[c >> 1] for c in w)
        return " ".join(self.names[c >> 1] + ("^-1" if c & 1 else "") for c in w)


LATIN = Alphabet.standard(26)


def parse_word(text: str, alphabet: Alphabet | None = None) -> Word:
    return (alphabet or LATIN).parse(text)


def all_words(n_gens: int, max_len: int, *, reduced: bool = False, min_len: int = 0):
    """Every word over ``n_gens`` generators (both signs) by increasing length."""
    n_cols = 2 * n_gens
    level: list[tuple[int, ...]] = [()]
    for length in range(max_len + 1):
        if length >= min_len:
            for t in level:
                yield Word(t)
        if length == max_len:
            break
        level = [
            t + (c,)
            for t in level
            for c in range(n_cols)
            if not (reduced and t and t[-1] == c ^ 1)
        ]
