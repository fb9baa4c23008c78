"""Fragile words and the eraser morphism on free groups.

The eraser morphism sends ``w`` to the tuple of its letter-deleted reductions,
one component per generator. Its kernel is the set of fragile words (plus the
identity); its image is decided by pairwise deletion consistency.
"""

from __future__ import annotations

from dataclasses import dataclass

from .words import EMPTY, Alphabet, Word, commutator


class NotInImage(ValueError):
    pass


@dataclass(frozen=True)
class EraserTuple:
    """One reduced word per generator; component ``i`` avoids generator ``i``."""

    alphabet: Alphabet
    components: tuple[Word, ...]

    def __post_init__(self):
        comps = tuple(c.free_reduce() for c in self.components)
        if len(comps) != len(self.alphabet):
            raise ValueError(f"expected {len(self.alphabet)} components, got {len(comps)}")
        for i, c in enumerate(comps):
            self.alphabet.check(c)
            if i in c.generators():
                raise ValueError(f"component {i} contains generator {self.alphabet.names[i]!r}")
        object.__setattr__(self, "components", comps)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def is_identity(self) -> bool:
        return all(len(c) == 0 for c in self.components)

    def format(self) -> list[str]:
        return [self.alphabet.format(c) for c in self.components]


def _require_rank(alphabet: Alphabet):
    if len(alphabet) < 2:
        raise ValueError("the eraser morphism needs at least two generators")


def eraser_image(w: Word, alphabet: Alphabet) -> EraserTuple:
    _require_rank(alphabet)
    alphabet.check(w)
    return EraserTuple(alphabet, tuple(w.delete(i).free_reduce() for i in range(len(alphabet))))


def is_fragile(w: Word, alphabet: Alphabet) -> bool:
    """Nontrivial in the free group, trivial after deleting any single generator."""
    alphabet.check(w)
    if not w.free_reduce():
        return False
    return all(not w.delete(i).free_reduce() for i in range(len(alphabet)))


def in_image(t: EraserTuple) -> bool:
    n = len(t)
    for i in range(n):
        for j in range(i + 1, n):
            if t[i].delete(j).free_reduce() != t[j].delete(i).free_reduce():
                return False
    return True


def preimage(t: EraserTuple) -> Word:
    """A word whose eraser image is ``t``.

    Builds ``x1 = w1`` and ``x(k+1) = x(k) · (x(k) minus a(k+1))⁻¹ · w(k+1)``
    with no intermediate reduction; only the final word is reduced. Length is
    linear in the total component length for fixed rank, but not minimal.
    """
    x = preimage_unreduced(t).free_reduce()
    if eraser_image(x, t.alphabet) != t:
        raise AssertionError("preimage construction produced a wrong image")
    return x


def preimage_unreduced(t: EraserTuple) -> Word:
    """The same construction as :func:`preimage` before the final reduction."""
    if not in_image(t):
        raise NotInImage("tuple fails the pairwise deletion conditions")
    x = t[0]
    for k in range(1, len(t)):
        x = x * x.delete(k).inverse() * t[k]
    return x


def nested_commutator(alphabet: Alphabet) -> Word:
    """Left-nested commutator ``[[[a1, a2], a3], ..., an]``, checked fragile."""
    _require_rank(alphabet)
    c = commutator(alphabet.generator(0), alphabet.generator(1))
    for k in range(2, len(alphabet)):
        c = commutator(c, alphabet.generator(k))
    if not is_fragile(c, alphabet):
        raise AssertionError("nested commutator is not fragile")
    return c


def exponent_sums(w: Word, n: int) -> tuple[int, ...]:
    return tuple(w.exponent_sum(g) for g in range(n))


def identity_tuple(alphabet: Alphabet) -> EraserTuple:
    return EraserTuple(alphabet, (EMPTY,) * len(alphabet))
