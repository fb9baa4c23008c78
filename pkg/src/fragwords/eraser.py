"""The eraser morphism for inverse monoid presentations.

Component ``i`` of the eraser sends a word to its ``a_i``-deleted image in the
monoid presented by the letter-deleted relations. A tuple ``(u_1, ..., u_n)``
lies in the image iff, for each ``i``, contracting the ``a_i`` edges of the
product of the hatted Schützenberger automata and closing gives back the
Schützenberger automaton of ``u_i``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automata import (
    InvAutomaton, PathNotPresent, accepts, contract, included, isomorphic, lift_path,
    munn_tree, product, readable_covered, trim,
)
from .fim import FimElement, covering_idempotents, fim_equal
from .freegroup import is_fragile
from .stephen import DEFAULT_BUDGET, UNKNOWN, Budget, Presentation, closure, closure_automaton
from .words import Alphabet, Word


class MalformedTuple(ValueError):
    pass


class NotInImage(ValueError):
    pass


class LiftFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class ErasedPresentation:
    """Relations of ``base`` with generator ``index`` deleted; trivial ones dropped.

    Generator indices are kept global, so the erased letter simply never
    occurs. ``alphabet`` lists the remaining names.
    """

    base: Presentation
    index: int
    presentation: Presentation

    @property
    def alphabet(self) -> Alphabet:
        names = self.base.alphabet.names
        return Alphabet(names[:self.index] + names[self.index + 1:])

    def format(self) -> str:
        A = self.base.alphabet
        lines = [self.alphabet.declaration()]
        lines += [f"{A.format(u)} = {A.format(v)}" for u, v in self.presentation.relations]
        return "\n".join(lines) + "\n"


def erase_presentation(P: Presentation, i: int) -> ErasedPresentation:
    if not 0 <= i < len(P.alphabet):
        raise IndexError(f"generator index {i} out of range")
    rels = []
    for u, v in P.relations:
        pair = (u.delete(i), v.delete(i))
        if pair[0] != pair[1] and pair not in rels:
            rels.append(pair)
    return ErasedPresentation(P, i, Presentation(P.alphabet, tuple(rels)))


@dataclass(frozen=True)
class InvEraserTuple:
    """One word per generator; component ``i`` avoids generator ``i``. Words are not reduced."""

    alphabet: Alphabet
    components: tuple[Word, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) != len(self.alphabet):
            raise MalformedTuple(f"expected {len(self.alphabet)} components, got {len(comps)}")
        for i, c in enumerate(comps):
            if c.max_generator() >= len(self.alphabet):
                raise MalformedTuple(f"component {i} uses a generator outside the alphabet")
            if i in c.generators():
                raise MalformedTuple(f"component {i} contains generator {self.alphabet.names[i]!r}")
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


def eraser_image_inv(w: Word, P: Presentation | Alphabet) -> InvEraserTuple:
    alphabet = P.alphabet if isinstance(P, Presentation) else P
    alphabet.check(w)
    return InvEraserTuple(alphabet, tuple(w.delete(i) for i in range(len(alphabet))))


def _hatted_product(t: InvEraserTuple, automata: list[InvAutomaton]) -> InvAutomaton | None:
    """Product of the hatted automata, or None when the terminal tuple is unreachable."""
    P = product(automata, loops=list(range(len(t))))
    if len(P.terminals) != 1:
        return None
    return P


def image_membership_fim(t: InvEraserTuple) -> bool:
    """Decide membership of ``t`` in the eraser image of the free inverse monoid."""
    n = len(t.alphabet)
    trees = [munn_tree(u, n) for u in t]
    P = _hatted_product(t, trees)
    if P is None:
        return False
    for i in range(n):
        B = trim(contract(P, i)[0])
        if not isomorphic(B, trees[i]):
            return False
    return True


def witness(t: InvEraserTuple) -> Word:
    """A word whose eraser image equals ``t`` componentwise in the free inverse monoid.

    Each ``u_i`` is read in the ``a_i``-contracted product and its path is
    lifted back to a path ``z_i`` of the product; the witness is
    ``(z_1 z_1⁻¹)(z_2 z_2⁻¹)...(z_n z_n⁻¹) z_1``, returned in canonical
    shortest form after every component has been re-checked.
    """
    if not image_membership_fim(t):
        raise NotInImage("tuple is not in the image of the eraser morphism")
    n = len(t.alphabet)
    P = _hatted_product(t, [munn_tree(u, n) for u in t])
    beta = P.terminal
    lifts = []
    for i, u in enumerate(t):
        B, log = contract(P, i, record=True)
        try:
            z = lift_path(log, P, u, B.initial, B.terminal, source=P.initial, target=beta)
        except PathNotPresent as exc:
            raise LiftFailure(f"component {i}: {exc}") from exc
        lifts.append(z)
    w = Word(())
    for z in lifts:
        w = w * z * z.inverse()
    w = FimElement.of(w * lifts[0]).word()
    for i, u in enumerate(t):
        if not fim_equal(w.delete(i), u):
            raise LiftFailure(f"witness fails verification at component {i}")
    return w


def _idempotent_part_matches(C: InvAutomaton, AE: InvAutomaton, EP: ErasedPresentation,
                             u: Word, budget: Budget):
    """Whether Cl(C) equals A(u u⁻¹); True, False or UNKNOWN."""
    if not included(C, AE):
        return False
    if EP.presentation.is_free:
        covers = covering_idempotents((u * u.inverse()))
        n = C.n_gens
        Ds = [munn_tree(v.word(), n).all_terminal() for v in sorted(covers, key=lambda x: x.word())]
        return not readable_covered(C, Ds)
    res = closure_automaton(C, EP.presentation, budget)
    if not res.converged:
        return UNKNOWN
    return isomorphic(res.automaton, AE)


def image_membership_presented(t: InvEraserTuple, P: Presentation, budget: Budget = DEFAULT_BUDGET):
    """Decide membership in the eraser image for a presented inverse monoid.

    Returns UNKNOWN when a Schützenberger automaton or closure does not
    converge within ``budget``.
    """
    if t.alphabet != P.alphabet:
        raise MalformedTuple("tuple and presentation use different alphabets")
    if t.is_identity():
        return True
    n = len(P.alphabet)
    erased = [erase_presentation(P, i) for i in range(n)]
    schutz = []
    for u, EP in zip(t, erased):
        res = closure(u, EP.presentation, budget)
        if not res.converged:
            return UNKNOWN
        schutz.append(res.automaton)
    prod = _hatted_product(t, schutz)
    if prod is None:
        return False
    undecided = False
    for i, (u, EP) in enumerate(zip(t, erased)):
        B = trim(contract(prod, i)[0])
        C = B.with_endpoints(terminals=[B.initial])
        AE = schutz[i].with_endpoints(terminals=[schutz[i].initial])
        ok = _idempotent_part_matches(C, AE, EP, u, budget)
        if ok is UNKNOWN:
            undecided = True
            continue
        if not ok:
            return False
        res = closure_automaton(B, EP.presentation, budget)
        if not res.converged:
            undecided = True
            continue
        if not accepts(res.automaton, u):
            return False
    return UNKNOWN if undecided else True


def in_kernel_K(w: Word, alphabet: Alphabet) -> bool:
    """Whether the eraser image of ``w`` is idempotent in every component.

    In the free inverse monoid this holds iff ``w`` is fragile or trivial in
    the free group.
    """
    return is_fragile(w, alphabet) or not w.free_reduce()
