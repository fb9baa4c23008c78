import random
from itertools import product

import pytest
from hypothesis import given

from conftest import words
from oracles import fim_eraser_preimage
from fragwords import automata as am
from fragwords.eraser import (
    InvEraserTuple, LiftFailure, MalformedTuple, NotInImage, erase_presentation, eraser_image_inv,
    image_membership_fim, image_membership_presented, in_kernel_K, witness,
)
from fragwords.fim import fim_equal, is_idempotent
from fragwords.freegroup import is_fragile
from fragwords.stephen import UNKNOWN, Budget, Presentation, closure, closure_automaton, word_problem
from fragwords.words import EMPTY, Alphabet, Word, all_words

A2, A3 = Alphabet.standard(2), Alphabet.standard(3)
FREE2, FREE3 = Presentation.free(A2), Presentation.free(A3)
B_IS_IDEMPOTENT = Presentation.parse("alphabet: a b\naA = b\n")


def tup(A, *texts):
    return InvEraserTuple(A, tuple(A.parse(x) for x in texts))


def short_components(n: int, g: int, max_len: int):
    codes = [2 * x + s for x in range(n) if x != g for s in (0, 1)]
    out = [()]
    for k in range(1, max_len + 1):
        out += list(product(codes, repeat=k))
    return out


def test_erase_presentation_examples():
    assert erase_presentation(FREE3, 1).presentation.is_free
    assert erase_presentation(FREE3, 1).alphabet == Alphabet(["a", "c"])
    assert erase_presentation(B_IS_IDEMPOTENT, 1).format() == "alphabet: a\naA = 1\n"
    assert erase_presentation(B_IS_IDEMPOTENT, 0).format() == "alphabet: b\n1 = b\n"
    with pytest.raises(IndexError):
        erase_presentation(B_IS_IDEMPOTENT, 2)


def test_tuple_validation():
    with pytest.raises(MalformedTuple):
        tup(A3, "a", "a", "b")
    with pytest.raises(MalformedTuple):
        tup(A3, "b", "a")
    t = tup(A3, "bB", "1", "1")
    assert not t.is_identity()  # components are not reduced
    assert t.format() == ["bB", "1", "1"]


def test_image_examples():
    t = eraser_image_inv(A3.parse("a"), FREE3)
    assert t == tup(A3, "1", "a", "a")
    assert image_membership_fim(t)
    assert fim_equal(witness(t), A3.parse("a"))


def test_cyclic_tuple_rejected():
    t = tup(A3, "bc", "ca", "ab")
    assert image_membership_fim(t) is False
    assert fim_eraser_preimage([c.letters for c in t], 3) is None
    with pytest.raises(NotInImage):
        witness(t)


@given(words(3, 6), words(3, 6))
def test_image_is_a_homomorphism(u, v):
    tu, tv, tuv = (eraser_image_inv(x, A3) for x in (u, v, u * v))
    assert all(c == a * b for c, a, b in zip(tuv, tu, tv))


def test_soundness_exhaustive():
    for w in all_words(3, 4):
        assert image_membership_fim(eraser_image_inv(w, A3))


def test_completeness_against_search():
    # every 3-tuple of words of length <= 2, decided by a direct preimage search
    hits = 0
    per = [short_components(3, g, 2) for g in range(3)]
    for comps in product(*per):
        t = InvEraserTuple(A3, tuple(Word(c) for c in comps))
        found = fim_eraser_preimage(comps, 3)
        hits += found is not None
        assert image_membership_fim(t) == (found is not None)
    assert hits == 91


def test_witness_round_trip_exhaustive():
    for w in all_words(2, 4):
        t = eraser_image_inv(w, A2)
        x = witness(t)
        assert all(fim_equal(a, b) for a, b in zip(eraser_image_inv(x, A2), t))


@given(words(3, 7))
def test_witness_round_trip_three_letters(w):
    t = eraser_image_inv(w, A3)
    x = witness(t)
    assert all(fim_equal(a, b) for a, b in zip(eraser_image_inv(x, A3), t))


def test_witness_is_verified(monkeypatch):
    import fragwords.eraser as er
    monkeypatch.setattr(er, "fim_equal", lambda u, v: False)
    with pytest.raises(LiftFailure):
        witness(tup(A3, "1", "a", "a"))


def test_presented_agrees_with_fim_on_free_presentation():
    rng = random.Random(17)
    per = [short_components(3, g, 2) for g in range(3)]
    tuples = list(product(*per))
    sample = rng.sample(tuples, 600)
    sample += [tuple(c.letters for c in eraser_image_inv(w, A3)) for w in all_words(3, 3)]
    for comps in sample:
        t = InvEraserTuple(A3, tuple(Word(c) for c in comps))
        assert image_membership_presented(t, FREE3) == image_membership_fim(t)


def test_presented_identity_and_bicyclic_component():
    assert image_membership_presented(tup(A2, "1", "1"), B_IS_IDEMPOTENT) is True
    small = Budget(max_iterations=30)
    for w in ("a", "b", "aA", "ab"):
        t = eraser_image_inv(A2.parse(w), B_IS_IDEMPOTENT)
        assert image_membership_presented(t, B_IS_IDEMPOTENT, small) is UNKNOWN


def test_presented_with_finite_components():
    # erasing a or b trivialises ab = ba; erasing c keeps it
    P = Presentation.parse("alphabet: a b c\nab = ba\n")
    for w in all_words(3, 3):
        t = eraser_image_inv(w, P)
        assert image_membership_presented(t, P) is True
    # rejected in the free case, but bca is a preimage once ab = ba
    t = tup(A3, "bc", "ca", "ab")
    assert image_membership_presented(t, P) is True
    assert image_membership_presented(tup(A3, "b", "1", "1"), P) is False


def test_presented_rejects_outside_image():
    # c^3 = 1 only survives erasing a or b; (b, 1, 1) clashes in b-content
    P = Presentation.parse("alphabet: a b c\nccc = 1\n")
    assert image_membership_presented(tup(A3, "b", "1", "1"), P) is False
    assert image_membership_presented(eraser_image_inv(A3.parse("abcc"), P), P) is True


def test_image_respects_presented_equality():
    P = Presentation.parse("alphabet: a b\naaa = 1\n")
    ws = list(all_words(2, 3))
    rng = random.Random(4)
    checked = 0
    for _ in range(150):
        u, v = rng.choice(ws), rng.choice(ws)
        if word_problem(u, v, P) is not True:
            continue
        checked += 1
        for i in range(2):
            EP = erase_presentation(P, i).presentation
            assert word_problem(u.delete(i), v.delete(i), EP) is not False
    assert checked > 5


@given(words(3, 8))
def test_closure_commutes_with_contraction_free(w):
    # A(w with a_i deleted) is the closure of the a_i-contraction of A(w)
    for i in range(3):
        C = am.trim(am.contract(am.munn_tree(w, 3), i)[0])
        cl = closure_automaton(C, FREE3)
        direct = closure(w.delete(i), FREE3).automaton
        assert am.isomorphic(cl.automaton, direct)


def test_kernel_examples():
    assert in_kernel_K(A2.parse("abAB"), A2)
    assert not in_kernel_K(A2.parse("a"), A2)
    assert in_kernel_K(EMPTY, A2)
    assert in_kernel_K(A2.parse("aA"), A2)


def test_kernel_exhaustive():
    for w in all_words(2, 6):
        direct = all(is_idempotent(c) for c in eraser_image_inv(w, A2))
        assert in_kernel_K(w, A2) == direct
        assert direct == (not w.free_reduce() or is_fragile(w, A2))
