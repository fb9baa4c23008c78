import json
from itertools import product

import pytest
from hypothesis import given, strategies as st

from fragwords.freegroup import is_fragile
from fragwords.transducers import (
    NotInvertible, Transducer, act, extend_with_sink, fragile_relation_check, is_relation_bounded,
    restrict, section_letter, sink_of,
)
from fragwords.words import Alphabet, Word, all_words

# p = σ(p, q), q = (p, q): the lamplighter machine
LAMP = Transducer(["p", "q"], ["0", "1"], [[0, 1], [0, 1]], [[1, 0], [0, 1]])
# a = σ(i, a), i = (i, i): the binary adding machine
ADDER = Transducer.from_json({
    "states": ["a", "i"],
    "alphabet": ["0", "1"],
    "transitions": {"a": {"0": ["i", "1"], "1": ["a", "0"]}, "i": {"0": ["i", "0"], "1": ["i", "1"]}},
})
# p = σ(q, q), q = σ(p, p)
SWAP = Transducer(["p", "q"], ["0", "1"], [[1, 1], [0, 0]], [[1, 0], [1, 0]])


def inputs(t, max_len):
    for k in range(max_len + 1):
        yield from product(range(t.n_letters), repeat=k)


def state_words(t, max_len):
    return st.lists(st.integers(0, 2 * t.n_states - 1), max_size=max_len).map(Word)


def test_adding_machine():
    a = ADDER.parse_states("a")
    assert ADDER.format_input(act(ADDER, a, ADDER.parse_input("110"))) == "001"
    assert act(ADDER, ADDER.parse_states("A"), ADDER.parse_input("001")) == ADDER.parse_input("110")
    assert sink_of(ADDER) == 1 and sink_of(LAMP) is None


def test_not_invertible():
    with pytest.raises(NotInvertible):
        Transducer(["p"], ["0", "1"], [[0, 0]], [[0, 0]])
    t = Transducer(["p"], ["0", "1"], [[0, 0]], [[0, 0]], require_invertible=False)
    assert act(t, t.parse_states("p"), (1, 0)) == (0, 0)
    with pytest.raises(NotInvertible):
        act(t, t.parse_states("P"), (1,))
    with pytest.raises(NotInvertible):
        extend_with_sink(t)


def test_json_round_trip():
    data = LAMP.to_json()
    assert Transducer.from_json(json.dumps(data)) == LAMP
    bad = json.loads(json.dumps(data))
    del bad["transitions"]["q"]["1"]
    with pytest.raises(ValueError):
        Transducer.from_json(bad)


def test_empty_word_and_single_steps():
    for u in inputs(LAMP, 4):
        assert act(LAMP, Word(()), u) == tuple(u)
    for q in range(2):
        for a in range(2):
            w = Word([2 * q])
            assert restrict(LAMP, w, (a,)) == Word([2 * LAMP.mu[q][a]])
            assert section_letter(LAMP, w, a)[0] == LAMP.lam[q][a]


@pytest.mark.parametrize("t", [LAMP, ADDER, SWAP])
def test_inverse_coherence(t):
    for q in range(t.n_states):
        w = Word([2 * q])
        for u in inputs(t, 5):
            assert act(t, w.inverse(), act(t, w, u)) == tuple(u)
            assert act(t, w * w.inverse(), u) == tuple(u)


@pytest.mark.parametrize("t", [LAMP, ADDER, SWAP])
def test_composition_law(t):
    for p_, q in product(range(t.n_states), repeat=2):
        P, Q = Word([2 * p_]), Word([2 * q])
        for u in inputs(t, 5):
            assert act(t, P * Q, u) == act(t, P, act(t, Q, u))


@given(state_words(LAMP, 6), state_words(LAMP, 6), st.lists(st.integers(0, 1), max_size=6),
       st.lists(st.integers(0, 1), max_size=4))
def test_action_laws_random(v, w, u, x):
    assert act(LAMP, v * w, u) == act(LAMP, v, act(LAMP, w, u))
    image = act(LAMP, w, tuple(u) + tuple(x))
    assert image[:len(u)] == act(LAMP, w, u)  # prefix compatibility
    # the tail is acted on by the section
    assert image[len(u):] == act(LAMP, restrict(LAMP, w, u), x)


def test_extension_with_sink():
    X = extend_with_sink(LAMP)
    e = X.states.index("e")
    assert list(X.letters) == ["0", "1", "p", "q", "e"]
    E = Word([2 * e])
    for u in inputs(X, 3):
        assert act(X, E, u) == tuple(u)
        assert restrict(X, E, u).generators() <= {e}
    for q in range(2):
        for a in range(2):
            assert X.mu[q][a] == LAMP.mu[q][a] and X.lam[q][a] == LAMP.lam[q][a]
        for p_ in range(3):
            letter = X.letters.index(X.states.names[p_])
            assert X.lam[q][letter] == letter
            assert X.mu[q][letter] == (e if p_ == q else q)
        # the sink is reachable from every state
        assert restrict(X, Word([2 * q]), (X.letters.index(X.states.names[q]),)) == E
    assert sink_of(X) == e


def test_extension_sink_is_always_fresh():
    X = extend_with_sink(ADDER)
    assert X.states.names == ("a", "i", "e")
    Y = extend_with_sink(Transducer(["e", "f"], ["0", "1"], [[0, 1], [0, 1]], [[1, 0], [0, 1]]))
    assert Y.states.names[-1] == "e'"
    with pytest.raises(ValueError):
        extend_with_sink(Transducer(["0"], ["0", "1"], [[0, 0]], [[1, 0]]))


def test_relation_examples():
    assert is_relation_bounded(LAMP, LAMP.parse_states("pP"), 8)
    assert is_relation_bounded(LAMP, LAMP.parse_states("pQpQ"), 8)
    assert not is_relation_bounded(LAMP, LAMP.parse_states("pq"), 3)
    assert is_relation_bounded(ADDER, ADDER.parse_states("i"), 8)
    assert is_relation_bounded(ADDER, ADDER.parse_states("aiA"), 8)
    with pytest.raises(ValueError):
        is_relation_bounded(LAMP, LAMP.parse_states("p"), -1)


@given(state_words(LAMP, 5), st.integers(0, 4))
def test_relation_check_matches_direct_action(w, d):
    direct = all(act(LAMP, w, u) == tuple(u) for u in inputs(LAMP, d))
    assert is_relation_bounded(LAMP, w, d) == direct


def test_fragile_relation_check_examples():
    # in the swap machine p = q has order two, so the commutator is a relation
    assert fragile_relation_check(SWAP, SWAP.parse_states("pqPQ"), 6)
    assert not fragile_relation_check(LAMP, LAMP.parse_states("pQpQ"), 6)
    assert not fragile_relation_check(LAMP, LAMP.parse_states("pP"), 6)
    with pytest.raises(ValueError):
        fragile_relation_check(LAMP, LAMP.parse_states("pq"), 4)


def test_relation_deletion_gives_relation():
    # in the extended machine, reading the letter q turns every q into the sink
    X = extend_with_sink(SWAP)
    for w in all_words(2, 4, reduced=True, min_len=1):
        if not is_relation_bounded(X, w, 5):
            continue
        for g in w.generators():
            letter = X.letters.index(X.states.names[g])
            assert act(X, w, (letter,)) == (letter,)
            assert restrict(X, w, (letter,)).delete(X.states.index("e")) == w.delete(g)
            assert is_relation_bounded(X, w.delete(g), 4)


@pytest.mark.parametrize("t", [LAMP, ADDER, SWAP])
def test_shortest_relations_are_fragile(t):
    X = extend_with_sink(t)
    rels = [w for w in all_words(2, 4, reduced=True, min_len=1) if is_relation_bounded(X, w, 5)]
    if not rels:
        return
    shortest = min(len(w) for w in rels)
    for w in rels:
        if len(w) == shortest:
            assert fragile_relation_check(X, w, 5)
            support = Alphabet([X.states.names[g] for g in sorted(w.generators())])
            renamed = support.parse(X.format_states(w)) if len(support) > 1 else None
            if renamed is not None:
                assert is_fragile(renamed, support)
