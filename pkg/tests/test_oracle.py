from scparse import load_grammar, tokenize_plain
from scparse.lattice import InputLattice, LexicalItem
from scparse.oracle import (CaseLimits, derives_exhaustive, earley_count_trees,
                            earley_enumerate, earley_recognize, random_case)


def g(text):
    return load_grammar(text)


def test_recognizes_simple_membership():
    gr = g("%root S\nS -> a S b | a b ;")
    assert earley_recognize(gr, tokenize_plain("a a b b"))
    assert not earley_recognize(gr, tokenize_plain("a a b"))
    assert not earley_recognize(gr, tokenize_plain(""))


def test_epsilon_productions():
    gr = g("%root S\nS -> A a ;\nA -> | a ;")
    assert earley_recognize(gr, tokenize_plain("a"))
    assert earley_recognize(gr, tokenize_plain("a a"))
    assert not earley_recognize(gr, tokenize_plain("a a a"))


def test_empty_input():
    assert earley_recognize(g("%root S\nS -> | a ;"), tokenize_plain(""))
    assert not earley_recognize(g("%root S\nS -> a ;"), tokenize_plain(""))


def test_lattice_recognition():
    gr = g("%root S\nS -> a b | c ;")
    lat = InputLattice(3, [LexicalItem("x", "a", 0, 1), LexicalItem("y", "b", 1, 2),
                           LexicalItem("xy", "c", 0, 2)])
    assert earley_recognize(gr, lat)
    assert earley_count_trees(gr, lat).value == 2


def test_count_catalan():
    gr = g("%root S\nS -> S S | a ;")
    assert earley_count_trees(gr, tokenize_plain("a a a a")).value == 5


def test_count_infinite():
    gr = g("%root S\nS -> S | a ;")
    assert earley_count_trees(gr, tokenize_plain("a")).kind == "infinite"


def test_count_zero_when_rejected():
    gr = g("%root S\nS -> a ;")
    assert earley_count_trees(gr, tokenize_plain("b b")).value == 0


def test_enumerate_trees_shape():
    gr = g("%root S\nS -> A b ;\nA -> a ;")
    [tree] = earley_enumerate(gr, tokenize_plain("a b"), 10)
    assert tree == ("S", 0, 2, (("A", 0, 1, (("a", 0, 1, ()),)), ("b", 1, 2, ())))


def test_agrees_with_exhaustive_search():
    gr = g("%root S\nS -> a S b | a b | ;")
    for tokens in ([], ["a", "b"], ["a", "a", "b", "b"], ["a", "b", "b"], ["b"]):
        lat = tokenize_plain(" ".join(tokens))
        assert earley_recognize(gr, lat) == derives_exhaustive(gr, tokens)


def test_random_cases_are_reproducible():
    g1, lat1 = random_case(42)
    g2, lat2 = random_case(42)
    assert [str(p) for p in g1.productions] == [str(p) for p in g2.productions]
    assert [(i.fbp, i.lbp, i.preterminal) for i in lat1.items] == \
           [(i.fbp, i.lbp, i.preterminal) for i in lat2.items]


def test_random_cases_within_limits():
    limits = CaseLimits()
    for seed in range(50):
        gr, lat = random_case(seed, limits)
        assert len(gr.nonterminals) <= limits.max_nonterminals
        assert len(gr.productions) <= limits.max_productions
        assert lat.n <= limits.max_input + 1
        for point in range(lat.points):
            assert len(lat.items_from(point)) <= limits.max_fanout + 1


def test_random_cases_mix_verdicts():
    grammatical = non = 0
    for seed in range(200):
        gr, lat = random_case(seed)
        if earley_recognize(gr, lat):
            grammatical += 1
        else:
            non += 1
    assert grammatical >= 20  # >= 10% each way
    assert non >= 20
