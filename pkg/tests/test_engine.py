import pytest

from scparse import compile_grammar, load_grammar, tokenize_plain
from scparse.engine import DELETE, EngineError, RUN, init_session, parse
from scparse.forest import build_forest, count_trees, enumerate_trees, render_tree
from scparse.lattice import InputLattice, LexicalItem


def run(grammar_text, text, **kwargs):
    cg = compile_grammar(load_grammar(grammar_text))
    chart = init_session(cg, tokenize_plain(text), **kwargs)
    chart.parse_cycle()
    return chart


def node_names(chart):
    g = chart.compiled.grammar
    return sorted((g.symbols[n.symbol].name, n.fbp, n.lbp) for n in chart.node_list)


# -- the flagship right/left recursion example ---------------------------------

def test_thirteen_initial_events(g2_compiled):
    chart = init_session(g2_compiled, tokenize_plain("a a a b"))
    assert chart.stats["events_created"] == 13


def test_flagship_unique_parse(g2_compiled):
    chart = init_session(g2_compiled, tokenize_plain("a a a b"))
    chart.parse_cycle()
    assert chart.accept()
    trees = enumerate_trees(build_forest(chart), 10)
    assert [render_tree(t) for t in trees] == ["S(A1(a,A1(a,A1(a))),b)"]


def test_flagship_dead_branch_fully_pruned(g2_compiled):
    chart = init_session(g2_compiled, tokenize_plain("a a a b"))
    chart.parse_cycle()
    a2 = g2_compiled.grammar.symbol("A2")
    assert not any(n.symbol == a2.id for n in chart.node_list)
    assert not any(e.production.lhs is a2 for e in chart.surviving_events())


def test_flagship_rejects_wrong_tail(g2_compiled):
    chart = init_session(g2_compiled, tokenize_plain("a a b b"))
    chart.parse_cycle()
    assert not chart.accept()


def test_other_branch_wins(g2_compiled):
    chart = init_session(g2_compiled, tokenize_plain("a a c"))
    chart.parse_cycle()
    trees = enumerate_trees(build_forest(chart), 10)
    assert [render_tree(t) for t in trees] == ["S(A2(a,A2(a)),c)"]


# -- node packing ---------------------------------------------------------------

def test_local_ambiguity_packs_one_node():
    chart = run("""
        %root S
        S -> A | B ;
        A -> x ;
        B -> x ;
    """, "x")
    # A[0,1] and B[0,1] are separate nodes; S[0,1] is one packed node
    names = node_names(chart)
    assert names.count(("S", 0, 1)) == 1
    s = chart.compiled.grammar.symbol("S")
    [s_node] = [n for n in chart.node_list if n.symbol == s.id]
    assert len(s_node.analyses) == 2
    assert chart.stats["packed"] >= 1


# -- epsilon handling -------------------------------------------------------------

def test_trailing_nullable():
    chart = run("%root S\nS -> a B ;\nB -> b | ;", "a")
    assert chart.accept()
    trees = enumerate_trees(build_forest(chart), 5)
    assert [render_tree(t) for t in trees] == ["S(a,B)"]


def test_interior_nullable():
    g = "%root S\n%terminal a b c d\nS -> a B c ;\nB -> b | d | ;"
    assert run(g, "a c").accept()
    assert run(g, "a b c").accept()
    assert run(g, "a d c").accept()
    assert not run(g, "a b").accept()
    assert not run(g, "a b d c").accept()


def test_chained_nullables():
    chart = run("""
        %root S
        S -> a A B C b ;
        A -> ;
        B -> A A ;
        C -> x | ;
    """, "a b")
    assert chart.accept()
    assert count_trees(build_forest(chart)).value == 1


def test_empty_input_nullable_root():
    chart = run("%root S\nS -> a | ;", "")
    assert chart.accept()
    assert count_trees(build_forest(chart)).value == 1


def test_empty_input_non_nullable_root():
    chart = run("%root S\nS -> a ;", "")
    assert not chart.accept()


def test_nullable_constituent_in_lattice():
    # both spellings of the first span exist, only one supports a parse,
    # and the nullable B must be realized empty between them
    g = load_grammar("%root S\n%terminal a b c d\nS -> a B c ;\nB -> b | d | ;")
    cg = compile_grammar(g)
    lat = InputLattice(3, [LexicalItem("a", "a", 0, 1), LexicalItem("d", "d", 0, 1),
                           LexicalItem("b", "b", 1, 2), LexicalItem("c", "c", 1, 2)])
    chart = init_session(cg, lat)
    chart.parse_cycle()
    trees = enumerate_trees(build_forest(chart), 5)
    assert [render_tree(t) for t in trees] == ["S(a,B,c)"]


# -- status machine basics ---------------------------------------------------------

def test_closed_closed_without_evidence_deletes(g2_compiled):
    chart = init_session(g2_compiled, tokenize_plain("a"))
    # A1 -> .a. at [0,1]: left boundary holds (LM), right lacks any link
    chart.parse_cycle()
    assert not chart.accept()
    assert chart.stats["events_deleted"] > 0


def test_run_produces_node(g2_compiled):
    chart = init_session(g2_compiled, tokenize_plain("a b"))
    chart.parse_cycle()
    assert ("A1", 0, 1) in node_names(chart)
    assert chart.stats["events_run"] >= 2


def test_status_values_are_legal(g2_compiled):
    chart = init_session(g2_compiled, tokenize_plain("a a b"), debug=True)
    chart.parse_cycle()
    assert chart.status_audit
    for (*_, status) in chart.status_audit:
        assert status in ("RUN", "DELETE", "EPSILON", "DERIVATION")


# -- lattice inputs -------------------------------------------------------------------

def test_lexical_ambiguity():
    g = load_grammar("""
        %root S
        S -> DET N | DET V ;
    """)
    cg = compile_grammar(g)
    lat = InputLattice(3, [LexicalItem("la", "DET", 0, 1),
                           LexicalItem("vela", "N", 1, 2),
                           LexicalItem("vela", "V", 1, 2)])
    chart = init_session(cg, lat)
    chart.parse_cycle()
    assert count_trees(build_forest(chart)).value == 2


def test_multiword_item():
    g = load_grammar("%root S\nS -> a b | c ;")
    cg = compile_grammar(g)
    lat = InputLattice(3, [LexicalItem("x", "a", 0, 1), LexicalItem("y", "b", 1, 2),
                           LexicalItem("xy", "c", 0, 2)])
    chart = init_session(cg, lat)
    chart.parse_cycle()
    assert count_trees(build_forest(chart)).value == 2


def test_unknown_preterminal_rejected(g2_compiled):
    lat = InputLattice(2, [LexicalItem("w", "NOPE", 0, 1)])
    with pytest.raises(EngineError, match="NOPE"):
        init_session(g2_compiled, lat)


# -- misc ----------------------------------------------------------------------------

def test_parse_convenience(g2_compiled):
    chart = parse(g2_compiled, tokenize_plain("a b"))
    assert chart.accept()


def test_trace_lines_mention_events(g2_compiled):
    chart = init_session(g2_compiled, tokenize_plain("a b"), trace=True)
    chart.parse_cycle()
    log = "\n".join(chart.trace_lines)
    assert "create" in log and "S -> A1 . b . @ [1,2]" in log


def test_session_reuses_compiled_grammar(g2_compiled):
    for text in ("a b", "a a a a a b", "a c"):
        chart = init_session(g2_compiled, tokenize_plain(text))
        chart.parse_cycle()
        assert chart.accept()


def test_ambiguous_grammar_packs_catalan():
    chart = run("%root S\nS -> S S | a ;", "a a a a")
    assert count_trees(build_forest(chart)).value == 5


def test_deep_recursion_linear_events(g2_compiled):
    chart = init_session(g2_compiled, tokenize_plain(" ".join(["a"] * 100) + " b"))
    chart.parse_cycle()
    assert chart.accept()
    assert chart.stats["events_created"] < 100 * 12
