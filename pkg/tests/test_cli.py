import json

import pytest

from scparse.cli import main

G2 = """
%root S
S -> A1 b | A2 c ;
A1 -> a | a A1 ;
A2 -> a | a A2 ;
"""


@pytest.fixture
def g2_file(tmp_path):
    path = tmp_path / "g2.g"
    path.write_text(G2)
    return str(path)


def test_parse_grammatical(g2_file, capsys):
    assert main(["parse", "-g", g2_file, "a a a b", "--count-trees"]) == 0
    assert capsys.readouterr().out.strip() == "trees: 1"


def test_parse_non_grammatical(g2_file):
    assert main(["parse", "-g", g2_file, "a a b b"]) == 1


def test_parse_missing_grammar(tmp_path, capsys):
    assert main(["parse", "-g", str(tmp_path / "nope.g"), "a"]) == 2
    assert "error" in capsys.readouterr().err


def test_parse_invalid_grammar(tmp_path, capsys):
    bad = tmp_path / "bad.g"
    bad.write_text("S -> a ;")  # no %root
    assert main(["compile", str(bad)]) == 2


def test_compile_round_trip(g2_file, tmp_path, capsys):
    out = str(tmp_path / "g2.scp")
    assert main(["compile", g2_file, "-o", out]) == 0
    first = open(out).read()
    assert main(["compile", g2_file, "-o", out]) == 0
    assert open(out).read() == first  # deterministic
    # parse can consume the compiled table directly
    assert main(["parse", "-g", out, "a a a b"]) == 0


def test_compile_dump_relations(g2_file, capsys):
    assert main(["compile", g2_file, "--dump-relations"]) == 0
    assert "LA(b) = {A1, a}" in capsys.readouterr().out


def test_parse_stats_json(g2_file, capsys):
    assert main(["parse", "-g", g2_file, "a a a b", "--stats", "json"]) == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["events_created"] >= 13  # 13 initial, plus fusion products
    assert stats["nodes"] == 8


def test_parse_trace(g2_file, capsys):
    assert main(["parse", "-g", g2_file, "a b", "--trace"]) == 0
    assert "create" in capsys.readouterr().out


def test_parse_lattice_file(g2_file, tmp_path):
    lat = tmp_path / "in.lat"
    lat.write_text('%points 3\n0 1 "a" a\n1 2 "b" b\n')
    assert main(["parse", "-g", g2_file, "--lattice", str(lat)]) == 0


def test_parse_lexicon(g2_file, tmp_path):
    lex = tmp_path / "lex.txt"
    lex.write_text("foo a\nbar b\n")
    assert main(["parse", "-g", g2_file, "foo bar", "--lexicon", str(lex)]) == 0


def test_parse_earley_engine(g2_file):
    assert main(["parse", "-g", g2_file, "a a a b", "--engine", "earley"]) == 0
    assert main(["parse", "-g", g2_file, "a a b b", "--engine", "earley"]) == 1


def test_parse_forest_dump(g2_file, tmp_path):
    out = tmp_path / "forest.txt"
    assert main(["parse", "-g", g2_file, "a b", "--forest", str(out)]) == 0
    assert "S [0,2]" in out.read_text()


def test_parse_without_input(g2_file, capsys):
    assert main(["parse", "-g", g2_file]) == 2


def test_bench_csv(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--suite", "recursive", "--lengths", "8,16,32",
                 "--csv", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "suite,W,events_created,events_deleted,events_run,fusions,nodes,links,T"
    assert len(lines) == 4
    assert "PCC" in capsys.readouterr().out


def test_bench_bad_lengths(capsys):
    assert main(["bench", "--suite", "recursive", "--lengths", "x"]) == 2
