import pytest

from scparse import compile_grammar, load_grammar

G2_TEXT = """
%root S
S -> A1 b | A2 c ;
A1 -> a | a A1 ;
A2 -> a | a A2 ;
"""


@pytest.fixture
def g2():
    return load_grammar(G2_TEXT)


@pytest.fixture
def g2_compiled(g2):
    return compile_grammar(g2)
