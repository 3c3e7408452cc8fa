"""Bidirectional constraint-propagating context-free parser.

Compile a grammar once into derivability/adjacency relations and coverage
tables, then parse input lattices with an event-driven engine that deletes
doomed parse events as soon as the precompiled constraints rule them out,
leaving a shared packed forest of surviving analyses.
"""

from .grammar import Grammar, GrammarError, Production, Symbol, load_grammar
from .lattice import InputLattice, LatticeError, LexicalItem, load_lattice, tokenize_plain
from .relations import CompiledGrammar, compile_grammar, load_compiled, save_compiled
from .engine import Chart, EngineError, init_session, parse
from .forest import Forest, TreeCount, build_forest, count_trees, enumerate_trees, render_tree

__all__ = [
    "Grammar", "GrammarError", "Production", "Symbol", "load_grammar",
    "InputLattice", "LatticeError", "LexicalItem", "load_lattice", "tokenize_plain",
    "CompiledGrammar", "compile_grammar", "load_compiled", "save_compiled",
    "Chart", "EngineError", "init_session", "parse",
    "Forest", "TreeCount", "build_forest", "count_trees", "enumerate_trees", "render_tree",
]

__version__ = "0.1.0"
