"""Grammar relation fixpoints and coverage tables.

Everything the parser needs to prune work is precompiled here:

  nullable     symbols deriving the empty string
  lpd / rpd    left / right partial derivability: a symbol together with
               every ancestor reachable through a left / right corner
               chain, skipping nullable siblings (reflexive, transitive)
  la / ra      symbols that may appear immediately left / right of a
               symbol in some derivation
  lm / rm      symbols that can begin / end a root derivation
  coverage     per-symbol production-occurrence entries that drive event
               creation, classified by the nullability of the prefix and
               suffix around the occurrence (CC / CO / OC / OO)

Relation tables are dense bitsets (Python ints) indexed by symbol id, so
the runtime membership tests are single mask operations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grammar import Grammar, GrammarError, Production, Symbol

# Coverage occurrence classes: first letter = left context, second = right;
# C(losed) means the context is empty-or-nullable, O(pen) means it contains
# a non-nullable symbol.
CC = "CC"
CO = "CO"
OC = "OC"
OO = "OO"


@dataclass(frozen=True)
class CoverageEntry:
    production: Production
    position: int  # rhs index of the anchor occurrence
    klass: str     # CC / CO / OC / OO
    pre_skip_left: int   # nullable prefix length when the left side is closed
    pre_skip_right: int  # nullable suffix length when the right side is closed


def compute_nullable(g: Grammar) -> frozenset[int]:
    """Least fixpoint of: a symbol is nullable iff some production for it
    has an all-nullable (possibly empty) body."""
    nullable: set[int] = set()
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if p.lhs.id in nullable:
                continue
            if all(s.id in nullable for s in p.rhs):
                nullable.add(p.lhs.id)
                changed = True
    return frozenset(nullable)


def _corner_edges(g: Grammar, nullable: frozenset[int], reverse: bool):
    """Edges x -> lhs for every occurrence of x reachable from the rhs
    boundary across nullable symbols only.  reverse=True walks from the
    right end.  Edge labels carry the witnessing (production, position)."""
    edges: dict[int, list[tuple[int, Production, int]]] = {s.id: [] for s in g.symbols}
    for p in g.productions:
        rhs = p.rhs
        positions = range(len(rhs) - 1, -1, -1) if reverse else range(len(rhs))
        for pos in positions:
            sym = rhs[pos]
            edges[sym.id].append((p.lhs.id, p, pos))
            if sym.id not in nullable:
                break
    return edges


def _closure_masks(g: Grammar, edges) -> list[int]:
    masks = []
    for s in g.symbols:
        reach = {s.id}
        todo = [s.id]
        while todo:
            x = todo.pop()
            for y, _, _ in edges[x]:
                if y not in reach:
                    reach.add(y)
                    todo.append(y)
        mask = 0
        for i in reach:
            mask |= 1 << i
        masks.append(mask)
    return masks


def compute_lpd(g: Grammar, nullable: frozenset[int]) -> list[int]:
    """Per-symbol bitset of left partial derivations (includes the symbol)."""
    return _closure_masks(g, _corner_edges(g, nullable, reverse=False))


def compute_rpd(g: Grammar, nullable: frozenset[int]) -> list[int]:
    """Per-symbol bitset of right partial derivations (includes the symbol)."""
    return _closure_masks(g, _corner_edges(g, nullable, reverse=True))


def corner_witness(g: Grammar, nullable: frozenset[int], alpha: Symbol, beta: Symbol,
                   reverse: bool = False) -> list[tuple[Production, int]] | None:
    """Chain of (production, occurrence position) steps showing that beta is
    in lpd (rpd when reverse) of alpha.  None when unrelated; [] when equal."""
    if alpha.id == beta.id:
        return []
    edges = _corner_edges(g, nullable, reverse)
    parent: dict[int, tuple[int, Production, int]] = {}
    todo = [alpha.id]
    seen = {alpha.id}
    while todo:
        x = todo.pop(0)
        for y, prod, pos in edges[x]:
            if y not in seen:
                seen.add(y)
                parent[y] = (x, prod, pos)
                todo.append(y)
            if y == beta.id:
                chain = []
                cur = beta.id
                # walk the parent pointers from the ancestor back down to
                # the corner symbol
                while cur != alpha.id:
                    prev, prod, pos = parent[cur]
                    chain.append((prod, pos))
                    cur = prev
                return chain
    return None


def primary_pairs(g: Grammar, nullable: frozenset[int]) -> set[tuple[int, int]]:
    """(a, b) pairs where some production has ...a <nullables> b..."""
    pairs: set[tuple[int, int]] = set()
    for p in g.productions:
        rhs = p.rhs
        for i in range(len(rhs)):
            for j in range(i + 1, len(rhs)):
                pairs.add((rhs[i].id, rhs[j].id))
                if rhs[j].id not in nullable:
                    break
    return pairs


def compute_adjacency(g: Grammar, nullable: frozenset[int],
                      lpd: list[int], rpd: list[int]) -> tuple[list[int], list[int]]:
    """la[a] = symbols that may stand immediately left of a;
    ra[a] = symbols that may stand immediately right of a."""
    pairs = primary_pairs(g, nullable)
    succ = [0] * len(g.symbols)  # succ[d]: g with d^g
    for d, gg in pairs:
        succ[d] |= 1 << gg
    # succ_of_rpd[b] = union of succ over rpd[b]
    succ_of_rpd = []
    for s in g.symbols:
        m = 0
        r = rpd[s.id]
        for t in g.symbols:
            if r >> t.id & 1:
                m |= succ[t.id]
        succ_of_rpd.append(m)
    la = [0] * len(g.symbols)
    ra = [0] * len(g.symbols)
    for a in g.symbols:
        for b in g.symbols:
            if lpd[a.id] & succ_of_rpd[b.id]:
                la[a.id] |= 1 << b.id
                ra[b.id] |= 1 << a.id
    return la, ra


def compute_boundaries(g: Grammar, lpd: list[int], rpd: list[int]) -> tuple[int, int]:
    """lm / rm bitsets: symbols able to begin / end a root derivation."""
    roots = 0
    for r in g.roots:
        roots |= 1 << r.id
    lm = rm = 0
    for s in g.symbols:
        if lpd[s.id] & roots:
            lm |= 1 << s.id
        if rpd[s.id] & roots:
            rm |= 1 << s.id
    return lm, rm


def build_coverage(g: Grammar, nullable: frozenset[int]) -> list[list[CoverageEntry]]:
    """One entry per rhs occurrence of each symbol, classified by whether
    the surrounding prefix/suffix is a (possibly empty) nullable string."""
    coverage: list[list[CoverageEntry]] = [[] for _ in g.symbols]
    for p in g.productions:
        rhs = p.rhs
        for pos, sym in enumerate(rhs):
            left_nullable = all(s.id in nullable for s in rhs[:pos])
            right_nullable = all(s.id in nullable for s in rhs[pos + 1:])
            klass = (CC if left_nullable and right_nullable else
                     CO if left_nullable else
                     OC if right_nullable else OO)
            coverage[sym.id].append(CoverageEntry(
                production=p,
                position=pos,
                klass=klass,
                pre_skip_left=pos if left_nullable else 0,
                pre_skip_right=len(rhs) - pos - 1 if right_nullable else 0,
            ))
    return coverage


class CompiledGrammar:
    """Immutable compilation result; safe to share across parse sessions."""

    def __init__(self, grammar: Grammar, nullable: frozenset[int],
                 lpd: list[int], rpd: list[int], la: list[int], ra: list[int],
                 lm: int, rm: int, coverage: list[list[CoverageEntry]]):
        self.grammar = grammar
        self.nullable = nullable
        self.lpd = lpd
        self.rpd = rpd
        self.la = la
        self.ra = ra
        self.lm = lm
        self.rm = rm
        self.coverage = coverage
        # Per nullable symbol: (production, rhs) skeletons of its
        # empty-string derivations; recursive structures stay cycle-shared.
        self.epsilon_analyses: dict[int, list[Production]] = {}
        for p in grammar.productions:
            if p.lhs.id in nullable and all(s.id in nullable for s in p.rhs):
                self.epsilon_analyses.setdefault(p.lhs.id, []).append(p)

    # -- name-based views, mainly for tests and the relation dump ---------

    def _names(self, mask: int) -> frozenset[str]:
        return frozenset(s.name for s in self.grammar.symbols if mask >> s.id & 1)

    def nullable_names(self) -> frozenset[str]:
        return frozenset(s.name for s in self.grammar.symbols if s.id in self.nullable)

    def lpd_names(self, name: str) -> frozenset[str]:
        return self._names(self.lpd[self.grammar.symbol(name).id])

    def rpd_names(self, name: str) -> frozenset[str]:
        return self._names(self.rpd[self.grammar.symbol(name).id])

    def la_names(self, name: str) -> frozenset[str]:
        return self._names(self.la[self.grammar.symbol(name).id])

    def ra_names(self, name: str) -> frozenset[str]:
        return self._names(self.ra[self.grammar.symbol(name).id])

    def lm_names(self) -> frozenset[str]:
        return self._names(self.lm)

    def rm_names(self) -> frozenset[str]:
        return self._names(self.rm)

    def is_nullable(self, sym_id: int) -> bool:
        return sym_id in self.nullable


def compile_grammar(g: Grammar) -> CompiledGrammar:
    """Run all relation fixpoints and table builds for a grammar."""
    nullable = compute_nullable(g)
    lpd = compute_lpd(g, nullable)
    rpd = compute_rpd(g, nullable)
    la, ra = compute_adjacency(g, nullable, lpd, rpd)
    lm, rm = compute_boundaries(g, lpd, rpd)
    coverage = build_coverage(g, nullable)
    return CompiledGrammar(g, nullable, lpd, rpd, la, ra, lm, rm, coverage)


# -- serialization ---------------------------------------------------------

MAGIC = "SCPC1"


def save_compiled(cg: CompiledGrammar) -> str:
    """Deterministic textual dump of the compiled tables."""
    g = cg.grammar
    out = [MAGIC]
    out.append(f"symbols {len(g.symbols)}")
    for s in g.symbols:
        out.append(f"{s.id} {s.name} {s.kind}")
    out.append("roots " + " ".join(str(r.id) for r in g.roots))
    out.append(f"productions {len(g.productions)}")
    for p in g.productions:
        out.append(f"{p.id} {p.lhs.id} " + " ".join(str(s.id) for s in p.rhs))
    nmask = 0
    for i in cg.nullable:
        nmask |= 1 << i
    out.append(f"nullable {nmask:x}")
    for label, masks in (("lpd", cg.lpd), ("rpd", cg.rpd), ("la", cg.la), ("ra", cg.ra)):
        out.append(label + " " + " ".join(f"{m:x}" for m in masks))
    out.append(f"lm {cg.lm:x}")
    out.append(f"rm {cg.rm:x}")
    entries = sum(len(es) for es in cg.coverage)
    out.append(f"coverage {entries}")
    for sym in g.symbols:
        for e in cg.coverage[sym.id]:
            out.append(f"{sym.id} {e.production.id} {e.position} {e.klass} "
                       f"{e.pre_skip_left} {e.pre_skip_right}")
    out.append("end")
    return "\n".join(out) + "\n"


def load_compiled(text: str) -> CompiledGrammar:
    """Inverse of save_compiled."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    it = iter(lines)

    def expect(prefix: str) -> str:
        ln = next(it, None)
        if ln is None or not ln.startswith(prefix):
            raise GrammarError(f"bad compiled-grammar file: expected {prefix!r}, got {ln!r}")
        return ln

    if next(it, None) != MAGIC:
        raise GrammarError(f"bad compiled-grammar file: missing {MAGIC} header")
    nsyms = int(expect("symbols").split()[1])
    symbols = []
    for _ in range(nsyms):
        sid, name, kind = next(it).split()
        symbols.append(Symbol(int(sid), name, kind))
    root_ids = [int(x) for x in expect("roots").split()[1:]]
    nprods = int(expect("productions").split()[1])
    productions = []
    for _ in range(nprods):
        parts = [int(x) for x in next(it).split()]
        productions.append(Production(parts[0], symbols[parts[1]],
                                      tuple(symbols[i] for i in parts[2:])))
    grammar = Grammar(symbols, productions, [symbols[i] for i in root_ids])
    nmask = int(expect("nullable").split()[1], 16)
    nullable = frozenset(s.id for s in symbols if nmask >> s.id & 1)
    masks = {}
    for label in ("lpd", "rpd", "la", "ra"):
        masks[label] = [int(x, 16) for x in expect(label).split()[1:]]
    lm = int(expect("lm").split()[1], 16)
    rm = int(expect("rm").split()[1], 16)
    nentries = int(expect("coverage").split()[1])
    coverage: list[list[CoverageEntry]] = [[] for _ in symbols]
    for _ in range(nentries):
        sid, pid, pos, klass, psl, psr = next(it).split()
        coverage[int(sid)].append(CoverageEntry(productions[int(pid)], int(pos),
                                                klass, int(psl), int(psr)))
    expect("end")
    return CompiledGrammar(grammar, nullable, masks["lpd"], masks["rpd"],
                           masks["la"], masks["ra"], lm, rm, coverage)


def dump_relations(cg: CompiledGrammar) -> str:
    """Human-readable relation dump for the CLI."""
    g = cg.grammar

    def fmt(names):
        return "{" + ", ".join(sorted(names)) + "}"

    out = [f"nullable = {fmt(cg.nullable_names())}"]
    for s in g.symbols:
        out.append(f"LPD({s.name}) = {fmt(cg.lpd_names(s.name))}")
    for s in g.symbols:
        out.append(f"RPD({s.name}) = {fmt(cg.rpd_names(s.name))}")
    for s in g.symbols:
        out.append(f"LA({s.name}) = {fmt(cg.la_names(s.name))}")
    for s in g.symbols:
        out.append(f"RA({s.name}) = {fmt(cg.ra_names(s.name))}")
    out.append(f"LM = {fmt(cg.lm_names())}")
    out.append(f"RM = {fmt(cg.rm_names())}")
    for s in g.symbols:
        for e in cg.coverage[s.id]:
            out.append(f"coverage({s.name}): {e.klass} [{e.production}] pos {e.position} "
                       f"skipL {e.pre_skip_left} skipR {e.pre_skip_right}")
    return "\n".join(out) + "\n"
