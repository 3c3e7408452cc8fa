"""Queries over the shared packed parse forest left behind by a session.

A forest is the chart's node store viewed read-only from its accepting
root nodes: tree counting with cycle detection, bounded enumeration, the
reachability measure behind the useless-node statistic, and a stable
textual dump.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import Chart, Node

FINITE = "finite"
CAPPED = "capped"
INFINITE = "infinite"


@dataclass(frozen=True)
class TreeCount:
    kind: str              # finite / capped / infinite
    value: int | None = None

    @staticmethod
    def of(n: int, cap: int) -> "TreeCount":
        return TreeCount(FINITE, n) if n <= cap else TreeCount(CAPPED)

    def __repr__(self):
        return f"TreeCount({self.kind}{'' if self.value is None else ', ' + str(self.value)})"


class Forest:
    def __init__(self, roots: list[Node], chart: Chart):
        self.roots = list(roots)
        self.chart = chart
        self.store = chart.node_list  # creation order, epsilon nodes excluded

    @property
    def grammar(self):
        return self.chart.compiled.grammar


def build_forest(chart: Chart) -> Forest:
    return Forest(chart.accept(), chart)


def count_trees(forest: Forest, cap: int = 10000) -> TreeCount:
    """Number of distinct derivation trees under all roots, by memoized
    product-sum over analyses.  A back edge reachable from a root means a
    pumpable cycle, hence infinitely many trees (every forest node is
    grounded: it admits at least one finite tree)."""
    counts: dict[int, int] = {}
    WHITE, GRAY = 0, 1
    color: dict[int, int] = {}

    for root in forest.roots:
        # iterative DFS; frames are (node, child iterator state)
        stack: list[tuple[Node, list[Node], int]] = []

        def push(node):
            color[node.id] = GRAY
            kids = [c for a in node.analyses for c in a.children]
            stack.append((node, kids, 0))

        if root.id not in counts and color.get(root.id) != GRAY:
            push(root)
        while stack:
            node, kids, i = stack.pop()
            advanced = False
            while i < len(kids):
                child = kids[i]
                i += 1
                if child.id in counts:
                    continue
                if color.get(child.id) == GRAY:
                    return TreeCount(INFINITE)
                stack.append((node, kids, i))
                push(child)
                advanced = True
                break
            if advanced:
                continue
            # all children resolved
            if not node.analyses:
                counts[node.id] = 1  # lexical leaf (or bare epsilon base)
            else:
                total = 0
                for a in node.analyses:
                    prod = 1
                    for c in a.children:
                        prod *= counts[c.id]
                    total += prod
                counts[node.id] = total
            color[node.id] = WHITE

    total = sum(counts.get(r.id, 0) for r in forest.roots)
    return TreeCount.of(total, cap)


def enumerate_trees(forest: Forest, limit: int) -> list[tuple]:
    """Up to `limit` concrete trees, lexicographic by analysis index.
    Trees are (symbol-name, fbp, lbp, children) tuples; a tree never
    revisits a node on its own ancestor path, so cycles are safe."""
    names = {s.id: s.name for s in forest.grammar.symbols}
    out: list[tuple] = []

    def expand(node: Node, path: frozenset[int]):
        if node.id in path:
            return
        if not node.analyses:
            yield (names[node.symbol], node.fbp, node.lbp, ())
            return
        sub = path | {node.id}
        for a in node.analyses:
            for kids in _product(a.children, sub, expand):
                yield (names[node.symbol], node.fbp, node.lbp, kids)

    def _product(children, path, rec, idx=0):
        if idx == len(children):
            yield ()
            return
        for head in rec(children[idx], path):
            for rest in _product(children, path, rec, idx + 1):
                yield (head,) + rest

    for root in forest.roots:
        for tree in expand(root, frozenset()):
            out.append(tree)
            if len(out) >= limit:
                return out
    return out


def render_tree(tree: tuple) -> str:
    name, _, _, children = tree
    if not children:
        return name
    return f"{name}({','.join(render_tree(c) for c in children)})"


def reachable_nodes(forest: Forest) -> set[Node]:
    """Store nodes reachable from the roots through analyses; the store
    minus this set is the useless-node count."""
    store_ids = {n.id for n in forest.store}
    seen: set[int] = set()
    result: set[Node] = set()
    todo = list(forest.roots)
    while todo:
        node = todo.pop()
        if node.id in seen:
            continue
        seen.add(node.id)
        if node.id in store_ids:
            result.add(node)
        for a in node.analyses:
            todo.extend(a.children)
    return result


def useless_count(forest: Forest) -> int:
    return len(forest.store) - len(reachable_nodes(forest))


def dump_forest(forest: Forest) -> str:
    """Stable id-indexed node/analysis listing (creation order)."""
    names = {s.id: s.name for s in forest.grammar.symbols}
    out = []
    eps = [n for n in forest.chart.eps_nodes.values()]
    for node in sorted(eps + forest.store, key=lambda n: n.id):
        out.append(f"node {node.id} {names[node.symbol]} [{node.fbp},{node.lbp}]")
        for a in node.analyses:
            out.append("analysis " + " ".join([str(a.production.id)] +
                                              [str(c.id) for c in a.children]))
    out.append("roots " + " ".join(str(r.id) for r in forest.roots))
    return "\n".join(out) + "\n"
