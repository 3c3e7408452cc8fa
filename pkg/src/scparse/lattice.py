"""Parsing input as a lattice of lexical items over breaking points.

Positions between lexical units are breaking points 0..n.  Each item
carries a surface string, a preterminal category name and its first/last
breaking points, so lexical ambiguity (several items over the same span)
and multi-word or sub-word units (items spanning several points, or extra
points inside a surface word) are all just items.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class LexicalItem:
    unit: str          # surface text
    preterminal: str   # terminal category name, resolved against a grammar later
    fbp: int           # first breaking point
    lbp: int           # last breaking point

    def __post_init__(self):
        if not (0 <= self.fbp < self.lbp):
            raise LatticeError(f"item {self.unit!r}: fbp must be < lbp, got [{self.fbp},{self.lbp}]")


class InputLattice:
    """Validated item lattice over breaking points 0..n."""

    def __init__(self, points: int, items: list[LexicalItem]):
        if points < 1:
            raise LatticeError("a lattice needs at least one breaking point")
        self.points = points           # breaking point count, n + 1
        self.n = points - 1            # last breaking point index
        self.items = list(items)
        self._validate()

    def _validate(self):
        for it in self.items:
            if it.lbp > self.n:
                raise LatticeError(f"item {it.unit!r} ends at {it.lbp}, beyond last point {self.n}")
        if self.n > 0 and not self.items:
            raise LatticeError("non-trivial lattice has no items")
        # Every interior breaking point must sit on some 0 -> n path.
        fwd = {0}
        changed = True
        while changed:
            changed = False
            for it in self.items:
                if it.fbp in fwd and it.lbp not in fwd:
                    fwd.add(it.lbp)
                    changed = True
        bwd = {self.n}
        changed = True
        while changed:
            changed = False
            for it in self.items:
                if it.lbp in bwd and it.fbp not in bwd:
                    bwd.add(it.fbp)
                    changed = True
        if self.n > 0 and self.n not in fwd:
            raise LatticeError("disconnected lattice: no item path from 0 to the last point")
        for k in range(1, self.n):
            if k not in fwd or k not in bwd:
                raise LatticeError(f"disconnected lattice: breaking point {k} is on no 0->{self.n} path")

    def items_from(self, point: int) -> list[LexicalItem]:
        return [it for it in self.items if it.fbp == point]

    def __repr__(self):
        return f"InputLattice({self.points} points, {len(self.items)} items)"


def tokenize_plain(text: str, lexicon: dict[str, set[str]] | None = None) -> InputLattice:
    """Whitespace tokenization into a linear lattice.

    Without a lexicon every token maps to the terminal of the same name;
    with one, token i fans out to one item per category.
    """
    tokens = text.split()
    items = []
    for i, tok in enumerate(tokens):
        if lexicon is None:
            cats = [tok]
        else:
            cats = sorted(lexicon.get(tok, ()))
            if not cats:
                raise LatticeError(f"unknown token {tok!r} at position {i}")
        for cat in cats:
            items.append(LexicalItem(tok, cat, i, i + 1))
    return InputLattice(len(tokens) + 1, items)


_ITEM_RE = re.compile(r'^(\d+)\s+(\d+)\s+"([^"]*)"\s+(\S+)$')


def load_lattice(text: str) -> InputLattice:
    """Parse the lattice file format: a '%points N' header, then one item
    per line as: FBP LBP "surface" PRETERMINAL."""
    points = None
    items = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#")[0].strip()
        if not line:
            continue
        if line.startswith("%points"):
            try:
                points = int(line.split()[1])
            except (IndexError, ValueError):
                raise LatticeError(f"line {lineno}: malformed %points header") from None
            continue
        m = _ITEM_RE.match(line)
        if not m:
            raise LatticeError(f"line {lineno}: malformed item line {line!r}")
        fbp, lbp, unit, cat = int(m.group(1)), int(m.group(2)), m.group(3), m.group(4)
        if fbp >= lbp:
            raise LatticeError(f"line {lineno}: item {unit!r} has fbp >= lbp")
        items.append(LexicalItem(unit, cat, fbp, lbp))
    if points is None:
        raise LatticeError("missing %points header")
    return InputLattice(points, items)


def save_lattice(lat: InputLattice) -> str:
    out = [f"%points {lat.points}"]
    for it in lat.items:
        out.append(f'{it.fbp} {it.lbp} "{it.unit}" {it.preterminal}')
    return "\n".join(out) + "\n"
