"""Edge-list and extended Newick readers, plus the edge-list writer."""

from __future__ import annotations

import re
from collections.abc import Mapping

from .graph import Digraph


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DuplicateArc(ParseError):
    pass


class SelfLoop(ParseError):
    pass


class CycleError(ParseError):
    pass


def parse_edge_list(text: str, check_acyclic: bool = True) -> Digraph:
    """One arc per line: ``tail head [weight]``; ``#`` starts a comment."""
    index: dict[str, int] = {}
    arcs: list[tuple[int, int, int]] = []
    lines: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        fields = raw.split("#", 1)[0].split()
        if not fields:
            continue
        if len(fields) not in (2, 3):
            raise ParseError(f"expected 'tail head [weight]', got {raw.strip()!r}", lineno)
        tail, head = fields[0], fields[1]
        weight = 1
        if len(fields) == 3:
            try:
                weight = int(fields[2])
            except ValueError:
                raise ParseError(f"weight {fields[2]!r} is not an integer", lineno) from None
            if weight <= 0:
                raise ParseError(f"weight must be positive, got {weight}", lineno)
        if tail == head:
            raise SelfLoop(f"self-loop {tail} -> {head}", lineno)
        for lab in (tail, head):
            index.setdefault(lab, len(index))
        key = (index[tail], index[head])
        if key in lines:
            raise DuplicateArc(f"arc {tail} -> {head} repeats line {lines[key]}", lineno)
        lines[key] = lineno
        arcs.append((*key, weight))
    g = Digraph(len(index), arcs, list(index))
    if check_acyclic:
        cycle = g.find_cycle()
        if cycle:
            closing = max(lines[(cycle[i], cycle[(i + 1) % len(cycle)])] for i in range(len(cycle)))
            names = " -> ".join(g.labels[v] for v in cycle + cycle[:1])
            raise CycleError(f"arc closes a directed cycle {names}", closing)
    return g


def serialize_edge_list(g: Digraph, header: Mapping[str, object] | None = None) -> str:
    bad = [lab for lab in g.labels if not lab or "#" in lab or any(c.isspace() for c in lab)]
    if bad:
        raise ValueError(f"labels cannot be written to an edge list: {bad[:3]}")
    out = [f"# {k}: {v}" for k, v in (header or {}).items()]
    for u, v, w in g.arcs():
        out.append(f"{g.labels[u]} {g.labels[v]}" + (f" {w}" if w != 1 else ""))
    return "\n".join(out) + "\n"


_HYBRID = re.compile(r"^(?P<name>.*?)#(?P<kind>H|LGT|R)(?P<id>\d+)$")


class _Newick:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0
        self.labels: list[str] = []
        self.arcs: list[tuple[int, int]] = []
        self.hybrids: dict[str, int] = {}
        self.hybrid_seen: dict[str, int] = {}
        self.hybrid_defined: set[str] = set()
        self.hybrid_pos: dict[str, int] = {}
        self.names: dict[str, int] = {}

    def error(self, message: str) -> ParseError:
        line = self.text.count("\n", 0, self.pos) + 1
        col = self.pos - (self.text.rfind("\n", 0, self.pos) + 1) + 1
        return ParseError(f"{message} (column {col})", line)

    def peek(self) -> str:
        self.skip_space()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip_space(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def label(self) -> str:
        self.skip_space()
        if self.peek() == "'":
            end = self.text.find("'", self.pos + 1)
            if end < 0:
                raise self.error("unterminated quoted label")
            lab = self.text[self.pos + 1 : end]
            self.pos = end + 1
        else:
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos] not in "(),:;[ \t\r\n":
                self.pos += 1
            lab = self.text[start : self.pos]
        # drop branch lengths and other colon-separated annotations
        while self.peek() == ":":
            self.pos += 1
            while self.pos < len(self.text) and self.text[self.pos] not in "(),:;[":
                self.pos += 1
        if self.peek() == "[":
            end = self.text.find("]", self.pos)
            if end < 0:
                raise self.error("unterminated comment")
            self.pos = end + 1
        return lab.strip()

    def vertex(self, lab: str, has_children: bool) -> int:
        m = _HYBRID.match(lab)
        if m:
            tag = f"#{m['kind']}{m['id']}"
            if has_children:
                if tag in self.hybrid_defined:
                    raise self.error(f"hybrid {tag} has children in two places")
                self.hybrid_defined.add(tag)
            self.hybrid_seen[tag] = self.hybrid_seen.get(tag, 0) + 1
            self.hybrid_pos.setdefault(tag, self.pos)
            name = m["name"]
            if tag in self.hybrids:
                v = self.hybrids[tag]
                if name and self.labels[v] not in (name, tag[1:]):
                    raise self.error(f"hybrid {tag} named both {self.labels[v]} and {name}")
                if name:
                    self.labels[v] = name
                return v
            # unnamed hybrids get the tag without '#', which would start a comment
            v = self.new(name or tag[1:])
            self.hybrids[tag] = v
            return v
        if lab:
            if lab in self.names:
                raise self.error(f"duplicate label {lab}")
            v = self.new(lab)
            self.names[lab] = v
            return v
        return self.new(f"_{len(self.labels)}")

    def new(self, lab: str) -> int:
        self.labels.append(lab)
        return len(self.labels) - 1

    def subtree(self) -> int:
        kids = []
        if self.peek() == "(":
            self.pos += 1
            kids.append(self.subtree())
            while self.peek() == ",":
                self.pos += 1
                kids.append(self.subtree())
            if self.peek() != ")":
                raise self.error("expected ')' or ','")
            self.pos += 1
        v = self.vertex(self.label(), bool(kids))
        self.arcs.extend((v, c) for c in kids)
        return v

    def parse(self) -> Digraph:
        self.subtree()
        if self.peek() != ";":
            raise self.error("expected ';' after the network" if self.peek() != ")" else "unbalanced ')'")
        self.pos += 1
        if self.peek():
            raise self.error("trailing text after ';'")
        for tag, count in self.hybrid_seen.items():
            if count < 2:
                self.pos = self.hybrid_pos[tag]
                raise self.error(f"dangling hybrid tag {tag} occurs only once")
        seen = set()
        for u, v in self.arcs:
            if (u, v) in seen:
                raise self.error(f"repeated arc {self.labels[u]} -> {self.labels[v]}")
            seen.add((u, v))
        # generated names must not collide with user labels
        taken = set(self.names)
        user = set(self.names.values()) | {
            v for tag, v in self.hybrids.items() if self.labels[v] != tag[1:]
        }
        taken |= {self.labels[v] for v in user}
        for v, lab in enumerate(self.labels):
            if v in user:
                continue
            while lab in taken:
                lab = "_" + lab
            self.labels[v] = lab
            taken.add(lab)
        g = Digraph(len(self.labels), self.arcs, self.labels)
        if g.find_cycle():
            raise self.error("hybrid tags create a directed cycle")
        return g


def parse_enewick(text: str) -> Digraph:
    """Extended Newick with ``#H``/``#LGT``/``#R`` hybrid tags."""
    text = text.strip()
    if not text:
        raise ParseError("empty input", 1)
    return _Newick(text).parse()


def read_graph(path: str, fmt: str = "edgelist") -> Digraph:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if fmt == "enewick":
        return parse_enewick(text)
    if fmt == "edgelist":
        return parse_edge_list(text)
    raise ValueError(f"unknown format {fmt}")
