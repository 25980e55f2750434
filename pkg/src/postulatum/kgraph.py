"""Dependency graphs of postulates, propositions and constructions, and the K-rules over them.

A ``.kg`` file is line oriented::

    node <id> kind=<postulate|definition|proposition|construction|axiom> [asserts-existence-of=<prop>]
    property <id> <finite|infinite>
    uses <node> <node>
    implies <propA> <propB> by=<node>
    builds <construction-node> target=<prop> via=<prop>
    note <free text>

``#`` starts a comment.  The order of ``node`` lines is the declaration
order; "declared before" always means earlier in the file.

Rules:

* K2-order: a node uses something declared after it.
* K2-existence: a construction depends, through its uses-closure, on an
  axiom or postulate that asserts the existence of the very property it builds.
* K3: an indirect build (via != target) that is not licensed, i.e. the two
  implications via => target and target => via are not both proved by nodes
  declared before the construction (K4 licenses the build when they are).
* direct-infinite: a direct build of an infinite property.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

NODE_KINDS = ("postulate", "definition", "proposition", "construction", "axiom")
RULE_ORDER = ("K2-order", "K2-existence", "K3", "direct-infinite")
DATASETS = ("elements_book1.kg", "elements_misplaced.kg", "bolyai.kg")


class ParseError(ValueError):
    def __init__(self, lineno: int, reason: str):
        super().__init__(f"line {lineno}: {reason}")
        self.lineno = lineno
        self.reason = reason


@dataclass(frozen=True)
class Node:
    id: str
    kind: str
    asserts_existence_of: Optional[str] = None


@dataclass(frozen=True)
class PropertyRecord:
    id: str
    finiteness: str


@dataclass(frozen=True)
class ImplicationRecord:
    src: str
    dst: str
    proved_by: str


@dataclass(frozen=True)
class BuildRecord:
    node: str
    target: str
    via: str

    @property
    def direct(self) -> bool:
        return self.via == self.target


@dataclass(frozen=True)
class Violation:
    rule: str
    node: str
    message: str


@dataclass(frozen=True)
class DepGraph:
    nodes: tuple[Node, ...] = ()
    properties: tuple[PropertyRecord, ...] = ()
    uses: tuple[tuple[str, str], ...] = ()
    implications: tuple[ImplicationRecord, ...] = ()
    builds: tuple[BuildRecord, ...] = ()
    notes: tuple[str, ...] = ()

    def position(self, node_id: str) -> int:
        return self._index()[node_id]

    def _index(self):
        return {n.id: i for i, n in enumerate(self.nodes)}

    def node(self, node_id: str) -> Node:
        return self.nodes[self.position(node_id)]

    def finiteness(self, prop: str) -> str:
        return {p.id: p.finiteness for p in self.properties}[prop]

    def closure(self, start: str) -> list[str]:
        """Nodes reachable from ``start`` along uses-edges, excluding ``start``, in declaration order."""
        seen = self._reach(start)
        seen.pop(start)
        return sorted(seen, key=self.position)

    def _reach(self, start: str) -> dict:
        # node -> predecessor on a shortest uses-path from start
        succ = {}
        for src, dst in self.uses:
            succ.setdefault(src, []).append(dst)
        parent = {start: None}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for nxt in succ.get(cur, ()):
                if nxt not in parent:
                    parent[nxt] = cur
                    queue.append(nxt)
        return parent

    def path(self, start: str, goal: str) -> list[str]:
        parent = self._reach(start)
        chain = [goal]
        while parent[chain[-1]] is not None:
            chain.append(parent[chain[-1]])
        return chain[::-1]

    def unused_properties(self) -> list[str]:
        used = {n.asserts_existence_of for n in self.nodes}
        used |= {i.src for i in self.implications} | {i.dst for i in self.implications}
        used |= {b.target for b in self.builds} | {b.via for b in self.builds}
        return [p.id for p in self.properties if p.id not in used]


def _options(words, lineno, allowed, required=()):
    opts = {}
    for word in words:
        key, eq, value = word.partition("=")
        if not eq or not value:
            raise ParseError(lineno, f"expected key=value, got {word!r}")
        if key not in allowed:
            raise ParseError(lineno, f"unknown option {key!r}")
        if key in opts:
            raise ParseError(lineno, f"option {key!r} given twice")
        opts[key] = value
    for key in required:
        if key not in opts:
            raise ParseError(lineno, f"missing {key}=")
    return opts


def _arity(words, n, lineno, usage):
    if len(words) != n:
        raise ParseError(lineno, f"usage: {usage}")


def parse_graph(text: str) -> DepGraph:
    nodes, properties, uses, implications, builds, notes = [], [], [], [], [], []
    node_line, prop_line = {}, {}
    refs = []  # (lineno, kind, id) resolved once the whole file is read
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if stripped.startswith("note"):
            head, _, rest = stripped.partition(" ")
            if head == "note":
                notes.append(rest.strip())
                continue
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        directive, args = words[0], words[1:]
        if directive == "node":
            if not args:
                raise ParseError(lineno, "node needs an id")
            opts = _options(args[1:], lineno, ("kind", "asserts-existence-of"), ("kind",))
            node_id, kind = args[0], opts["kind"]
            if kind not in NODE_KINDS:
                raise ParseError(lineno, f"unknown node kind {kind!r}")
            if node_id in node_line:
                raise ParseError(lineno, f"duplicate node {node_id!r} (first on line {node_line[node_id]})")
            asserts = opts.get("asserts-existence-of")
            if asserts is not None:
                if kind not in ("axiom", "postulate"):
                    raise ParseError(lineno, "only axioms and postulates may assert existence")
                refs.append((lineno, "property", asserts))
            node_line[node_id] = lineno
            nodes.append(Node(node_id, kind, asserts))
        elif directive == "property":
            _arity(args, 2, lineno, "property <id> <finite|infinite>")
            if args[1] not in ("finite", "infinite"):
                raise ParseError(lineno, f"finiteness must be finite or infinite, got {args[1]!r}")
            if args[0] in prop_line:
                raise ParseError(lineno, f"duplicate property {args[0]!r} (first on line {prop_line[args[0]]})")
            prop_line[args[0]] = lineno
            properties.append(PropertyRecord(args[0], args[1]))
        elif directive == "uses":
            _arity(args, 2, lineno, "uses <node> <node>")
            refs += [(lineno, "node", args[0]), (lineno, "node", args[1])]
            uses.append((args[0], args[1]))
        elif directive == "implies":
            if len(args) != 3:
                raise ParseError(lineno, "usage: implies <propA> <propB> by=<node>")
            by = _options(args[2:], lineno, ("by",), ("by",))["by"]
            if args[0] == args[1]:
                raise ParseError(lineno, "an implication needs two different properties")
            refs += [(lineno, "property", args[0]), (lineno, "property", args[1]), (lineno, "node", by)]
            implications.append(ImplicationRecord(args[0], args[1], by))
        elif directive == "builds":
            if len(args) != 3:
                raise ParseError(lineno, "usage: builds <construction-node> target=<prop> via=<prop>")
            opts = _options(args[1:], lineno, ("target", "via"), ("target", "via"))
            refs += [(lineno, "construction", args[0]), (lineno, "property", opts["target"]),
                     (lineno, "property", opts["via"])]
            builds.append(BuildRecord(args[0], opts["target"], opts["via"]))
        else:
            raise ParseError(lineno, f"unknown directive {directive!r}")
    kinds = {n.id: n.kind for n in nodes}
    for lineno, kind, ident in refs:
        if kind == "property":
            if ident not in prop_line:
                raise ParseError(lineno, f"undeclared property {ident!r}")
        elif ident not in kinds:
            raise ParseError(lineno, f"undeclared node {ident!r}")
        elif kind == "construction" and kinds[ident] != "construction":
            raise ParseError(lineno, f"{ident!r} is a {kinds[ident]}, not a construction")
    return DepGraph(tuple(nodes), tuple(properties), tuple(uses), tuple(implications), tuple(builds), tuple(notes))


def check_k2(g: DepGraph) -> list[Violation]:
    found = []
    for src, dst in g.uses:
        if g.position(dst) > g.position(src):
            found.append(Violation("K2-order", src, f"{src} uses {dst}, which is declared after it"))
    asserting = {n.id: n.asserts_existence_of for n in g.nodes if n.asserts_existence_of}
    for build in g.builds:
        culprits = [n for n in g.closure(build.node) if asserting.get(n) == build.target]
        if culprits:
            chains = "; ".join(" -> ".join(g.path(build.node, c)) for c in culprits)
            found.append(Violation(
                "K2-existence", build.node,
                f"{build.node} builds {build.target} but depends on {', '.join(culprits)}, "
                f"which asserts that {build.target} exists ({chains})"))
    return found


@dataclass(frozen=True)
class LicenseRow:
    node: str
    target: str
    via: str
    status: str
    cited: tuple[str, ...] = ()
    detail: str = ""


def _proved(g: DepGraph, src: str, dst: str, before: int):
    """Proving nodes of src => dst, split into (declared before, declared at or after) ``before``."""
    early = [i.proved_by for i in g.implications
             if i.src == src and i.dst == dst and g.position(i.proved_by) < before]
    late = [i.proved_by for i in g.implications
            if i.src == src and i.dst == dst and g.position(i.proved_by) >= before]
    return early, late


def _missing(src, dst, late):
    if late:
        return f"{src} => {dst} is proved only later, by {', '.join(late)}"
    return f"{src} => {dst} is not proved"


def check_licensing(g: DepGraph) -> tuple[list[Violation], list[LicenseRow]]:
    found, rows = [], []
    for b in g.builds:
        if b.direct:
            if g.finiteness(b.target) == "infinite":
                found.append(Violation("direct-infinite", b.node,
                                       f"{b.node} builds the infinite property {b.target} directly"))
                rows.append(LicenseRow(b.node, b.target, b.via, "direct-infinite"))
            else:
                rows.append(LicenseRow(b.node, b.target, b.via, "direct"))
            continue
        at = g.position(b.node)
        fwd, fwd_late = _proved(g, b.via, b.target, at)
        back, back_late = _proved(g, b.target, b.via, at)
        if fwd and back:
            rows.append(LicenseRow(b.node, b.target, b.via, f"licensed-by-K4({fwd[0]}, {back[0]})",
                                   (fwd[0], back[0])))
            continue
        gaps = []
        if not fwd:
            gaps.append(_missing(b.via, b.target, fwd_late))
        if not back:
            gaps.append(_missing(b.target, b.via, back_late))
        have = [f"{s} => {d} by {n[0]}" for s, d, n in ((b.via, b.target, fwd), (b.target, b.via, back)) if n]
        message = "; ".join(([f"only {have[0]}"] if have else []) + gaps)
        found.append(Violation("K3", b.node, f"{b.node} builds {b.target} via {b.via}: {message}"))
        rows.append(LicenseRow(b.node, b.target, b.via, "K3", tuple(n[0] for n in (fwd, back) if n),
                               "; ".join(gaps)))
    return found, rows


@dataclass(frozen=True)
class Analysis:
    graph: DepGraph
    violations: tuple[Violation, ...] = ()
    licenses: tuple[LicenseRow, ...] = ()
    unused: tuple[str, ...] = field(default=())

    def to_text(self) -> str:
        g = self.graph
        lines = [f"violations: {len(self.violations)}"]
        for v in self.violations:
            lines.append(f"  [{v.rule}] {v.node}: {v.message}")
        lines.append(f"licenses: {len(self.licenses)}")
        for row in self.licenses:
            lines.append(f"  {row.node}: target={row.target} via={row.via} status={row.status}")
            if row.detail:
                lines.append(f"    missing: {row.detail}")
            if row.cited:
                support = sorted({n for c in row.cited for n in [c, *g.closure(c)]}, key=g.position)
                lines.append(f"    rests-on: {', '.join(support)}")
        return "\n".join(lines) + "\n"


def analyze(g: DepGraph) -> Analysis:
    """K2 checks, then licensing; violations ordered by node declaration, then rule."""
    k3, rows = check_licensing(g)
    violations = sorted(check_k2(g) + k3, key=lambda v: (g.position(v.node), RULE_ORDER.index(v.rule)))
    return Analysis(g, tuple(violations), tuple(rows), tuple(g.unused_properties()))


def load_dataset(name: str) -> DepGraph:
    """Parse one of the shipped graphs (see ``DATASETS``)."""
    return parse_graph(dataset_text(name))


def dataset_text(name: str) -> str:
    if name not in DATASETS:
        raise KeyError(name)
    return resources.files("postulatum.data").joinpath(name).read_text(encoding="utf-8")
