"""Extracting answers from a finished query: pairs, paths, matched subgraphs.

The forest is finite but stands for a possibly infinite path set, so path
enumeration is budgeted: lengths are explored in increasing order and cyclic
forest nodes are unrolled only as far as the remaining length budget allows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator

from .grammar import Grammar
from .graph import Edge, Graph, Path
from .sppf import Sppf, SppfNode

if TYPE_CHECKING:
    from .engine import EngineStats


@dataclass(frozen=True)
class PathQueryLimits:
    """Budget for path enumeration; both limits are inclusive and >= 1."""

    max_paths: int
    max_length: int

    def __post_init__(self) -> None:
        if self.max_paths < 1 or self.max_length < 1:
            raise ValueError("path limits must be at least 1")


@dataclass(frozen=True)
class QueryResult:
    """Handle over a finished query: the forest, its accepted roots and sizes."""

    sppf: Sppf
    roots: tuple
    grammar: Grammar
    graph: Graph
    start_vertices: frozenset[int]
    final_vertices: frozenset[int]
    engine: EngineStats
    descriptor_keys: tuple | None = None

    @property
    def success(self) -> bool:
        return bool(self.roots)

    def root_pairs(self) -> set[tuple[int, int]]:
        return {(node.left, node.right) for node in self.roots}


def reachable_pairs(result: QueryResult, nonterminal: str) -> set[tuple[int, int]]:
    """Extensions of every forest node labeled with the nonterminal."""
    if nonterminal not in result.grammar.nonterminals:
        raise ValueError(f"unknown nonterminal {nonterminal!r}")
    return {
        (node.left, node.right) for node in result.sppf.nonterminal_nodes(nonterminal)
    }


def format_triples(result: QueryResult, nonterminal: str | None = None) -> str:
    """Result triples as TSV lines ``nonterminal<TAB>source<TAB>target``,
    lexicographically sorted for deterministic output."""
    label = nonterminal if nonterminal is not None else result.grammar.start
    name = result.graph.vertex_name
    lines = sorted(f"{label}\t{name(u)}\t{name(v)}" for u, v in reachable_pairs(result, label))
    return "".join(line + "\n" for line in lines)


def _demanded_keys(root: SppfNode, length: int, final: set) -> list[tuple[int, int]]:
    """All (node, remaining-length) pairs the evaluation can touch."""
    nodes: dict[int, SppfNode] = {}
    order: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    stack = [(root, length)]
    while stack:
        node, budget = stack.pop()
        key = (id(node), budget)
        if key in seen or key in final:
            continue
        seen.add(key)
        order.append(key)
        nodes[id(node)] = node
        kind = node.kind
        if kind in ("terminal", "epsilon"):
            continue
        if kind == "packed":
            if node.left_child is None:
                stack.append((node.right_child, budget))
            else:
                for left_budget in range(budget + 1):
                    stack.append((node.left_child, left_budget))
                    stack.append((node.right_child, budget - left_budget))
        else:
            for packed in node.children:
                stack.append((packed, budget))
    return [(nodes[nid], budget) for nid, budget in order]


def _evaluate(node: SppfNode, budget: int, table: dict) -> frozenset[tuple[Edge, ...]]:
    kind = node.kind
    if kind == "terminal":
        if budget == 1:
            return frozenset({((node.left, node.label, node.right),)})
        return frozenset()
    if kind == "epsilon":
        return frozenset({()}) if budget == 0 else frozenset()
    empty = frozenset()
    if kind == "packed":
        if node.left_child is None:
            return table.get((id(node.right_child), budget), empty)
        out = set()
        for left_budget in range(budget + 1):
            lefts = table.get((id(node.left_child), left_budget), empty)
            if not lefts:
                continue
            rights = table.get((id(node.right_child), budget - left_budget), empty)
            for l_seq in lefts:
                for r_seq in rights:
                    out.add(l_seq + r_seq)
        return frozenset(out)
    out = set()
    for packed in node.children:
        out |= table.get((id(packed), budget), empty)
    return frozenset(out)


class _PathTable:
    """Length-indexed edge-sequence sets per forest node, grown level by level.

    Cycles in the forest can consume zero edges, so each new batch of
    (node, length) keys is solved by fixpoint iteration rather than plain
    recursion.
    """

    def __init__(self) -> None:
        self.table: dict[tuple[int, int], frozenset] = {}
        self.final: set[tuple[int, int]] = set()

    def sequences(self, root: SppfNode, length: int) -> frozenset[tuple[Edge, ...]]:
        demanded = _demanded_keys(root, length, self.final)
        changed = True
        while changed:
            changed = False
            for node, budget in demanded:
                key = (id(node), budget)
                value = _evaluate(node, budget, self.table)
                if value != self.table.get(key, frozenset()):
                    self.table[key] = value
                    changed = True
        for node, budget in demanded:
            self.final.add((id(node), budget))
        return self.table.get((id(root), length), frozenset())


def enumerate_paths(
    result: QueryResult, source: int, target: int, limits: PathQueryLimits
) -> Iterator[Path]:
    """Matching paths from source to target, shortest first, without duplicates.

    Empty when no accepted root spans (source, target).  Stops after
    ``limits.max_paths`` paths or length ``limits.max_length``.
    """
    root = result.sppf.nonterminal_node(result.grammar.start, source, target)
    if root is None:
        return
    table = _PathTable()
    emitted = 0
    for length in range(1, limits.max_length + 1):
        for edges in sorted(table.sequences(root, length)):
            yield Path(edges)
            emitted += 1
            if emitted >= limits.max_paths:
                return


def extract_subgraph(result: QueryResult) -> Graph:
    """The subgraph of input edges on paths matched by some accepted root."""
    subgraph = result.graph.copy_vertices()
    seen: set[int] = set()
    stack: list = list(result.roots)
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        kind = node.kind
        if kind == "terminal":
            subgraph.add_edge(node.left, node.label, node.right)
        elif kind == "packed" or kind in ("nonterminal", "intermediate"):
            stack.extend(node.children)
    return subgraph
