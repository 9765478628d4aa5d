from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import networkx as nx

from complexity.dependency_pairs import DpProblem
from trs.parsing import Trs
from trs.term import COMPOUND, SHARPED, App, Term, Var, fresh_var, rename_apart, unifiable

Path = tuple[frozenset[int], ...]


class _Capper:
    def __init__(self, trs: Trs):
        self.lhss = [rename_apart(rule.lhs) for rule in trs.rules]

    def cap(self, t: Term) -> Term:
        if isinstance(t, Var):
            return fresh_var("v")
        u = App(t.symbol, tuple(self.cap(a) for a in t.args))
        if any(unifiable(u, l) for l in self.lhss):
            return fresh_var("v")
        return u


def tcap(trs: Trs, t: Term) -> Term:
    return _Capper(trs).cap(t)


def sharped_components(rhs: Term) -> list[App]:
    """The marked terms a pair's right-hand side hands on; none for variables and constants."""
    if isinstance(rhs, Var):
        return []
    if rhs.symbol.kind == COMPOUND:
        return [a for a in rhs.args if isinstance(a, App) and a.symbol.kind == SHARPED]
    if rhs.symbol.kind == SHARPED:
        return [rhs]
    return []


def estimate_graph(problem: DpProblem, indices: Iterable[int] | None = None) -> nx.DiGraph:
    nodes = list(problem.indices if indices is None else sorted(indices))
    capper = _Capper(problem.origin)
    graph = nx.DiGraph()
    graph.add_nodes_from(nodes)
    for i in nodes:
        for w in sharped_components(problem.pair(i).rhs):
            capped = App(w.symbol, tuple(capper.cap(a) for a in w.args))
            for j in nodes:
                if unifiable(capped, rename_apart(problem.pair(j).lhs)):
                    graph.add_edge(i, j)
    return graph


def sccs(graph: nx.DiGraph) -> list[frozenset[int]]:
    return sorted((frozenset(c) for c in nx.strongly_connected_components(graph)), key=min)


@dataclass(frozen=True)
class CongruenceGraph:
    classes: tuple[frozenset[int], ...]
    dag: nx.DiGraph                 # nodes are indices into `classes`
    sources: tuple[int, ...]

    @property
    def dag_edges(self) -> set[tuple[frozenset[int], frozenset[int]]]:
        return {(self.classes[a], self.classes[b]) for a, b in self.dag.edges}

    @property
    def source_classes(self) -> list[frozenset[int]]:
        return [self.classes[c] for c in self.sources]


def congruence_graph(graph: nx.DiGraph) -> CongruenceGraph:
    classes = sccs(graph)
    dag = nx.condensation(graph, scc=[set(c) for c in classes])
    sources = tuple(c for c in sorted(dag.nodes) if dag.in_degree(c) == 0)
    return CongruenceGraph(tuple(classes), dag, sources)


def maximal_source_paths(cg: CongruenceGraph) -> list[Path]:
    suffixes: dict[int, list[tuple[int, ...]]] = {}

    def walk(c: int) -> list[tuple[int, ...]]:
        if c not in suffixes:
            nxt = sorted(cg.dag.successors(c))
            suffixes[c] = [(c,)] if not nxt else [(c,) + rest for d in nxt for rest in walk(d)]
        return suffixes[c]

    return [tuple(cg.classes[c] for c in path) for s in cg.sources for path in walk(s)]


def path_pairs(path: Path) -> frozenset[int]:
    return frozenset().union(*path)


def format_class(c: frozenset[int]) -> str:
    return "{" + ",".join(str(i) for i in sorted(c)) + "}"


def to_dot(graph: nx.DiGraph, cg: CongruenceGraph | None = None, name: str = "WDG") -> str:
    cg = cg or congruence_graph(graph)
    lines = [f"digraph {name} {{"]
    for k, c in enumerate(cg.classes):
        lines.append(f"  subgraph cluster_{k} {{")
        lines.append(f'    label="{format_class(c)}";')
        lines.extend(f"    {i};" for i in sorted(c))
        lines.append("  }")
    lines.extend(f"  {a} -> {b};" for a, b in sorted(graph.edges))
    lines.append("}")
    return "\n".join(lines) + "\n"
