"""Call resolution, graph construction, and DFS post-order scheduling.

Only project-internal calls become edges; third-party and ambiguous targets
are dropped (the model is assumed to know public APIs already). Cycles are
kept traversable by marking back edges, which downstream context assembly
renders as signature-only stubs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from smartdoc.diagnostics import Diagnostic
from smartdoc.errors import UnknownMethodError
from smartdoc.javasrc.model import CallSite, MethodDecl, ParseResult

INTERNAL = "internal"
EXTERNAL = "external"
AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class Resolution:
    kind: str
    target: str | None = None
    candidates: tuple[str, ...] = ()

    @classmethod
    def internal(cls, target: str) -> "Resolution":
        return cls(INTERNAL, target=target)

    @classmethod
    def external(cls) -> "Resolution":
        return cls(EXTERNAL)

    @classmethod
    def ambiguous(cls, candidates: tuple[str, ...]) -> "Resolution":
        return cls(AMBIGUOUS, candidates=candidates)


@dataclass
class ProjectIndex:
    methods: dict[str, MethodDecl] = field(default_factory=dict)
    by_name_arity: dict[tuple[str, int], set[str]] = field(default_factory=dict)
    by_class: dict[str, set[str]] = field(default_factory=dict)
    declared_classes: set[str] = field(default_factory=set)
    simple_class_names: dict[str, set[str]] = field(default_factory=dict)
    call_sites: tuple[CallSite, ...] = ()
    diagnostics: tuple[Diagnostic, ...] = ()

    def sorted_ids(self) -> list[str]:
        return sorted(self.methods)


def build_index(results: list[ParseResult]) -> ProjectIndex:
    """Index all extracted methods; on duplicate ids the later declaration wins."""
    index = ProjectIndex()
    diags: list[Diagnostic] = []
    sites: list[CallSite] = []
    for res in results:
        diags.extend(res.diagnostics)
        for fqn in res.types:
            index.declared_classes.add(fqn)
            simple = fqn.rsplit(".", 1)[-1]
            index.simple_class_names.setdefault(simple, set()).add(fqn)
        for m in res.methods:
            if m.id in index.methods:
                old = index.methods[m.id]
                diags.append(Diagnostic(
                    m.file, m.decl_line,
                    f"duplicate declaration of {m.id}; shadowing {old.file}:{old.decl_line}",
                ))
            index.methods[m.id] = m
            index.by_name_arity.setdefault((m.name, m.arity), set()).add(m.id)
            index.by_class.setdefault(m.class_fqn, set()).add(m.id)
            simple = m.class_fqn.rsplit(".", 1)[-1]
            index.simple_class_names.setdefault(simple, set()).add(m.class_fqn)
        sites.extend(res.call_sites)
    index.call_sites = tuple(sites)
    index.diagnostics = tuple(diags)
    return index


def _in_class(index: ProjectIndex, class_fqn: str, name: str, arity: int) -> str | None:
    for mid in index.by_class.get(class_fqn, ()):  # (name, arity) unique per class
        m = index.methods[mid]
        if m.name == name and m.arity == arity:
            return mid
    return None


def resolve_call(site: CallSite, index: ProjectIndex) -> Resolution:
    """Resolve by receiver hint, then own class, own package, whole project."""
    caller = index.methods.get(site.caller)
    if caller is None:
        return Resolution.external()
    name, arity = site.callee_name, site.callee_arity

    hint = site.receiver_hint
    if hint == "super":
        # parent type unknown without hierarchy analysis; never guess
        return Resolution.external()
    if hint is not None and hint != "this":
        hinted_classes: set[str] = set()
        if hint in index.declared_classes or hint in index.by_class:
            hinted_classes = {hint}
        elif hint in index.simple_class_names:
            hinted_classes = index.simple_class_names[hint]
        if hinted_classes:
            found = sorted(
                mid for cls in hinted_classes
                if (mid := _in_class(index, cls, name, arity)) is not None
            )
            if len(found) == 1:
                return Resolution.internal(found[0])
            if len(found) >= 2:
                return Resolution.ambiguous(tuple(found))
            return Resolution.external()

    own = _in_class(index, caller.class_fqn, name, arity)
    if own is not None:
        return Resolution.internal(own)
    if hint == "this":
        return Resolution.external()

    all_candidates = sorted(index.by_name_arity.get((name, arity), ()))
    package = caller.package
    in_package = [
        mid for mid in all_candidates
        if index.methods[mid].package == package
    ]
    if len(in_package) == 1:
        return Resolution.internal(in_package[0])
    if len(all_candidates) == 1:
        return Resolution.internal(all_candidates[0])
    if len(all_candidates) >= 2:
        return Resolution.ambiguous(tuple(all_candidates))
    return Resolution.external()


@dataclass
class CallGraph:
    nodes: set[str]
    edges: dict[str, list[str]]
    back_edges: set[tuple[str, str]]

    def children(self, node: str) -> list[str]:
        return self.edges.get(node, [])


def build_call_graph(
    index: ProjectIndex,
    resolutions: list[tuple[CallSite, Resolution]],
) -> CallGraph:
    """One edge per resolved internal call; duplicates collapse to first span."""
    first_span: dict[tuple[str, str], int] = {}
    for site, res in resolutions:
        if res.kind != INTERNAL or site.caller not in index.methods:
            continue
        first_span.setdefault((site.caller, res.target), site.span[0])
    edges: dict[str, list[str]] = {}
    for (caller, callee), _ in sorted(first_span.items(), key=lambda kv: kv[1]):
        edges.setdefault(caller, []).append(callee)

    graph = CallGraph(nodes=set(index.methods), edges=edges, back_edges=set())
    _mark_back_edges(graph)
    return graph


def _mark_back_edges(graph: CallGraph) -> None:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {node: WHITE for node in graph.nodes}
    for root in sorted(graph.nodes):
        if color[root] != WHITE:
            continue
        color[root] = GRAY
        stack: list[tuple[str, Iterator[str]]] = [(root, iter(graph.children(root)))]
        while stack:
            node, it = stack[-1]
            descended = False
            for child in it:
                if child not in color:
                    continue
                if color[child] == GRAY:
                    graph.back_edges.add((node, child))
                elif color[child] == WHITE:
                    color[child] = GRAY
                    stack.append((child, iter(graph.children(child))))
                    descended = True
                    break
            if not descended:
                color[node] = BLACK
                stack.pop()


@dataclass(frozen=True)
class Schedule:
    root: str
    order: tuple[str, ...]           # post-order; root last
    depth: dict[str, int]            # first-visit depth of scheduled nodes

    def members(self) -> set[str]:
        return set(self.order)

    def dependencies(self) -> tuple[str, ...]:
        return self.order[:-1]


def dfs_schedule(graph: CallGraph, root: str, depth_cap: int = 5) -> Schedule:
    """Post-order over non-back edges, children in call order, each node once.

    Nodes deeper than `depth_cap` are left out and appear to their parents as
    signature-only stubs.
    """
    if root not in graph.nodes:
        raise UnknownMethodError(f"unknown method: {root}")
    order: list[str] = []
    done: set[str] = set()
    depth: dict[str, int] = {root: 0}
    stack: list[tuple[str, int, Iterator[str]]] = [(root, 0, iter(graph.children(root)))]
    while stack:
        node, d, it = stack[-1]
        descended = False
        for child in it:
            if (node, child) in graph.back_edges:
                continue
            if child in done or child not in graph.nodes:
                continue
            if d + 1 > depth_cap:
                continue
            depth[child] = d + 1
            stack.append((child, d + 1, iter(graph.children(child))))
            descended = True
            break
        if not descended:
            done.add(node)
            order.append(node)
            stack.pop()
    return Schedule(root=root, order=tuple(order), depth=depth)


def rooted_subgraph(graph: CallGraph, schedule: Schedule) -> dict:
    """JSON-ready view of the scheduled subgraph, deterministic ordering."""
    members = schedule.members()
    nodes = [{"id": mid, "depth": schedule.depth[mid]} for mid in schedule.order]
    edges = []
    back = []
    for mid in schedule.order:
        for callee in graph.children(mid):
            if (mid, callee) in graph.back_edges:
                if callee in members:
                    back.append([mid, callee])
            elif callee in members:
                edges.append([mid, callee])
    return {
        "root": schedule.root,
        "nodes": nodes,
        "edges": edges,
        "back_edges": back,
        "schedule": list(schedule.order),
    }
