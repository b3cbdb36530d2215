"""The layered claim network and its component structure.

Three layers are built from the same inputs, each a superset of the last:

BASE
    claims, publications, has-claim edges and claim-to-claim relations;
CURATED
    plus gene and organism entities linked in the corpus;
LINKED
    plus one entity node per distinct annotation IRI.

Relations are directed, but component analysis treats every edge as
undirected.
"""
from __future__ import annotations

import enum
import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Any, Iterable, Mapping, Sequence

from aida import unionfind
from aida.core import Corpus, Edge, EntityKind, NodeKind, Relation, round_half_up
from aida.errors import InputError
from aida.linker import Annotation

GRAPH_SCHEMA_VERSION = 1

CURATED_KINDS = frozenset({EntityKind.GENE, EntityKind.ORGANISM})


class Layer(str, enum.Enum):
    BASE = "BASE"
    CURATED = "CURATED"
    LINKED = "LINKED"


class ExportFormat(str, enum.Enum):
    EDGE_TSV = "EDGE_TSV"
    GRAPH_JSON = "GRAPH_JSON"


@dataclass(frozen=True)
class Node:
    id: str
    kind: NodeKind
    label: str | None = None


@dataclass(frozen=True)
class Graph:
    nodes: Mapping[str, Node] = field(default_factory=dict)
    edges: frozenset[Edge] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", MappingProxyType(dict(self.nodes)))
        object.__setattr__(self, "edges", frozenset(self.edges))
        for edge in self.edges:
            if edge.source not in self.nodes or edge.target not in self.nodes:
                raise ValueError(f"edge {edge} has an endpoint outside the graph")
            if edge.source == edge.target:
                raise ValueError(f"self-loop on {edge.source}")

    def count(self, kind: NodeKind) -> int:
        return sum(1 for n in self.nodes.values() if n.kind is kind)


class _GraphBuilder:
    def __init__(self) -> None:
        self.nodes: dict[str, Node] = {}
        self.edges: set[Edge] = set()

    def node(self, node_id: str, kind: NodeKind, label: str | None) -> None:
        known = self.nodes.get(node_id)
        if known is None:
            self.nodes[node_id] = Node(node_id, kind, label)
        elif known.kind is not kind:
            raise InputError(f"node id {node_id!r} is used for both a {known.kind.value} and a {kind.value}")

    def build(self) -> Graph:
        return Graph(self.nodes, self.edges)


def build_graph(corpus: Corpus, annotations: Iterable[Annotation] = (), layer: Layer = Layer.BASE) -> Graph:
    """Build the network for ``layer``; annotations are only used by LINKED.

    Raises
    ------
    InputError
        An annotation names a claim that is not in the corpus, or one id is
        used by nodes of two different kinds.
    """
    layer = Layer(layer)
    b = _GraphBuilder()
    for claim in corpus.claims.values():
        b.node(claim.id, NodeKind.CLAIM, claim.text)
    for pub in corpus.publications.values():
        b.node(pub.id, NodeKind.PUBLICATION, pub.label)
    for edge in corpus.edges:
        if edge.relation is Relation.HAS_CLAIM or edge.relation.is_claim_relation:
            b.edges.add(edge)

    if layer in (Layer.CURATED, Layer.LINKED):
        for edge in corpus.edges:
            if edge.relation is Relation.MENTIONS:
                entity = corpus.entities[edge.target]
                if entity.kind in CURATED_KINDS:
                    b.node(entity.uri, NodeKind.ENTITY, entity.label)
                    b.edges.add(edge)

    if layer is Layer.LINKED:
        surface: dict[str, str] = {}
        for ann in annotations:
            if ann.claim_id not in corpus.claims:
                raise InputError(f"annotation refers to unknown claim {ann.claim_id}")
            prev = surface.get(ann.entity_uri)
            if prev is None or ann.surface_form < prev:
                surface[ann.entity_uri] = ann.surface_form
            b.edges.add(Edge(ann.claim_id, Relation.MENTIONS, ann.entity_uri))
        for uri in sorted(surface):
            b.node(uri, NodeKind.ENTITY, surface[uri])

    return b.build()


@dataclass(frozen=True)
class Partition:
    """Connected components, largest first; ties go to the smallest contained node id.

    Each component lists its node ids in sorted order.
    """

    components: tuple[tuple[str, ...], ...] = ()

    @cached_property
    def component_of(self) -> dict[str, int]:
        return {node: i for i, comp in enumerate(self.components) for node in comp}

    def __len__(self) -> int:
        return len(self.components)

    @property
    def largest(self) -> tuple[str, ...]:
        return self.components[0] if self.components else ()


def connected_components(graph: Graph) -> Partition:
    ids = sorted(graph.nodes)
    index = {node_id: i for i, node_id in enumerate(ids)}
    sources = [index[e.source] for e in graph.edges]
    targets = [index[e.target] for e in graph.edges]
    labels = unionfind.label_components(len(ids), sources, targets)
    groups: dict[int, list[str]] = defaultdict(list)
    for i, root in enumerate(labels):
        groups[root].append(ids[i])
    # ids are sorted, so every member list is sorted and starts with its smallest id
    comps = sorted(groups.values(), key=lambda members: (-len(members), members[0]))
    return Partition(tuple(tuple(c) for c in comps))


@dataclass(frozen=True)
class NetworkStats:
    node_count: int
    claim_count: int
    publication_count: int
    entity_count: int
    edge_count: int
    component_count: int
    largest_component_node_count: int
    largest_component_claim_count: int
    largest_component_claim_fraction: float
    mean_annotations_per_claim: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "node_count": self.node_count,
            "claim_count": self.claim_count,
            "publication_count": self.publication_count,
            "entity_count": self.entity_count,
            "edge_count": self.edge_count,
            "component_count": self.component_count,
            "largest_component_node_count": self.largest_component_node_count,
            "largest_component_claim_count": self.largest_component_claim_count,
            "largest_component_claim_fraction": round_half_up(self.largest_component_claim_fraction, 4),
            "mean_annotations_per_claim": round_half_up(self.mean_annotations_per_claim, 2),
        }


def network_stats(
    graph: Graph,
    partition: Partition,
    annotations: Sequence[Annotation] = (),
    annotated_claims: int | None = None,
) -> NetworkStats:
    """Summarize ``graph`` given its ``partition``.

    ``mean_annotations_per_claim`` divides the annotation count by
    ``annotated_claims``, which defaults to the number of claim nodes.
    """
    claims = graph.count(NodeKind.CLAIM)
    largest = partition.largest
    largest_claims = sum(1 for n in largest if graph.nodes[n].kind is NodeKind.CLAIM)
    denominator = claims if annotated_claims is None else annotated_claims
    return NetworkStats(
        node_count=len(graph.nodes),
        claim_count=claims,
        publication_count=graph.count(NodeKind.PUBLICATION),
        entity_count=graph.count(NodeKind.ENTITY),
        edge_count=len(graph.edges),
        component_count=len(partition),
        largest_component_node_count=len(largest),
        largest_component_claim_count=largest_claims,
        largest_component_claim_fraction=largest_claims / claims if claims else 0.0,
        mean_annotations_per_claim=len(annotations) / denominator if denominator else 0.0,
    )


@dataclass(frozen=True)
class MergeReport:
    components_before: int
    components_after: int
    merged_fraction: float

    @property
    def merged_percent(self) -> float:
        return round_half_up(100 * self.merged_fraction, 1)

    def to_dict(self) -> dict[str, Any]:
        return {
            "components_before": self.components_before,
            "components_after": self.components_after,
            "merged_fraction": round_half_up(self.merged_fraction, 4),
            "merged_percent": self.merged_percent,
        }


def component_merge_report(before: Partition, after: Partition) -> MergeReport:
    n_before, n_after = len(before), len(after)
    fraction = (n_before - n_after) / n_before if n_before else 0.0
    return MergeReport(n_before, n_after, fraction)


def export_graph(graph: Graph, fmt: ExportFormat = ExportFormat.GRAPH_JSON) -> bytes:
    """Serialize deterministically; equal graphs give identical bytes."""
    fmt = ExportFormat(fmt)
    edges = sorted(graph.edges)
    if fmt is ExportFormat.EDGE_TSV:
        lines = sorted(f"{e.source}\t{e.relation.value}\t{e.target}\n" for e in edges)
        return "".join(lines).encode("utf-8")
    doc = {
        "schema_version": GRAPH_SCHEMA_VERSION,
        "nodes": [
            {"id": n.id, "kind": n.kind.value, "label": n.label}
            for n in sorted(graph.nodes.values(), key=lambda n: n.id)
        ],
        "edges": [{"source": e.source, "relation": e.relation.value, "target": e.target} for e in edges],
    }
    return (json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=True) + "\n").encode("utf-8")


def load_graph_json(data: bytes | str) -> Graph:
    try:
        doc = json.loads(data)
        nodes = {
            n["id"]: Node(n["id"], NodeKind(n["kind"]), n.get("label"))
            for n in doc["nodes"]
        }
        edges = [Edge(e["source"], Relation(e["relation"]), e["target"]) for e in doc["edges"]]
        return Graph(nodes, edges)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"graph file is not JSON: {exc}") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid graph document: {exc}") from None
