"""Knowledge graph over relation triplets: shortest explanation paths and
concept equivalence heuristics."""

from __future__ import annotations

import heapq
import json
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

from .rules import RelationTriplet

log = logging.getLogger(__name__)

# Noun plural stripping exceptions: words ending in s that are not plurals.
PLURAL_EXCEPTIONS = frozenset(
    {"news", "series", "species", "status", "analysis", "basis", "bus", "gas", "lens", "chassis"}
)


def strip_plural(word: str, exceptions: frozenset[str] = PLURAL_EXCEPTIONS) -> str:
    """Rule-based noun plural stripping; only plurals matter for concept keys."""
    lower = word.lower()
    if lower in exceptions or lower.endswith("ss"):
        return lower
    if lower.endswith("ies") and len(lower) > 3:
        return lower[:-3] + "y"
    if lower.endswith(("ses", "xes", "zes", "ches", "shes")):
        return lower[:-2]
    if lower.endswith("s") and len(lower) > 1:
        return lower[:-1]
    return lower


def lemma_tokens(key: str) -> tuple[str, ...]:
    return tuple(strip_plural(w) for w in key.lower().split())


@dataclass(frozen=True)
class Equivalence:
    left: str
    right: str
    kind: str  # "lemma_identical" | "subsequence_abstraction"
    abstraction: str | None = None  # the shorter key, when kind is subsequence


def _is_strict_subsequence(shorter: Sequence[str], longer: Sequence[str]) -> bool:
    if len(shorter) >= len(longer):
        return False
    it = iter(longer)
    return all(tok in it for tok in shorter)


def find_equivalences(
    source_keys: Iterable[str], target_keys: Iterable[str]
) -> list[Equivalence]:
    """Cross-artifact concept matches: identical noun lemmas, or one token
    sequence being a strict subsequence of the other (the shorter concept is
    recorded as the abstraction)."""
    out: list[Equivalence] = []
    for left in sorted(set(source_keys)):
        left_tokens = tuple(left.lower().split())
        left_lemmas = lemma_tokens(left)
        for right in sorted(set(target_keys)):
            right_tokens = tuple(right.lower().split())
            if left_lemmas == lemma_tokens(right):
                out.append(Equivalence(left=left, right=right, kind="lemma_identical"))
            elif _is_strict_subsequence(left_tokens, right_tokens):
                out.append(
                    Equivalence(
                        left=left, right=right, kind="subsequence_abstraction", abstraction=left
                    )
                )
            elif _is_strict_subsequence(right_tokens, left_tokens):
                out.append(
                    Equivalence(
                        left=left, right=right, kind="subsequence_abstraction", abstraction=right
                    )
                )
    return out


@dataclass(frozen=True)
class RelationPath:
    nodes: tuple[str, ...]
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.nodes) != len(self.labels) + 1 or not self.labels:
            raise ValueError("path must have |nodes| = |labels| + 1 >= 2")

    @property
    def hops(self) -> int:
        return len(self.labels)


class KnowledgeGraph:
    """Undirected view over directed labeled edges; immutable after build."""

    def __init__(self):
        self._nodes: set[str] = set()
        self._edges: dict[tuple[str, str, str], list[tuple[str, str]]] = {}
        self._adjacency: dict[str, set[str]] = {}

    @property
    def nodes(self) -> frozenset[str]:
        return frozenset(self._nodes)

    def edges(self) -> list[tuple[str, str, str]]:
        return sorted(self._edges)

    def evidence(self, subject: str, verb: str, obj: str) -> list[tuple[str, str]]:
        return list(self._edges.get((subject, verb, obj), ()))

    def _add(self, subject: str, verb: str, obj: str, evidence: tuple[str, str]) -> None:
        self._nodes.add(subject)
        self._nodes.add(obj)
        self._edges.setdefault((subject, verb, obj), []).append(evidence)
        self._adjacency.setdefault(subject, set()).add(obj)
        self._adjacency.setdefault(obj, set()).add(subject)

    def neighbors(self, node: str) -> list[str]:
        return sorted(self._adjacency.get(node, ()))

    def labels_between(self, a: str, b: str) -> list[str]:
        """Verb labels on edges between two nodes, either direction, sorted."""
        labels = {
            verb
            for (s, verb, o) in self._edges
            if (s == a and o == b) or (s == b and o == a)
        }
        return sorted(labels)

    def to_json_dict(self) -> dict:
        return {
            "nodes": sorted(self._nodes),
            "edges": [
                {
                    "s": s,
                    "v": v,
                    "o": o,
                    "evidence": [{"uri": uri, "text": text} for uri, text in refs],
                }
                for (s, v, o), refs in sorted(self._edges.items())
            ],
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "KnowledgeGraph":
        graph = cls()
        for node in payload.get("nodes", ()):
            graph._nodes.add(node)
        for edge in payload.get("edges", ()):
            for ref in edge.get("evidence") or [{"uri": "", "text": ""}]:
                graph._add(edge["s"], edge["v"], edge["o"], (ref.get("uri", ""), ref.get("text", "")))
        return graph


def build_graph(triplets: Iterable[RelationTriplet]) -> KnowledgeGraph:
    """Combine triplets into a knowledge graph.

    Parallel edges with distinct verbs are retained; exact duplicates merge
    with evidence accumulated. Self-loop triplets are skipped with a warning.
    """
    graph = KnowledgeGraph()
    for triplet in triplets:
        if triplet.subject == triplet.object:
            log.warning("skipping self-loop triplet on %r", triplet.subject)
            continue
        evidence = (triplet.evidence.source_uri, triplet.evidence.text)
        graph._add(triplet.subject, triplet.verb, triplet.object, evidence)
    return graph


def add_triplet(
    graph: KnowledgeGraph, subject: str, verb: str, obj: str, uri: str = "", text: str = ""
) -> None:
    """Insert one labeled edge directly, e.g. from a persisted triplet file."""
    if subject == obj:
        raise ValueError("self-loop edges are not allowed")
    graph._add(subject, verb, obj, (uri, text))


def shortest_relation_path(
    graph: KnowledgeGraph, start: str, goal: str, max_hops: int = 1
) -> RelationPath | None:
    """Minimal-hop undirected path between two concepts, or None.

    Unit edge weights; ties break on the lexicographically smallest node
    sequence. Paths longer than ``max_hops`` are suppressed: multi-hop chains
    rarely explain a link, so precision wins by default.
    """
    if max_hops < 1:
        raise ValueError(f"max_hops must be >= 1, got {max_hops}")
    for node in (start, goal):
        if node not in graph.nodes:
            raise KeyError(f"unknown graph node: {node!r}")
    if start == goal:
        return None
    heap: list[tuple[int, tuple[str, ...]]] = [(0, (start,))]
    settled: set[str] = set()
    while heap:
        dist, path = heapq.heappop(heap)
        node = path[-1]
        if node in settled:
            continue
        settled.add(node)
        if node == goal:
            if dist > max_hops:
                return None
            labels = tuple(
                graph.labels_between(a, b)[0] for a, b in zip(path, path[1:])
            )
            return RelationPath(nodes=path, labels=labels)
        if dist >= max_hops:
            continue
        for neighbor in graph.neighbors(node):
            if neighbor not in settled:
                heapq.heappush(heap, (dist + 1, path + (neighbor,)))
    return None


def save_graph(graph: KnowledgeGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(graph.to_json_dict(), fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")


def load_graph(path) -> KnowledgeGraph:
    with open(path, encoding="utf-8") as fh:
        return KnowledgeGraph.from_json_dict(json.load(fh))
