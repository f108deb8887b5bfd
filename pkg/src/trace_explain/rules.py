"""Dependency-rule extraction of definitions, usage contexts, and relation
triplets from the domain corpus."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Iterable

from .concepts import Concept, canonical_key, detect_concepts
from .corpus import CorpusSentence, DomainCorpus
from .model import ParsedSentence, Token

DEFINITION_PATH_LABELS = {"nsubj", "cop"}
SUBJECT_LABELS = {"nsubj", "xsubj"}
OBJECT_LABELS = {"obj"}
_COPULAR_SURFACES = {"is", "are"}


@dataclass(frozen=True)
class DefinitionCandidate:
    concept_key: str
    sentence: CorpusSentence
    verb: Token


@dataclass(frozen=True)
class ContextCandidate:
    concept_key: str
    sentence: CorpusSentence


@dataclass(frozen=True)
class RelationTriplet:
    """<subject, verb, object> evidence for a hierarchical relation.

    ``verb`` keeps the lower-cased surface so the relation reads as written;
    ``verb_lemma`` is what the lexicon admits.
    """

    subject: str
    verb: str
    verb_lemma: str
    object: str
    evidence: CorpusSentence

    def __post_init__(self) -> None:
        if self.subject == self.object:
            raise ValueError(f"triplet subject equals object: {self.subject!r}")


@dataclass(frozen=True)
class HierarchicalVerbLexicon:
    lemmas: frozenset[str]

    def __post_init__(self) -> None:
        if not self.lemmas:
            raise ValueError("verb lexicon must be non-empty")
        if any(l != l.lower() for l in self.lemmas):
            raise ValueError("verb lexicon lemmas must be lower-case")

    def __contains__(self, lemma: str) -> bool:
        return lemma in self.lemmas

    @classmethod
    def default(cls) -> "HierarchicalVerbLexicon":
        text = (
            resources.files("trace_explain.data")
            .joinpath("hierarchical_verbs.txt")
            .read_text("utf-8")
        )
        lemmas = frozenset(
            line.strip().lower()
            for line in text.splitlines()
            if line.strip() and not line.startswith("#")
        )
        return cls(lemmas=lemmas)

    @classmethod
    def from_file(cls, path) -> "HierarchicalVerbLexicon":
        with open(path, encoding="utf-8") as fh:
            lemmas = frozenset(
                line.strip().lower()
                for line in fh
                if line.strip() and not line.startswith("#")
            )
        return cls(lemmas=lemmas)


def _concept_key(concept) -> str:
    if isinstance(concept, Concept):
        return concept.id
    return canonical_key(concept)


def concept_head_index(key: str, parse: ParsedSentence) -> int | None:
    """Locate the head token of a concept in a sentence parse.

    Prefers an exact concept detection; falls back to a token matching the
    key's last word, since the head noun closes the phrase.
    """
    for concept in detect_concepts(parse):
        if concept.id == key:
            return concept.head_index
    last_word = key.split()[-1]
    for token in parse.tokens:
        if token.text.lower() == last_word:
            return token.index
    return None


def _is_nsubj_dependent(parse: ParsedSentence, index: int) -> bool:
    return any(a.dependent == index and a.label == "nsubj" for a in parse.arcs)


def _tokens_within_two_hops(parse: ParsedSentence, start: int) -> list[int]:
    # undirected traversal over nsubj/cop arcs only, depth <= 2
    neighbors: dict[int, set[int]] = {}
    for arc in parse.arcs:
        if arc.label in DEFINITION_PATH_LABELS and arc.head >= 1:
            neighbors.setdefault(arc.head, set()).add(arc.dependent)
            neighbors.setdefault(arc.dependent, set()).add(arc.head)
    reached: set[int] = set()
    frontier = {start}
    for _ in range(2):
        frontier = {n for node in frontier for n in neighbors.get(node, ())} - reached - {start}
        reached |= frontier
    return sorted(reached)


def _definition_verb(parse: ParsedSentence, head_index: int) -> Token | None:
    for index in _tokens_within_two_hops(parse, head_index):
        token = parse.token(index)
        if token.text.lower() in _COPULAR_SURFACES or token.pos == "VBZ":
            return token
    return None


def _candidate_sentences(key: str, corpus: DomainCorpus) -> Iterable[CorpusSentence]:
    for sentence in corpus.sentences_for(key):
        if sentence.parse is None:
            raise ValueError(f"no parse attached for sentence: {sentence.text!r}")
        yield sentence


def extract_definitions(concept, corpus: DomainCorpus) -> list[DefinitionCandidate]:
    """Sentences whose parse presents the concept as a defined subject.

    The concept head must be an "nsubj" dependent, and a token with surface
    "is"/"are" or tag VBZ must sit within two nsubj/cop hops of the head.
    """
    key = _concept_key(concept)
    out: list[DefinitionCandidate] = []
    for sentence in _candidate_sentences(key, corpus):
        head = concept_head_index(key, sentence.parse)
        if head is None or not _is_nsubj_dependent(sentence.parse, head):
            continue
        verb = _definition_verb(sentence.parse, head)
        if verb is not None:
            out.append(DefinitionCandidate(concept_key=key, sentence=sentence, verb=verb))
    return out


def extract_contexts(concept, corpus: DomainCorpus) -> list[ContextCandidate]:
    """Sentences where the concept is the nominal subject; superset of definitions."""
    key = _concept_key(concept)
    out: list[ContextCandidate] = []
    for sentence in _candidate_sentences(key, corpus):
        head = concept_head_index(key, sentence.parse)
        if head is not None and _is_nsubj_dependent(sentence.parse, head):
            out.append(ContextCandidate(concept_key=key, sentence=sentence))
    return out


def extract_triplets(
    corpus: DomainCorpus, lexicon: HierarchicalVerbLexicon | None = None
) -> list[RelationTriplet]:
    """Pair subject and object concepts of each lexicon verb into triplets.

    Subjects come from nsubj/xsubj dependents, objects from obj dependents;
    a token resolves to a concept only when it is the concept's head token.
    Sentences without parses contribute nothing.
    """
    if lexicon is None:
        lexicon = HierarchicalVerbLexicon.default()
    out: list[RelationTriplet] = []
    for sentence in corpus:
        parse = sentence.parse
        if parse is None:
            continue
        by_head = {c.head_index: c for c in detect_concepts(parse)}
        for token in parse.tokens:
            if token.lemma.lower() not in lexicon:
                continue
            if not (token.pos.startswith("VB") or token.pos == "VERB"):
                continue
            subjects = [
                by_head[i]
                for i in parse.dependents(token.index, SUBJECT_LABELS)
                if i in by_head
            ]
            objects = [
                by_head[i]
                for i in parse.dependents(token.index, OBJECT_LABELS)
                if i in by_head
            ]
            for subject in subjects:
                for obj in objects:
                    if subject.id == obj.id:
                        continue
                    out.append(
                        RelationTriplet(
                            subject=subject.id,
                            verb=token.text.lower(),
                            verb_lemma=token.lemma.lower(),
                            object=obj.id,
                            evidence=sentence,
                        )
                    )
    return out
