"""Load a project bundle directory.

Layout:
    project.json          {"id": ..., "domain_name": ...}
    artifacts/<id>.txt    artifact text
    artifacts/<id>.conllu matching dependency parses
    links.csv             link_id,source_id,target_id[,gold_label]
    glossary.json         optional {"acronyms": {}, "definitions": {}, "contexts": {}}
"""

from __future__ import annotations

import csv
import json
import re
from pathlib import Path

from .concepts import canonical_key
from .conllu import ingest_conllu_file
from .model import (
    Artifact,
    ArtifactKind,
    Glossary,
    Origin,
    OriginKind,
    ParsedSentence,
    Project,
    TraceLink,
)


class BundleError(ValueError):
    pass


def _locate(text: str, raw: str, start: int) -> int:
    pos = text.find(raw, start)
    if pos >= 0:
        return pos
    # tolerate whitespace differences between artifact text and parse text
    pattern = r"\s+".join(re.escape(w) for w in raw.split())
    match = re.compile(pattern).search(text, start)
    if match:
        return match.start()
    raise BundleError(f"sentence text not found in artifact: {raw[:60]!r}")


def align_sentences(text: str, sentences: list[ParsedSentence]) -> tuple[int, ...]:
    offsets = []
    cursor = 0
    for sentence in sentences:
        pos = _locate(text, sentence.raw_text, cursor)
        offsets.append(pos)
        cursor = pos + len(sentence.raw_text)
    return tuple(offsets)


def load_glossary(path) -> Glossary:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    return Glossary(
        acronyms=dict(payload.get("acronyms", {})),
        definitions={canonical_key(k): v for k, v in payload.get("definitions", {}).items()},
        contexts={canonical_key(k): v for k, v in payload.get("contexts", {}).items()},
    )


def load_links(path) -> list[TraceLink]:
    links = []
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            gold = (row.get("gold_label") or "").strip() or None
            links.append(
                TraceLink(
                    id=row["link_id"].strip(),
                    source_artifact_id=row["source_id"].strip(),
                    target_artifact_id=row["target_id"].strip(),
                    gold_label=gold,
                )
            )
    return links


def load_project(directory) -> Project:
    root = Path(directory)
    meta_path = root / "project.json"
    if not meta_path.is_file():
        raise BundleError(f"missing project.json in {root}")
    meta = json.loads(meta_path.read_text("utf-8"))
    project_id = meta["id"]
    domain_name = meta["domain_name"]

    links_path = root / "links.csv"
    links = load_links(links_path) if links_path.is_file() else []
    source_ids = {l.source_artifact_id for l in links}

    artifacts = []
    artifact_dir = root / "artifacts"
    for text_path in sorted(artifact_dir.glob("*.txt")):
        artifact_id = text_path.stem
        conllu_path = text_path.with_suffix(".conllu")
        if not conllu_path.is_file():
            raise BundleError(f"missing parse file for artifact {artifact_id}")
        text = text_path.read_text("utf-8")
        sentences = ingest_conllu_file(
            conllu_path,
            default_origin=Origin(OriginKind.PROJECT_ARTIFACT, artifact_id),
        )
        offsets = align_sentences(text, sentences)
        kind = ArtifactKind.SOURCE if artifact_id in source_ids else ArtifactKind.TARGET
        artifacts.append(
            Artifact(
                id=artifact_id,
                project_id=project_id,
                kind=kind,
                text=text,
                sentences=tuple(sentences),
                sentence_offsets=offsets,
            )
        )

    glossary_path = root / "glossary.json"
    glossary = load_glossary(glossary_path) if glossary_path.is_file() else None
    return Project(
        id=project_id,
        domain_name=domain_name,
        artifacts=tuple(artifacts),
        links=tuple(links),
        glossary=glossary,
    )
