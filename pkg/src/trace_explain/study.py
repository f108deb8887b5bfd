"""Study-mode mechanics: treatment assignment, seeded ordering, verdict log."""

from __future__ import annotations

import enum
import json
import random
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Collection, Sequence


class Treatment(enum.Enum):
    WITH_EXPLANATION = "with_explanation"
    WITHOUT_EXPLANATION = "without_explanation"


class Verdict(enum.Enum):
    CORRECT = "correct"
    INCORRECT = "incorrect"
    DONT_KNOW = "dont_know"


@dataclass(frozen=True)
class StudySession:
    participant_id: str
    group: int
    items: tuple[tuple[str, Treatment], ...]  # presentation order
    seed: int

    def treatment_for(self, link_id: str) -> Treatment:
        for item_id, treatment in self.items:
            if item_id == link_id:
                return treatment
        raise KeyError(link_id)


def create_study_session(
    participant_id: str,
    links: Sequence[tuple[str, str]],
    group: int,
    seed: int,
) -> StudySession:
    """Assign treatments and a seeded presentation order.

    ``links`` are (link_id, project_tag) pairs. The link set is split into two
    halves stratified by project (equal per-project counts; an odd project
    remainder goes to the first half). Group 1 sees explanations on the first
    half, group 2 gets the exact opposite treatment per link. Only the
    presentation order depends on the seed.
    """
    if group not in (1, 2):
        raise ValueError(f"group must be 1 or 2, got {group}")
    if len(links) % 2 != 0:
        raise ValueError(f"link count must be even, got {len(links)}")
    if len(set(l for l, _ in links)) != len(links):
        raise ValueError("duplicate link ids")

    by_project: dict[str, list[str]] = {}
    for link_id, project in links:
        by_project.setdefault(project, []).append(link_id)
    first_half: set[str] = set()
    for project in sorted(by_project):
        ids = sorted(by_project[project])
        cut = (len(ids) + 1) // 2
        first_half.update(ids[:cut])
    if len(first_half) != len(links) // 2:
        raise ValueError("links cannot be split into equal stratified halves")

    with_explanation = first_half if group == 1 else {l for l, _ in links} - first_half
    ordered = sorted(l for l, _ in links)
    rng = random.Random(seed)
    for i in range(len(ordered) - 1, 0, -1):  # Fisher-Yates
        j = rng.randint(0, i)
        ordered[i], ordered[j] = ordered[j], ordered[i]
    items = tuple(
        (
            link_id,
            Treatment.WITH_EXPLANATION
            if link_id in with_explanation
            else Treatment.WITHOUT_EXPLANATION,
        )
        for link_id in ordered
    )
    return StudySession(participant_id=participant_id, group=group, items=items, seed=seed)


@dataclass(frozen=True)
class VettingVerdict:
    link_id: str
    participant_id: str
    verdict: Verdict
    treatment: Treatment
    timestamp: float = 0.0


class VerdictLog:
    """Append-only JSON Lines log of vetting verdicts.

    A repeated (participant, link) submission is never overwritten; it is
    appended as a new row with the next sequence number, keeping a full audit
    trail.
    """

    def __init__(self, path, known_links: Collection[str] | None = None):
        self.path = Path(path)
        self.known_links = set(known_links) if known_links is not None else None
        self._sequences: dict[tuple[str, str], int] = {}
        if self.path.exists():
            for row in self.entries():
                key = (row["participant_id"], row["link_id"])
                self._sequences[key] = max(self._sequences.get(key, 0), row["sequence"])

    def record(self, verdict: VettingVerdict) -> int:
        if self.known_links is not None and verdict.link_id not in self.known_links:
            raise ValueError(f"unknown link: {verdict.link_id!r}")
        key = (verdict.participant_id, verdict.link_id)
        sequence = self._sequences.get(key, 0) + 1
        self._sequences[key] = sequence
        row = {
            "link_id": verdict.link_id,
            "participant_id": verdict.participant_id,
            "verdict": verdict.verdict.value,
            "treatment": verdict.treatment.value,
            "timestamp": verdict.timestamp or time.time(),
            "sequence": sequence,
        }
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
            fh.flush()
        return sequence

    def entries(self) -> list[dict]:
        if not self.path.exists():
            return []
        out = []
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    out.append(json.loads(line))
        return out

    def has_verdict(self, participant_id: str, link_id: str) -> bool:
        return self._sequences.get((participant_id, link_id), 0) > 0

    def count_for(self, participant_id: str) -> int:
        return sum(1 for (pid, _), seq in self._sequences.items() if pid == participant_id and seq)
