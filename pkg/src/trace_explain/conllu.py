"""Reading and writing dependency parses in CoNLL-U format.

Parsing is externalized: this module only consumes parser output, so the
extraction rules stay testable with hand-written parses.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .model import DependencyArc, Origin, OriginKind, ParsedSentence, Token

# Legacy Stanford labels mapped onto the UD names the rules use.
DEFAULT_LABEL_ALIASES: Mapping[str, str] = {
    "nn": "compound",
    "dobj": "obj",
    "nsubj:xsubj": "xsubj",
}


class ConlluError(ValueError):
    pass


def _lines(source: str | Iterable[str]) -> Iterator[str]:
    if isinstance(source, str):
        yield from source.splitlines()
    else:
        for line in source:
            yield line.rstrip("\n")


def ingest_conllu(
    source: str | Iterable[str],
    label_aliases: Mapping[str, str] | None = None,
    default_origin: Origin | None = None,
) -> list[ParsedSentence]:
    """Parse a CoNLL-U character stream into sentences.

    Blocks are separated by blank lines; each token row has 10 tab-separated
    columns. ``# sent_id``, ``# text`` and ``# origin`` comments are honored,
    otherwise ids are generated as s1, s2, ... and text is joined from forms.
    Raises :class:`ConlluError` naming the offending line or sentence.
    """
    aliases = dict(DEFAULT_LABEL_ALIASES if label_aliases is None else label_aliases)
    sentences: list[ParsedSentence] = []
    tokens: list[Token] = []
    heads: list[tuple[int, int, str]] = []  # (dependent, head, label)
    sent_id: str | None = None
    raw_text: str | None = None
    origin: Origin | None = None
    ordinal = 0

    def flush(line_no: int) -> None:
        nonlocal tokens, heads, sent_id, raw_text, origin, ordinal
        if not tokens:
            sent_id, raw_text, origin = None, None, None
            return
        ordinal += 1
        sid = sent_id if sent_id else f"s{ordinal}"
        text = raw_text if raw_text is not None else " ".join(t.text for t in tokens)
        arcs = tuple(DependencyArc(head=h, dependent=d, label=l) for d, h, l in heads)
        try:
            sentences.append(
                ParsedSentence(
                    id=sid,
                    raw_text=text,
                    tokens=tuple(tokens),
                    arcs=arcs,
                    origin=origin or default_origin or Origin(),
                )
            )
        except ValueError as exc:
            raise ConlluError(str(exc)) from exc
        tokens, heads = [], []
        sent_id, raw_text, origin = None, None, None

    line_no = 0
    for line_no, line in enumerate(_lines(source), start=1):
        stripped = line.strip()
        if not stripped:
            flush(line_no)
            continue
        if stripped.startswith("#"):
            comment = stripped[1:].strip()
            if comment.startswith("sent_id"):
                sent_id = comment.split("=", 1)[1].strip() if "=" in comment else sent_id
            elif comment.startswith("text"):
                raw_text = comment.split("=", 1)[1].strip() if "=" in comment else raw_text
            elif comment.startswith("origin"):
                value = comment.split("=", 1)[1].strip() if "=" in comment else ""
                parts = value.split(None, 1)
                if parts:
                    try:
                        kind = OriginKind(parts[0])
                    except ValueError as exc:
                        raise ConlluError(f"unknown origin kind at line {line_no}") from exc
                    origin = Origin(kind, parts[1] if len(parts) > 1 else "")
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ConlluError(f"malformed line {line_no}: expected 10 columns, got {len(cols)}")
        token_id, form, lemma, upos, xpos, _feats, head, deprel = cols[:8]
        if "-" in token_id or "." in token_id:
            continue  # multiword-token ranges and empty nodes carry no arcs
        try:
            index = int(token_id)
            head_index = int(head)
        except ValueError as exc:
            raise ConlluError(f"malformed line {line_no}: non-numeric id or head") from exc
        pos = xpos if xpos not in ("", "_") else upos
        label = aliases.get(deprel, deprel)
        try:
            tokens.append(Token(index=index, text=form, lemma=lemma, pos=pos))
        except ValueError as exc:
            raise ConlluError(f"malformed line {line_no}: {exc}") from exc
        heads.append((index, head_index, label))
    flush(line_no + 1)
    return sentences


def ingest_conllu_file(path, **kwargs) -> list[ParsedSentence]:
    with open(path, encoding="utf-8") as fh:
        return ingest_conllu(fh, **kwargs)


def to_conllu(sentences: Iterable[ParsedSentence]) -> str:
    """Serialize sentences so that :func:`ingest_conllu` round-trips them."""
    blocks: list[str] = []
    for sent in sentences:
        head_of = {a.dependent: (a.head, a.label) for a in sent.arcs}
        lines = [
            f"# sent_id = {sent.id}",
            f"# text = {sent.raw_text}",
            f"# origin = {sent.origin.kind.value} {sent.origin.locator}".rstrip(),
        ]
        for token in sent.tokens:
            head, label = head_of[token.index]
            lines.append(
                "\t".join(
                    [
                        str(token.index),
                        token.text,
                        token.lemma,
                        "_",
                        token.pos,
                        "_",
                        str(head),
                        label,
                        "_",
                        "_",
                    ]
                )
            )
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def fold_text(text: str) -> str:
    """Whitespace-normalized lower-case form used to match sentences to parses."""
    return " ".join(text.lower().split())


class ParseIndex:
    """Looks up a parse for a sentence by its folded text."""

    def __init__(self, sentences: Iterable[ParsedSentence] = ()):
        self._by_text: dict[str, ParsedSentence] = {}
        self.add(sentences)

    def add(self, sentences: Iterable[ParsedSentence]) -> None:
        for sent in sentences:
            self._by_text.setdefault(fold_text(sent.raw_text), sent)

    def lookup(self, text: str) -> ParsedSentence | None:
        return self._by_text.get(fold_text(text))

    def __len__(self) -> int:
        return len(self._by_text)

    @classmethod
    def from_files(cls, paths: Iterable) -> "ParseIndex":
        index = cls()
        for path in paths:
            index.add(ingest_conllu_file(path))
        return index
