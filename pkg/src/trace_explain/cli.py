"""Command-line drivers for the explanation pipeline."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .bundle import load_project
from .concepts import build_blacklist, concept_frequencies, load_blacklist, save_blacklist
from .conllu import ParseIndex, ingest_conllu_file
from .corpus import (
    FixtureSearchProvider,
    HttpSearchProvider,
    bottomup_collect,
    load_corpus,
    save_corpus,
    topdown_filter,
)
from .explain import explanation_to_json
from .pipeline import PipelineConfig, detect_project_concepts, run_pipeline
from .quality import FilterConfig, Normalization
from .report import write_report
from .rules import (
    HierarchicalVerbLexicon,
    extract_contexts,
    extract_definitions,
    extract_triplets,
)
from .segment import segment_sentences


def _make_provider(spec: str, max_results: int = 10):
    scheme, _, rest = spec.partition(":")
    if scheme == "fixture":
        return FixtureSearchProvider(rest)
    if scheme == "live":
        return HttpSearchProvider(rest, max_results=max_results)
    raise click.BadParameter(f"unknown provider {spec!r}; use fixture:<dir> or live:<endpoint>")


def _read_background(directory: str | None) -> tuple[str, ...]:
    if not directory:
        return ()
    return tuple(
        p.read_text("utf-8") for p in sorted(Path(directory).glob("*.txt"))
    )


def _pipeline_config(
    provider: str | None,
    blacklist: str | None,
    background: str | None,
    threshold: float,
    no_normalize: bool,
    max_hops: int,
    max_results: int = 10,
) -> PipelineConfig:
    config = PipelineConfig(
        filter_config=FilterConfig(
            threshold=threshold,
            normalization=Normalization.NONE if no_normalize else Normalization.PER_BATCH_MINMAX,
        ),
        background_texts=_read_background(background),
        max_hops=max_hops,
    )
    if blacklist:
        config.blacklist = load_blacklist(blacklist)
    if provider:
        config.provider = _make_provider(provider, max_results)
        if provider.startswith("fixture:"):
            config.parse_index = config.provider.parse_index()
    return config


pipeline_options = [
    click.option("--provider", default=None, help="fixture:<dir> or live:<endpoint>"),
    click.option("--blacklist", "blacklist_path", default=None, type=click.Path(exists=True)),
    click.option("--background", default=None, type=click.Path(exists=True), help="directory of background .txt files"),
    click.option("--threshold", default=0.5, show_default=True),
    click.option("--no-normalize", is_flag=True, default=False),
    click.option("--max-hops", default=1, show_default=True),
]


def _with_pipeline_options(fn):
    for option in reversed(pipeline_options):
        fn = option(fn)
    return fn


@click.group()
def main():
    """Mine and serve concept-level explanations for trace links."""


@main.command("blacklist")
@click.argument("corpus", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--min-count", default=1000, show_default=True)
@click.option("--top-fraction", default=0.015, show_default=True)
@click.option("--out", default="blacklist.tsv", show_default=True)
def blacklist_command(corpus, min_count, top_fraction, out):
    """Build the general-concept blacklist from parsed corpus files.

    CORPUS files are either .conllu parses (concepts are detected and counted)
    or .tsv files of pre-aggregated `key<TAB>count` rows.
    """
    totals: dict[str, int] = {}
    for path in corpus:
        path = Path(path)
        if path.suffix == ".conllu":
            stream = concept_frequencies(ingest_conllu_file(path))
        else:
            stream = (
                (key, int(count))
                for key, _, count in (
                    line.rstrip("\n").rpartition("\t")
                    for line in path.read_text("utf-8").splitlines()
                    if line.strip()
                )
            )
        for key, count in stream:
            totals[key] = totals.get(key, 0) + count
    result = build_blacklist(totals.items(), min_count=min_count, top_fraction=top_fraction)
    save_blacklist(result, out)
    click.echo(f"blacklist: {len(result.entries)} entries -> {out}")


@main.command("corpus")
@click.option("--mode", type=click.Choice(["topdown", "bottomup"]), required=True)
@click.option("--project", "project_dir", required=True, type=click.Path(exists=True))
@click.option("--provider", default=None, help="fixture:<dir> or live:<endpoint> (bottomup)")
@click.option("--input", "inputs", multiple=True, type=click.Path(exists=True), help="text documents (topdown)")
@click.option("--blacklist", "blacklist_path", default=None, type=click.Path(exists=True))
@click.option("--max-results", default=10, show_default=True)
@click.option("--out", default="corpus.jsonl", show_default=True)
def corpus_command(mode, project_dir, provider, inputs, blacklist_path, max_results, out):
    """Collect the concept domain corpus for a project bundle."""
    project = load_project(project_dir)
    blacklist = load_blacklist(blacklist_path) if blacklist_path else None
    concepts_by_artifact = detect_project_concepts(project, blacklist)
    surfaces: dict[str, str] = {}
    for artifact_id in sorted(concepts_by_artifact):
        for concept in concepts_by_artifact[artifact_id]:
            surfaces.setdefault(concept.id, concept.surface)
    if not surfaces:
        raise click.ClickException("no concepts detected in project artifacts")

    if mode == "topdown":
        if not inputs:
            raise click.ClickException("topdown mode needs at least one --input document")
        stream = []
        for path in inputs:
            text = Path(path).read_text("utf-8")
            stream.extend(
                (sentence, f"file://{path}") for _, sentence in segment_sentences(text)
            )
        corpus = topdown_filter(stream, surfaces.keys())
    else:
        if not provider:
            raise click.ClickException("bottomup mode needs --provider")
        corpus, report = bottomup_collect(
            list(surfaces.values()),
            _make_provider(provider, max_results),
            project.domain_name,
        )
        if report.misses:
            click.echo(f"no sentences for {len(report.misses)} concepts: {', '.join(report.misses)}")
        for key, error in report.failures:
            click.echo(f"provider failure for {key!r}: {error}", err=True)
    save_corpus(corpus, out)
    click.echo(f"corpus: {len(corpus)} sentences -> {out}")


@main.command("mine")
@click.option("--kind", type=click.Choice(["acronyms", "definitions", "contexts", "triplets"]), required=True)
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--parses", multiple=True, type=click.Path(exists=True), help="CoNLL-U files for corpus sentences")
@click.option("--lexicon", "lexicon_path", default=None, type=click.Path(exists=True))
@click.option("--out", default="-", show_default=True)
def mine_command(kind, corpus_path, parses, lexicon_path, out):
    """Extract explanation elements from a collected corpus (JSON Lines)."""
    corpus = load_corpus(corpus_path)
    if parses:
        corpus = corpus.with_parses(ParseIndex.from_files(parses))
    rows: list[dict] = []
    if kind == "acronyms":
        from .acronyms import extract_acronym_pairs

        for pair in extract_acronym_pairs(corpus):
            rows.append({"short": pair.short, "long": pair.long, "uri": pair.evidence.source_uri})
    elif kind == "triplets":
        lexicon = (
            HierarchicalVerbLexicon.from_file(lexicon_path)
            if lexicon_path
            else HierarchicalVerbLexicon.default()
        )
        for triplet in extract_triplets(corpus, lexicon):
            rows.append(
                {
                    "subject": triplet.subject,
                    "verb": triplet.verb,
                    "object": triplet.object,
                    "uri": triplet.evidence.source_uri,
                }
            )
    else:
        for key in corpus.keys():
            if kind == "definitions":
                for candidate in extract_definitions(key, corpus):
                    rows.append(
                        {"concept": key, "text": candidate.sentence.text, "verb": candidate.verb.text}
                    )
            else:
                for candidate in extract_contexts(key, corpus):
                    rows.append({"concept": key, "text": candidate.sentence.text})
    payload = "\n".join(json.dumps(row, ensure_ascii=False) for row in rows)
    if out == "-":
        click.echo(payload)
    else:
        Path(out).write_text(payload + ("\n" if payload else ""), encoding="utf-8")
        click.echo(f"{kind}: {len(rows)} rows -> {out}")


@main.command("explain")
@click.option("--project", "project_dir", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@_with_pipeline_options
def explain_command(project_dir, out, provider, blacklist_path, background, threshold, no_normalize, max_hops):
    """Run the full pipeline and export explanation JSON for every link."""
    project = load_project(project_dir)
    config = _pipeline_config(provider, blacklist_path, background, threshold, no_normalize, max_hops)
    result = run_pipeline(project, config)
    payload = {
        "project_id": project.id,
        "domain_name": project.domain_name,
        "links": [
            json.loads(explanation_to_json(result.explanations[link.id]))
            for link in project.links
        ],
    }
    Path(out).write_text(
        json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
    click.echo(f"explanations: {len(result.explanations)} links -> {out}")


@main.command("report")
@click.option("--project", "project_dir", required=True, type=click.Path(exists=True))
@click.option("--out-dir", required=True, type=click.Path())
@_with_pipeline_options
def report_command(project_dir, out_dir, provider, blacklist_path, background, threshold, no_normalize, max_hops):
    """Write the coverage table and figure for a project."""
    project = load_project(project_dir)
    config = _pipeline_config(provider, blacklist_path, background, threshold, no_normalize, max_hops)
    result = run_pipeline(project, config)
    tsv, png = write_report(result.coverage, out_dir)
    click.echo(f"coverage report -> {tsv} and {png}")


@main.command("serve")
@click.option("--project", "project_dir", required=True, type=click.Path(exists=True))
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--verdict-log", default="verdicts.jsonl", show_default=True)
@_with_pipeline_options
def serve_command(project_dir, port, host, verdict_log, provider, blacklist_path, background, threshold, no_normalize, max_hops):
    """Serve explanations and capture vetting verdicts over HTTP."""
    import uvicorn

    from .server import ServiceState, create_app
    from .study import VerdictLog

    project = load_project(project_dir)
    config = _pipeline_config(provider, blacklist_path, background, threshold, no_normalize, max_hops)
    result = run_pipeline(project, config)
    state = ServiceState(
        projects={project.id: project},
        explanations=result.explanations,
        verdict_log=VerdictLog(verdict_log, known_links={l.id for l in project.links}),
    )
    click.echo(f"serving {len(result.explanations)} explanations on {host}:{port}")
    uvicorn.run(create_app(state), host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
