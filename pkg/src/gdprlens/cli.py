"""Command-line interface.

Subcommands:

  lint      parse + detect over a stories file; non-zero exit on findings
  describe  run the full pipeline non-interactively; ambiguous stories
            are reported and skipped, never silently waived
  kg query  pattern query against the knowledge graph ("?" = unbound)
  cases     match enforcement cases against article ids
  survey    score a response file against the questionnaire
  serve     run the HTTP JSON API

Data files default to the copies shipped with the package; flags
override environment variables, which override the defaults.
"""
from __future__ import annotations

import json
import sys

import click

from . import __version__, ambiguity, stories
from .describe import RenderFormat, render
from .errors import GdprLensError
from .model import DiagnosticState, StoryStatus
from .pipeline import (
    DataBundle,
    PipelineEngine,
    ProjectStore,
    Stage,
    load_default_bundle,
    parse_batch,
)
from .normalize import CorrectionServiceConfig
from .survey import Phase, SurveyResponse, load_questionnaire
from .survey import score as survey_score


def _bundle_from(ctx) -> DataBundle:
    opts = ctx.obj
    correction = None
    if opts.get("correction_endpoint"):
        correction = CorrectionServiceConfig(
            endpoint=opts["correction_endpoint"], enabled=True
        )
    return load_default_bundle(
        kg_path=opts.get("kg"),
        cases_path=opts.get("cases"),
        vague_path=opts.get("lexicon"),
        verbs_path=opts.get("verbs"),
        spell_path=opts.get("spell"),
        questionnaire_path=opts.get("questionnaire"),
        correction=correction,
    )


@click.group()
@click.version_option(version=__version__, prog_name="gdprlens")
@click.option("--data-dir", envvar="GDPRLENS_DATA_DIR", default=None, help="Project storage directory.")
@click.option("--kg", envvar="GDPRLENS_KG", default=None, help="Knowledge graph file.")
@click.option("--cases", envvar="GDPRLENS_CASES", default=None, help="Enforcement cases file.")
@click.option("--lexicon", envvar="GDPRLENS_LEXICON", default=None, help="Vague-term lexicon file.")
@click.option("--verbs", envvar="GDPRLENS_VERBS", default=None, help="Verb/data-noun lexicon file.")
@click.option("--spell", envvar="GDPRLENS_SPELL", default=None, help="Spell lexicon file.")
@click.option("--questionnaire", envvar="GDPRLENS_QUESTIONNAIRE", default=None, help="Questionnaire file.")
@click.option(
    "--correction-endpoint",
    envvar="GDPRLENS_CORRECTION_ENDPOINT",
    default=None,
    help="Optional external correction service URL.",
)
@click.pass_context
def main(ctx, data_dir, kg, cases, lexicon, verbs, spell, questionnaire, correction_endpoint):
    """User-story linting and GDPR compliance guidance."""
    ctx.ensure_object(dict)
    ctx.obj.update(
        data_dir=data_dir,
        kg=kg,
        cases=cases,
        lexicon=lexicon,
        verbs=verbs,
        spell=spell,
        questionnaire=questionnaire,
        correction_endpoint=correction_endpoint,
    )


@main.command()
@click.argument("stories_file", type=click.Path(exists=True))
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
def lint(ctx, stories_file, output_format):
    """Parse and detect ambiguities; exit 1 when open findings remain."""
    bundle = _bundle_from(ctx)
    with open(stories_file, encoding="utf-8") as handle:
        records = parse_batch(handle.read())
    findings = []
    for n, record in enumerate(records, 1):
        sid = record.get("id") or f"s{n}"
        result = stories.parse_story(record["text"], story_id=sid)
        story = result.story
        stories.apply_parse(story, result)
        diags = stories.validate_format(story)
        if not result.missing:
            story.status = StoryStatus.NORMALIZED
            diags = ambiguity.detect(story, bundle.vague_terms, bundle.verbs)
        findings.extend((story, d) for d in diags)
    open_findings = [f for f in findings if f[1].state == DiagnosticState.OPEN]
    if output_format == "json":
        click.echo(
            json.dumps(
                {
                    "stories": len(records),
                    "open_findings": len(open_findings),
                    "findings": [d.to_dict() for _, d in findings],
                },
                indent=2,
            )
        )
    else:
        for story, d in findings:
            anchor = f" [{d.span[0]}:{d.span[1]}] {d.matched_text!r}" if d.matched_text else ""
            click.echo(f"{story.id}: {d.kind.value}{anchor}: {d.message}")
        click.echo(f"{len(records)} stories checked, {len(open_findings)} open finding(s)")
    sys.exit(1 if open_findings else 0)


@main.command()
@click.argument("stories_file", type=click.Path(exists=True))
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default="text")
@click.option("--limit-cases", default=3, show_default=True, help="Max case matches per story.")
@click.pass_context
def describe(ctx, stories_file, output_format, limit_cases):
    """Run the full pipeline over a stories file, skipping ambiguous stories."""
    bundle = _bundle_from(ctx)
    engine = PipelineEngine(ProjectStore(ctx.obj.get("data_dir")), bundle)
    with open(stories_file, encoding="utf-8") as handle:
        records = parse_batch(handle.read())
    project = engine.create_project("cli-describe")
    _, reports = engine.import_stories(project.id, records)
    results = []
    for report in reports:
        sid = report["story"].id
        entry = {"story_id": sid, "text": report["story"].raw_text}
        _, outcome = engine.run_stage(project.id, sid, Stage.NORMALIZE)
        if not outcome.ok:
            entry["status"] = "skipped"
            entry["reason"] = f"missing elements: {', '.join(outcome.detail['missing'])}"
            results.append(entry)
            continue
        _, outcome = engine.run_stage(project.id, sid, Stage.DETECT)
        if outcome.detail["open"]:
            diags = engine.get_project(project.id).diagnostics[sid]
            entry["status"] = "skipped"
            entry["reason"] = "open ambiguities"
            entry["findings"] = [
                {"kind": d.kind.value, "matched_text": d.matched_text, "message": d.message}
                for d in diags
                if d.state == DiagnosticState.OPEN
            ]
            results.append(entry)
            continue
        engine.run_stage(project.id, sid, Stage.MAP)
        engine.run_stage(project.id, sid, Stage.DESCRIBE)
        engine.run_stage(project.id, sid, Stage.MATCH_CASES)
        view = engine.story_view(project.id, sid)
        description = view["description"]
        matches = (view["case_matches"] or [])[:limit_cases]
        entry["status"] = "described"
        entry["none_required"] = description.none_required
        entry["description"] = description.to_dict()
        entry["cases"] = [m.to_dict() for m in matches]
        results.append(entry)
    if output_format == "json":
        click.echo(json.dumps({"results": results}, indent=2))
    else:
        for entry in results:
            click.echo(f"== {entry['story_id']}: {entry['text']}")
            if entry["status"] == "skipped":
                click.echo(f"   skipped ({entry['reason']})")
                for finding in entry.get("findings", []):
                    click.echo(f"   - {finding['kind']}: {finding['matched_text']!r}")
            elif entry["none_required"]:
                click.echo("   no GDPR privacy requirement identified")
            else:
                from .describe import ComplianceDescription

                description = ComplianceDescription.from_dict(entry["description"])
                click.echo(render(description, RenderFormat.PLAIN_TEXT).rstrip())
                for m in entry["cases"]:
                    fine = f"{m['case']['fine_eur']:,} EUR"
                    click.echo(
                        f"   case: {m['case']['controller']} ({m['case']['date']}, {fine}) "
                        f"overlap {', '.join(m['overlap'])}"
                    )
            click.echo()
    skipped = sum(1 for r in results if r["status"] == "skipped")
    click.echo(f"{len(results)} stories processed, {skipped} skipped", err=True)


@main.group()
def kg():
    """Knowledge graph commands."""


@kg.command("query")
@click.argument("pattern")
@click.pass_context
def kg_query(ctx, pattern):
    """Query triples: 'subject predicate object' with ? for unbound slots."""
    bundle = _bundle_from(ctx)
    parts = pattern.split()
    if len(parts) != 3:
        raise click.UsageError("pattern must be three space-separated terms, use ? for unbound")
    subject, predicate, object_ = (None if p == "?" else p for p in parts)
    from .kg import Predicate

    triples = bundle.graph.query(
        subject=subject,
        predicate=Predicate(predicate) if predicate else None,
        object=object_,
    )
    for t in triples:
        click.echo(f"({t.subject.id}, {t.predicate.value}, {t.object.id})")
    click.echo(f"{len(triples)} triple(s)", err=True)


@main.group()
def cases():
    """Enforcement case commands."""


@cases.command("match")
@click.argument("articles")
@click.option("--limit", default=5, show_default=True)
@click.pass_context
def cases_match(ctx, articles, limit):
    """Match cases against comma-separated article ids (e.g. Art.6,Art.17)."""
    bundle = _bundle_from(ctx)
    from .cases import match as match_cases

    wanted = [a.strip() for a in articles.split(",") if a.strip()]
    if not wanted:
        raise click.UsageError("no article ids given")
    matches = match_cases(wanted, bundle.registry, limit=limit)
    for m in matches:
        c = m.case
        click.echo(
            f"{c.controller} | {c.authority} {c.country} {c.date.isoformat()} | "
            f"{c.fine_eur:,} EUR | overlap: {', '.join(m.overlap)} | {c.summary}"
        )
    click.echo(f"{len(matches)} match(es)", err=True)


@main.group()
def survey():
    """Privacy-attitude survey commands."""


@survey.command("score")
@click.argument("response_file", type=click.Path(exists=True))
@click.pass_context
def survey_score_cmd(ctx, response_file):
    """Score a response file: {respondent_id, phase, answers}."""
    from .datafiles import DEFAULT_QUESTIONNAIRE, default_path

    questionnaire_path = ctx.obj.get("questionnaire") or default_path(DEFAULT_QUESTIONNAIRE)
    questionnaire = load_questionnaire(questionnaire_path)
    with open(response_file, encoding="utf-8") as handle:
        payload = json.load(handle)
    response = SurveyResponse(
        respondent_id=payload["respondent_id"],
        phase=Phase(payload.get("phase", "Pre")),
        answers={k: int(v) for k, v in payload["answers"].items()},
    )
    result = survey_score(response, questionnaire)
    click.echo(json.dumps(result.to_dict(), indent=2))


@main.command()
@click.option("--port", envvar="GDPRLENS_PORT", default=8400, show_default=True, type=int)
@click.option("--public-dir", envvar="GDPRLENS_PUBLIC_DIR", default=None, help="Static assets for the web client.")
@click.pass_context
def serve(ctx, port, public_dir):
    """Run the HTTP JSON API."""
    from .service import ServiceConfig
    from .service import serve as run_service

    opts = ctx.obj
    run_service(
        ServiceConfig(
            port=port,
            data_dir=opts.get("data_dir"),
            kg_path=opts.get("kg"),
            cases_path=opts.get("cases"),
            lexicon_path=opts.get("lexicon"),
            verbs_path=opts.get("verbs"),
            spell_path=opts.get("spell"),
            questionnaire_path=opts.get("questionnaire"),
            correction_endpoint=opts.get("correction_endpoint"),
            public_dir=public_dir,
        )
    )


def run() -> None:
    """Entry point that converts domain errors into exit codes."""
    try:
        main(standalone_mode=True)
    except GdprLensError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    run()
