"""Command-line client: batch compilation, serving, suggestions, evaluation.

Every verb drives the same session service the HTTP API uses; pointing a
verb at ``--server URL`` switches it to a thin HTTP client of a running
instance.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx

from ..config import CONFIG_ENV_VAR, PipelineConfig


def _config_from_flags(embeddings, threshold, patterns, offline_conceptnet,
                       strict, **extra) -> PipelineConfig:
    cfg = PipelineConfig.from_env()
    overrides = {
        "embeddings_path": embeddings,
        "match_threshold": threshold,
        "markers_path": patterns,
        "conceptnet_fixtures": offline_conceptnet,
    }
    if strict:
        overrides["strict"] = True
    overrides.update(extra)
    return cfg.with_overrides(**overrides)


def pipeline_options(f):
    f = click.option("--embeddings", type=click.Path(exists=True), default=None,
                     help="word2vec text file (default: bundled toy fixture)")(f)
    f = click.option("--threshold", type=float, default=None,
                     help="state-unification cosine threshold (default 0.75)")(f)
    f = click.option("--patterns", type=click.Path(exists=True), default=None,
                     help="marker catalog JSON (default: bundled)")(f)
    f = click.option("--offline-conceptnet", type=click.Path(exists=True),
                     default=None, help="ConceptNet fixture store (default: bundled)")(f)
    f = click.option("--strict", is_flag=True, default=False,
                     help="unmatched conditions become questions, not new states")(f)
    return f


@click.group()
def main() -> None:
    """Compile natural-language character descriptions into planning domains.

    Configuration file override: set the environment variable
    NL2DOMAIN_CONFIG to a JSON file with PipelineConfig keys.
    """


@main.command("compile")
@click.argument("input_file", type=click.Path(exists=True))
@click.option("--conllu", type=click.Path(exists=True), default=None,
              help="CoNLL-U sidecar with pre-parsed sentences")
@click.option("--target", type=click.Choice(["sexpr", "pddl", "both"]),
              default="both", show_default=True)
@click.option("--out", type=click.Path(), default=".", show_default=True,
              help="output directory for domain files")
@click.option("--server", default=None, help="compile via a running service URL")
@pipeline_options
def compile_cmd(input_file, conllu, target, out, server, embeddings, threshold,
                patterns, offline_conceptnet, strict) -> None:
    """Compile a text file (one description per line or free paragraphs)."""
    text = Path(input_file).read_text(encoding="utf-8")
    sidecar = Path(conllu).read_text(encoding="utf-8") if conllu else None
    targets = ["sexpr", "pddl"] if target == "both" else [target]

    if server:
        with httpx.Client(base_url=server, timeout=60.0) as client:
            sid = client.post("/sessions", json={}).raise_for_status() \
                .json()["session_id"]
            body = {"text": text}
            if sidecar:
                body["conllu"] = sidecar
            report = client.post(f"/sessions/{sid}/text", json=body) \
                .raise_for_status().json()
            codes = {t: client.get(f"/sessions/{sid}/code",
                                   params={"target": t}).raise_for_status().text
                     for t in targets}
    else:
        from ..pipeline import Pipeline, Resources
        from ..codegen import emit_pddl, emit_sexpr

        cfg = _config_from_flags(embeddings, threshold, patterns,
                                 offline_conceptnet, strict)
        pipeline = Pipeline(Resources.load(cfg))
        bundle, rep = pipeline.process_text(pipeline.new_bundle(), text,
                                            conllu=sidecar)
        report = rep.as_dict()
        emitters = {"sexpr": emit_sexpr, "pddl": emit_pddl}
        codes = {t: emitters[t](bundle) for t in targets}

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    suffix = {"sexpr": "domain.sexpr", "pddl": "domain.pddl"}
    for t, code in codes.items():
        path = out_dir / suffix[t]
        path.write_text(code, encoding="utf-8")
        click.echo(f"wrote {path}")
    errors = [s for s in report["sentences"] if s["status"] == "error"]
    for s in report["sentences"]:
        mark = {"ok": "+", "unmatched": "?", "error": "!"}[s["status"]]
        click.echo(f"  {mark} [{s['category']}] {s['sentence']}")
        if s["error"]:
            click.echo(f"      {s['error']}")
    click.echo(f"{len(report['sentences'])} sentences, "
               f"{len(report['new_states'])} new states, "
               f"{len(errors)} errors, "
               f"{len(report['suggestions'])} suggestions pending")
    if errors:
        sys.exit(1)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--session-root", type=click.Path(), default=None,
              help="directory for persisted sessions")
@pipeline_options
def serve(host, port, session_root, embeddings, threshold, patterns,
          offline_conceptnet, strict) -> None:
    """Run the HTTP authoring service."""
    import uvicorn

    from .app import create_app

    cfg = _config_from_flags(embeddings, threshold, patterns,
                             offline_conceptnet, strict,
                             session_root=session_root)
    uvicorn.run(create_app(cfg), host=host, port=port)


@main.command()
@click.argument("input_file", type=click.Path(exists=True))
@click.option("--server", default=None, help="query a running service URL")
@click.option("--session", default=None, help="existing session id on the server")
@pipeline_options
def suggest(input_file, server, session, embeddings, threshold, patterns,
            offline_conceptnet, strict) -> None:
    """Print pending suggestions for a description file."""
    if server and session:
        with httpx.Client(base_url=server, timeout=60.0) as client:
            items = client.get(f"/sessions/{session}/suggestions") \
                .raise_for_status().json()["suggestions"]
    else:
        from ..pipeline import Pipeline, Resources

        text = Path(input_file).read_text(encoding="utf-8")
        cfg = _config_from_flags(embeddings, threshold, patterns,
                                 offline_conceptnet, strict)
        pipeline = Pipeline(Resources.load(cfg))
        _bundle, report = pipeline.process_text(pipeline.new_bundle(), text)
        items = [{"id": s.id, "kind": s.kind, "prompt": s.prompt,
                  "score": s.score} for s in report.suggestions]
    if not items:
        click.echo("no pending suggestions")
        return
    for s in items:
        click.echo(f"[{s['kind']}] ({s['score']:.2f}) {s['prompt']}  (id {s['id']})")


@main.command("eval")
@click.option("--gold", type=click.Path(exists=True), default=None,
              help="gold corpus JSON (default: bundled)")
@click.option("--min-state-recall", type=float, default=1.0, show_default=True)
@click.option("--min-condition-accuracy", type=float, default=1.0,
              show_default=True)
@click.option("--json", "as_json", is_flag=True, default=False,
              help="emit the full report as JSON")
@pipeline_options
def eval_cmd(gold, min_state_recall, min_condition_accuracy, as_json,
             embeddings, threshold, patterns, offline_conceptnet, strict) -> None:
    """Score the pipeline against a gold corpus; nonzero exit below thresholds."""
    from ..eval_harness import load_gold, score
    from ..pipeline import Resources

    cfg = _config_from_flags(embeddings, threshold, patterns,
                             offline_conceptnet, strict)
    cases = load_gold(gold)
    report = score(cases, Resources.load(cfg))
    if as_json:
        click.echo(json.dumps(report.as_dict(), indent=2, sort_keys=True))
    else:
        click.echo(report.summary())
    if report.state_recall < min_state_recall or \
            report.condition_accuracy < min_condition_accuracy:
        click.echo("below threshold", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
