"""Command-line entry points: estimator benchmark, session replay,
progress reports, and the sync server."""
from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .analytics.progress import analyze_progress
from .analytics.records import SessionRecord, session_checksum, verify_replay
from .analytics.store import SessionStore
from .errors import StorageCorruptError, VoiceRehabError
from .evalharness.scoring import (
    default_dysphonic_suite,
    format_report,
    load_suite,
    results_to_json,
    run_benchmark,
    save_suite,
)

BUILTIN_SUITES = {"dysphonic": default_dysphonic_suite}


@click.group()
def main():
    """Voice-pitch rehabilitation suite tools."""


@main.command()
@click.option("--suite", "suite_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def evaluate(suite_path, out_path):
    """Benchmark all seven estimators over a suite file; write the ranking
    as JSON to OUT and as a text table next to it (.txt)."""
    suite = load_suite(suite_path)
    results = run_benchmark(suite)
    out = Path(out_path)
    out.write_text(results_to_json(results) + "\n", encoding="utf-8")
    table = format_report(results)
    out.with_suffix(".txt").write_text(table, encoding="utf-8")
    click.echo(table, nl=False)


@main.command()
@click.option("--name", type=click.Choice(sorted(BUILTIN_SUITES)), default="dysphonic")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def suite(name, out_path):
    """Write a builtin signal suite to a JSON file."""
    save_suite(out_path, BUILTIN_SUITES[name]())
    click.echo(f"wrote {name} suite to {out_path}")


@main.command()
@click.option("--session", "session_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True, help="machine-readable verdict")
def replay(session_path, as_json):
    """Re-simulate a stored session file and verify its event log."""
    doc = json.loads(Path(session_path).read_text(encoding="utf-8"))
    stored_checksum = doc.pop("checksum", None)
    problems = []
    if stored_checksum != session_checksum(doc):
        problems.append("file checksum mismatch")
        record = None
    else:
        try:
            record = SessionRecord.from_dict(doc)
        except VoiceRehabError as exc:
            problems.append(f"unreadable record: {exc}")
            record = None
    if record is not None:
        try:
            record.verify_metrics()
        except StorageCorruptError as exc:
            problems.append(str(exc))
        problems.extend(verify_replay(record))
    if as_json:
        click.echo(json.dumps({"ok": not problems, "problems": problems}))
    elif problems:
        for p in problems:
            click.echo(f"FAIL: {p}")
    else:
        click.echo(f"OK: {session_path} replays to an identical event log")
    if problems:
        sys.exit(1)


@main.command()
@click.option("--patient", "patient_id", required=True)
@click.option("--data-dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--json", "as_json", is_flag=True, help="emit the raw report JSON")
def report(patient_id, data_dir, as_json):
    """Print the longitudinal progress report for a patient."""
    store = SessionStore(data_dir)
    try:
        sessions = store.load_patient_sessions(patient_id)
    except VoiceRehabError as exc:
        raise click.ClickException(str(exc)) from exc
    if not sessions:
        raise click.ClickException(f"no sessions for patient {patient_id}")
    rep = analyze_progress(sessions)
    if as_json:
        click.echo(json.dumps(rep.to_dict(), sort_keys=True))
        return
    click.echo(f"patient {rep.patient_id}: {rep.n_sessions} session(s)")
    click.echo(f"{'metric':<22}{'slope/session':>16}{'intercept':>14}{'points':>8}")
    for metric, trend in rep.trends.items():
        click.echo(
            f"{metric:<22}{trend.slope:>16.4f}{trend.intercept:>14.4f}{trend.n_points:>8}"
        )
    click.echo("latest: " + json.dumps(rep.latest.to_dict(), sort_keys=True))
    if rep.suggestions:
        click.echo("suggestions:")
        for s in rep.suggestions:
            click.echo(f"  - {s}")
    else:
        click.echo("suggestions: none")


@main.command()
@click.option("--data-dir", default=lambda: os.environ.get("VOICEREHAB_DATA_DIR", "./data"))
@click.option("--bind", default=lambda: os.environ.get("VOICEREHAB_BIND", "127.0.0.1:8000"))
@click.option("--token", default=lambda: os.environ.get("VOICEREHAB_TOKEN") or None)
def serve(data_dir, bind, token):
    """Run the sync service (uvicorn)."""
    import uvicorn

    from .service.app import create_app

    host, _, port = bind.partition(":")
    Path(data_dir).mkdir(parents=True, exist_ok=True)
    app = create_app(data_dir, token=token)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000), log_level="info")


if __name__ == "__main__":
    main()
