import json

from click.testing import CliRunner

from conftest import make_record
from voicerehab.analytics.store import SessionStore
from voicerehab.cli import main
from voicerehab.evalharness.scoring import save_suite
from voicerehab.evalharness.synth import SignalSpec

SID = "12121212-3434-5656-7878-909090909090"


def test_suite_and_evaluate(tmp_path):
    runner = CliRunner()
    suite_path = tmp_path / "tiny.json"
    save_suite(
        suite_path,
        [SignalSpec(waveform="sine", f0_contour=((0.0, 220.0),), duration_s=0.3, seed=1)],
    )
    out = tmp_path / "report.json"
    result = runner.invoke(
        main, ["evaluate", "--suite", str(suite_path), "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    doc = json.loads(out.read_text())
    assert len(doc["ranking"]) == 7
    assert (tmp_path / "report.txt").exists()
    assert "rank" in result.output


def test_builtin_suite_dump(tmp_path):
    runner = CliRunner()
    out = tmp_path / "dys.json"
    result = runner.invoke(main, ["suite", "--name", "dysphonic", "--out", str(out)])
    assert result.exit_code == 0
    doc = json.loads(out.read_text())
    assert doc["version"] == 1 and len(doc["specs"]) >= 3


def test_replay_ok_and_tampered(tmp_path):
    store = SessionStore(tmp_path)
    rec = make_record(session_id=SID)
    store.save_session(rec)
    path = tmp_path / "patients" / "p01" / "sessions" / f"{SID}.json"

    runner = CliRunner()
    ok = runner.invoke(main, ["replay", "--session", str(path)])
    assert ok.exit_code == 0, ok.output
    assert "OK" in ok.output

    doc = json.loads(path.read_text())
    doc["metrics"]["score"] += 1
    path.write_text(json.dumps(doc))
    bad = runner.invoke(main, ["replay", "--session", str(path), "--json"])
    assert bad.exit_code == 1
    verdict = json.loads(bad.output)
    assert verdict["ok"] is False and verdict["problems"]


def test_report_text_and_json(tmp_path):
    store = SessionStore(tmp_path)
    for i in range(2):
        store.save_session(
            make_record(session_id=f"00000000-0000-0000-0000-00000000000{i + 1}")
        )
    runner = CliRunner()
    text = runner.invoke(main, ["report", "--patient", "p01", "--data-dir", str(tmp_path)])
    assert text.exit_code == 0, text.output
    assert "phonation_time_ms" in text.output

    as_json = runner.invoke(
        main, ["report", "--patient", "p01", "--data-dir", str(tmp_path), "--json"]
    )
    assert as_json.exit_code == 0
    doc = json.loads(as_json.output)
    assert doc["n_sessions"] == 2

    missing = runner.invoke(
        main, ["report", "--patient", "nobody", "--data-dir", str(tmp_path)]
    )
    assert missing.exit_code != 0
