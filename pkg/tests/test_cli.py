import json
import subprocess
import sys

import pytest

from cwb.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, [json.loads(l) for l in out.out.splitlines() if l.startswith("{")], out


def test_eval_successor(capsys):
    code, lines, _ = _run(capsys, "eval", "-p", "(comp succ id)", "-n", "5", "--fuel", "100")
    assert code == 0
    assert lines[-1]["event"] == "halted" and lines[-1]["data"]["value"] == 6


def test_trace_schema(capsys):
    _, lines, _ = _run(capsys, "eval", "-p", "(comp succ id)", "-n", "5")
    head, events = lines[0], lines[1:]
    assert set(head) == {"config", "version"} and head["config"]["command"] == "eval"
    assert all(set(ev) == {"stage", "event", "data"} for ev in events)
    stages = [ev["stage"] for ev in events]
    assert stages == sorted(stages)


def test_eval_out_of_fuel_exits_2(capsys):
    code, _, _ = _run(capsys, "eval", "-p", "(mu succ)", "-n", "0", "--fuel", "100")
    assert code == 2


def test_malformed_program_exits_1(capsys):
    code, _, out = _run(capsys, "eval", "-p", "(comp succ", "-n", "1")
    assert code == 1 and "at position 10" in out.err


def test_unknown_construction_exits_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["construct", "no-such-thing"])
    assert exc.value.code == 1


def test_bad_point_exits_1(capsys):
    code, _, _ = _run(capsys, "construct", "friedberg-cantor", "--point", "cantor:2^w", "--k", "4")
    assert code == 1


def test_bad_oracle_exits_1(capsys):
    code, _, _ = _run(capsys, "construct", "relative-k", "--point", "cantor:0^w", "--oracle", "psychic")
    assert code == 1


def test_smn(capsys):
    # smn(snd, x) ignores x
    code, lines, _ = _run(capsys, "smn", "-p", "snd", "-x", "7", "-n", "4")
    assert code == 0 and lines[-1]["data"]["value"] == 4


def test_fixpoint_probe_table(capsys, tmp_path):
    f = tmp_path / "t.txt"
    f.write_text("(comp smn (pair (lit 5) id))\n")
    code, lines, _ = _run(capsys, "fixpoint", "-f", str(f), "--probe", "0..10", "--fuel", "1e5")
    assert code == 0
    probes = [ev["data"] for ev in lines if ev.get("event") == "probe"]
    assert [p["n"] for p in probes] == list(range(11))
    assert all(p["fixed"] == p["transformed"] == p["n"] for p in probes)


def test_construct_friedberg_cantor(capsys):
    code, lines, _ = _run(capsys, "construct", "friedberg-cantor", "--point", "cantor:0^w",
                          "--k", "8", "--budget", "1e6")
    assert code == 0
    summary = lines[-1]
    assert summary["event"] == "summary" and summary["data"]["bits_read"] == 2 ** 10


def test_construct_lemma_ext_empty(capsys):
    code, lines, _ = _run(capsys, "construct", "lemma-ext", "--A", "empty", "--k", "3",
                          "--stages", "1000")
    assert code == 0 and lines[-1]["data"]["emitted"] == 0


def test_construct_anti_enum(capsys):
    code, lines, _ = _run(capsys, "construct", "anti-enum", "--list", "tails:5", "--budget", "1e6")
    assert code == 0
    assert len([ev for ev in lines if ev.get("event") == "witness"]) == 5


def test_construct_budget_exhaustion_exits_2(capsys):
    code, _, _ = _run(capsys, "construct", "adversary-converter", "--candidate", "overreader",
                      "--budget", "300")
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["construct", "sigma2", "--point", "nbar:2"],
    ["construct", "adversary-learner", "--candidate", "seen-so-far"],
    ["construct", "sierp-ob", "-e", "3"],
])
def test_construct_traces_are_deterministic(tmp_path, argv):
    out = tmp_path / "trace.jsonl"
    first = main(argv + ["--out", str(out)]), out.read_bytes()
    second = main(argv + ["--out", str(out)]), out.read_bytes()
    assert first == second and first[1]


def test_check_acceptability_exits_0(capsys):
    code = main(["check", "acceptability"])
    out = capsys.readouterr().out
    assert code == 0 and "3/3 passed" in out


def test_check_unknown_suite_exits_1(capsys):
    assert main(["check", "nonsense"]) == 1


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "cwb.cli", "eval", "-p", "(comp succ id)", "-n", "1"],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0 and '"value": 2' in r.stdout
