"""Command-line behavior: subcommands, reports, exit codes, and determinism."""

from __future__ import annotations

import json

import pytest

from abelqec.cli import main


def test_group_report(tmp_path, capsys):
    """The group command reports order, characters, subgroup, and cosets."""
    out = tmp_path / "g.json"
    rc = main(
        [
            "group",
            "--moduli",
            "2,4",
            "--subgroup",
            "0,2",
            "--seed",
            "5",
            "--out",
            str(out),
        ]
    )
    assert rc == 0
    text = capsys.readouterr().out
    assert "seed 5" in text
    assert "order 8" in text
    report = json.loads(out.read_text())
    assert report["tool"] == "abelqec"
    assert report["command"] == "group"
    assert report["order"] == 8
    assert report["subgroup"]["order"] == 2
    assert report["annihilator"]["order"] == 4
    assert report["cosets"]["count"] == 4
    assert len(report["character_exponents"]) == 8


def test_group_json_stdout(capsys):
    """--json prints the machine-readable report."""
    rc = main(["group", "--moduli", "6", "--seed", "1", "--json"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["order"] == 6


def test_group_bad_moduli_exit_two(capsys):
    """Unparseable moduli are a usage error."""
    assert main(["group", "--moduli", "six"]) == 2
    assert main(["group", "--moduli", "1"]) == 2


def test_verify_default_sweep_passes(capsys):
    """The default identity sweep reports ok and exits zero."""
    rc = main(["verify", "--trials", "5", "--seed", "3", "--json"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "ok"
    assert report["failed"] == 0
    statuses = {r["status"] for r in report["results"]}
    assert statuses <= {"ok", "hypothesis-violated"}
    identities = {r["identity"] for r in report["results"]}
    assert "transform-coset" in identities
    assert "family-completeness" in identities


def test_verify_single_identity_and_groups(capsys):
    """Identity and group selections narrow the sweep."""
    rc = main(
        [
            "verify",
            "--identity",
            "character-sum",
            "--groups",
            "2,2x2",
            "--seed",
            "4",
            "--json",
        ]
    )
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    subjects = [r["subject"] for r in report["results"]]
    assert subjects == ["2", "2x2"]
    assert all(r["identity"] == "character-sum" for r in report["results"])


def test_verify_code_family_statuses(capsys):
    """The code-family identity marks degenerate presets as hypothesis-violated."""
    rc = main(["verify", "--identity", "code-family", "--seed", "6", "--json"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    by_key = {(r["subject"], r["identity"]): r["status"] for r in report["results"]}
    assert by_key[("toy2", "phase-mixture-diagonal")] == "ok"
    assert by_key[("toy2", "family-completeness")] == "ok"
    assert by_key[("toy2", "pair-diagonal")] == "ok"
    assert by_key[("hamming7", "phase-mixture-diagonal")] == "hypothesis-violated"
    assert by_key[("repetition3z3", "family-completeness")] == "hypothesis-violated"


def test_verify_unknown_identity_exit_two(capsys):
    """Asking for a nonexistent identity is a usage error."""
    assert main(["verify", "--identity", "bogus", "--seed", "1"]) == 2


def test_verify_echo_includes_sample_state(capsys):
    """--echo embeds an amplitude dump in the report."""
    rc = main(["verify", "--identity", "qft-unitary", "--groups", "4", "--echo", "--seed", "2", "--json"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["sample_state"]["moduli"] == [4]
    assert len(report["sample_state"]["amplitudes"]) == 4


def test_css_preset_sweep_and_kl(capsys):
    """The css command verifies the preset and exits zero."""
    rc = main(["css", "--preset", "hamming7", "--sweep", "--kl", "--seed", "8", "--json"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "ok"
    assert report["code"]["c1_min_distance"] == 3
    assert report["sweep"]["exact_syndromes"] is True
    assert report["correctability"]["passed"] is True


def test_css_config_file(tmp_path, capsys):
    """A JSON code definition builds and verifies like a preset."""
    cfg = tmp_path / "code.json"
    cfg.write_text(
        json.dumps({"moduli": [3], "n": 3, "c1": [[1, 1, 1]], "c2": []})
    )
    rc = main(["css", "--config", str(cfg), "--sweep", "--seed", "9", "--json"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["code"]["n"] == 3
    assert report["code"]["c1_order"] == 3
    assert report["status"] == "ok"


def test_css_requires_exactly_one_code_source(capsys):
    """Missing or conflicting code sources are usage errors."""
    assert main(["css", "--sweep"]) == 2
    assert main(["css", "--preset", "toy2", "--config", "x.json"]) == 2


def test_css_missing_config_file_exit_two(capsys):
    """A nonexistent config path is a usage error, not a crash."""
    assert main(["css", "--config", "/nonexistent/code.json"]) == 2


def test_qkd_register_protocol_report(capsys):
    """A noiseless register run reports zero aborts and full agreement."""
    rc = main(
        [
            "qkd",
            "--protocol",
            "cssg",
            "--preset",
            "toy2",
            "--trials",
            "40",
            "--seed",
            "12",
            "--json",
        ]
    )
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["summary"]["aborts"] == 0
    assert report["summary"]["key_agreement_rate"] == 1.0
    assert report["config"]["protocol"] == "cssg"


def test_qkd_transcript_file_deterministic(tmp_path):
    """Transcript JSONL files are byte-identical across same-seed reruns."""
    path_a = tmp_path / "a.jsonl"
    path_b = tmp_path / "b.jsonl"
    argv = [
        "qkd",
        "--protocol",
        "bb84g",
        "--preset",
        "hamming7",
        "--trials",
        "15",
        "--eve",
        "intercept",
        "--seed",
        "99",
    ]
    assert main(argv + ["--transcripts", str(path_a)]) == 0
    assert main(argv + ["--transcripts", str(path_b)]) == 0
    assert path_a.read_bytes() == path_b.read_bytes()
    lines = path_a.read_text().splitlines()
    assert len(lines) == 15
    first = json.loads(lines[0])
    assert first["protocol"] == "bb84"
    assert first["seed"] == 99


def test_qkd_degenerate_code_on_register_protocol_exit_two(capsys):
    """Running the register protocol on a degenerate code is a config error."""
    assert main(["qkd", "--protocol", "cssg", "--preset", "hamming7", "--trials", "2"]) == 2


def test_qkd_requires_protocol(capsys):
    """The protocol flag is mandatory."""
    with pytest.raises(SystemExit) as exc:
        main(["qkd", "--preset", "toy2"])
    assert exc.value.code == 2


def test_out_reports_identical_across_reruns(tmp_path):
    """Seeded report files carry no timestamps and rerun byte-identically."""
    out_a = tmp_path / "a.json"
    out_b = tmp_path / "b.json"
    argv = ["verify", "--identity", "convolution", "--trials", "10", "--seed", "21"]
    assert main(argv + ["--out", str(out_a)]) == 0
    assert main(argv + ["--out", str(out_b)]) == 0
    assert out_a.read_bytes() == out_b.read_bytes()


def test_fresh_seed_is_reported(capsys):
    """Without --seed the tool draws one and echoes it."""
    rc = main(["group", "--moduli", "2"])
    assert rc == 0
    text = capsys.readouterr().out
    assert text.startswith("seed ")
    assert int(text.splitlines()[0].split()[1]) >= 0


def test_resource_cap_exit_three(capsys):
    """State allocation beyond the dimension cap maps to exit code three."""
    rc = main(
        [
            "verify",
            "--identity",
            "qft-unitary",
            "--groups",
            "2x2x2x2x2x2x2x2x2x2x2x2x2x2x2x2x2",
            "--trials",
            "1",
            "--seed",
            "1",
        ]
    )
    assert rc == 3
