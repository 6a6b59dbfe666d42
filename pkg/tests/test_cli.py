import json
from fractions import Fraction

from slittori.cli import load_spec, main, spec_to_dict
from slittori.criterion import verify
from slittori.rational import NkRule, RationalParam, direction_stream


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_action_word(capsys):
    code, out, _ = run(capsys, "action", "--z", "0,1/4", "--word", "h+:3")
    assert code == 0
    doc = json.loads(out)
    assert doc["final_str"] == "(1/4, 1/4)"
    assert doc["action"] == [1, 1, 0, 1]
    assert not doc["fixes_beta"]


def test_action_fixing_word(capsys):
    code, out, _ = run(capsys, "action", "--z", "0,1/4", "--gz-lambda", "1/4")
    assert code == 0
    doc = json.loads(out)
    assert doc["final_str"] == "(0, 1/4)"
    assert doc["is_identity"]


def test_action_excluded_point_fails(capsys):
    code, out, err = run(capsys, "action", "--z", "0,0", "--word", "h+:1")
    assert code == 2
    assert "error" in json.loads(err)


def test_build_verify_roundtrip(tmp_path, capsys):
    spec_path = tmp_path / "d.json"
    code, out, _ = run(
        capsys, "build", "--lambda", "1/4", "--nk", "const:1", "--blocks", "3",
        "-o", str(spec_path),
    )
    assert code == 0
    doc = json.loads(spec_path.read_text())
    assert doc["blocks"][0]["digits"] == [5, 1, 1, 7, 1, 1, 2, 1]

    code, out, _ = run(capsys, "verify", str(spec_path), "--horizon", "3")
    assert code == 0
    report = json.loads(out)
    assert report["overall"] is True
    assert report["precision_bits"] >= 256

    # file-loaded verification equals in-memory verification
    spec_mem = direction_stream(
        RationalParam.from_barrier_length(Fraction(1, 4)), NkRule("const", (1,))
    )
    assert verify(load_spec(str(spec_path)), 3).as_dict() == verify(spec_mem, 3).as_dict()


def test_build_deterministic_bytes(tmp_path, capsys):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    for p in (p1, p2):
        code, *_ = run(
            capsys, "build", "--lambda", "0:1:4:2", "--blocks", "2", "-o", str(p)
        )
        assert code == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_build_irrational_and_verify(tmp_path, capsys):
    spec_path = tmp_path / "irr.json"
    code, *_ = run(
        capsys, "build", "--lambda", "0:1:4:2", "--blocks", "2", "-o", str(spec_path)
    )
    assert code == 0
    code, out, _ = run(capsys, "verify", str(spec_path), "--horizon", "2")
    assert code == 0
    assert json.loads(out)["overall"] is True


def test_verify_failing_spec_exits_one(tmp_path, capsys):
    spec_path = tmp_path / "d.json"
    run(capsys, "build", "--z-rational", "1,1,2", "--nk", "const:4", "-o", str(spec_path))
    doc = json.loads(spec_path.read_text())
    doc["digit_prefix"][8] = 3  # corrupt a cached digit
    spec_path.write_text(json.dumps(doc))
    code, out, err = run(capsys, "verify", str(spec_path))
    assert code == 2  # deterministic rebuild disagrees with the file
    assert "disagree" in json.loads(err)["error"]


def test_dimension_command(tmp_path, capsys):
    out_path = tmp_path / "cert.json"
    code, out, _ = run(
        capsys, "dimension", "--block", "1,1,1", "--prog", "1,0", "-o", str(out_path)
    )
    assert code == 0
    cert = json.loads(out_path.read_text())
    assert cert["route"] == "direct"
    assert cert["achieved_su"] > 0.5


def test_simulate_command(tmp_path, capsys):
    spec_path = tmp_path / "d.json"
    run(capsys, "build", "--lambda", "1/4", "--nk", "const:1", "-o", str(spec_path))
    csv_path = tmp_path / "stats.csv"
    code, out, _ = run(
        capsys, "simulate", str(spec_path), "--T", "2000", "--grid", "8",
        "--deck", "16", "-o", str(csv_path),
    )
    assert code == 0
    rows = csv_path.read_text().strip().split("\n")
    assert len(rows) == 2 * 64 + 33
    summary = json.loads(out)
    assert summary["samples"] > 0
    assert summary["precision_bits"] == 32
    assert summary["deck_rule"]["deck_weights"] == [1, -1]


def test_simulate_slope_flag(capsys):
    code, out, _ = run(
        capsys, "simulate", "--slope", "1/3", "--z", "0,1/4", "--T", "500",
        "--start", "0,-1/2,1/8,0",
    )
    assert code == 0
    assert json.loads(out)["slope"] == [1, 3]


def test_billiard_command(capsys):
    code, out, _ = run(
        capsys, "billiard", "--lambda", "1/4", "--x", "3/10", "--y", "1/10",
        "--vx=-7/10", "--vy", "2/5",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["round_trip_identical"] is True
    assert doc["cover"]["sheet"] == 1


def test_billiard_theta_degrees(capsys):
    code, out, _ = run(
        capsys, "billiard", "--lambda", "1/4", "--x", "3/10", "--y", "1/10",
        "--theta-deg", "30",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["round_trip_identical"] is True
    assert doc["cover"]["sheet"] == 0


def test_spec_file_shape(tmp_path, capsys):
    spec = direction_stream(
        RationalParam.from_barrier_length(Fraction(1, 6)), NkRule("arith", (6, 0))
    )
    doc = spec_to_dict(spec, 2)
    assert doc["format_version"] == 1
    assert doc["provenance"]["nk_rule"] == {"kind": "arith", "params": [6, 0]}
    assert doc["digit_prefix"][:8] == [8, 1, 1, 11, 1, 1, 3, 6]
    assert doc["y_bounds"][0] == [1, 0, 6, 0]
