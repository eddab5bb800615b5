"""Command-line surface: JSON output, exit codes, determinism, suites."""

import json

import pytest

from affinehecke import build_preset, datum_to_json
from affinehecke.cli import main

Q4_A1 = '{"s1": 4, "s0": 4}'
Q4_A2 = '{"s1": 4, "s2": 4, "s0": 4}'


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_trace_formal_box(capsys):
    code, out, _ = run(capsys, ["trace", "--datum", "A1-weight", "--box", "4"])
    assert code == 0
    assert out.endswith("\n")
    obj = json.loads(out)
    assert obj["all_equal"] is True
    assert obj["box"] == 4
    assert len(obj["records"]) == 9  # every lattice point of [-4, 4]
    by_x = {tuple(r["x"]): r for r in obj["records"]}
    for x, rec in by_x.items():
        assert rec["equal"] is True
        if not rec["in_negative_cone"]:
            assert rec["direct"]["terms"] == []
    # a known value: the trace at -2 is (q-1)^2/q = v^-2 - 2 + v^2
    rec = by_x[(-2,)]
    assert rec["direct"]["vars"] == ["v1"]
    assert rec["direct"]["terms"] == [
        {"den": 1, "exp": [-2], "num": 1},
        {"den": 1, "exp": [0], "num": -2},
        {"den": 1, "exp": [2], "num": 1},
    ]
    assert json.dumps(obj, sort_keys=True, indent=2) + "\n" == out


def test_trace_output_is_byte_identical_across_runs(capsys):
    argv = ["trace", "--datum", "A2", "--box", "2"]
    code1, out1, _ = run(capsys, argv)
    code2, out2, _ = run(capsys, argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_trace_respects_thread_cap(capsys, monkeypatch):
    argv = ["trace", "--datum", "A2", "--box", "2"]
    _, serial, _ = run(capsys, argv)
    monkeypatch.setenv("HECKE_TRACE_THREADS", "4")
    _, threaded, _ = run(capsys, argv)
    assert serial == threaded


def test_series_rank_one_closed_form(capsys):
    code, out, _ = run(
        capsys,
        [
            "series",
            "--datum", "A1-weight",
            "--labels", Q4_A1,
            "--mode", "rational",
            "--box", "6",
        ],
    )
    assert code == 0
    obj = json.loads(out)
    got = [(tuple(r["x"]), r["trace"], r["height"]) for r in obj["records"]]
    assert got == [
        ((0,), "1", "0"),
        ((-2,), "9/4", "1"),
        ((-4,), "153/16", "2"),
        ((-6,), "2457/64", "3"),
    ]


def test_series_formal_emits_polynomials(capsys):
    code, out, _ = run(capsys, ["series", "--datum", "A1-weight", "--box", "2"])
    assert code == 0
    obj = json.loads(out)
    assert obj["mode"] == "formal"
    assert [tuple(r["x"]) for r in obj["records"]] == [(0,), (-2,)]
    assert obj["records"][1]["trace"]["vars"] == ["v1"]


def test_spherical_rational_exact(capsys):
    code, out, _ = run(
        capsys,
        [
            "spherical",
            "--datum", "A2",
            "--labels", Q4_A2,
            "--t", "1/5",
            "--t", "2/7",
            "--box", "2",
        ],
    )
    assert code == 0
    obj = json.loads(out)
    recs = obj["records"]
    assert [tuple(r["x"]) for r in recs] == [(0, 0), (1, 1), (1, 2), (2, 1), (2, 2)]
    assert all(r["skipped"] is False for r in recs)
    assert all(r["diff"] == "0" for r in recs)
    assert [r["macdonald"] for r in recs] == [
        "1",
        "63236/3675",
        "426049/5145",
        "232847/3675",
        "1843339/6125",
    ]
    assert [r["macdonald"] for r in recs] == [r["direct"] for r in recs]


def test_spherical_complex_mode_small_diff(capsys):
    code, out, _ = run(
        capsys,
        [
            "spherical",
            "--datum", "A1-weight",
            "--labels", Q4_A1,
            "--mode", "complex",
            "--t", "0.31,0.1",
            "--box", "2",
        ],
    )
    assert code == 0
    obj = json.loads(out)
    for rec in obj["records"]:
        assert rec["skipped"] is False
        assert rec["diff"] < 1e-8  # absolute gaps are emitted as plain reals
        assert set(rec["macdonald"]) == {"im", "re"}


def test_spherical_seeded_point_when_t_missing(capsys):
    argv = [
        "spherical",
        "--datum", "A2",
        "--labels", Q4_A2,
        "--seed", "9",
        "--box", "1",
    ]
    code1, out1, _ = run(capsys, argv)
    code2, out2, _ = run(capsys, argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_spherical_refuses_formal_mode(capsys):
    code, _, err = run(
        capsys,
        ["spherical", "--datum", "A2", "--labels", Q4_A2, "--mode", "formal",
         "--box", "1"],
    )
    assert code == 2
    assert "refuses formal" in err
    # formal labels under the numeric default are equally unusable
    code, _, err = run(
        capsys,
        ["spherical", "--datum", "A2", "--labels", "formal", "--box", "1"],
    )
    assert code == 2
    assert "numeric" in err


def test_spherical_skips_singular_points(capsys):
    # t = 1 sits on every c-function pole: all records skip, exit is failure
    code, out, _ = run(
        capsys,
        [
            "spherical",
            "--datum", "A1-weight",
            "--labels", Q4_A1,
            "--t", "1",
            "--box", "2",
        ],
    )
    assert code == 1
    obj = json.loads(out)
    assert all(r["skipped"] for r in obj["records"])
    assert all("reason" in r for r in obj["records"])


def test_verify_battery_on_small_datum(capsys):
    code, out, _ = run(capsys, ["verify", "--datum", "A1-root", "--box", "2"])
    assert code == 0
    obj = json.loads(out)
    names = [s["suite"] for s in obj["suites"]]
    assert names == sorted(names) or len(names) >= 8
    assert all(s["pass"] for s in obj["suites"])
    assert all(s["cases"] > 0 for s in obj["suites"])


def test_verify_single_suite(capsys):
    code, out, _ = run(
        capsys,
        ["verify", "--datum", "BnCn(2)", "--suite", "quadratic", "--box", "2"],
    )
    assert code == 0
    obj = json.loads(out)
    assert [s["suite"] for s in obj["suites"]] == ["quadratic"]
    assert obj["suites"][0]["cases"] == 3
    assert obj["suites"][0]["failures"] == []


def test_verify_unknown_suite(capsys):
    code, _, err = run(
        capsys, ["verify", "--datum", "A2", "--suite", "nonsense"]
    )
    assert code == 2
    assert "error:" in err


def test_bad_labels_exit_usage(capsys):
    code, _, err = run(
        capsys,
        ["series", "--datum", "A1-weight", "--labels", '{"s1": "junk"}',
         "--mode", "rational", "--box", "2"],
    )
    assert code == 2
    assert "error:" in err


def test_numeric_mode_requires_numeric_labels(capsys):
    code, _, err = run(
        capsys,
        ["series", "--datum", "A1-weight", "--mode", "rational", "--box", "2"],
    )
    assert code == 2
    assert "numeric" in err


def test_unknown_datum_exit_usage(capsys):
    code, _, err = run(capsys, ["trace", "--datum", "E8", "--box", "2"])
    assert code == 2
    assert "error:" in err


def test_wrong_t_arity(capsys):
    code, _, err = run(
        capsys,
        ["spherical", "--datum", "A2", "--labels", Q4_A2, "--t", "1/5", "--box", "1"],
    )
    assert code == 2


def test_datum_from_file(tmp_path, capsys):
    path = tmp_path / "datum.json"
    path.write_text(datum_to_json(build_preset("A1-root")), encoding="utf-8")
    code, out, _ = run(capsys, ["trace", "--datum", str(path), "--box", "2"])
    assert code == 0
    obj = json.loads(out)
    assert obj["datum"] == "A1-root"
    assert obj["all_equal"] is True


def test_out_writes_identical_bytes(tmp_path, capsys):
    target = tmp_path / "report.json"
    argv = ["series", "--datum", "A1-weight", "--box", "3", "--out", str(target)]
    code, out, _ = run(capsys, argv)
    assert code == 0
    assert out == ""  # routed to the file instead
    text = target.read_text(encoding="utf-8")
    code2, out2, _ = run(capsys, ["series", "--datum", "A1-weight", "--box", "3"])
    assert code2 == 0
    assert text == out2


def test_labels_from_file(tmp_path, capsys):
    path = tmp_path / "labels.json"
    path.write_text(Q4_A1, encoding="utf-8")
    code, out, _ = run(
        capsys,
        ["series", "--datum", "A1-weight", "--labels", str(path),
         "--mode", "rational", "--box", "2"],
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["records"][1]["trace"] == "9/4"
