"""Exit codes and JSON payloads of the command line front end."""

import json
from fractions import Fraction as F

import pytest

from poslab import boundary as bd
from poslab import circles as ci
from poslab import flags as fl
from poslab import linalg as la
from poslab import semigroup as sg
from poslab import tripods as tp
from poslab.cli import main

VER3 = ci.veronese_circle(3)


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def flag_file(tmp_path, name, flag):
    return write(tmp_path, name, fl.flag_to_json(flag))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


# --- suite ----------------------------------------------------------------


def test_suite_vacuous_pass(capsys):
    code, doc = run(capsys, "suite", "all", "--trials", "0")
    assert code == 0
    assert doc["schema"] == "poslab/1"
    assert doc["pass"] is True
    assert doc["config"]["trials"] == 0
    assert all(row["count"] == 0 for row in doc["properties"])


def test_suite_report_is_byte_deterministic(tmp_path):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert main(["suite", "bruhat", "--trials", "5", "--out", a]) == 0
    assert main(["suite", "bruhat", "--trials", "5", "--out", b]) == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    c = str(tmp_path / "c.json")
    assert main(["suite", "bruhat", "--trials", "5", "--seed", "7",
                 "--out", c]) == 0
    assert (tmp_path / "a.json").read_bytes() != (tmp_path / "c.json").read_bytes()


def test_suite_out_leaves_stdout_empty(tmp_path, capsys):
    out = str(tmp_path / "r.json")
    assert main(["suite", "combinatorial", "--trials", "0", "--out", out]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads((tmp_path / "r.json").read_text())["pass"] is True


def test_suite_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("POSLAB_SEED", "7")
    code, doc = run(capsys, "suite", "all", "--trials", "0")
    assert code == 0 and doc["config"]["seed"] == 7
    # an explicit flag wins over the environment
    code, doc = run(capsys, "suite", "all", "--trials", "0", "--seed", "3")
    assert doc["config"]["seed"] == 3


def test_suite_rejects_bad_environment_seed(capsys, monkeypatch):
    monkeypatch.setenv("POSLAB_SEED", "many")
    assert main(["suite", "all", "--trials", "0"]) == 2


def test_suite_unknown_name_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["suite", "nope"])
    assert exc.value.code == 2


def test_suite_invalid_config_exits_2(capsys):
    assert main(["suite", "all", "--n", "9"]) == 2
    assert "n must be" in capsys.readouterr().err


def test_suite_workers_flag_warns_and_runs(capsys):
    code = main(["suite", "bruhat", "--trials", "0", "--workers", "4"])
    captured = capsys.readouterr()
    assert code == 0
    assert "sequential" in captured.err


# --- cell decomposition ---------------------------------------------------


def test_bruhat_cell_of_antidiagonal(tmp_path, capsys):
    m = write(tmp_path, "m.json",
              [["0", "0", "1"], ["0", "1", "0"], ["1", "0", "0"]])
    code, doc = run(capsys, "bruhat-cell", "--matrix", m)
    assert code == 0
    assert doc["permutation"] == [3, 2, 1]
    assert doc["length"] == 3


def test_invw_check_serializes_witnesses(capsys):
    code, doc = run(capsys, "invw-check", "--n", "4")
    assert code == 0 and doc["pass"] is True
    assert doc["checked"] == 9 and doc["failures"] == []
    assert all(isinstance(k, str) for k in doc["witnesses"])
    assert doc["witnesses"]["2,1,3,4"] == [1, 2, 3, 4]


def test_transversality_scan_unipotent_dominates(tmp_path, capsys):
    gens = write(tmp_path, "g.json", [
        [["1", "1", "0"], ["0", "1", "0"], ["0", "0", "1"]],
        [["1", "0", "0"], ["0", "1", "1"], ["0", "0", "1"]],
    ])
    code, doc = run(capsys, "transversality-scan", "--gens", gens,
                    "--depth", "3")
    assert code == 0
    assert doc["witness_cell"] is None
    assert doc["dominating_cell"] == [1, 2, 3]


def test_transversality_scan_semisimple_witness(tmp_path, capsys):
    m = fl.matrix_from_json([["1", "1", "0"], ["1", "2", "1"], ["0", "1", "2"]])
    d = fl.matrix_from_json([["2", "0", "0"], ["0", "1", "0"],
                             ["0", "0", "1/2"]])
    g = fl.matrix_to_json(la.mat_mul(la.mat_mul(m, d), la.inverse(m)))
    gens = write(tmp_path, "g.json", [g])
    code, doc = run(capsys, "transversality-scan", "--gens", gens,
                    "--depth", "2")
    assert code == 0
    assert doc["witness_cell"] == [3, 2, 1]
    assert doc["dominating_cell"] is None


# --- diamonds and configurations ------------------------------------------


def test_diamond_membership_certificate(tmp_path, capsys):
    a = flag_file(tmp_path, "a.json", VER3.point(F(0)))
    b = flag_file(tmp_path, "b.json", VER3.point(F(1)))
    c = flag_file(tmp_path, "c.json", VER3.point(F(1, 2)))
    x = flag_file(tmp_path, "x.json", VER3.point(F(2, 3)))
    code, doc = run(capsys, "diamond-membership", "--a", a, "--b", b,
                    "--c", c, "--x", x)
    assert code == 0
    assert doc["certificate"]["side"] in ("plus", "minus")
    assert set(doc["certificate"]["sign_class"]) <= {1, -1}
    lo = F(doc["extremal_minors"]["min"])
    hi = F(doc["extremal_minors"]["max"])
    assert lo <= hi and lo != 0
    assert doc["contains_x"] is True


def test_nesting_check_passes(capsys):
    code, doc = run(capsys, "nesting-check", "--samples", "5", "--seed", "1")
    assert code == 0 and doc["pass"] is True


def test_check_triple_with_certificates(tmp_path, capsys):
    files = [flag_file(tmp_path, f"{i}.json", VER3.point(F(i)))
             for i in range(3)]
    code, doc = run(capsys, "check-triple", "--a", files[0], "--b", files[1],
                    "--c", files[2])
    assert code == 0 and doc["positive"] is True
    assert len(doc["certificates"]) == 3


def test_check_triple_degenerate_is_negative(tmp_path, capsys):
    a = flag_file(tmp_path, "a.json", VER3.point(F(0)))
    code, doc = run(capsys, "check-triple", "--a", a, "--b", a, "--c", a)
    assert code == 0
    assert doc["positive"] is False and "certificates" not in doc


def test_check_quad_order_sensitivity(tmp_path, capsys):
    pts = [flag_file(tmp_path, f"{i}.json", VER3.point(s))
           for i, s in enumerate((F(0), F(1, 2), F(1), F(3)))]
    code, doc = run(capsys, "check-quad", "--a", pts[0], "--x", pts[1],
                    "--b", pts[2], "--y", pts[3])
    assert code == 0 and doc["positive"] is True
    # swapping the interleaved pair breaks the cyclic order
    code, doc = run(capsys, "check-quad", "--a", pts[0], "--x", pts[2],
                    "--b", pts[1], "--y", pts[3])
    assert code == 0 and doc["positive"] is False


def test_check_config_five_points(tmp_path, capsys):
    payload = [fl.flag_to_json(VER3.point(F(k))) for k in range(5)]
    flags = write(tmp_path, "flags.json", payload)
    code, doc = run(capsys, "check-config", "--flags", flags)
    assert code == 0
    assert doc == {"schema": "poslab/1", "positive": True, "size": 5}


# --- circles ----------------------------------------------------------------


def test_circle_points_roundtrip(capsys):
    code, doc = run(capsys, "circle", "--n", "2", "--points", "inf,0,1")
    assert code == 0 and len(doc["flags"]) == 3
    ver2 = ci.veronese_circle(2)
    got = [fl.flag_from_json(obj) for obj in doc["flags"]]
    for flag, s in zip(got, (None, F(0), F(1))):
        assert fl.flag_distance(flag, ver2.point(s)) == 0


def test_circle_config_check(capsys):
    code, doc = run(capsys, "circle-config-check", "--n", "2", "--k", "3")
    assert code == 0
    assert doc["checked"] == 56 and doc["pass"] is True


# --- tripods ----------------------------------------------------------------


def test_tripod_distance_interior_points(tmp_path, capsys):
    import random

    tau = tp.standard_tripod(3)
    p, q = sg.sample_diamond(tau.diamond, random.Random(7), 2)
    pf = flag_file(tmp_path, "p.json", p)
    qf = flag_file(tmp_path, "q.json", q)
    code, doc = run(capsys, "tripod-distance", "--tripod", "0,1,inf",
                    "--p", pf, "--q", qf)
    assert code == 0
    assert doc["d_plus"] > 0 and doc["d_minus"] > 0
    assert max(doc["d_plus"], doc["d_minus"]) <= doc["chordal"] + 1e-9


def test_tripod_distance_outside_is_an_error(tmp_path, capsys):
    tau = tp.standard_tripod(3)
    p = flag_file(tmp_path, "p.json",
                  sg.sample_diamond(tau.diamond, __import__("random").Random(3), 1)[0])
    corner = flag_file(tmp_path, "c.json", tau.plus)
    code, doc = run(capsys, "tripod-distance", "--tripod", "0,1,inf",
                    "--p", p, "--q", corner)
    assert code == 1
    assert doc["error"] == "NotInDiamond"


def test_tripod_norm_vanishes_on_circle(tmp_path, capsys):
    triple = write(tmp_path, "t.json",
                   [fl.flag_to_json(VER3.point(s))
                    for s in (F(0), F(1, 2), F(1))])
    code, doc = run(capsys, "tripod-norm", "--triple", triple)
    assert code == 0
    assert doc["value"] <= 1e-6 and doc["converged"] is True


def test_tripod_norm_wrong_arity(tmp_path, capsys):
    triple = write(tmp_path, "t.json", [fl.flag_to_json(VER3.point(F(0)))])
    assert main(["tripod-norm", "--triple", triple]) == 2


def test_contraction_rates_decrease(tmp_path, capsys):
    gamma = write(tmp_path, "g.json", [["5/4", "3/4"], ["3/4", "5/4"]])
    code, doc = run(capsys, "contraction", "--gamma", gamma, "--m-max", "3")
    assert code == 0 and doc["contracting"] is True
    ks = doc["k"]
    assert all(b < a for a, b in zip(ks, ks[1:]))


# --- boundary ---------------------------------------------------------------


def test_schottky_then_anosov_report(tmp_path, capsys):
    out = str(tmp_path / "sch.json")
    assert main(["schottky", "--lambda", "3", "--n", "2", "--depth", "3",
                 "--out", out]) == 0
    doc = json.loads((tmp_path / "sch.json").read_text())
    assert len(doc["sample"]["entries"]) == 44
    rep = write(tmp_path, "rep.json", doc["rep"])
    code, report = run(capsys, "anosov-report", "--rep", rep, "--depth", "4")
    assert code == 0 and report["pass"] is True
    assert report["rate"] < -0.05


def test_extend_on_dense_sample(tmp_path, capsys):
    theta = F(1, 3)
    angles = {F(2, 5), F(-2, 5)}
    for j in range(1, 34):
        angles.add(F(1, 2) ** j / 4)
        angles.add(-(F(1, 2) ** j) / 4)
    pairs = [((theta + off) % 1, VER3.at(bd.point_at_turn((theta + off) % 1)))
             for off in sorted(angles)]
    sample = write(tmp_path, "s.json",
                   bd.sample_to_json(bd.cyclic_sample(pairs)))
    code, doc = run(capsys, "extend", "--sample", sample, "--theta", "1/3",
                    "--side", "left")
    assert code == 0 and doc["side"] == "left"
    got = fl.flag_from_json(doc["flag"])
    target = VER3.at(bd.point_at_turn(theta))
    assert fl.flag_distance(got, target) < 1e-8


def test_extend_sparse_sample_reports_error(tmp_path, capsys):
    rep = bd.schottky_rep(3, 2)
    sample = write(tmp_path, "s.json",
                   bd.sample_to_json(bd.schottky_boundary_map(rep, 3)))
    code, doc = run(capsys, "extend", "--sample", sample, "--theta", "1/20",
                    "--side", "left")
    assert code == 1
    assert doc["error"] == "NotCauchyAtDepth" and "residual" in doc["detail"]


# --- plumbing ---------------------------------------------------------------


def test_missing_file_exits_2(capsys):
    assert main(["bruhat-cell", "--matrix", "/no/such/file.json"]) == 2
    assert "file" in capsys.readouterr().err.lower()


def test_bad_rational_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["circle", "--n", "2", "--points", "0,zebra"])
    assert exc.value.code == 2
