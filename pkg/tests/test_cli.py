import io
import json
import subprocess
import sys

import numpy as np
import pytest

import oracles
from entsplit.cli import REPORT_FIELDS, run
from entsplit.errors import ProblemFileError
from entsplit.problem import load_problem, problem_from_dict, problem_to_dict, save_problem
from entsplit.splitting import FIXTURE_IDS, fixture


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, _ = call(*argv, "--json")
    rep = json.loads(out)
    assert set(rep) == REPORT_FIELDS[rep["command"]]
    assert rep["exit_code"] == code
    return code, rep


def enc(v):
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


PAIRS_2X3 = [
    {"01": 1, "10": 1}, {"00": 1, "12": 1}, {"02": 1, "11": 1},
    {"00": 1, "12": -1}, {"01": 1, "10": -1}, {"02": 1, "11": -1},
]


def pairs_problem() -> dict:
    vecs = [oracles.combo((2, 3), t) for t in PAIRS_2X3]
    return {
        "dims": [2, 3],
        "subspaces": [
            {"label": f"rho_{k + 1}", "vectors": [enc(vecs[2 * k]), enc(vecs[2 * k + 1])]} for k in range(3)
        ],
        "settings": {"seed": 4, "samples": 50},
    }


# ---------------------------------------------------------------------------
# problem files


def test_load_pairs_matches_fixture(tmp_path):
    path = tmp_path / "pairs.json"
    path.write_text(json.dumps(pairs_problem()))
    prob = load_problem(path)
    for a, b in zip(prob.splitting.subspaces, fixture("EX2_2x3").subspaces):
        np.testing.assert_allclose(a.projector, b.projector, atol=1e-9)
    assert prob.settings == {"seed": 4, "samples": 50}
    assert prob.search_config().seed == 4
    assert prob.covers_space


def test_dimension_mismatch_names_label():
    data = pairs_problem()
    data["subspaces"][1]["vectors"][0] = data["subspaces"][1]["vectors"][0][:5]
    with pytest.raises(ProblemFileError, match="rho_2"):
        problem_from_dict(data)


def test_duplicate_vectors_rank_deficiency():
    data = pairs_problem()
    data["subspaces"][2]["vectors"][1] = data["subspaces"][2]["vectors"][0]
    with pytest.raises(ProblemFileError, match="rank deficiency.*rho_3"):
        problem_from_dict(data)


def test_parse_error_has_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "dims": [2, 3],\n  "subspaces": [\n}\n')
    with pytest.raises(ProblemFileError, match="line 4"):
        load_problem(path)


@pytest.mark.parametrize("mutate, pattern", [
    (lambda d: d.update(dims="2x3"), "dims"),
    (lambda d: d.update(subspaces=[]), "subspaces"),
    (lambda d: d["subspaces"][0]["vectors"][0].__setitem__(0, [1, 2, 3]), r"\[re, im\]"),
    (lambda d: d["subspaces"][0].update(weights=[1.0]), "weights"),
    (lambda d: d["settings"].update(colour="blue"), "unknown settings"),
])
def test_schema_errors(mutate, pattern):
    data = pairs_problem()
    mutate(data)
    with pytest.raises(ProblemFileError, match=pattern):
        problem_from_dict(data)


@pytest.mark.parametrize("fid", FIXTURE_IDS)
def test_round_trip(tmp_path, fid):
    sp = fixture(fid)
    p1 = tmp_path / "a.json"
    save_problem(sp, p1)
    first = load_problem(p1)
    p2 = tmp_path / "b.json"
    save_problem(first.splitting, p2)
    second = load_problem(p2)
    for a, b, c in zip(sp.subspaces, first.splitting.subspaces, second.splitting.subspaces):
        assert np.max(np.abs(a.projector - b.projector)) <= 1e-12
        assert np.max(np.abs(b.projector - c.projector)) <= 1e-12
    assert first.splitting.labels == sp.labels


def test_round_trip_without_spanning_vectors():
    sp = fixture("EX5_3x3")
    data = problem_to_dict(sp)
    # feed orthonormal bases instead of the integer spanning vectors
    for entry, S in zip(data["subspaces"], sp.subspaces):
        entry["vectors"] = [enc(S.basis[:, j]) for j in range(S.dim)]
    back = problem_from_dict(data)
    for a, b in zip(sp.subspaces, back.splitting.subspaces):
        assert np.max(np.abs(a.projector - b.projector)) <= 1e-12


# ---------------------------------------------------------------------------
# commands


def test_certify_ex2_message():
    code, out, _ = call("certify", "--fixture", "EX2_2x3", "--samples", "200")
    assert code == 0
    assert "Property 2 holds (3 outcomes, profile 2,2,2)" in out


def test_eliminate_ex5_dead_outcomes():
    code, out, _ = call("eliminate", "--fixture", "EX5_3x3", "--basis", "computational")
    assert code == 0
    assert "dead outcomes: |00> |11>" in out
    code, rep = call_json("eliminate", "--fixture", "EX5_3x3", "--basis", "computational")
    assert rep["dead_outcomes"] == ["|00>", "|11>"]


def test_identify_ex1_prints_witnesses():
    code, out, _ = call("identify", "--fixture", "EX1_2x2")
    assert code == 1
    assert out.count("witness") == 2
    code, rep = call_json("identify", "--fixture", "EX1_2x2")
    assert all(s["witness"] is not None and len(s["witness"]) == 4 for s in rep["states"])
    assert all(all(len(z) == 2 for z in s["witness"]) for s in rep["states"])


@pytest.mark.parametrize("argv, code", [
    (["verify", "--fixture", "EX2_2x3"], 0),
    (["verify", "--fixture", "EX1_2x2"], 1),
    (["verify", "--fixture", "EX6_4QUBIT"], 0),
    (["detect", "--fixture", "RHOPRIME_2x3"], 1),
    (["detect", "--fixture", "RHOPRIME_2x3", "--subspace", "rho_3"], 0),
    (["identify", "--fixture", "EX2_2x3"], 0),
    (["classify", "--fixture", "RHOPRIME_2x3"], 0),
    (["measure", "--fixture", "EX1_2x2", "--input", "01"], 1),
    (["measure", "--fixture", "EX1_2x2", "--input", "00"], 0),
    (["measure", "--fixture", "EX6_4QUBIT", "--input", "random"], 0),
    (["certify", "--fixture", "EX1_2x2", "--samples", "10"], 1),
    (["certify", "--fixture", "EX6_4QUBIT", "--samples", "20"], 0),
    (["generate", "--dims", "2", "4"], 0),
    (["search", "--dims", "2", "4", "--profile", "3", "3", "2"], 0),
    (["search", "--dims", "2", "4", "--profile", "4", "4"], 1),
    (["search", "--dims", "3", "3", "--profile", "3", "3", "3", "--budget", "1"], 2),
    (["fixtures"], 0),
    (["regroup", "--fixture", "EX4_2x4_MIN", "--to", "2", "2", "2"], 0),
    (["regroup", "--fixture", "EX4_2x4_MIN", "--to", "2", "2", "2", "--mode", "ges"], 1),
    (["npt", "--fixture", "EX2_2x3", "--samples", "100"], 0),
])
def test_exit_codes_and_schema(argv, code):
    got, rep = call_json(*argv)
    assert got == code


@pytest.mark.parametrize("argv", [
    ["bogus"],
    [],
    ["verify"],
    ["verify", "--fixture", "NOPE"],
    ["verify", "--fixture", "EX2_2x3", "--mode", "ges"],
    ["verify", "--fixture", "EX2_2x3", "--problem", "x.json"],
    ["verify", "--problem", "/nonexistent/file.json"],
    ["verify", "--fixture", "EX2_2x3", "--tol-product", "1e-3"],
    ["measure", "--fixture", "EX1_2x2", "--input", "07"],
    ["regroup", "--fixture", "EX2_2x3", "--to", "2", "2"],
    ["certify", "--fixture", "EX2_2x3", "--samples", "many"],
    ["generate", "--dims", "2", "3"],
])
def test_usage_errors_exit_3(argv):
    code, out, err = call(*argv)
    assert code == 3
    assert out == ""


def test_generate_and_search_write_problems(tmp_path):
    out = tmp_path / "bell.json"
    assert call("generate", "--dims", "4", "4", "--out", str(out))[0] == 0
    assert call("verify", "--problem", str(out))[0] == 0
    found = tmp_path / "s.json"
    assert call("search", "--dims", "3", "3", "--profile", "4", "3", "2", "--out", str(found))[0] == 0
    code, rep = call_json("verify", "--problem", str(found))
    assert code == 0 and sorted(rep["profile"], reverse=True) == [4, 3, 2]


def test_settings_resolution(tmp_path):
    path = tmp_path / "pairs.json"
    path.write_text(json.dumps(pairs_problem()))
    _, rep = call_json("verify", "--problem", str(path))
    assert rep["settings"]["seed"] == 4 and rep["settings"]["samples"] == 50
    _, rep = call_json("verify", "--problem", str(path), "--seed", "9", "--restarts", "8", "--gap", "1e-5")
    assert rep["settings"]["seed"] == 9 and rep["settings"]["restarts"] == 8
    assert rep["settings"]["entangled_gap"] == 1e-5


@pytest.mark.parametrize("argv", [
    ["certify", "--fixture", "EX2_2x3", "--samples", "100", "--seed", "3"],
    ["identify", "--fixture", "RHOPRIME_2x3"],
    ["measure", "--fixture", "EX5_3x3", "--input", "random", "--seed", "5"],
    ["npt", "--fixture", "EX5_3x3", "--samples", "50"],
    ["search", "--dims", "2", "4", "--profile", "3", "3", "2"],
])
def test_json_byte_identical(argv):
    _, a, _ = call(*argv, "--json")
    _, b, _ = call(*argv, "--json")
    assert a == b


def test_console_script_subprocess():
    res = subprocess.run(
        [sys.executable, "-m", "entsplit.cli", "certify", "--fixture", "EX2_2x3", "--samples", "10"],
        capture_output=True, text=True,
    )
    assert res.returncode == 0
    assert "Property 2 holds (3 outcomes, profile 2,2,2)" in res.stdout
    res = subprocess.run([sys.executable, "-m", "entsplit.cli", "frobnicate"], capture_output=True, text=True)
    assert res.returncode == 3
