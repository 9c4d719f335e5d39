import json
import math
import pathlib

import pytest

import hjvisc

PROBLEMS = pathlib.Path(__file__).resolve().parents[2] / "problems"


def band():
    return hjvisc.PiecewiseFn({"domain": [0, 1], "pieces": [{"lower": [0, 1], "upper": [1, 1]}]})


def test_shifted_band_is_an_interval_solution():
    z = band()
    assert z(0.25) == (0.25, 1.25)
    assert hjvisc.is_s_continuous(z)
    assert not hjvisc.is_h_continuous(z)
    report = hjvisc.verify_interval_solution(z, "p - 1")
    assert report["verdict"] is True


def test_spike_subsolution_reports_truncation():
    spike = hjvisc.PiecewiseFn.step(0, 1, 0.5, 0, 0, (1, 1))
    report = hjvisc.verify_subsolution(spike, "-u * p^2")
    assert report["verdict"] is True
    assert report["truncations"]


def test_completion_and_lattice():
    step = hjvisc.PiecewiseFn.step(0, 1, 0.5, 0, 1, (0, 1))
    identity = hjvisc.PiecewiseFn.affine(0, 1, 0, 1)
    sup = hjvisc.lattice_sup([identity, step])
    assert hjvisc.is_h_continuous(sup)
    assert hjvisc.leq(identity, sup) and hjvisc.leq(step, sup)
    assert sup(0.5) == (0.5, 1.0)
    assert hjvisc.equal(hjvisc.graph_completion(sup), sup)
    assert hjvisc.PiecewiseFn(sup.to_dict()) == sup


def test_distance():
    zero = hjvisc.PiecewiseFn.constant(0, 1, 0, 0)
    one = hjvisc.PiecewiseFn.constant(0, 1, 1, 1)
    value, bound = hjvisc.hausdorff_distance(zero, one)
    assert value == 1.0 and bound == pytest.approx(1.0)
    with pytest.raises(ValueError):
        hjvisc.hausdorff_distance(zero, one, "taxicab")


def test_hamiltonian():
    assert hjvisc.evaluate("-u * p^2", 0.5, 1, 3) == -9.0
    assert hjvisc.canonical("(p) - (1)") == "p - 1"
    with pytest.raises(hjvisc.ParseError):
        hjvisc.evaluate("p +", 0, 0, 0)
    with pytest.raises(hjvisc.EvalError):
        hjvisc.evaluate("1 / p", 0, 0, 0)


def test_solve_eikonal():
    zero = hjvisc.PiecewiseFn.constant(0, 1, 0, 0)
    tent = hjvisc.PiecewiseFn.polyline([0, 0.5, 1], [0, 0.5, 0])
    out = hjvisc.solve("abs(p) - 1", zero, tent, 51)
    assert out["trace"]["termination"] == "converged"
    values = out["u"]["values"]
    h = 1 / 50
    for i, v in enumerate(values):
        lo, hi = v if isinstance(v, list) else (v, v)
        assert abs(hi - min(i * h, 1 - i * h)) <= 2 * h
    assert hjvisc.solve("abs(p) - 1", zero, tent, 101, max_iters=3)["u"] is None


def test_run_problem_document():
    doc = json.loads((PROBLEMS / "shifted_band.json").read_text())
    out = hjvisc.run("verify-solution", doc, seed=3)
    assert out["code"] == 0
    assert out["result"]["seed"] == 3
    assert "PASS" in out["report"]


def test_bad_document():
    with pytest.raises(hjvisc.InputError):
        hjvisc.PiecewiseFn({"domain": [1, 0], "pieces": []})
    assert math.isfinite(band()(0.5)[1])
