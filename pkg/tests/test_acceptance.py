"""Acceptance gate: one pass/fail line per criterion, strict tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
summary lines alongside the usual pytest output.
"""

import dataclasses
import math
import time

import numpy as np
import pytest

from obstacle_bvp.basis import eval_basis, find_roots, monomial, BasisFunction
from obstacle_bvp.exact import RankDeficientError, eval_solution, solve_exact
from obstacle_bvp.examples import get_example, reference_values
from obstacle_bvp.oracle import shooting_solve
from obstacle_bvp.verify import (compare_solutions, condition_report,
                                 continuity_report, pin_anchors,
                                 residual_report)

E = math.e
PI = math.pi


def _report(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"[acceptance] {name}: {status}{suffix}")
    assert ok, f"{name} failed: {detail}"


def _constant(sol, piece, render):
    for k, label, value in sol.labeled_constants():
        if k == piece and label == render:
            return value
    raise AssertionError(f"no constant labelled {render!r} on piece {piece}")


class TestAcceptance:
    def test_criterion_1_piecewise_linear_exponential(self):
        start = time.perf_counter()
        entry = get_example("3.1.1")
        sol = solve_exact(entry.bvp)
        slope = _constant(sol, 0, "x")
        u0 = eval_solution(sol, entry.bvp, 0.0)
        elapsed = time.perf_counter() - start
        slope_ref = 2.0 * (E - 1.0) / (1.0 + 3.0 * E)
        u0_ref = 1.0 - 4.0 * math.sqrt(E) / (1.0 + 3.0 * E)
        err = max(abs(slope - slope_ref), abs(u0 - u0_ref))
        _report("1 constant reproduction, three-piece exponential",
                err <= 1e-9 and elapsed < 1.0,
                f"max deviation {err:.2e}, {elapsed:.3f}s")

    def test_criterion_2_trig_domain_constants(self):
        start = time.perf_counter()
        entry = get_example("3.1.4")
        sol = solve_exact(entry.bvp)
        a1 = _constant(sol, 0, "x")
        a2 = _constant(sol, 1, "exp(x)")
        a3 = _constant(sol, 1, "exp(-x)")
        a4 = _constant(sol, 2, "1")
        elapsed = time.perf_counter() - start
        refs = dict(entry.reference_constants)
        err = max(abs(a1 - refs["a1"]), abs(a2 - refs["a2"]),
                  abs(a3 - refs["a3"]), abs(a4 - refs["a4"]))
        _report("2 constant reproduction, domain (0, pi)",
                err <= 1e-9 and elapsed < 1.0,
                f"max deviation {err:.2e}, {elapsed:.3f}s")

    def test_criterion_3_polynomial_forcing_grid(self):
        entry = get_example("3.1.2")
        sol = solve_exact(entry.bvp)
        xs = np.linspace(0.0, 1.0, 101)
        refs = reference_values("3.1.2", xs)
        got = np.array([eval_solution(sol, entry.bvp, float(x)) for x in xs])
        err = float(np.abs(got - refs).max())
        _report("3 grid reproduction, linear forcing", err <= 1e-9,
                f"max grid deviation {err:.2e}")

    def test_criterion_4_oracle_equivalence(self):
        ids = ("3.1.1", "3.1.2", "3.1.3", "3.1.4",
               "3.1.6", "3.1.7", "3.1.8", "eq11")
        start = time.perf_counter()
        worst = 0.0
        for ex_id in ids:
            entry = get_example(ex_id)
            sol = solve_exact(entry.bvp)
            pinless = dataclasses.replace(entry.bvp, pins=())
            numeric = shooting_solve(pinless, 1e-3,
                                     anchors=pin_anchors(sol, entry.bvp))
            worst = max(worst, compare_solutions(sol, entry.bvp, numeric, 2001))
        elapsed = time.perf_counter() - start
        _report("4 oracle equivalence over registry",
                worst <= 1e-6 and elapsed < 10.0,
                f"max delta {worst:.2e}, {elapsed:.1f}s")

    def test_criterion_5_invariant_suite(self):
        start = time.perf_counter()
        worst_res = worst_jump = worst_cond = 0.0
        for ex_id in ("3.1.1", "3.1.2", "3.1.3", "3.1.4", "3.1.5",
                      "3.1.6", "3.1.7", "3.1.8", "eq11"):
            entry = get_example(ex_id)
            sol = solve_exact(entry.bvp)
            worst_res = max(worst_res, max(residual_report(sol, entry.bvp)))
            for jump in continuity_report(sol, entry.bvp):
                if jump.enforced:
                    worst_jump = max(worst_jump, jump.jump)
            worst_cond = max(worst_cond, max(condition_report(sol, entry.bvp)))

        rng = np.random.default_rng(2024)
        worst_fd = 0.0
        for _ in range(500):
            kind = rng.choice(["PolyExp", "ExpCos", "ExpSin"])
            k = int(rng.integers(0, 4))
            alpha = float(rng.uniform(-3, 3))
            if kind == "PolyExp":
                fn = BasisFunction(kind, k, alpha)
            else:
                fn = BasisFunction(kind, k, alpha, float(rng.uniform(0.1, 3)))
            x = float(rng.uniform(-1.0, PI))
            order = int(rng.integers(0, 4))
            h = 1e-5
            fd = (eval_basis(fn, x + h, order)
                  - eval_basis(fn, x - h, order)) / (2 * h)
            exact = eval_basis(fn, x, order + 1)
            worst_fd = max(worst_fd,
                           abs(exact - fd) / (1.0 + abs(exact)))

        worst_poly = 0.0
        for _ in range(500):
            n = int(rng.integers(2, 5))
            coeffs = np.append(rng.uniform(-10, 10, n), 1.0)
            poly = np.array([1.0 + 0j])
            for root in find_roots(coeffs):
                for _ in range(root.multiplicity):
                    poly = np.convolve(poly, [-root.value, 1.0])
            worst_poly = max(worst_poly,
                             float(np.abs(poly.real - coeffs).max()),
                             float(np.abs(poly.imag).max()))
        elapsed = time.perf_counter() - start
        ok = (worst_res <= 1e-8 and worst_jump <= 1e-9 and worst_cond <= 1e-9
              and worst_fd <= 1e-5 and worst_poly <= 1e-8 and elapsed < 30.0)
        _report("5 invariant suite", ok,
                f"residual {worst_res:.2e}, jump {worst_jump:.2e}, "
                f"condition {worst_cond:.2e}, fd {worst_fd:.2e}, "
                f"roots {worst_poly:.2e}, {elapsed:.1f}s")

    def test_criterion_6_rank_diagnostics(self):
        entry = get_example("3.1.6")
        pinless = dataclasses.replace(entry.bvp, pins=())
        caught = None
        try:
            solve_exact(pinless)
        except RankDeficientError as exc:
            caught = exc
        deficient_ok = (caught is not None and caught.nullity >= 1
                        and len(caught.free_columns) >= 1)
        sol = solve_exact(entry.bvp)
        pinned_ok = sol.rank_report.nullity == 0
        _report("6 rank diagnostics with and without pin",
                deficient_ok and pinned_ok,
                f"unpinned nullity {getattr(caught, 'nullity', None)}, "
                f"free columns {getattr(caught, 'free_columns', ())}, "
                f"pinned nullity {sol.rank_report.nullity}")

    def test_criterion_7_oracle_convergence_order(self):
        entry = get_example("3.1.1")
        sol = solve_exact(entry.bvp)
        coarse = compare_solutions(sol, entry.bvp,
                                   shooting_solve(entry.bvp, 0.05), 501)
        fine = compare_solutions(sol, entry.bvp,
                                 shooting_solve(entry.bvp, 0.025), 501)
        factor = coarse / fine
        _report("7 fourth-order oracle convergence", factor >= 12.0,
                f"error reduction factor {factor:.1f}")
