"""Acceptance suite: one test per criterion, each printing a pass line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines on the terminal.
"""
import math
import time

import numpy as np
import pytest

from hyperqkd.cli import main
from hyperqkd.encoding import EncodingChoice, ideal_state
from hyperqkd.hbsa import outcome_distribution, per_dof_distribution
from hyperqkd.protocol import RunConfig, run_protocol
from hyperqkd.rates import RateParams, analytic_qber, rate_sweep
from hyperqkd.sifting import SiftAction, bob_correction
from hyperqkd.states import (
    BasisKind,
    BellIndex,
    HyperBellOutcome,
    tensor_joint,
)

RECT = BasisKind.RECTILINEAR
DIAG = BasisKind.DIAGONAL

BETA_85 = math.sqrt(0.85)
BETA_90 = math.sqrt(0.9)
THETA_15 = math.asin(math.sqrt(0.015))


def joint_for(alice, bob):
    return tensor_joint(ideal_state(EncodingChoice(tuple(alice))),
                        ideal_state(EncodingChoice(tuple(bob))))


def report(line):
    print(f"ACCEPTANCE {line}")


@pytest.fixture(scope="module")
def fig2_run():
    """One million rounds at beta^2 = 0.85, sin^2(theta) = 0.015, d = 0."""
    config = RunConfig.from_values(
        n_rounds=1_000_000, seed=20240811,
        beta=(BETA_85,) * 3, theta=(THETA_15,) * 3)
    start = time.perf_counter()
    stats = run_protocol(config)
    elapsed = time.perf_counter() - start
    return stats, elapsed


def test_criterion_01_opposite_bits_decomposition():
    start = time.perf_counter()
    joint = joint_for([(RECT, 0)] * 3, [(RECT, 1), (RECT, 0), (RECT, 1)])
    probs = outcome_distribution(joint).probs
    nonzero = np.flatnonzero(probs > 1e-12)
    assert len(nonzero) == 8
    assert np.all(np.abs(probs[nonzero] - 0.125) <= 1e-12)
    observed = {HyperBellOutcome.from_index(i, 3).per_dof for i in nonzero}
    expected = {(p, f, s)
                for p in (BellIndex.PSI_PLUS, BellIndex.PSI_MINUS)
                for f in (BellIndex.PHI_PLUS, BellIndex.PHI_MINUS)
                for s in (BellIndex.PSI_PLUS, BellIndex.PSI_MINUS)}
    assert observed == expected
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    report(f"1: PASS - 8 outcomes at 1/8 on the expected set "
           f"({elapsed * 1e3:.0f} ms)")


def test_criterion_02_partial_diagonal_decompositions():
    joint = joint_for([(RECT, 0)] * 3, [(RECT, 1), (DIAG, 0), (RECT, 1)])
    probs = outcome_distribution(joint).probs
    nonzero = np.flatnonzero(probs > 1e-12)
    assert len(nonzero) == 16
    assert np.all(np.abs(probs[nonzero] - 1 / 16) <= 1e-12)

    joint = joint_for([(RECT, 0)] * 3, [(RECT, 1), (DIAG, 0), (DIAG, 1)])
    probs = outcome_distribution(joint).probs
    nonzero = np.flatnonzero(probs > 1e-12)
    assert len(nonzero) == 32
    assert np.all(np.abs(probs[nonzero] - 1 / 32) <= 1e-12)
    report("2: PASS - 16 outcomes at 1/16 and 32 outcomes at 1/32")


def test_criterion_03_post_selection_oracle():
    start = time.perf_counter()

    def expected_row(basis, a_bit, b_bit):
        if basis is RECT:
            return ([0.5, 0.5, 0.0, 0.0] if a_bit == b_bit
                    else [0.0, 0.0, 0.5, 0.5])
        return ([0.5, 0.0, 0.5, 0.0] if a_bit == b_bit
                else [0.0, 0.5, 0.0, 0.5])

    checked = 0
    for dof in range(3):
        for basis in (RECT, DIAG):
            for a_bit in (0, 1):
                for b_bit in (0, 1):
                    alice = [(RECT, 0)] * 3
                    bob = [(RECT, 0)] * 3
                    alice[dof] = (basis, a_bit)
                    bob[dof] = (basis, b_bit)
                    row = per_dof_distribution(joint_for(alice, bob), dof)
                    target = expected_row(basis, a_bit, b_bit)
                    assert np.all(np.abs(row - target) <= 1e-12)
                    for bell in BellIndex:
                        if row[bell] <= 1e-12:
                            continue
                        flip = bob_correction(basis, bell) is SiftAction.FLIP
                        assert (b_bit ^ flip) == a_bit
                        checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    report(f"3: PASS - post-selection oracle over {checked} supported "
           f"outcomes ({elapsed * 1e3:.0f} ms)")


def test_criterion_04_ideal_rates():
    at_zero = rate_sweep(RateParams.ideal(3), [0.0])[0]
    assert at_zero.total_raw == 3.0
    at_hundred = rate_sweep(RateParams.ideal(3, attenuation_db_per_km=0.2),
                            [100.0])[0]
    assert abs(at_hundred.total_raw - 0.03) <= 1e-12
    report("4: PASS - total rate 3 at d=0 and 0.03 at d=100 km")


def test_criterion_05_distance_law():
    params = RateParams(beta=(1.0,) * 3, theta=(THETA_15,) * 3,
                        attenuation_db_per_km=0.2)
    d_values = np.linspace(0.0, 300.0, 61)
    reports = rate_sweep(params, list(d_values))
    logs = np.array([r.log10_total_clamped for r in reports], dtype=float)
    assert np.all(np.isfinite(logs))  # positive rate everywhere on this sweep
    slopes = np.diff(logs) / np.diff(d_values)
    assert np.all(np.abs(slopes + 0.02) <= 1e-10)
    report("5: PASS - log10 rate affine with slope -0.02/km")


def test_criterion_06_qber_oracle(fig2_run):
    # independent product-form oracle, evaluated before consulting the
    # package: coordinates of one noisy rotated photon
    c, s = math.cos(THETA_15), math.sin(THETA_15)
    leak = math.sqrt(1.0 - BETA_85 ** 2)
    a2_oracle = (BETA_85 * c + leak * s) * (leak * c - BETA_85 * s)
    e_oracle = 2.0 * a2_oracle ** 2
    assert abs(e_oracle - 0.136530) <= 1e-5
    assert abs(analytic_qber(BETA_85, THETA_15) - e_oracle) <= 1e-12

    stats, elapsed = fig2_run
    assert elapsed < 60.0
    for dof in range(3):
        pairs = stats.pairs[dof][RECT.value]
        assert pairs >= 100_000
        sigma = math.sqrt(e_oracle * (1 - e_oracle) / pairs)
        assert abs(stats.qber(dof, RECT) - e_oracle) <= 3 * sigma
    report(f"6: PASS - analytic 0.13653 vs Monte Carlo within 3 sigma "
           f"({elapsed:.1f} s for 10^6 rounds)")


def test_criterion_07_basis_agreement(fig2_run):
    stats, _ = fig2_run
    e = analytic_qber(BETA_85, THETA_15)
    for dof in range(3):
        e_z = stats.qber(dof, RECT)
        e_x = stats.qber(dof, DIAG)
        sigma = math.hypot(
            math.sqrt(e * (1 - e) / stats.pairs[dof][RECT.value]),
            math.sqrt(e * (1 - e) / stats.pairs[dof][DIAG.value]))
        assert abs(e_x - e_z) <= 3 * sigma
    report("7: PASS - diagonal and rectilinear QBER agree within 3 sigma")


def test_criterion_08_per_dof_independence():
    config = RunConfig.from_values(
        n_rounds=300_000, seed=77,
        theta=(0.0, math.asin(math.sqrt(0.05)), 0.0))
    stats = run_protocol(config)
    for dof in (0, 2):
        for basis in (RECT, DIAG):
            assert stats.qber(dof, basis) == 0.0
    e = analytic_qber(1.0, config.channel.theta[1])
    pairs = stats.pairs[1][RECT.value]
    sigma = math.sqrt(e * (1 - e) / pairs)
    assert abs(stats.qber(1, RECT) - e) <= 3 * sigma
    report("8: PASS - noise injected in one DOF leaves the others at zero")


def test_criterion_09_noisy_regime_substitution(tmp_path, capsys):
    # the stated noisy parameters drive the raw rates negative, so the
    # figure's positive curves are NOT reproduced; instead assert the
    # fidelity ordering and the emitted discrepancy warning
    d_values = list(np.linspace(0.0, 300.0, 31))
    low = rate_sweep(RateParams(beta=(BETA_85,) * 3, theta=(THETA_15,) * 3),
                     d_values)
    high = rate_sweep(RateParams(beta=(BETA_90,) * 3, theta=(THETA_15,) * 3),
                      d_values)
    assert all(entry.raw < 0.0 for r in low for entry in r.per_dof)
    assert all(r.total_clamped == 0.0 for r in low)
    for entry_low, entry_high in zip(low, high):
        assert entry_high.total_clamped >= entry_low.total_clamped
    assert any(r.total_clamped > 0.0 for r in high)

    out = tmp_path / "fig2.csv"
    code = main(["analytic-sweep", "--fig2", "--out", str(out),
                 "--d-start", "0", "--d-end", "100", "--d-step", "50"])
    captured = capsys.readouterr()
    assert code == 0
    assert "clamped" in captured.err
    report("9: PASS - higher-fidelity sweep dominates and the discrepancy "
           "warning is emitted")


def test_criterion_10_determinism(tmp_path):
    first = tmp_path / "run1.csv"
    second = tmp_path / "run2.csv"
    args = ["simulate", "--rounds", "50000", "--seed", "424242", "--fig2"]
    code_first = main(args + ["--out", str(first)])
    code_second = main(args + ["--out", str(second)])
    assert code_first == code_second
    assert first.read_bytes() == second.read_bytes()

    sweep_first = tmp_path / "sweep1.csv"
    sweep_second = tmp_path / "sweep2.csv"
    sweep_args = ["analytic-sweep", "--sin2theta", "all=0.015",
                  "--d-start", "0", "--d-end", "200", "--d-step", "20"]
    main(sweep_args + ["--out", str(sweep_first)])
    main(sweep_args + ["--out", str(sweep_second)])
    assert sweep_first.read_bytes() == sweep_second.read_bytes()
    report("10: PASS - identical seeds give byte-identical CSV outputs")
