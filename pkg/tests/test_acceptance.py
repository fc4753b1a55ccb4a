"""Acceptance suite: one PASS/FAIL line per criterion, collected in the terminal summary."""

import math

import numpy as np

import oracles
from qcd import be, ccop
from qcd import channels as ch
from qcd import measure
from qcd import tensor_core as tc

INV_SQRT2 = 1 / math.sqrt(2)


def _pt_min_oracle(channel):
    c = oracles.choi_direct(channel.kraus_ops, channel.dim)
    return np.linalg.eigvalsh(oracles.partial_transpose_entrywise(c, (2, 2), [0]))[0]


def test_criterion_1_dephasing_family(record):
    worst_formula = worst_oracle = 0.0
    verdicts_ok = True
    for p in np.round(np.linspace(0, 1, 11), 10):
        channel = ch.dephasing(p)
        lam, _ = ccop.min_pt_eigenpair(ch.choi(channel))
        worst_formula = max(worst_formula, abs(lam + abs(2 * p - 1) / 2))
        worst_oracle = max(worst_oracle, abs(lam - _pt_min_oracle(channel)))
        verdicts_ok &= ccop.detect_non_ccop(channel).detected == (p != 0.5)
    ok = worst_formula < 1e-9 and worst_oracle < 1e-9 and verdicts_ok
    record(
        "1 dephasing family",
        ok,
        f"max|λ+|2p-1|/2|={worst_formula:.1e}, max|λ-oracle|={worst_oracle:.1e}, verdict iff p≠0.5: {verdicts_ok}",
    )
    assert ok


def test_criterion_2_gate_V(record):
    g = ch.gate_V()
    u = ch.choi_vector_of_gate(g)
    c_v = u.projector()
    expected = {
        "AC|BD": [0.5] * 4,
        "AD|BC": [INV_SQRT2, INV_SQRT2, 0, 0],
        "AB|CD": [0.5] * 4,
    }
    schmidt = be.bipartition_schmidt(u)
    schmidt_err = max(np.max(np.abs(schmidt[k] - v)) for k, v in expected.items())
    alpha_err = abs(be.alpha_be(u) - INV_SQRT2)
    w_be, w_sep = be.be_witness(g), be.sep_witness(g)
    w_be_err = np.max(np.abs(w_be - (0.5 * np.eye(16) - c_v)))
    w_sep_err = np.max(np.abs(w_sep - (0.25 * np.eye(16) - c_v)))
    e_be = measure.exact_expectation(w_be, c_v)
    e_sep = measure.exact_expectation(w_sep, c_v)
    ok = (
        schmidt_err < 1e-10
        and alpha_err < 1e-10
        and w_be_err < 1e-12
        and w_sep_err < 1e-12
        and abs(e_be + 0.5) < 1e-10
        and abs(e_sep + 0.75) < 1e-10
    )
    record(
        "2 gate V",
        ok,
        f"schmidt err {schmidt_err:.1e}, α_BE err {alpha_err:.1e}, ⟨W_BE⟩={e_be:.12f}, ⟨W_Sep⟩={e_sep:.12f}",
    )
    assert ok


def test_criterion_3_witness_soundness(record, rng):
    ppt_states = []
    while len(ppt_states) < 500:
        rho = tc.random_density(4, rng, rank=int(rng.integers(1, 5)))
        if np.linalg.eigvalsh(oracles.partial_transpose_entrywise(rho, (2, 2), [0]))[0] >= 0:
            ppt_states.append(rho)
    witnesses = [ccop.ccop_witness(ch.choi(ch.dephasing(p))).matrix for p in (0.0, 0.25, 0.8)]
    witnesses += [ccop.ccop_witness(ch.choi(ch.random_channel(2, 2, rng))).matrix for _ in range(2)]
    worst_ccop = min(measure.exact_expectation(w, rho) for w in witnesses for rho in ppt_states)

    w_be = be.be_witness(ch.gate_V())
    worst_cut = {}
    for label, cut in be.CUTS.items():
        vals = []
        for i in range(1000):
            xi = be.sample_biseparable(cut, [20261018, i]).vector.amplitudes
            vals.append(np.vdot(xi, w_be @ xi).real)
        worst_cut[label] = min(vals)

    ok = worst_ccop >= -1e-9 and all(v >= -1e-9 for v in worst_cut.values())
    detail = f"min Tr[W_CCOP ρ] over 500 PPT = {worst_ccop:.3e}; " + ", ".join(
        f"{k} min={v:.3e}" for k, v in worst_cut.items()
    )
    record("3 witness soundness", ok, detail)
    assert ok


def test_criterion_4_structural_invariants(record, rng):
    ab_cd_err = 0.0
    order_ok = True
    for _ in range(50):
        u = ch.choi_vector_of_gate(ch.GateSpec(tc.haar_unitary(4, rng), (2, 2)))
        ab_cd_err = max(ab_cd_err, np.max(np.abs(be.bipartition_schmidt(u)["AB|CD"] - 0.5)))
        order_ok &= be.alpha_sep(u) <= be.alpha_be(u) + 1e-15
    round_trip = 0.0
    for n in (1, 2, 3, 4):
        for _ in range(10):
            g = rng.normal(size=(2**n, 2**n)) + 1j * rng.normal(size=(2**n, 2**n))
            w = g + g.conj().T
            round_trip = max(round_trip, np.max(np.abs(measure.pauli_decompose(w).reconstruct() - w)))
    ok = ab_cd_err < 1e-9 and order_ok and round_trip < 1e-10
    record(
        "4 structural invariants",
        ok,
        f"AB|CD max dev {ab_cd_err:.1e} on 50 Haar, α_sep≤α_BE: {order_ok}, Pauli round trip {round_trip:.1e}",
    )
    assert ok


def test_criterion_5_shot_simulation(record):
    g = ch.gate_V()
    w = be.be_witness(g)
    c_v = ch.choi_vector_of_gate(g).projector()
    decomp = measure.pauli_decompose(w)

    # On the pure Choi state every Pauli term has a definite outcome, so the
    # standard error vanishes; "within" is read inclusively with a rounding floor.
    pure = [measure.simulate_shots(decomp, c_v, 10**4, s) for s in range(100)]
    pure_hits = sum(abs(e.estimate + 0.5) <= 5 * e.stderr + 1e-12 for e in pure)
    max_se = max(e.stderr for e in pure)

    # White noise makes the statistics non-trivial; same test against the exact value.
    noisy = 0.8 * c_v + 0.2 * np.eye(16) / 16
    exact = measure.exact_expectation(w, noisy)
    runs = [measure.simulate_shots(decomp, noisy, 10**4, s) for s in range(100)]
    noisy_hits = sum(abs(e.estimate - exact) < 5 * e.stderr for e in runs)

    lo = np.mean([measure.simulate_shots(decomp, noisy, 1000, s).stderr for s in range(50)])
    hi = np.mean([measure.simulate_shots(decomp, noisy, 4000, s).stderr for s in range(50)])
    ratio = lo / hi

    ok_a = pure_hits >= 99 and noisy_hits >= 99
    ok_b = abs(ratio - 2.0) <= 0.2 * 2.0
    record(
        "5a shot estimate within 5 SE",
        ok_a,
        f"pure C_V {pure_hits}/100 (max SE {max_se:.1e}); noisy C_V {noisy_hits}/100 vs exact {exact:.4f}",
    )
    record("5b stderr ∝ 1/√shots", ok_b, f"SE(1e3)/SE(4e3) = {ratio:.3f} (target 2 ± 20%, noisy C_V)")
    assert ok_a and ok_b


def test_criterion_6_known_gates(record):
    results = {}
    for name, gate, alpha_expected, detect_expected in [
        ("SWAP", ch.swap_gate(2), 1.0, False),
        ("identity", ch.identity_gate(2), 1.0, False),
        ("CNOT", ch.cnot_gate(), INV_SQRT2, True),
    ]:
        u = ch.choi_vector_of_gate(gate)
        alpha = be.alpha_be(u)
        vec = oracles.choi_vector_entrywise(gate.unitary, 2)
        oracle_alpha = max(
            oracles.schmidt_svd(vec, (2, 2, 2, 2), cut.left)[0] for cut in be.CUTS.values()
        )
        detected = be.detect_non_be(gate).detected
        results[name] = (
            abs(alpha - alpha_expected) < 1e-10
            and abs(alpha - oracle_alpha) < 1e-10
            and detected is detect_expected,
            alpha,
            detected,
        )
    ok = all(r[0] for r in results.values())
    record(
        "6 known gates",
        ok,
        ", ".join(f"{k}: α_BE={a:.10f} detected={d}" for k, (_, a, d) in results.items()),
    )
    assert ok
