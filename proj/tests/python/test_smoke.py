"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import qblfq


def test_compact_encoding_golden():
    src = qblfq.builtin_hamiltonian("builtin_1_1")
    op = qblfq.compact_encode(src.matrix)
    terms = op.terms()
    assert abs(terms["II"].real - 1134731.5) <= 1.0
    assert abs(terms["IZ"].real + 566244.5) <= 1.0
    assert abs(terms["XI"].real - 4830.5) <= 1.0
    assert abs(terms["XZ"].real - 20597.5) <= 1.0

    back = qblfq.reconstruct_matrix(op)
    assert np.allclose(back, src.matrix, atol=1e-9)


def test_exact_spectrum():
    src = qblfq.builtin_hamiltonian("builtin_1_1")
    values, vectors = qblfq.exact_eigensolve(src)
    assert np.allclose(values, [543059, 593915, 1685209, 1716743], atol=1.0)
    # orthonormal columns
    assert np.allclose(vectors.conj().T @ vectors, np.eye(4), atol=1e-10)

    src41 = qblfq.builtin_hamiltonian("builtin_4_1")
    values41, _ = qblfq.exact_eigensolve(src41)
    assert np.allclose(values41[:4], [369016, 575707, 737759, 976608], atol=2.0)


def test_jw_encoding_roundtrip():
    src = qblfq.builtin_hamiltonian("builtin_1_1")
    op = qblfq.jw_encode_one_body(src.matrix)
    assert op.n_qubits == 4
    assert abs(op.coefficient("IIII").real - 2269463) <= 1.0


def test_circuit_and_expectation():
    c = qblfq.build_hea(2, 1)
    assert c.n_parameters == 8
    psi = qblfq.apply_circuit(c, [0.0] * 8, 0)
    assert abs(abs(psi[0]) - 1.0) < 1e-12

    z = qblfq.PauliOperator({"ZI": 1.0})
    assert qblfq.expectation_exact(psi, z) == pytest.approx(1.0)

    mean, err = qblfq.expectation_sampled(c, [0.0] * 8, 0, z, 4096, 7)
    assert mean == pytest.approx(1.0)
    assert err == 0.0


def test_small_vqe():
    src = qblfq.builtin_hamiltonian("builtin_1_1")
    op = qblfq.compact_encode(src.matrix)
    res = qblfq.run_vqe(op, ansatz="hea", reps=1, initial=0, tier="sv",
                        optimizer="grad", iterations=1500, restarts=4, seed=11)
    assert res.states[0].energy_mev2 == pytest.approx(543059, abs=1.0)
    assert res.states[0].mass_mev == pytest.approx(math.sqrt(543059), abs=0.01)


def test_observables_roundtrip():
    src = qblfq.builtin_hamiltonian("builtin_1_1")
    values, vectors = qblfq.exact_eigensolve(src)
    ground = np.ascontiguousarray(vectors[:, 0])

    f = qblfq.measure_decay_constant(ground, "pseudoscalar", src, tier="sv")
    assert f.f_mev == pytest.approx(178.18, abs=0.01)

    x = 0.37
    op = qblfq.pdf_operator(x, src.catalog, src.params)
    q_op = qblfq.expectation_exact(ground, op)
    q_cl = qblfq.classical_pdf(ground, src.catalog, src.params, x)
    assert q_op == pytest.approx(q_cl, abs=1e-9)


def test_pdf_scan_grid():
    src = qblfq.builtin_hamiltonian("builtin_1_1")
    values, vectors = qblfq.exact_eigensolve(src)
    ground = np.ascontiguousarray(vectors[:, 0])
    grid = qblfq.default_pdf_grid(19)
    assert grid[0] == pytest.approx(0.05)
    scan = qblfq.pdf_scan(ground, src.catalog, src.params, grid, tier="sv")
    ys = [0.0] + [q for (_, q, _) in scan] + [0.0]
    h = 1.0 / 20
    simpson = h / 3 * (ys[0] + ys[-1] + sum(y * (4 if i % 2 else 2)
                                            for i, y in enumerate(ys[1:-1], start=1)))
    assert simpson == pytest.approx(1.0, abs=1e-2)
