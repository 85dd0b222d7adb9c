"""Smoke tests for the python bindings: thin checks that the module loads
and the main operations round-trip sensibly; the C++ suites carry the
numerical coverage."""

import math

import numpy as np
import pytest

import varqite as vq


def test_statevector_roundtrip():
    s = vq.zero_state(4)
    assert s.n_qubits == 4
    amps = s.amplitudes
    assert amps.shape == (16,)
    assert amps[0] == 1.0 + 0.0j

    h = vq.apply_single(vq.gate_h(), 1, s)
    assert math.isclose(h.norm(), 1.0, abs_tol=1e-12)

    custom = vq.StateVector(np.array([1.0, 1.0j]) / math.sqrt(2.0))
    assert custom.n_qubits == 1
    assert math.isclose(abs(vq.inner_product(custom, custom)), 1.0, abs_tol=1e-12)


def test_ansatz_and_derivatives():
    c = vq.build_ansatz(4, 3)
    assert c.n_params == 25
    theta = np.zeros(25)
    state = vq.prepare_state(c, theta)
    np.testing.assert_allclose(state.amplitudes.real, 0.25, atol=1e-12)

    rng = np.random.default_rng(1)
    theta = rng.uniform(-math.pi, 3 * math.pi, 25)
    exact = vq.derivative_state(c, theta, 5).amplitudes
    fd = vq.derivative_state_fd(c, theta, 5, 1e-5).amplitudes
    np.testing.assert_allclose(exact, fd, atol=1e-6)

    text = vq.serialize_circuit(c)
    assert text.count("GATE") == len(text.strip().splitlines()) - 1


def test_hamiltonians_and_pauli():
    grid = vq.SpaceGrid.linear(math.log(50.0), math.log(150.0), 16)
    consts = vq.TransformConstants(sigma=0.2, rate=0.0, maturity=1.0)
    h = vq.european_hamiltonian(grid, consts)
    assert h.matrix.shape == (16, 16)
    assert math.isclose(h.matrix[0, 0], -consts.b(), rel_tol=1e-12)

    d = vq.pauli_decompose(h.matrix)
    back = vq.pauli_reconstruct(d)
    np.testing.assert_allclose(back.real, h.matrix, atol=1e-12)

    ha = vq.asian_hamiltonian(vq.SpaceGrid.linear(-0.5, 0.4, 16), 0.0, consts)
    assert ha.time_dependent
    assert np.all(ha.matrix[0] == 0.0)

    assert math.isclose(vq.q_of_t(0.0, 0.0, 1.0), 1.0)


def test_mclachlan_system():
    c = vq.build_ansatz(4, 1)
    rng = np.random.default_rng(2)
    theta = rng.uniform(0.0, 2 * math.pi, c.n_params)
    a = vq.assemble_a(c, theta)
    assert a.shape == (11, 11)
    np.testing.assert_allclose(a, a.T, atol=1e-10)

    grid = vq.SpaceGrid.linear(math.log(50.0), math.log(150.0), 16)
    consts = vq.TransformConstants(sigma=0.2, rate=0.0, maturity=1.0)
    h = vq.european_hamiltonian(grid, consts)
    cv = vq.assemble_c(c, theta, h.matrix)
    cp = vq.assemble_c_pauli(c, theta, vq.pauli_decompose(h.matrix))
    np.testing.assert_allclose(cv, cp, atol=1e-10)

    theta_dot, singular_values, truncated, residual = vq.solve_thetadot(a, cv, 1e-8)
    assert theta_dot.shape == (11,)
    assert singular_values[0] >= singular_values[-1]
    assert residual < np.linalg.norm(cv) + 1e-12


def test_pricing_pipeline():
    assert math.isclose(
        vq.black_scholes_call(100.0, 100.0, 0.2, 0.0, 1.0), 7.9656, abs_tol=1e-4
    )

    grid = vq.SpaceGrid.linear(math.log(50.0), math.log(150.0), 16)
    consts = vq.TransformConstants(sigma=0.2, rate=0.0, maturity=1.0)
    target = vq.payoff_state_european(grid, 100.0, consts)
    assert math.isclose(target.state.norm(), 1.0, abs_tol=1e-12)

    c = vq.build_ansatz(4, 3)
    opt = vq.OptimizerConfig()
    opt.max_generations = 150
    opt.seed = 0
    fit = vq.fit_theta0(c, target, opt)
    assert fit.epsilon <= 0.05

    h = vq.european_hamiltonian(grid, consts)
    cfg = vq.EvolutionConfig()
    cfg.tau_final = consts.tau_final()
    cfg.n_steps = 50
    taus = [k * cfg.tau_final / cfg.n_steps for k in range(cfg.n_steps + 1)]
    ref = vq.exact_imaginary_evolution_td(lambda t: h.matrix, target.state, taus, target.raw_norm)
    trace = vq.evolve(c, fit.theta0, h, cfg, ref.states)
    assert not trace.diverged
    assert len(trace.steps) == 51
    assert trace.steps[-1].oracle_distance < 0.1

    phi_end = vq.prepare_state(c, trace.steps[-1].theta)
    prices = vq.rescale_to_price_european(phi_end, cfg.tau_final, grid, consts, 100.0)
    assert math.isclose(prices[-1], 50.0, abs_tol=1e-9)


def test_error_paths():
    with pytest.raises(ValueError):
        vq.zero_state(0)
    with pytest.raises(ValueError):
        vq.build_ansatz(4, 0)
    with pytest.raises(ValueError):
        vq.q_of_t(2.0, 0.0, 1.0)
