#include "varqite/mclachlan.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace varqite {

namespace {

std::vector<StateVector> all_derivative_states(const AnsatzCircuit& c,
                                               const ParameterVector& theta) {
  std::vector<StateVector> out;
  out.reserve(static_cast<std::size_t>(c.n_params));
  for (int k = 1; k <= c.n_params; ++k) out.push_back(derivative_state(c, theta, k));
  return out;
}

// Applies a Pauli string to the system register of an (1+n)-qubit state on
// the block where the ancilla (qubit 1) equals `branch`.
void apply_pauli_on_branch(StateVector& s, const std::string& ops, int branch) {
  const int n_sys = s.n_qubits - 1;
  const Eigen::Index block = Eigen::Index{1} << n_sys;
  const Eigen::Index base = branch ? block : 0;
  StateVector sys;
  sys.n_qubits = n_sys;
  sys.amps = s.amps.segment(base, block);
  sys = apply_pauli_string(ops, sys);
  s.amps.segment(base, block) = sys.amps;
}

struct Insertion {
  std::size_t gate_index;  // generator applied right after this gate
  std::string paulis;
  int branch;              // ancilla value selecting the branch
};

// Builds (|0>|a> + |1>|b>)/sqrt(2) where |a>, |b> are the circuit outputs
// with the branch-0 / branch-1 insertions applied, and returns <a|b>.
std::complex<double> ancilla_overlap(const AnsatzCircuit& c, const ParameterVector& theta,
                                     const std::vector<Insertion>& insertions,
                                     const std::vector<std::string>& final_branch1) {
  StateVector s = zero_state(c.n_qubits + 1);
  s = apply_single(gate_h(), 1, s);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    Gate shifted = g;
    shifted.qubit = g.qubit + 1;
    if (g.control) shifted.control = g.control + 1;
    switch (shifted.kind) {
      case GateKind::H: s = apply_single(gate_h(), shifted.qubit, s); break;
      case GateKind::X: s = apply_single(gate_x(), shifted.qubit, s); break;
      case GateKind::Ry: s = apply_single(gate_ry(theta[g.param - 1]), shifted.qubit, s); break;
      case GateKind::CRy:
        s = apply_controlled(gate_ry(theta[g.param - 1]), shifted.control, shifted.qubit, s);
        break;
    }
    for (const Insertion& ins : insertions) {
      if (ins.gate_index == i) apply_pauli_on_branch(s, ins.paulis, ins.branch);
    }
  }
  for (const std::string& ops : final_branch1) apply_pauli_on_branch(s, ops, 1);
  const Eigen::Index block = s.dim() / 2;
  std::complex<double> z = 0.0;
  for (Eigen::Index r = 0; r < block; ++r) {
    z += std::conj(s.amps[r]) * s.amps[r + block];
  }
  return 2.0 * z;  // (|0>a + |1>b)/sqrt(2) carries a factor 1/2 in the cross term
}

double sample_pm1(double expectation, long shots, std::mt19937_64& rng) {
  const double p = std::clamp(0.5 * (1.0 + expectation), 0.0, 1.0);
  std::binomial_distribution<long> dist(shots, p);
  const long k = dist(rng);
  return 2.0 * static_cast<double>(k) / static_cast<double>(shots) - 1.0;
}

// Complex overlap <a|b> from the ancilla construction. Exact mode reads the
// expectations off the statevector; Shots mode measures the ancilla in the
// X basis (real part) and Y basis (imaginary part) with `shots` samples
// each.
std::complex<double> measured_overlap(const AnsatzCircuit& c, const ParameterVector& theta,
                                      const std::vector<Insertion>& insertions,
                                      const std::vector<std::string>& final_branch1,
                                      const EvolutionConfig& cfg, std::mt19937_64& rng,
                                      bool need_imag) {
  const std::complex<double> z = ancilla_overlap(c, theta, insertions, final_branch1);
  if (cfg.mode == MeasurementMode::Exact) return z;
  if (cfg.shots < 1) throw std::runtime_error("shot-sampled mode needs shots >= 1");
  const double re = sample_pm1(z.real(), cfg.shots, rng);
  const double im = need_imag ? sample_pm1(z.imag(), cfg.shots, rng) : 0.0;
  return {re, im};
}

double hadamard_a_entry_impl(const AnsatzCircuit& c, const ParameterVector& theta,
                             int i, int j, const EvolutionConfig& cfg,
                             std::mt19937_64& rng) {
  const std::size_t gi = gate_index_of_param(c, i);
  const std::size_t gj = gate_index_of_param(c, j);
  const auto terms_i = generator_terms(c, i);
  const auto terms_j = generator_terms(c, j);
  double entry = 0.0;
  for (const auto& ti : terms_i) {
    for (const auto& tj : terms_j) {
      const std::complex<double> w = std::conj(ti.coeff) * tj.coeff;
      std::vector<Insertion> ins;
      ins.push_back({gi, ti.paulis, 0});
      ins.push_back({gj, tj.paulis, 1});
      const std::complex<double> z = measured_overlap(c, theta, ins, {}, cfg, rng,
                                                      std::abs(w.imag()) > 0.0);
      entry += (w * z).real();
    }
  }
  return entry;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined words
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(mix_seed(seed, stream));
}

Eigen::MatrixXd assemble_a(const AnsatzCircuit& c, const ParameterVector& theta) {
  const auto deriv = all_derivative_states(c, theta);
  const int n = c.n_params;
  Eigen::MatrixXcd d(deriv.front().dim(), n);
  for (int k = 0; k < n; ++k) d.col(k) = deriv[static_cast<std::size_t>(k)].amps;
  return (d.adjoint() * d).real();
}

Eigen::VectorXd assemble_c(const AnsatzCircuit& c, const ParameterVector& theta,
                           const Eigen::MatrixXd& h) {
  const StateVector phi = prepare_state(c, theta);
  if (h.rows() != phi.dim() || h.cols() != phi.dim()) {
    throw std::invalid_argument("Hamiltonian dimension does not match circuit");
  }
  const Eigen::VectorXcd hphi = h * phi.amps;
  Eigen::VectorXd out(c.n_params);
  for (int k = 1; k <= c.n_params; ++k) {
    out[k - 1] = derivative_state(c, theta, k).amps.dot(hphi).real();
  }
  return out;
}

Eigen::VectorXd assemble_c_pauli(const AnsatzCircuit& c, const ParameterVector& theta,
                                 const PauliDecomposition& h) {
  const StateVector phi = prepare_state(c, theta);
  if (h.n_qubits != c.n_qubits) {
    throw std::invalid_argument("Pauli decomposition does not match circuit width");
  }
  Eigen::VectorXcd hphi = Eigen::VectorXcd::Zero(phi.dim());
  for (const PauliTerm& term : h.terms) {
    hphi += term.coeff * apply_pauli_string(term.ops, phi).amps;
  }
  Eigen::VectorXd out(c.n_params);
  for (int k = 1; k <= c.n_params; ++k) {
    out[k - 1] = derivative_state(c, theta, k).amps.dot(hphi).real();
  }
  return out;
}

double hadamard_test_a_entry(const AnsatzCircuit& c, const ParameterVector& theta,
                             int i, int j, const EvolutionConfig& cfg,
                             std::mt19937_64& rng) {
  return hadamard_a_entry_impl(c, theta, i, j, cfg, rng);
}

double hadamard_test_c_entry(const AnsatzCircuit& c, const ParameterVector& theta,
                             int i, const PauliDecomposition& h,
                             const EvolutionConfig& cfg, std::mt19937_64& rng) {
  const std::size_t gi = gate_index_of_param(c, i);
  const auto terms_i = generator_terms(c, i);
  double entry = 0.0;
  for (const auto& ti : terms_i) {
    for (const PauliTerm& hj : h.terms) {
      const std::complex<double> w = std::conj(ti.coeff) * hj.coeff;
      std::vector<Insertion> ins;
      ins.push_back({gi, ti.paulis, 0});
      const std::complex<double> z =
          measured_overlap(c, theta, ins, {hj.ops}, cfg, rng, std::abs(w.imag()) > 0.0);
      entry += (w * z).real();
    }
  }
  return entry;
}

Eigen::MatrixXd assemble_a_hadamard(const AnsatzCircuit& c, const ParameterVector& theta,
                                    const EvolutionConfig& cfg, std::mt19937_64& rng) {
  const int n = c.n_params;
  Eigen::MatrixXd a(n, n);
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      const double v = hadamard_test_a_entry(c, theta, i, j, cfg, rng);
      a(i - 1, j - 1) = v;
      a(j - 1, i - 1) = v;
    }
  }
  return a;
}

Eigen::VectorXd assemble_c_hadamard(const AnsatzCircuit& c, const ParameterVector& theta,
                                    const PauliDecomposition& h, const EvolutionConfig& cfg,
                                    std::mt19937_64& rng) {
  Eigen::VectorXd out(c.n_params);
  for (int i = 1; i <= c.n_params; ++i) {
    out[i - 1] = hadamard_test_c_entry(c, theta, i, h, cfg, rng);
  }
  return out;
}

SolveResult solve_thetadot(const Eigen::MatrixXd& a, const Eigen::VectorXd& c,
                           double cutoff_ratio) {
  if (a.rows() != c.size()) throw std::invalid_argument("solve_thetadot: size mismatch");
  if (!(cutoff_ratio > 0.0) || cutoff_ratio >= 1.0) {
    throw std::invalid_argument("cutoff_ratio must lie in (0, 1)");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SolveResult r;
  r.singular_values = svd.singularValues();
  const double smax = r.singular_values.size() ? r.singular_values[0] : 0.0;
  const double cutoff = cutoff_ratio * smax;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(r.singular_values.size());
  for (Eigen::Index k = 0; k < r.singular_values.size(); ++k) {
    if (r.singular_values[k] > cutoff && r.singular_values[k] > 0.0) {
      inv[k] = 1.0 / r.singular_values[k];
    } else {
      ++r.truncated_modes;
    }
  }
  r.all_truncated = (r.truncated_modes == static_cast<int>(r.singular_values.size()));
  if (r.all_truncated) {
    r.theta_dot = Eigen::VectorXd::Zero(c.size());
  } else {
    r.theta_dot = svd.matrixV() * inv.asDiagonal() * (svd.matrixU().transpose() * c);
  }
  r.residual = (a * r.theta_dot - c).norm();
  return r;
}

EvolutionTrace evolve(const AnsatzCircuit& c, const ParameterVector& theta0,
                      const HamiltonianSpec& h, const EvolutionConfig& cfg,
                      const std::vector<StateVector>* reference_states) {
  if (cfg.n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  if (reference_states &&
      reference_states->size() != static_cast<std::size_t>(cfg.n_steps) + 1) {
    throw std::invalid_argument("reference trajectory must hold n_steps + 1 states");
  }
  const double dtau = cfg.dtau();
  EvolutionTrace trace;
  trace.steps.reserve(static_cast<std::size_t>(cfg.n_steps) + 1);

  ParameterVector theta = theta0;
  Eigen::MatrixXd h_now = h.matrix;
  PauliDecomposition pauli;
  const bool needs_pauli = cfg.use_pauli_path || cfg.mode == MeasurementMode::Shots;
  if (needs_pauli && !h.time_dependent) pauli = pauli_decompose(h.matrix);

  for (int k = 0; k <= cfg.n_steps; ++k) {
    const auto t_start = std::chrono::steady_clock::now();
    const double tau = k * dtau;
    if (h.time_dependent) {
      h_now = h.evaluator(tau);  // frozen at the left endpoint of [tau, tau+dtau]
      if (needs_pauli) pauli = pauli_decompose(h_now);
    }

    Eigen::MatrixXd a;
    Eigen::VectorXd cvec;
    if (cfg.mode == MeasurementMode::Shots) {
      auto rng = make_engine(cfg.rng_seed, static_cast<std::uint64_t>(k));
      a = assemble_a_hadamard(c, theta, cfg, rng);
      cvec = assemble_c_hadamard(c, theta, pauli, cfg, rng);
    } else {
      a = assemble_a(c, theta);
      cvec = cfg.use_pauli_path ? assemble_c_pauli(c, theta, pauli)
                                : assemble_c(c, theta, h_now);
    }
    if (cfg.global_phase_correction) {
      const StateVector phi = prepare_state(c, theta);
      const double energy = (phi.amps.dot(h_now * phi.amps)).real();
      for (int i = 1; i <= c.n_params; ++i) {
        cvec[i - 1] -= derivative_state(c, theta, i).amps.dot(phi.amps).real() * energy;
      }
    }

    const SolveResult sol = solve_thetadot(a, cvec, cfg.cutoff_ratio);

    StepRecord rec;
    rec.tau = tau;
    rec.theta = theta;
    rec.theta_dot_norm = sol.theta_dot.norm();
    rec.residual = sol.residual;
    rec.truncated_modes = sol.truncated_modes;
    rec.symmetry_gap = (a - a.transpose()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    rec.min_eigenvalue = es.eigenvalues().minCoeff();
    if (reference_states) {
      const StateVector phi = prepare_state(c, theta);
      rec.oracle_distance =
          ((*reference_states)[static_cast<std::size_t>(k)].amps - phi.amps).norm();
    }
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    trace.steps.push_back(std::move(rec));

    if (sol.theta_dot.norm() > 1e6) {
      trace.diverged = true;
      trace.diverged_step = k;
      break;
    }
    if (k < cfg.n_steps) theta += dtau * sol.theta_dot;
  }
  return trace;
}

}  // namespace varqite
