#include "varqite/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace varqite {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_dim(Eigen::Index n) {
  int k = 0;
  while ((Eigen::Index{1} << k) < n) ++k;
  return k;
}

// Phase picked up by P acting on basis column `col`: Y contributes
// i*(-1)^bit, Z contributes (-1)^bit.
std::complex<double> pauli_phase(const std::string& ops, Eigen::Index col, int n) {
  std::complex<double> w = 1.0;
  for (int q = 0; q < n; ++q) {
    const int bit = static_cast<int>((col >> (n - 1 - q)) & 1);
    switch (ops[static_cast<std::size_t>(q)]) {
      case 'Y': w *= bit ? -kI : kI; break;
      case 'Z': if (bit) w = -w; break;
      default: break;
    }
  }
  return w;
}

Eigen::Index pauli_xmask(const std::string& ops, int n) {
  Eigen::Index mask = 0;
  for (int q = 0; q < n; ++q) {
    const char op = ops[static_cast<std::size_t>(q)];
    if (op == 'X' || op == 'Y') mask |= Eigen::Index{1} << (n - 1 - q);
  }
  return mask;
}

Eigen::Matrix2cd pauli_matrix(char op) {
  Eigen::Matrix2cd z;
  z << 1, 0, 0, -1;
  switch (op) {
    case 'I': return gate_i();
    case 'X': return gate_x();
    case 'Y': return gate_y();
    case 'Z': return z;
    default: throw std::invalid_argument(std::string("unknown Pauli op ") + op);
  }
}
}  // namespace

SpaceGrid SpaceGrid::linear(double v_min, double v_max, int n_points) {
  if (n_points < 2) throw std::invalid_argument("grid needs at least 2 points");
  if (!(v_max > v_min)) throw std::invalid_argument("grid needs v_max > v_min");
  SpaceGrid g;
  g.v_min = v_min;
  g.v_max = v_max;
  g.n_points = n_points;
  g.delta = (v_max - v_min) / (n_points - 1);
  g.values = Eigen::VectorXd::LinSpaced(n_points, v_min, v_max);
  return g;
}

double q_of_t(double t, double rate, double maturity) {
  if (t < 0.0 || t > maturity) {
    throw std::invalid_argument("q_of_t: t outside [0, T]");
  }
  if (rate == 0.0) return 1.0 - t / maturity;
  return -std::expm1(-rate * (maturity - t)) / (rate * maturity);
}

double spot_of_y(double y, double strike) { return strike / (1.0 - y); }

HamiltonianSpec european_hamiltonian(const SpaceGrid& grid, const TransformConstants& consts) {
  if (!(grid.delta > 0.0)) throw std::runtime_error("grid spacing must be positive");
  const int n = grid.n_points;
  const double d2 = grid.delta * grid.delta;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  h(0, 0) = -consts.b();
  h(n - 1, n - 1) = -consts.b();
  for (int i = 1; i + 1 < n; ++i) {
    h(i, i - 1) = 0.5 / d2;
    h(i, i) = -1.0 / d2;
    h(i, i + 1) = 0.5 / d2;
  }
  HamiltonianSpec spec;
  spec.matrix = std::move(h);
  return spec;
}

HamiltonianSpec asian_hamiltonian(const SpaceGrid& grid, double tau,
                                  const TransformConstants& consts) {
  if (tau < 0.0 || tau > consts.tau_final() * (1.0 + 1e-12)) {
    throw std::invalid_argument("asian_hamiltonian: tau outside [0, sigma^2 T]");
  }
  const auto build = [grid, consts](double tau_k) {
    const double t = consts.maturity - tau_k / (consts.sigma * consts.sigma);
    const double q = q_of_t(std::clamp(t, 0.0, consts.maturity), consts.rate, consts.maturity);
    const int n = grid.n_points;
    const double d2 = grid.delta * grid.delta;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i + 1 < n; ++i) {
      const double c = (q - grid.values[i]) * (q - grid.values[i]);
      h(i, i - 1) = 0.5 * c / d2;
      h(i, i) = -c / d2;
      h(i, i + 1) = 0.5 * c / d2;
    }
    return h;
  };
  HamiltonianSpec spec;
  spec.matrix = build(tau);
  spec.time_dependent = true;
  spec.evaluator = build;
  return spec;
}

PauliDecomposition pauli_decompose(const Eigen::MatrixXd& m, bool symmetrize,
                                   double drop_tol) {
  if (m.rows() != m.cols() || !is_power_of_two(m.rows())) {
    throw std::invalid_argument("pauli_decompose: dimension must be a power of two");
  }
  const int n = log2_dim(m.rows());
  if (n > 6) throw std::invalid_argument("pauli_decompose: supports up to 6 qubits");
  Eigen::MatrixXd src = symmetrize ? ((m + m.transpose()) / 2.0).eval() : m;
  const Eigen::Index dim = src.rows();

  PauliDecomposition d;
  d.n_qubits = n;
  std::string ops(static_cast<std::size_t>(n), 'I');
  const char alphabet[4] = {'I', 'X', 'Y', 'Z'};
  const Eigen::Index n_strings = Eigen::Index{1} << (2 * n);
  for (Eigen::Index code = 0; code < n_strings; ++code) {
    Eigen::Index c = code;
    for (int q = n - 1; q >= 0; --q) {
      ops[static_cast<std::size_t>(q)] = alphabet[c & 3];
      c >>= 2;
    }
    const Eigen::Index x = pauli_xmask(ops, n);
    std::complex<double> tr = 0.0;
    for (Eigen::Index col = 0; col < dim; ++col) {
      tr += pauli_phase(ops, col ^ x, n) * src(col ^ x, col);
    }
    const std::complex<double> coeff = tr / static_cast<double>(dim);
    if (std::abs(coeff) > drop_tol) d.terms.push_back({ops, coeff});
  }
  return d;
}

Eigen::MatrixXcd pauli_reconstruct(const PauliDecomposition& d) {
  const Eigen::Index dim = Eigen::Index{1} << d.n_qubits;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const PauliTerm& term : d.terms) {
    if (static_cast<int>(term.ops.size()) != d.n_qubits) {
      throw std::invalid_argument("pauli term length does not match qubit count");
    }
    // qubit 1 is the leftmost Kronecker factor
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Ones(1, 1);
    for (char op : term.ops) {
      const Eigen::Matrix2cd f = pauli_matrix(op);
      Eigen::MatrixXcd next(p.rows() * 2, p.cols() * 2);
      for (Eigen::Index i = 0; i < p.rows(); ++i)
        for (Eigen::Index j = 0; j < p.cols(); ++j)
          next.block(i * 2, j * 2, 2, 2) = p(i, j) * f;
      p = std::move(next);
    }
    out += term.coeff * p;
  }
  return out;
}

StateVector apply_pauli_string(const std::string& ops, const StateVector& s) {
  if (static_cast<int>(ops.size()) != s.n_qubits) {
    throw std::invalid_argument("pauli string length does not match state");
  }
  const Eigen::Index x = pauli_xmask(ops, s.n_qubits);
  StateVector out;
  out.n_qubits = s.n_qubits;
  out.amps = Eigen::VectorXcd::Zero(s.dim());
  for (Eigen::Index col = 0; col < s.dim(); ++col) {
    out.amps[col ^ x] += pauli_phase(ops, col, s.n_qubits) * s.amps[col];
  }
  return out;
}

std::string export_matrix_csv(const Eigen::MatrixXd& m) {
  std::ostringstream out;
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << buf << (j + 1 < m.cols() ? "," : "\n");
    }
  }
  return out.str();
}

std::string export_pauli_terms(const PauliDecomposition& d) {
  std::ostringstream out;
  char buf[80];
  for (const PauliTerm& t : d.terms) {
    std::snprintf(buf, sizeof buf, " %.17g %.17g\n", t.coeff.real(), t.coeff.imag());
    out << t.ops << buf;
  }
  return out.str();
}

}  // namespace varqite
