#include "varqite/ansatz.hpp"

#include <sstream>
#include <stdexcept>
#include <string>

namespace varqite {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};

void check_theta(const AnsatzCircuit& c, const ParameterVector& theta) {
  if (theta.size() != c.n_params) {
    throw std::invalid_argument("parameter vector has " + std::to_string(theta.size()) +
                                " entries, circuit expects " + std::to_string(c.n_params));
  }
}

// -(i/2) * Y, the Ry generator. Real-valued.
Eigen::Matrix2cd ry_generator() {
  Eigen::Matrix2cd g;
  g << 0.0, -0.5, 0.5, 0.0;
  return g;
}

void apply_gate_in_place(StateVector& s, const Gate& g, const ParameterVector& theta) {
  switch (g.kind) {
    case GateKind::H:
      s = apply_single(gate_h(), g.qubit, s);
      break;
    case GateKind::X:
      s = apply_single(gate_x(), g.qubit, s);
      break;
    case GateKind::Ry:
      s = apply_single(gate_ry(theta[g.param - 1]), g.qubit, s);
      break;
    case GateKind::CRy:
      s = apply_controlled(gate_ry(theta[g.param - 1]), g.control, g.qubit, s);
      break;
  }
}

// Applies the generator of gate `g` in place: -(i/2) Y_target for Ry,
// -(i/2) |1><1|_control (x) Y_target for CRy. The projector zeroes the
// control-|0> block.
void apply_generator_in_place(StateVector& s, const Gate& g) {
  if (g.kind == GateKind::Ry) {
    s = apply_single(ry_generator(), g.qubit, s);
    return;
  }
  const Eigen::Index cbit = Eigen::Index{1} << (s.n_qubits - g.control);
  const Eigen::Index tbit = Eigen::Index{1} << (s.n_qubits - g.qubit);
  StateVector out;
  out.n_qubits = s.n_qubits;
  out.amps = Eigen::VectorXcd::Zero(s.dim());
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    if (!(i & cbit) || (i & tbit)) continue;
    out.amps[i] = -0.5 * s.amps[i | tbit];
    out.amps[i | tbit] = 0.5 * s.amps[i];
  }
  s = std::move(out);
}

std::string kind_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Ry: return "RY";
    case GateKind::CRy: return "CRY";
  }
  return "?";
}
}  // namespace

AnsatzCircuit build_ansatz(int n_qubits, int n_cells) {
  if (n_qubits < 2) throw std::invalid_argument("ansatz needs at least 2 qubits");
  if (n_cells < 1) throw std::invalid_argument("ansatz needs at least 1 unit cell");
  AnsatzCircuit c;
  c.n_qubits = n_qubits;
  c.n_cells = n_cells;
  int next = 1;
  for (int q = 1; q <= n_qubits; ++q) c.gates.push_back({GateKind::H, q, 0, 0});
  for (int q = 1; q <= n_qubits; ++q) c.gates.push_back({GateKind::X, q, 0, 0});
  for (int q = 1; q <= n_qubits; ++q) c.gates.push_back({GateKind::Ry, q, 0, next++});
  for (int cell = 0; cell < n_cells; ++cell) {
    for (int q = 1; q < n_qubits; ++q) {
      c.gates.push_back({GateKind::CRy, q + 1, q, next++});
    }
    for (int q = 1; q <= n_qubits; ++q) {
      c.gates.push_back({GateKind::Ry, q, 0, next++});
    }
  }
  c.n_params = next - 1;
  return c;
}

StateVector prepare_state(const AnsatzCircuit& c, const ParameterVector& theta) {
  check_theta(c, theta);
  StateVector s = zero_state(c.n_qubits);
  for (const Gate& g : c.gates) apply_gate_in_place(s, g, theta);
  return s;
}

std::size_t gate_index_of_param(const AnsatzCircuit& c, int k) {
  if (k < 1 || k > c.n_params) {
    throw std::invalid_argument("parameter index " + std::to_string(k) +
                                " out of range [1, " + std::to_string(c.n_params) + "]");
  }
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    if (c.gates[i].param == k) return i;
  }
  throw std::logic_error("parameter not bound to any gate");
}

StateVector derivative_state(const AnsatzCircuit& c, const ParameterVector& theta, int k) {
  check_theta(c, theta);
  const std::size_t pos = gate_index_of_param(c, k);
  StateVector s = zero_state(c.n_qubits);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    apply_gate_in_place(s, c.gates[i], theta);
    if (i == pos) apply_generator_in_place(s, c.gates[i]);
  }
  return s;
}

StateVector derivative_state_fd(const AnsatzCircuit& c, const ParameterVector& theta,
                                int k, double h) {
  check_theta(c, theta);
  if (k < 1 || k > c.n_params) throw std::invalid_argument("parameter index out of range");
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  ParameterVector up = theta, down = theta;
  up[k - 1] += h;
  down[k - 1] -= h;
  StateVector plus = prepare_state(c, up);
  StateVector minus = prepare_state(c, down);
  StateVector out;
  out.n_qubits = c.n_qubits;
  out.amps = (plus.amps - minus.amps) / (2.0 * h);
  return out;
}

std::vector<GeneratorTerm> generator_terms(const AnsatzCircuit& c, int k) {
  const Gate& g = c.gates[gate_index_of_param(c, k)];
  std::string idn(static_cast<std::size_t>(c.n_qubits), 'I');
  if (g.kind == GateKind::Ry) {
    std::string s = idn;
    s[g.qubit - 1] = 'Y';
    return {{s, -0.5 * kI}};
  }
  // |1><1| = (I - Z)/2
  std::string yt = idn;
  yt[g.qubit - 1] = 'Y';
  std::string zy = yt;
  zy[g.control - 1] = 'Z';
  return {{yt, -0.25 * kI}, {zy, 0.25 * kI}};
}

std::string serialize_circuit(const AnsatzCircuit& c) {
  std::ostringstream out;
  out << "CIRCUIT qubits=" << c.n_qubits << " cells=" << c.n_cells
      << " params=" << c.n_params << "\n";
  for (const Gate& g : c.gates) {
    out << "GATE " << kind_name(g.kind) << ' ';
    if (g.kind == GateKind::CRy) out << g.control << ',' << g.qubit;
    else out << g.qubit;
    out << ' ' << g.param << "\n";
  }
  return out.str();
}

AnsatzCircuit parse_circuit(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  AnsatzCircuit c;
  int max_param = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "CIRCUIT") {
      std::string field;
      while (ls >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = field.substr(0, eq);
        const int value = std::stoi(field.substr(eq + 1));
        if (key == "qubits") c.n_qubits = value;
        else if (key == "cells") c.n_cells = value;
      }
      continue;
    }
    if (tag != "GATE") throw std::invalid_argument("unrecognized circuit line: " + line);
    std::string kind, qubits;
    int param = 0;
    ls >> kind >> qubits >> param;
    Gate g;
    g.param = param;
    if (kind == "H") g.kind = GateKind::H;
    else if (kind == "X") g.kind = GateKind::X;
    else if (kind == "RY") g.kind = GateKind::Ry;
    else if (kind == "CRY") g.kind = GateKind::CRy;
    else throw std::invalid_argument("unknown gate kind: " + kind);
    const auto comma = qubits.find(',');
    if (g.kind == GateKind::CRy) {
      if (comma == std::string::npos) {
        throw std::invalid_argument("controlled gate needs control,target: " + line);
      }
      g.control = std::stoi(qubits.substr(0, comma));
      g.qubit = std::stoi(qubits.substr(comma + 1));
    } else {
      g.qubit = std::stoi(qubits);
    }
    max_param = std::max(max_param, g.param);
    c.gates.push_back(g);
  }
  c.n_params = max_param;
  return c;
}

}  // namespace varqite
