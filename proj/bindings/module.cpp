#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "varqite/calibration.hpp"
#include "varqite/mclachlan.hpp"
#include "varqite/oracle.hpp"
#include "varqite/runner.hpp"

namespace py = pybind11;
using namespace varqite;

namespace {

StateVector state_from_array(const Eigen::VectorXcd& amps) {
  int n = 0;
  while ((Eigen::Index{1} << n) < amps.size()) ++n;
  if ((Eigen::Index{1} << n) != amps.size()) {
    throw std::invalid_argument("amplitude count must be a power of two");
  }
  StateVector s;
  s.n_qubits = n;
  s.amps = amps;
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Variational imaginary-time evolution pricer (statevector core)";

  py::class_<StateVector>(m, "StateVector")
      .def(py::init(&state_from_array), py::arg("amplitudes"))
      .def_readonly("n_qubits", &StateVector::n_qubits)
      .def_property_readonly("amplitudes",
                             [](const StateVector& s) { return s.amps; })
      .def("norm", &StateVector::norm);

  m.def("zero_state", &zero_state, py::arg("n_qubits"));
  m.def("basis_state", &basis_state, py::arg("n_qubits"), py::arg("index"));
  m.def("gate_x", &gate_x);
  m.def("gate_y", &gate_y);
  m.def("gate_h", &gate_h);
  m.def("gate_ry", &gate_ry, py::arg("theta"));
  m.def("gate_cry", &gate_cry, py::arg("theta"));
  m.def("apply_single", &apply_single, py::arg("gate"), py::arg("qubit"), py::arg("state"));
  m.def("apply_controlled", &apply_controlled, py::arg("gate"), py::arg("control"),
        py::arg("target"), py::arg("state"));
  m.def("apply_dense", &apply_dense, py::arg("matrix"), py::arg("state"));
  m.def("inner_product", &inner_product, py::arg("a"), py::arg("b"));

  py::class_<AnsatzCircuit>(m, "AnsatzCircuit")
      .def_readonly("n_qubits", &AnsatzCircuit::n_qubits)
      .def_readonly("n_cells", &AnsatzCircuit::n_cells)
      .def_readonly("n_params", &AnsatzCircuit::n_params)
      .def("__repr__", [](const AnsatzCircuit& c) {
        return "<AnsatzCircuit qubits=" + std::to_string(c.n_qubits) +
               " cells=" + std::to_string(c.n_cells) +
               " params=" + std::to_string(c.n_params) + ">";
      });
  m.def("build_ansatz", &build_ansatz, py::arg("n_qubits"), py::arg("n_cells"));
  m.def("prepare_state", &prepare_state, py::arg("circuit"), py::arg("theta"));
  m.def("derivative_state", &derivative_state, py::arg("circuit"), py::arg("theta"),
        py::arg("k"));
  m.def("derivative_state_fd", &derivative_state_fd, py::arg("circuit"), py::arg("theta"),
        py::arg("k"), py::arg("h") = 1e-5);
  m.def("serialize_circuit", &serialize_circuit, py::arg("circuit"));

  py::class_<SpaceGrid>(m, "SpaceGrid")
      .def_static("linear", &SpaceGrid::linear, py::arg("v_min"), py::arg("v_max"),
                  py::arg("n_points"))
      .def_readonly("v_min", &SpaceGrid::v_min)
      .def_readonly("v_max", &SpaceGrid::v_max)
      .def_readonly("n_points", &SpaceGrid::n_points)
      .def_readonly("delta", &SpaceGrid::delta)
      .def_readonly("values", &SpaceGrid::values);

  py::class_<TransformConstants>(m, "TransformConstants")
      .def(py::init([](double sigma, double rate, double maturity) {
             return TransformConstants{sigma, rate, maturity};
           }),
           py::arg("sigma"), py::arg("rate"), py::arg("maturity"))
      .def_readonly("sigma", &TransformConstants::sigma)
      .def_readonly("rate", &TransformConstants::rate)
      .def_readonly("maturity", &TransformConstants::maturity)
      .def("a", &TransformConstants::a)
      .def("b", &TransformConstants::b)
      .def("tau_final", &TransformConstants::tau_final);

  py::class_<HamiltonianSpec>(m, "HamiltonianSpec")
      .def_readonly("matrix", &HamiltonianSpec::matrix)
      .def_readonly("time_dependent", &HamiltonianSpec::time_dependent)
      .def("at", &HamiltonianSpec::at, py::arg("tau"));

  m.def("q_of_t", &q_of_t, py::arg("t"), py::arg("rate"), py::arg("maturity"));
  m.def("spot_of_y", &spot_of_y, py::arg("y"), py::arg("strike"));
  m.def("european_hamiltonian", &european_hamiltonian, py::arg("grid"), py::arg("consts"));
  m.def("asian_hamiltonian", &asian_hamiltonian, py::arg("grid"), py::arg("tau"),
        py::arg("consts"));

  py::class_<PauliTerm>(m, "PauliTerm")
      .def_readonly("ops", &PauliTerm::ops)
      .def_readonly("coeff", &PauliTerm::coeff);
  py::class_<PauliDecomposition>(m, "PauliDecomposition")
      .def_readonly("n_qubits", &PauliDecomposition::n_qubits)
      .def_readonly("terms", &PauliDecomposition::terms);
  m.def("pauli_decompose", &pauli_decompose, py::arg("matrix"),
        py::arg("symmetrize") = false, py::arg("drop_tol") = 1e-12);
  m.def("pauli_reconstruct", &pauli_reconstruct, py::arg("decomposition"));
  m.def("apply_pauli_string", &apply_pauli_string, py::arg("ops"), py::arg("state"));

  py::class_<EvolutionConfig>(m, "EvolutionConfig")
      .def(py::init<>())
      .def_readwrite("tau_final", &EvolutionConfig::tau_final)
      .def_readwrite("n_steps", &EvolutionConfig::n_steps)
      .def_readwrite("cutoff_ratio", &EvolutionConfig::cutoff_ratio)
      .def_property(
          "mode",
          [](const EvolutionConfig& c) {
            return c.mode == MeasurementMode::Shots ? "shots" : "exact";
          },
          [](EvolutionConfig& c, const std::string& mode) {
            c.mode = mode == "shots" ? MeasurementMode::Shots : MeasurementMode::Exact;
          })
      .def_readwrite("shots", &EvolutionConfig::shots)
      .def_readwrite("rng_seed", &EvolutionConfig::rng_seed)
      .def_readwrite("use_pauli_path", &EvolutionConfig::use_pauli_path)
      .def_readwrite("global_phase_correction", &EvolutionConfig::global_phase_correction);

  m.def("assemble_a", &assemble_a, py::arg("circuit"), py::arg("theta"));
  m.def("assemble_c", &assemble_c, py::arg("circuit"), py::arg("theta"), py::arg("h"));
  m.def("assemble_c_pauli", &assemble_c_pauli, py::arg("circuit"), py::arg("theta"),
        py::arg("decomposition"));
  m.def(
      "hadamard_test_a_entry",
      [](const AnsatzCircuit& c, const ParameterVector& theta, int i, int j,
         const EvolutionConfig& cfg) {
        auto rng = make_engine(cfg.rng_seed, 0);
        return hadamard_test_a_entry(c, theta, i, j, cfg, rng);
      },
      py::arg("circuit"), py::arg("theta"), py::arg("i"), py::arg("j"), py::arg("config"));
  m.def(
      "solve_thetadot",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& c, double cutoff) {
        const SolveResult r = solve_thetadot(a, c, cutoff);
        return py::make_tuple(r.theta_dot, r.singular_values, r.truncated_modes,
                              r.residual);
      },
      py::arg("a"), py::arg("c"), py::arg("cutoff_ratio") = 1e-8);

  py::class_<StepRecord>(m, "StepRecord")
      .def_readonly("tau", &StepRecord::tau)
      .def_readonly("theta", &StepRecord::theta)
      .def_readonly("theta_dot_norm", &StepRecord::theta_dot_norm)
      .def_readonly("residual", &StepRecord::residual)
      .def_readonly("oracle_distance", &StepRecord::oracle_distance)
      .def_readonly("min_eigenvalue", &StepRecord::min_eigenvalue);
  py::class_<EvolutionTrace>(m, "EvolutionTrace")
      .def_readonly("steps", &EvolutionTrace::steps)
      .def_readonly("diverged", &EvolutionTrace::diverged)
      .def_readonly("diverged_step", &EvolutionTrace::diverged_step);
  m.def(
      "evolve",
      [](const AnsatzCircuit& c, const ParameterVector& theta0, const HamiltonianSpec& h,
         const EvolutionConfig& cfg, const std::vector<StateVector>* reference) {
        return evolve(c, theta0, h, cfg, reference);
      },
      py::arg("circuit"), py::arg("theta0"), py::arg("h"), py::arg("config"),
      py::arg("reference_states") = nullptr);

  py::class_<TargetState>(m, "TargetState")
      .def_readonly("state", &TargetState::state)
      .def_readonly("raw_norm", &TargetState::raw_norm)
      .def_readonly("label", &TargetState::label);
  m.def("payoff_state_european", &payoff_state_european, py::arg("x_grid"),
        py::arg("strike"), py::arg("consts"));
  m.def("payoff_state_asian", &payoff_state_asian, py::arg("y_grid"));

  py::class_<OptimizerConfig>(m, "OptimizerConfig")
      .def(py::init<>())
      .def_readwrite("population_factor", &OptimizerConfig::population_factor)
      .def_readwrite("differential_weight", &OptimizerConfig::differential_weight)
      .def_readwrite("crossover_rate", &OptimizerConfig::crossover_rate)
      .def_readwrite("max_generations", &OptimizerConfig::max_generations)
      .def_readwrite("target_epsilon", &OptimizerConfig::target_epsilon)
      .def_readwrite("seed", &OptimizerConfig::seed)
      .def_readwrite("polish_iterations", &OptimizerConfig::polish_iterations);
  py::class_<FitResult>(m, "FitResult")
      .def_readonly("theta0", &FitResult::theta0)
      .def_readonly("epsilon", &FitResult::epsilon)
      .def_readonly("n_cells", &FitResult::n_cells)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("generations", &FitResult::generations)
      .def_readonly("evaluations", &FitResult::evaluations);
  m.def("fit_theta0", &fit_theta0, py::arg("circuit"), py::arg("target"), py::arg("config"),
        py::arg("warm_starts") = std::vector<ParameterVector>{});
  m.def(
      "ansatz_depth_search",
      [](const TargetState& target, double eps_max, int start, int max_cells, int n_qubits,
         const OptimizerConfig& cfg) {
        const DepthSearchResult r =
            ansatz_depth_search(target, eps_max, start, max_cells, n_qubits, cfg);
        return py::make_tuple(r.circuit, r.fit, r.converged);
      },
      py::arg("target"), py::arg("eps_max"), py::arg("n_cells_start"),
      py::arg("n_cells_max"), py::arg("n_qubits"), py::arg("config"));

  py::class_<ImagEvolution>(m, "ImagEvolution")
      .def_readonly("state", &ImagEvolution::state)
      .def_readonly("log_norm", &ImagEvolution::log_norm)
      .def("gamma", &ImagEvolution::gamma);
  py::class_<ReferenceTrajectory>(m, "ReferenceTrajectory")
      .def_readonly("taus", &ReferenceTrajectory::taus)
      .def_readonly("states", &ReferenceTrajectory::states)
      .def_readonly("log_norms", &ReferenceTrajectory::log_norms)
      .def_readonly("unnormalized", &ReferenceTrajectory::unnormalized);
  m.def("exact_imaginary_evolution", &exact_imaginary_evolution, py::arg("h"),
        py::arg("psi0"), py::arg("tau"));
  m.def("exact_imaginary_evolution_td", &exact_imaginary_evolution_td, py::arg("h_of_tau"),
        py::arg("psi0"), py::arg("tau_grid"), py::arg("u0_norm") = 1.0);
  m.def("matrix_exponential", &matrix_exponential, py::arg("m"));
  m.def("black_scholes_call", &black_scholes_call, py::arg("spot"), py::arg("strike"),
        py::arg("sigma"), py::arg("rate"), py::arg("maturity"));
  m.def("rescale_to_price_european", &rescale_to_price_european, py::arg("phi"),
        py::arg("tau"), py::arg("x_grid"), py::arg("consts"), py::arg("strike"));
  py::class_<AsianRescale>(m, "AsianRescale")
      .def_readonly("q_values", &AsianRescale::q_values)
      .def_readonly("y0", &AsianRescale::y0)
      .def_readonly("inception_price", &AsianRescale::inception_price);
  m.def("rescale_to_price_asian", &rescale_to_price_asian, py::arg("phi"), py::arg("tau"),
        py::arg("y_grid"), py::arg("s0"), py::arg("strike"), py::arg("rate"),
        py::arg("maturity"));
}
