#pragma once

// Time evolution of a single excitation under H(t), with optional static
// disorder and non-Hermitian loss, plus fidelity/phase observables.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "topopump/lattice.hpp"
#include "topopump/protocol.hpp"

namespace topopump {

using StateVector = Eigen::VectorXcd;

/// Input port: the interface/hub site, or site 0 of a plain odd chain.
StateVector initial_state(const ChainSpec& spec);
/// Output ports: equal amplitude 1/sqrt(K) on the K outer ends (last site of
/// a plain odd chain).
StateVector target_state(const ChainSpec& spec);

struct EvolveOptions {
  /// Step size; 0 selects min(0.005, t*/20000).
  double dt = 0.0;
  /// Guard on dt * max_t |H(t)|.
  double stability_limit = 0.1;
  std::optional<DisorderRealization> disorder;
  std::optional<LossModel> loss;
  /// Record population/phase frames (at most max_frames of them).
  bool record_frames = true;
  int max_frames = 500;
  /// Override the default input/output ports (site indices).
  std::optional<std::size_t> input_site;
  std::optional<std::vector<std::size_t>> output_sites;
};

double default_dt(double t_star);

struct EvolutionResult {
  StateVector final_state;
  double fidelity = 0.0;
  double final_norm = 1.0;  // |psi(t*)|^2
  double dt = 0.0;
  long steps = 0;
  double max_norm_drift = 0.0;  // max_t |1 - |psi(t)|^2|

  std::vector<double> frame_times;
  Eigen::MatrixXd populations;  // frames x sites
  std::vector<double> norm_series;

  std::vector<std::size_t> output_sites;

  /// arg(psi_i) at t* per site.
  Eigen::VectorXd phase_profile() const;
};

/// Integrates i d/dt psi = H(t) psi on [0, t*] with classical RK4.
/// Fidelity |<target|psi(t*)>|^2 is taken without renormalizing psi.
EvolutionResult evolve(const ChainSpec& spec, const DriveSchedule& schedule,
                       const EvolveOptions& options = {});

/// Phase of output port 0 minus that of port 1, wrapped to (-pi, pi]. For
/// more than two ports, the pairwise difference of largest magnitude.
/// Throws NumericalError if an end amplitude is below 1e-6.
double phase_difference(const EvolutionResult& result);
double phase_difference(const StateVector& state, const std::vector<std::size_t>& ends);

struct ConvergenceReport {
  double fidelity_dt = 0.0;
  double fidelity_half = 0.0;
  double delta = 0.0;
};

ConvergenceReport convergence_check(const ChainSpec& spec, const DriveSchedule& schedule,
                                    EvolveOptions options = {});

/// Exact exp(-i H t) psi for a constant Hermitian H (spectral decomposition).
StateVector propagate_constant(const HamiltonianMatrix& h, const StateVector& psi, double t);

/// RK4 integration of a constant (possibly non-Hermitian) H.
StateVector integrate_constant(const HamiltonianMatrix& h, const StateVector& psi, double t,
                               double dt);

}  // namespace topopump
