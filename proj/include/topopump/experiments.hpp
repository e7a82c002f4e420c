#pragma once

// Sweeps, ensembles and fits built on top of evolve(): fidelity curves,
// stabilization times, (alpha, t*) phase diagrams, disorder/loss ensembles,
// scalability scans and cubic fits.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "topopump/dynamics.hpp"
#include "topopump/lattice.hpp"
#include "topopump/protocol.hpp"

namespace topopump {

/// Uniform grid start, start+step, ... up to stop (inclusive within 1e-9 step).
std::vector<double> uniform_grid(double start, double step, double stop);

struct FidelityCurve {
  std::vector<double> t_star;
  std::vector<double> fidelity;
  std::string protocol;
  std::string chain;
};

FidelityCurve fidelity_vs_time(const ChainSpec& spec, const DriveSchedule& schedule,
                               const std::vector<double>& t_star_grid,
                               const EvolveOptions& options = {}, int jobs = 1);

/// Smallest scanned t* with F >= theta at that point and at every later point.
std::optional<double> stabilization_time(const FidelityCurve& curve, double theta = 0.99);

struct StabilizationSearch {
  double t_min = 5.0;
  double t_max = 300.0;
  double step = 5.0;
  /// When > 0, scan at this spacing first and refine only the interval after
  /// the last coarse point below theta; later points are checked at the
  /// coarse spacing. 0 scans the whole range at `step`.
  double coarse_step = 0.0;
  double theta = 0.99;
};

struct StabilizationResult {
  std::optional<double> t_stable;
  FidelityCurve curve;  // every point that was evaluated, sorted by t*
};

StabilizationResult search_stabilization_time(const ChainSpec& spec, const DriveSchedule& schedule,
                                              const StabilizationSearch& search,
                                              const EvolveOptions& options = {}, int jobs = 1);

struct PhaseDiagram {
  std::vector<double> alphas;
  std::vector<double> t_stars;
  Eigen::MatrixXd fidelity;  // rows: alpha, cols: t*
  std::vector<std::optional<double>> contour_090;  // stabilization time per alpha
  std::vector<std::optional<double>> contour_099;
};

/// Wraps a precomputed fidelity matrix and extracts the 0.9/0.99 contours.
PhaseDiagram make_phase_diagram(std::vector<double> alpha_grid, std::vector<double> t_star_grid,
                                Eigen::MatrixXd fidelity);

PhaseDiagram alpha_phase_diagram(const ChainSpec& spec, const std::vector<double>& alpha_grid,
                                 const std::vector<double>& t_star_grid,
                                 const EvolveOptions& options = {}, int jobs = 1,
                                 OnsiteVariant variant = OnsiteVariant::AsPrinted);

struct OptimalAlpha {
  double alpha = 0.0;
  double t_star_099 = 0.0;
};

/// Alpha with the smallest 0.99 stabilization time; ties go to the smaller alpha.
OptimalAlpha optimal_alpha(const PhaseDiagram& diagram);
OptimalAlpha optimal_alpha(const ChainSpec& spec, const std::vector<double>& alpha_grid,
                           const std::vector<double>& t_star_grid,
                           const EvolveOptions& options = {}, int jobs = 1);

struct EnsembleStats {
  double parameter = 0.0;
  int samples = 0;
  double mean_fidelity = 0.0;
  double std_fidelity = 0.0;
  int phase_samples = 0;
  double mean_phase = 0.0;
  double std_phase = 0.0;
  double mean_abs_phase = 0.0;
  double std_abs_phase = 0.0;
  std::vector<std::size_t> failed;  // realization indices whose evolution failed

  double standard_error() const;
};

struct DisorderConfig {
  DisorderKind kind = DisorderKind::Diagonal;
  DisorderSymmetry symmetry = DisorderSymmetry::MirrorSymmetric;
  double strength = 0.0;
  DisorderGranularity granularity = DisorderGranularity::PerElement;
};

/// M evolutions, realization i drawn with realization_seed(master_seed, i).
EnsembleStats disorder_ensemble(const ChainSpec& spec, const DriveSchedule& schedule,
                                const DisorderConfig& disorder, int samples,
                                std::uint64_t master_seed, const EvolveOptions& options = {},
                                int jobs = 1);

/// One entry per gamma. Symmetric loss is deterministic (one run); the
/// asymmetric mode draws dgamma_left/right in [-spread, spread] for each of
/// `samples` realizations.
std::vector<EnsembleStats> loss_sweep(const ChainSpec& spec, const DriveSchedule& schedule,
                                      const std::vector<double>& gammas, bool asymmetric,
                                      int samples, std::uint64_t master_seed,
                                      const EvolveOptions& options = {}, int jobs = 1,
                                      double spread = 0.1);

/// Empirical cubic rules for the exponential parameter and the 0.99 time
/// budgets of both protocols as functions of the chain length L.
double alpha_rule(double L);
double exponential_time_budget(double L);
double cosine_time_budget(double L);

struct LengthPoint {
  int length = 0;
  double alpha = 0.0;
  std::optional<double> t_stable;
};

/// Stabilization time of interface chains of the given lengths (L = 2N+1, N even).
/// For the exponential protocol alpha follows alpha_rule unless fixed_alpha is set.
std::vector<LengthPoint> stabilization_vs_length(const std::vector<int>& lengths,
                                                 const DriveSchedule& schedule,
                                                 const StabilizationSearch& search,
                                                 std::optional<double> fixed_alpha = std::nullopt,
                                                 const EvolveOptions& options = {}, int jobs = 1);

struct BranchPoint {
  int branches = 0;
  std::optional<double> t_stable;
};

std::vector<BranchPoint> stabilization_vs_branches(const std::vector<int>& branch_counts,
                                                   int branch_sites, const DriveSchedule& schedule,
                                                   const StabilizationSearch& search,
                                                   const EvolveOptions& options = {}, int jobs = 1);

struct LossLengthPoint {
  int length = 0;
  double alpha = 0.0;
  double t_cosine = 0.0;
  double t_exponential = 0.0;
  double fidelity_cosine = 0.0;
  double fidelity_exponential = 0.0;
};

/// Fidelity vs L at fixed uniform loss, with the cubic time budgets and alpha rule.
std::vector<LossLengthPoint> lossy_fidelity_vs_length(const std::vector<int>& lengths, double gamma,
                                                      const EvolveOptions& options = {}, int jobs = 1);

struct CubicFit {
  std::array<double, 4> coefficients{};  // c3, c2, c1, c0
  double residual_rms = 0.0;
  std::vector<double> xs;
  std::vector<double> ys;

  double operator()(double x) const;
};

/// Ordinary least-squares cubic; needs at least four distinct x values.
CubicFit cubic_fit(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace topopump
