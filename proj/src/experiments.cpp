#include "topopump/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <Eigen/QR>

#include "topopump/errors.hpp"
#include "topopump/parallel.hpp"

namespace topopump {

std::vector<double> uniform_grid(double start, double step, double stop) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (stop < start) throw std::invalid_argument("grid stop must not precede its start");
  std::vector<double> g;
  const long n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  g.reserve(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) g.push_back(start + step * static_cast<double>(i));
  return g;
}

namespace {

void require_increasing(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) throw std::invalid_argument(std::string(what) + " grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument(std::string(what) + " grid must be strictly increasing");
}

std::string chain_tag(const ChainSpec& spec) {
  std::ostringstream os;
  os << to_string(spec.topology()) << "/L=" << spec.num_sites();
  if (spec.topology() == Topology::Router) os << "/K=" << spec.branches();
  return os.str();
}

EvolveOptions fidelity_only(EvolveOptions o) {
  o.record_frames = false;
  return o;
}

std::vector<double> evaluate_fidelities(const ChainSpec& spec, const DriveSchedule& schedule,
                                        const std::vector<double>& grid, const EvolveOptions& options,
                                        int jobs) {
  const EvolveOptions o = fidelity_only(options);
  std::vector<double> f(grid.size());
  parallel_for(grid.size(), jobs, [&](std::size_t i) {
    f[i] = evolve(spec, schedule.with_t_star(grid[i]), o).fidelity;
  });
  return f;
}

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

// Two-pass mean and sample standard deviation (0 for a single value).
Moments moments(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  m.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return m;
}

struct Sample {
  bool ok = false;
  double fidelity = 0.0;
  bool has_phase = false;
  double phase = 0.0;
};

EnsembleStats summarize(double parameter, const std::vector<Sample>& samples) {
  EnsembleStats s;
  s.parameter = parameter;
  std::vector<double> f, ph, aph;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!samples[i].ok) {
      s.failed.push_back(i);
      continue;
    }
    f.push_back(samples[i].fidelity);
    if (samples[i].has_phase) {
      ph.push_back(samples[i].phase);
      aph.push_back(std::abs(samples[i].phase));
    }
  }
  if (f.empty()) throw NumericalError("every realization of the ensemble failed");
  s.samples = static_cast<int>(f.size());
  const Moments mf = moments(f);
  s.mean_fidelity = mf.mean;
  s.std_fidelity = mf.std;
  s.phase_samples = static_cast<int>(ph.size());
  const Moments mp = moments(ph);
  const Moments ma = moments(aph);
  s.mean_phase = mp.mean;
  s.std_phase = mp.std;
  s.mean_abs_phase = ma.mean;
  s.std_abs_phase = ma.std;
  return s;
}

Sample run_sample(const ChainSpec& spec, const DriveSchedule& schedule, const EvolveOptions& o) {
  Sample out;
  try {
    const EvolutionResult r = evolve(spec, schedule, o);
    out.ok = true;
    out.fidelity = r.fidelity;
    if (r.output_sites.size() >= 2) {
      try {
        out.phase = phase_difference(r);
        out.has_phase = true;
      } catch (const NumericalError&) {
        // Phase undefined for this realization; the fidelity still counts.
      }
    }
  } catch (const NumericalError&) {
    out.ok = false;
  }
  return out;
}

}  // namespace

FidelityCurve fidelity_vs_time(const ChainSpec& spec, const DriveSchedule& schedule,
                               const std::vector<double>& t_star_grid, const EvolveOptions& options,
                               int jobs) {
  require_increasing(t_star_grid, "t*");
  if (t_star_grid.front() <= 0.0) throw std::invalid_argument("t* grid values must be positive");
  FidelityCurve c;
  c.t_star = t_star_grid;
  c.fidelity = evaluate_fidelities(spec, schedule, t_star_grid, options, jobs);
  c.protocol = schedule.describe();
  c.chain = chain_tag(spec);
  return c;
}

std::optional<double> stabilization_time(const FidelityCurve& curve, double theta) {
  if (curve.t_star.size() != curve.fidelity.size()) throw std::invalid_argument("curve grid and values differ in size");
  std::optional<double> t;
  for (std::size_t i = curve.t_star.size(); i-- > 0;) {
    if (!(curve.fidelity[i] >= theta)) break;
    t = curve.t_star[i];
  }
  return t;
}

StabilizationResult search_stabilization_time(const ChainSpec& spec, const DriveSchedule& schedule,
                                              const StabilizationSearch& search,
                                              const EvolveOptions& options, int jobs) {
  if (!(search.t_min > 0.0)) throw std::invalid_argument("t_min must be positive");
  StabilizationResult res;
  if (search.coarse_step <= 0.0) {
    res.curve = fidelity_vs_time(spec, schedule, uniform_grid(search.t_min, search.step, search.t_max), options, jobs);
    res.t_stable = stabilization_time(res.curve, search.theta);
    return res;
  }
  if (search.coarse_step < search.step) throw std::invalid_argument("coarse step must not be finer than the step");

  FidelityCurve coarse =
      fidelity_vs_time(spec, schedule, uniform_grid(search.t_min, search.coarse_step, search.t_max), options, jobs);
  std::optional<std::size_t> last_below;
  for (std::size_t i = 0; i < coarse.t_star.size(); ++i)
    if (!(coarse.fidelity[i] >= search.theta)) last_below = i;

  std::vector<double> fine;
  if (last_below && *last_below + 1 < coarse.t_star.size()) {
    const double lo = coarse.t_star[*last_below];
    const double hi = coarse.t_star[*last_below + 1];
    for (double t : uniform_grid(lo, search.step, hi))
      if (t > lo + 1e-9 && t < hi - 1e-9) fine.push_back(t);
  }
  const std::vector<double> fine_f = evaluate_fidelities(spec, schedule, fine, options, jobs);

  std::vector<std::pair<double, double>> merged;
  for (std::size_t i = 0; i < coarse.t_star.size(); ++i) merged.emplace_back(coarse.t_star[i], coarse.fidelity[i]);
  for (std::size_t i = 0; i < fine.size(); ++i) merged.emplace_back(fine[i], fine_f[i]);
  std::sort(merged.begin(), merged.end());
  res.curve.protocol = coarse.protocol;
  res.curve.chain = coarse.chain;
  for (const auto& [t, f] : merged) {
    res.curve.t_star.push_back(t);
    res.curve.fidelity.push_back(f);
  }
  res.t_stable = stabilization_time(res.curve, search.theta);
  return res;
}

PhaseDiagram make_phase_diagram(std::vector<double> alpha_grid, std::vector<double> t_star_grid,
                                Eigen::MatrixXd fidelity) {
  require_increasing(alpha_grid, "alpha");
  require_increasing(t_star_grid, "t*");
  if (fidelity.rows() != static_cast<Eigen::Index>(alpha_grid.size()) ||
      fidelity.cols() != static_cast<Eigen::Index>(t_star_grid.size()))
    throw std::invalid_argument("fidelity matrix does not match the grids");
  PhaseDiagram d;
  d.alphas = std::move(alpha_grid);
  d.t_stars = std::move(t_star_grid);
  d.fidelity = std::move(fidelity);
  for (Eigen::Index a = 0; a < d.fidelity.rows(); ++a) {
    FidelityCurve row;
    row.t_star = d.t_stars;
    row.fidelity.resize(d.t_stars.size());
    for (Eigen::Index t = 0; t < d.fidelity.cols(); ++t) row.fidelity[static_cast<std::size_t>(t)] = d.fidelity(a, t);
    d.contour_090.push_back(stabilization_time(row, 0.9));
    d.contour_099.push_back(stabilization_time(row, 0.99));
  }
  return d;
}

PhaseDiagram alpha_phase_diagram(const ChainSpec& spec, const std::vector<double>& alpha_grid,
                                 const std::vector<double>& t_star_grid, const EvolveOptions& options,
                                 int jobs, OnsiteVariant variant) {
  require_increasing(alpha_grid, "alpha");
  require_increasing(t_star_grid, "t*");
  const std::size_t na = alpha_grid.size();
  const std::size_t nt = t_star_grid.size();
  Eigen::MatrixXd f(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(nt));
  const EvolveOptions o = fidelity_only(options);
  parallel_for(na * nt, jobs, [&](std::size_t k) {
    const std::size_t a = k / nt;
    const std::size_t t = k % nt;
    const auto sched = DriveSchedule::exponential(alpha_grid[a], t_star_grid[t], 1.0, variant);
    f(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(t)) = evolve(spec, sched, o).fidelity;
  });
  return make_phase_diagram(alpha_grid, t_star_grid, std::move(f));
}

OptimalAlpha optimal_alpha(const PhaseDiagram& diagram) {
  std::optional<OptimalAlpha> best;
  for (std::size_t a = 0; a < diagram.alphas.size(); ++a) {
    if (!diagram.contour_099[a]) continue;
    const double t = *diagram.contour_099[a];
    const bool better = !best || t < best->t_star_099 - 1e-9 ||
                        (std::abs(t - best->t_star_099) <= 1e-9 && diagram.alphas[a] < best->alpha);
    if (better) best = OptimalAlpha{diagram.alphas[a], t};
  }
  if (!best) throw NumericalError("no alpha in the grid stabilizes above 0.99 within the scanned t* range");
  return *best;
}

OptimalAlpha optimal_alpha(const ChainSpec& spec, const std::vector<double>& alpha_grid,
                           const std::vector<double>& t_star_grid, const EvolveOptions& options, int jobs) {
  return optimal_alpha(alpha_phase_diagram(spec, alpha_grid, t_star_grid, options, jobs));
}

double EnsembleStats::standard_error() const {
  return samples > 0 ? std_fidelity / std::sqrt(static_cast<double>(samples)) : 0.0;
}

EnsembleStats disorder_ensemble(const ChainSpec& spec, const DriveSchedule& schedule,
                                const DisorderConfig& disorder, int samples, std::uint64_t master_seed,
                                const EvolveOptions& options, int jobs) {
  if (samples < 1) throw std::invalid_argument("ensemble size must be at least 1");
  std::vector<Sample> out(static_cast<std::size_t>(samples));
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    EvolveOptions o = fidelity_only(options);
    o.disorder = sample_disorder(spec, disorder.kind, disorder.symmetry, disorder.strength,
                                 realization_seed(master_seed, i), disorder.granularity);
    out[i] = run_sample(spec, schedule, o);
  });
  return summarize(disorder.strength, out);
}

std::vector<EnsembleStats> loss_sweep(const ChainSpec& spec, const DriveSchedule& schedule,
                                      const std::vector<double>& gammas, bool asymmetric, int samples,
                                      std::uint64_t master_seed, const EvolveOptions& options, int jobs,
                                      double spread) {
  if (gammas.empty()) throw std::invalid_argument("gamma grid is empty");
  const std::size_t m = asymmetric ? static_cast<std::size_t>(samples) : 1;
  if (asymmetric && samples < 1) throw std::invalid_argument("ensemble size must be at least 1");
  std::vector<Sample> out(gammas.size() * m);
  parallel_for(out.size(), jobs, [&](std::size_t k) {
    const std::size_t g = k / m;
    const std::size_t i = k % m;
    EvolveOptions o = fidelity_only(options);
    if (asymmetric) {
      o.loss = sample_loss(gammas[g], spread, realization_seed(master_seed, i));
    } else {
      o.loss = LossModel{gammas[g], false, 0.0, 0.0};
    }
    out[k] = run_sample(spec, schedule, o);
  });
  std::vector<EnsembleStats> stats;
  for (std::size_t g = 0; g < gammas.size(); ++g)
    stats.push_back(summarize(gammas[g], std::vector<Sample>(out.begin() + static_cast<long>(g * m),
                                                             out.begin() + static_cast<long>((g + 1) * m))));
  return stats;
}

double alpha_rule(double L) { return 1.2e-5 * L * L * L - 0.0026 * L * L + 0.22 * L - 0.33; }
double exponential_time_budget(double L) { return 0.00052 * L * L * L + 0.059 * L * L - 0.34 * L + 68.0; }
double cosine_time_budget(double L) { return 0.1 * L * L * L - 0.46 * L * L + 28.0 * L - 260.0; }

namespace {

ChainSpec interface_of_length(int L) {
  if (L < 5 || L % 2 == 0 || ((L - 1) / 2) % 2 != 0)
    throw std::invalid_argument("interface chain length must be L = 2N+1 with N even and N >= 2");
  return ChainSpec::interface_chain((L - 1) / 2);
}

}  // namespace

std::vector<LengthPoint> stabilization_vs_length(const std::vector<int>& lengths, const DriveSchedule& schedule,
                                                 const StabilizationSearch& search,
                                                 std::optional<double> fixed_alpha, const EvolveOptions& options,
                                                 int jobs) {
  std::vector<LengthPoint> out;
  for (int L : lengths) {
    const ChainSpec spec = interface_of_length(L);
    LengthPoint p;
    p.length = L;
    DriveSchedule s = schedule;
    if (schedule.kind() == ProtocolKind::Exponential) {
      p.alpha = fixed_alpha ? *fixed_alpha : alpha_rule(L);
      s = schedule.with_alpha(p.alpha);
    }
    p.t_stable = search_stabilization_time(spec, s, search, options, jobs).t_stable;
    out.push_back(p);
  }
  return out;
}

std::vector<BranchPoint> stabilization_vs_branches(const std::vector<int>& branch_counts, int branch_sites,
                                                   const DriveSchedule& schedule,
                                                   const StabilizationSearch& search,
                                                   const EvolveOptions& options, int jobs) {
  std::vector<BranchPoint> out;
  for (int K : branch_counts) {
    const ChainSpec spec = ChainSpec::router(K, branch_sites);
    out.push_back({K, search_stabilization_time(spec, schedule, search, options, jobs).t_stable});
  }
  return out;
}

std::vector<LossLengthPoint> lossy_fidelity_vs_length(const std::vector<int>& lengths, double gamma,
                                                      const EvolveOptions& options, int jobs) {
  std::vector<LossLengthPoint> out(lengths.size());
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const double L = lengths[i];
    interface_of_length(lengths[i]);
    out[i].length = lengths[i];
    out[i].alpha = alpha_rule(L);
    out[i].t_cosine = cosine_time_budget(L);
    out[i].t_exponential = exponential_time_budget(L);
    if (out[i].t_cosine <= 0.0 || out[i].t_exponential <= 0.0)
      throw std::invalid_argument("time budget is not positive for this chain length");
  }
  EvolveOptions o = fidelity_only(options);
  o.loss = LossModel{gamma, false, 0.0, 0.0};
  parallel_for(2 * out.size(), jobs, [&](std::size_t k) {
    LossLengthPoint& p = out[k / 2];
    const ChainSpec spec = interface_of_length(p.length);
    if (k % 2 == 0) {
      p.fidelity_cosine = evolve(spec, DriveSchedule::cosine(p.t_cosine), o).fidelity;
    } else {
      p.fidelity_exponential = evolve(spec, DriveSchedule::exponential(p.alpha, p.t_exponential), o).fidelity;
    }
  });
  return out;
}

double CubicFit::operator()(double x) const {
  const auto& c = coefficients;
  return ((c[0] * x + c[1]) * x + c[2]) * x + c[3];
}

CubicFit cubic_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("cubic fit needs as many y values as x values");
  if (std::set<double>(xs.begin(), xs.end()).size() < 4)
    throw std::invalid_argument("cubic fit needs at least four distinct x values");
  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd A(n, 4);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = xs[static_cast<std::size_t>(i)];
    A(i, 0) = x * x * x;
    A(i, 1) = x * x;
    A(i, 2) = x;
    A(i, 3) = 1.0;
    y(i) = ys[static_cast<std::size_t>(i)];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < 4) throw NumericalError("cubic fit design matrix is rank deficient");
  const Eigen::Vector4d c = qr.solve(y);
  CubicFit fit;
  for (int k = 0; k < 4; ++k) fit.coefficients[static_cast<std::size_t>(k)] = c(k);
  fit.residual_rms = std::sqrt((A * c - y).squaredNorm() / static_cast<double>(n));
  fit.xs = xs;
  fit.ys = ys;
  return fit;
}

}  // namespace topopump
