#include "topopump/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "topopump/config.hpp"
#include "topopump/dynamics.hpp"
#include "topopump/errors.hpp"
#include "topopump/experiments.hpp"
#include "topopump/output.hpp"
#include "topopump/parallel.hpp"
#include "topopump/spectral.hpp"

#ifndef TOPOPUMP_VERSION
#define TOPOPUMP_VERSION "0.0.0"
#endif

namespace topopump::cli {

std::string version() { return TOPOPUMP_VERSION; }

namespace {

namespace fs = std::filesystem;
using Col = ResultTable::Column;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) { return format_double(v); }
std::string num(std::size_t v) { return std::to_string(v); }
std::string num(long v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }
std::string num(const std::optional<double>& v) { return format_double(v ? *v : kInf); }

class Run {
 public:
  Run(std::string command, RunConfig cfg, int jobs)
      : command_(std::move(command)), cfg_(std::move(cfg)), jobs_(jobs), out_(cfg_.get("out")),
        points_(out_ / ".points" / (command_ + "-" + cfg_.hash_hex())) {
    std::error_code ec;
    fs::create_directories(out_ / ".points" / (command_ + "-" + cfg_.hash_hex()), ec);
    if (ec) throw IoError("cannot create output directory " + out_.string() + ": " + ec.message());
  }

  const RunConfig& cfg() const { return cfg_; }
  int jobs() const { return jobs_; }
  const PointStore& points() const { return points_; }

  void emit(const std::string& name, const ResultTable& table) {
    table.write(out_ / name, Provenance{version(), command_, cfg_.hash_hex(), cfg_.seed()});
    outputs_.push_back(name);
  }

  void write_manifest() const {
    nlohmann::ordered_json m;
    m["artifact"] = "topopump";
    m["version"] = version();
    m["command"] = command_;
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    m["timestamp"] = stamp;
    m["config_hash"] = "fnv1a64:" + cfg_.hash_hex();
    m["seed"] = cfg_.seed();
    m["jobs"] = jobs_;
    nlohmann::ordered_json c;
    for (const ConfigKey& k : config_schema()) c[k.name] = cfg_.get(k.name);
    m["config"] = c;
    m["config_text"] = cfg_.serialize();
    m["outputs"] = outputs_;
    write_text_file(out_ / "manifest.json", m.dump(2) + "\n");
  }

  /// Cached numeric work item: returns the stored record or computes and stores it.
  template <typename Fn>
  std::vector<double> cached(const std::string& key, Fn&& compute) const {
    if (auto v = points_.load(key)) return *v;
    std::vector<double> v = compute();
    points_.save(key, v);
    return v;
  }

 private:
  std::string command_;
  RunConfig cfg_;
  int jobs_;
  fs::path out_;
  PointStore points_;
  std::vector<std::string> outputs_;
};

std::vector<double> sample_times(double t_star, long n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = t_star * static_cast<double>(i) / static_cast<double>(n - 1);
  return t;
}

CouplingPoint static_point(const RunConfig& c, double J1) {
  CouplingPoint p;
  p.J1 = J1;
  p.J2 = c.number("J2");
  p.Va = c.number("Va");
  p.Vb = -p.Va;
  return p;
}

// ---------------------------------------------------------------- spectrum

void cmd_spectrum(Run& run) {
  const RunConfig& c = run.cfg();
  const ChainSpec spec = c.chain();
  const DriveSchedule sched = c.schedule();
  const auto times = sample_times(sched.t_star(), c.integer("spectrum_samples"));
  EigenOptions eo;
  eo.degeneracy_tol = c.number("degeneracy_tol");

  ResultTable spec_t({{"t", "1/J0"}, {"level", "1"}, {"energy", "J0"}});
  std::vector<Eigen::VectorXd> levels(times.size());
  parallel_for(times.size(), run.jobs(), [&](std::size_t i) {
    levels[i] = eigendecompose(build_hamiltonian(spec, sched.at(times[i])), eo).real_eigenvalues();
  });
  for (std::size_t i = 0; i < times.size(); ++i)
    for (Eigen::Index n = 0; n < levels[i].size(); ++n) spec_t.add_row({num(times[i]), num(static_cast<long>(n)), num(levels[i](n))});
  run.emit("spectrum_vs_t.csv", spec_t);

  if (c.has("J1_grid")) {
    const auto j1 = c.grid("J1_grid");
    ResultTable spec_j({{"J1", "J0"}, {"level", "1"}, {"energy", "J0"}});
    for (double J1 : j1) {
      const auto ev = eigendecompose(build_hamiltonian(spec, static_point(c, J1)), eo).real_eigenvalues();
      for (Eigen::Index n = 0; n < ev.size(); ++n) spec_j.add_row({num(J1), num(static_cast<long>(n)), num(ev(n))});
    }
    run.emit("spectrum_vs_J1.csv", spec_j);
  }

  if (spec.topology() == Topology::EvenSSH) return;

  const GapTrack track = gap_tracking(spec, sched, times);
  ResultTable gap({{"t", "1/J0"}, {"energy", "J0"}, {"Va", "J0"}, {"min_neighbor_gap", "J0"}, {"continuity", "1"}});
  ResultTable density({{"t", "1/J0"}, {"site", "1"}, {"density", "1"}});
  for (const GapPoint& p : track.points) {
    gap.add_row({num(p.t), num(p.energy), num(sched.at(p.t).Va), num(p.min_neighbor_gap), num(p.continuity)});
    for (Eigen::Index s = 0; s < p.state.size(); ++s) density.add_row({num(p.t), num(static_cast<long>(s)), num(std::norm(p.state(s)))});
  }
  run.emit("gap_state.csv", gap);
  run.emit("gap_density.csv", density);

  if (c.has("alpha_grid")) {
    const auto alphas = c.grid("alpha_grid");
    std::vector<GapTrack> tracks(alphas.size());
    const DriveSchedule base = DriveSchedule::exponential(alphas.front(), sched.t_star());
    parallel_for(alphas.size(), run.jobs(), [&](std::size_t i) {
      tracks[i] = gap_tracking(spec, base.with_alpha(alphas[i]), times);
    });
    ResultTable mg({{"alpha", "1"}, {"min_gap", "J0"}, {"t_at_min_gap", "1/J0"}});
    for (std::size_t i = 0; i < alphas.size(); ++i)
      mg.add_row({num(alphas[i]), num(tracks[i].min_gap), num(tracks[i].t_at_min_gap)});
    run.emit("min_gap_vs_alpha.csv", mg);
  }
}

// ----------------------------------------------------------------- winding

void cmd_winding(Run& run) {
  const RunConfig& c = run.cfg();
  const std::vector<double> j1 = c.has("J1_grid") ? c.grid("J1_grid") : std::vector<double>{c.number("J1")};
  const int n_k = static_cast<int>(c.integer("n_k"));
  ResultTable w({{"J1", "J0"}, {"J2", "J0"}, {"Va", "J0"}, {"winding", "1"}, {"raw", "1"}});
  ResultTable disp({{"J1", "J0"}, {"k", "1"}, {"E_minus", "J0"}, {"E_plus", "J0"}, {"dx", "J0"}, {"dy", "J0"}});
  constexpr int kDispersionPoints = 201;
  for (double J1 : j1) {
    const CouplingPoint p = static_point(c, J1);
    for (int i = 0; i < kDispersionPoints; ++i) {
      const double k = -std::numbers::pi + 2.0 * std::numbers::pi * i / (kDispersionPoints - 1);
      const auto [em, ep] = dispersion(k, p);
      const DVector d = d_vector(k, p);
      disp.add_row({num(J1), num(k), num(em), num(ep), num(d.dx), num(d.dy)});
    }
    if (p.Va == 0.0 && p.J1 != p.J2) {
      const WindingResult r = winding_number(p, n_k);
      w.add_row({num(J1), num(p.J2), num(p.Va), num(r.value), num(r.raw)});
    } else {
      // Winding is undefined at the gap closing and off the chiral-symmetric line.
      w.add_row({num(J1), num(p.J2), num(p.Va), "", "nan"});
    }
  }
  run.emit("winding.csv", w);
  run.emit("dispersion.csv", disp);
}

// ------------------------------------------------------------------ evolve

void cmd_evolve(Run& run) {
  const RunConfig& c = run.cfg();
  const ChainSpec spec = c.chain();
  const DriveSchedule sched = c.schedule();
  EvolveOptions o = c.evolve_options();
  const double gamma = c.grid("gamma_grid").front();
  if (gamma > 0.0) o.loss = LossModel{gamma, false, 0.0, 0.0};
  const double omega = c.grid("strength_grid").front();
  if (omega > 0.0) {
    const DisorderConfig d = c.disorder();
    o.disorder = sample_disorder(spec, d.kind, d.symmetry, omega, c.seed(), d.granularity);
  }
  const EvolutionResult r = evolve(spec, sched, o);

  double dphi = kNaN;
  if (r.output_sites.size() >= 2) {
    try {
      dphi = phase_difference(r);
    } catch (const NumericalError&) {
      // Reported as nan: an end amplitude vanished.
    }
  }
  ResultTable summary({{"protocol", ""}, {"sites", "1"}, {"t_star", "1/J0"}, {"dt", "1/J0"}, {"steps", "1"},
                       {"fidelity", "1"}, {"final_norm", "1"}, {"max_norm_drift", "1"}, {"phase_difference", "rad"}});
  summary.add_row({sched.describe(), num(spec.num_sites()), num(sched.t_star()), num(r.dt), num(r.steps),
                   num(r.fidelity), num(r.final_norm), num(r.max_norm_drift), num(dphi)});
  run.emit("summary.csv", summary);

  ResultTable ends({{"site", "1"}, {"population", "1"}, {"phase", "rad"}});
  for (std::size_t e : r.output_sites) {
    const cplx a = r.final_state(static_cast<Eigen::Index>(e));
    ends.add_row({num(e), num(std::norm(a)), num(std::arg(a))});
  }
  run.emit("ends.csv", ends);

  ResultTable profile({{"site", "1"}, {"re", "1"}, {"im", "1"}, {"population", "1"}, {"phase", "rad"}});
  for (Eigen::Index i = 0; i < r.final_state.size(); ++i) {
    const cplx a = r.final_state(i);
    profile.add_row({num(static_cast<long>(i)), num(a.real()), num(a.imag()), num(std::norm(a)), num(std::arg(a))});
  }
  run.emit("profile.csv", profile);

  if (o.record_frames) {
    ResultTable pops({{"t", "1/J0"}, {"site", "1"}, {"population", "1"}});
    for (Eigen::Index f = 0; f < r.populations.rows(); ++f)
      for (Eigen::Index i = 0; i < r.populations.cols(); ++i)
        pops.add_row({num(r.frame_times[static_cast<std::size_t>(f)]), num(static_cast<long>(i)), num(r.populations(f, i))});
    run.emit("populations.csv", pops);
    ResultTable norm({{"t", "1/J0"}, {"norm_squared", "1"}});
    for (std::size_t f = 0; f < r.frame_times.size(); ++f) norm.add_row({num(r.frame_times[f]), num(r.norm_series[f])});
    run.emit("norm.csv", norm);
  }
}

// ------------------------------------------------------------------- sweep

void cmd_sweep(Run& run) {
  const RunConfig& c = run.cfg();
  const ChainSpec spec = c.chain();
  const DriveSchedule sched = c.schedule();
  EvolveOptions o = c.evolve_options();
  o.record_frames = false;
  const auto t_grid = c.grid("t_grid");
  if (t_grid.front() <= 0.0) throw ConfigError("t_grid", "t* values must be positive");
  const double theta = c.number("theta");

  if (c.get("sweep") == "alpha") {
    const auto alphas = c.grid("alpha_grid");
    if (sched.kind() != ProtocolKind::Exponential) throw ConfigError("protocol", "alpha sweeps need the exponential protocol");
    const std::size_t nt = t_grid.size();
    Eigen::MatrixXd f(static_cast<Eigen::Index>(alphas.size()), static_cast<Eigen::Index>(nt));
    parallel_for(alphas.size() * nt, run.jobs(), [&](std::size_t k) {
      const std::size_t a = k / nt;
      const std::size_t t = k % nt;
      const auto v = run.cached("pd-" + std::to_string(a) + "-" + std::to_string(t), [&] {
        return std::vector<double>{evolve(spec, sched.with_alpha(alphas[a]).with_t_star(t_grid[t]), o).fidelity};
      });
      f(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(t)) = v.at(0);
    });
    const PhaseDiagram d = make_phase_diagram(alphas, t_grid, f);
    ResultTable pd({{"alpha", "1"}, {"t_star", "1/J0"}, {"fidelity", "1"}});
    for (std::size_t a = 0; a < alphas.size(); ++a)
      for (std::size_t t = 0; t < nt; ++t)
        pd.add_row({num(alphas[a]), num(t_grid[t]), num(d.fidelity(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(t)))});
    run.emit("phase_diagram.csv", pd);
    ResultTable ct({{"alpha", "1"}, {"t_stable_090", "1/J0"}, {"t_stable_099", "1/J0"}});
    for (std::size_t a = 0; a < alphas.size(); ++a) ct.add_row({num(alphas[a]), num(d.contour_090[a]), num(d.contour_099[a])});
    run.emit("contours.csv", ct);
    ResultTable opt({{"alpha_opt", "1"}, {"t_stable_099", "1/J0"}});
    try {
      const OptimalAlpha best = optimal_alpha(d);
      opt.add_row({num(best.alpha), num(best.t_star_099)});
    } catch (const NumericalError&) {
      opt.add_row({"nan", "inf"});
    }
    run.emit("optimal_alpha.csv", opt);
    return;
  }

  std::vector<double> fid(t_grid.size());
  parallel_for(t_grid.size(), run.jobs(), [&](std::size_t i) {
    fid[i] = run.cached("f-" + std::to_string(i), [&] {
      return std::vector<double>{evolve(spec, sched.with_t_star(t_grid[i]), o).fidelity};
    }).at(0);
  });
  FidelityCurve curve{t_grid, fid, sched.describe(), to_string(spec.topology())};
  ResultTable fc({{"t_star", "1/J0"}, {"fidelity", "1"}});
  for (std::size_t i = 0; i < t_grid.size(); ++i) fc.add_row({num(t_grid[i]), num(fid[i])});
  run.emit("fidelity.csv", fc);
  ResultTable st({{"theta", "1"}, {"t_stable", "1/J0"}});
  st.add_row({num(0.9), num(stabilization_time(curve, 0.9))});
  if (theta != 0.9) st.add_row({num(theta), num(stabilization_time(curve, theta))});
  run.emit("stabilization.csv", st);
}

// ---------------------------------------------------------------- ensemble

std::vector<double> pack(const EnsembleStats& s) {
  std::vector<double> v = {s.parameter,     static_cast<double>(s.samples), s.mean_fidelity, s.std_fidelity,
                           static_cast<double>(s.phase_samples), s.mean_phase, s.std_phase, s.mean_abs_phase,
                           s.std_abs_phase};
  for (std::size_t i : s.failed) v.push_back(static_cast<double>(i));
  return v;
}

EnsembleStats unpack(const std::vector<double>& v) {
  if (v.size() < 9) throw IoError("damaged ensemble completion marker");
  EnsembleStats s;
  s.parameter = v[0];
  s.samples = static_cast<int>(v[1]);
  s.mean_fidelity = v[2];
  s.std_fidelity = v[3];
  s.phase_samples = static_cast<int>(v[4]);
  s.mean_phase = v[5];
  s.std_phase = v[6];
  s.mean_abs_phase = v[7];
  s.std_abs_phase = v[8];
  for (std::size_t i = 9; i < v.size(); ++i) s.failed.push_back(static_cast<std::size_t>(v[i]));
  return s;
}

void cmd_ensemble(Run& run) {
  const RunConfig& c = run.cfg();
  const ChainSpec spec = c.chain();
  const DriveSchedule sched = c.schedule();
  EvolveOptions o = c.evolve_options();
  o.record_frames = false;
  const int m = static_cast<int>(c.integer("samples"));
  const bool loss = c.get("ensemble") == "loss";
  const auto grid = loss ? c.grid("gamma_grid") : c.grid("strength_grid");
  const DisorderConfig base = c.disorder();

  std::vector<EnsembleStats> stats;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto v = run.cached("e-" + std::to_string(p), [&] {
      if (loss)
        return pack(loss_sweep(spec, sched, {grid[p]}, c.flag("loss_asymmetric"), m, c.seed(), o, run.jobs(),
                               c.number("loss_spread"))
                        .front());
      DisorderConfig d = base;
      d.strength = grid[p];
      return pack(disorder_ensemble(spec, sched, d, m, c.seed(), o, run.jobs()));
    });
    stats.push_back(unpack(v));
  }
  ResultTable t({{loss ? "gamma" : "omega_s", loss ? "J0" : "1"},
                 {"samples", "1"},
                 {"mean_fidelity", "1"},
                 {"std_fidelity", "1"},
                 {"standard_error", "1"},
                 {"phase_samples", "1"},
                 {"mean_phase", "rad"},
                 {"std_phase", "rad"},
                 {"mean_abs_phase", "rad"},
                 {"std_abs_phase", "rad"},
                 {"failed", "1"}});
  for (const EnsembleStats& s : stats)
    t.add_row({num(s.parameter), num(s.samples), num(s.mean_fidelity), num(s.std_fidelity), num(s.standard_error()),
               num(s.phase_samples), num(s.mean_phase), num(s.std_phase), num(s.mean_abs_phase), num(s.std_abs_phase),
               num(s.failed.size())});
  run.emit("ensemble.csv", t);
}

// ---------------------------------------------------------------- fit, router

void cmd_fit(Run& run) {
  const RunConfig& c = run.cfg();
  const DriveSchedule sched = c.schedule();
  EvolveOptions o = c.evolve_options();
  o.record_frames = false;
  const auto lengths = c.int_list("L_list");
  const StabilizationSearch search = c.search();
  std::optional<double> fixed;
  if (c.has("fixed_alpha")) fixed = c.number("fixed_alpha");

  ResultTable t({{"L", "1"}, {"alpha", "1"}, {"t_stable", "1/J0"}});
  std::vector<double> xs, ys;
  for (int L : lengths) {
    const auto v = run.cached("L-" + std::to_string(L), [&] {
      const LengthPoint p = stabilization_vs_length({L}, sched, search, fixed, o, run.jobs()).front();
      return std::vector<double>{p.alpha, p.t_stable ? *p.t_stable : kInf};
    });
    t.add_row({num(L), num(v.at(0)), num(v.at(1))});
    if (std::isfinite(v.at(1))) {
      xs.push_back(L);
      ys.push_back(v.at(1));
    }
  }
  run.emit("scaling.csv", t);

  ResultTable f({{"c3", "1/J0"}, {"c2", "1/J0"}, {"c1", "1/J0"}, {"c0", "1/J0"}, {"residual_rms", "1/J0"}, {"points", "1"}});
  const CubicFit fit = cubic_fit(xs, ys);
  f.add_row({num(fit.coefficients[0]), num(fit.coefficients[1]), num(fit.coefficients[2]), num(fit.coefficients[3]),
             num(fit.residual_rms), num(xs.size())});
  run.emit("fit.csv", f);

  const double gamma = c.number("loss_gamma");
  if (gamma > 0.0) {
    const auto pts = lossy_fidelity_vs_length(lengths, gamma, o, run.jobs());
    ResultTable lf({{"L", "1"}, {"alpha", "1"}, {"t_cosine", "1/J0"}, {"t_exponential", "1/J0"},
                    {"fidelity_cosine", "1"}, {"fidelity_exponential", "1"}});
    for (const auto& p : pts)
      lf.add_row({num(p.length), num(p.alpha), num(p.t_cosine), num(p.t_exponential), num(p.fidelity_cosine),
                  num(p.fidelity_exponential)});
    run.emit("lossy_fidelity.csv", lf);
  }
}

void cmd_router(Run& run) {
  const RunConfig& c = run.cfg();
  const DriveSchedule sched = c.schedule();
  EvolveOptions o = c.evolve_options();
  o.record_frames = false;
  const int n = static_cast<int>(c.integer("branch_sites"));
  const StabilizationSearch search = c.search();
  ResultTable t({{"K", "1"}, {"L", "1"}, {"t_stable", "1/J0"}});
  for (int k : c.int_list("K_list")) {
    const auto v = run.cached("K-" + std::to_string(k), [&] {
      const BranchPoint p = stabilization_vs_branches({k}, n, sched, search, o, run.jobs()).front();
      return std::vector<double>{p.t_stable ? *p.t_stable : kInf};
    });
    t.add_row({num(k), num(k * n + 1), num(v.at(0))});
  }
  run.emit("router.csv", t);
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Adiabatic edge-state pumping on SSH chains and routers"};
  app.set_version_flag("--version", version());
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string out;
  app.add_option("--config", config_path, "configuration file (key = value lines)");
  app.add_option("--set", sets, "override one configuration key (key=value); repeatable")->take_all();
  app.add_option("--seed", seed, "master seed (overrides the config)");
  app.add_option("--jobs", jobs, "worker threads (default: TOPOPUMP_JOBS or 1)")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "output directory (overrides the config)");

  struct Sub {
    const char* name;
    const char* help;
    void (*fn)(Run&);
  };
  const Sub subs[] = {
      {"spectrum", "instantaneous and parametric spectra, gap-state tracking, min gap vs alpha", cmd_spectrum},
      {"winding", "winding numbers and bulk dispersion", cmd_winding},
      {"evolve", "single driven evolution: fidelity, populations, end phases", cmd_evolve},
      {"sweep", "fidelity vs t*, or the (alpha, t*) phase diagram", cmd_sweep},
      {"ensemble", "disorder or loss ensembles", cmd_ensemble},
      {"fit", "stabilization time vs chain length and its cubic fit", cmd_fit},
      {"router", "stabilization time vs router branch count", cmd_router},
  };
  for (const Sub& s : subs) app.add_subcommand(s.name, s.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
    for (const std::string& s : sets) cfg.apply_override(s);
    if (seed) cfg.set("seed", std::to_string(*seed));
    if (!out.empty()) cfg.set("out", out);
    cfg.validate();
    const int n_jobs = jobs ? *jobs : default_jobs();

    for (const Sub& s : subs) {
      if (!app.got_subcommand(s.name)) continue;
      Run r(s.name, cfg, n_jobs);
      s.fn(r);
      r.write_manifest();
      std::cout << s.name << ": wrote results to " << cfg.get("out") << "\n";
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace topopump::cli
