#include "topopump/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "topopump/errors.hpp"

namespace topopump {

StateVector initial_state(const ChainSpec& spec) {
  StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(spec.num_sites()));
  if (spec.hub_index()) {
    psi(static_cast<Eigen::Index>(*spec.hub_index())) = 1.0;
  } else if (spec.topology() == Topology::OddSSH) {
    psi(0) = 1.0;
  } else {
    throw std::invalid_argument("the even SSH chain has no input port");
  }
  return psi;
}

StateVector target_state(const ChainSpec& spec) {
  StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(spec.num_sites()));
  if (spec.topology() == Topology::EvenSSH) throw std::invalid_argument("the even SSH chain has no output ports");
  if (spec.topology() == Topology::OddSSH) {
    psi(psi.size() - 1) = 1.0;
    return psi;
  }
  const auto ends = spec.end_sites();
  const double amp = 1.0 / std::sqrt(static_cast<double>(ends.size()));
  for (std::size_t e : ends) psi(static_cast<Eigen::Index>(e)) = amp;
  return psi;
}

double default_dt(double t_star) { return std::min(0.005, t_star / 20000.0); }

Eigen::VectorXd EvolutionResult::phase_profile() const {
  Eigen::VectorXd out(final_state.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = std::arg(final_state(i));
  return out;
}

namespace {

// H(t) as onsite terms plus one real hopping per bond; applied without
// forming the dense matrix.
class ChainOperator {
 public:
  ChainOperator(const ChainSpec& spec, const EvolveOptions& opt) : L_(spec.num_sites()) {
    for (const Bond& b : spec.bonds()) {
      bond_i_.push_back(b.i);
      bond_j_.push_back(b.j);
      bond_intra_.push_back(b.kind == BondKind::Intra);
    }
    bond_factor_.assign(bond_i_.size(), 1.0);
    site_factor_.assign(L_, 1.0);
    site_a_.resize(L_);
    for (std::size_t i = 0; i < L_; ++i) site_a_[i] = spec.is_a_type(i);
    if (opt.disorder) {
      if (opt.disorder->bond_factors.size() != bond_i_.size() || opt.disorder->site_factors.size() != L_)
        throw std::invalid_argument("disorder realization does not match the chain");
      bond_factor_ = opt.disorder->bond_factors;
      site_factor_ = opt.disorder->site_factors;
    }
    loss_.assign(L_, 0.0);
    if (opt.loss) loss_ = opt.loss->site_rates(spec);
    hop_.resize(bond_i_.size());
    diag_.resize(L_);
  }

  // Loads the coefficients at one instant; returns the Gershgorin bound on |H|.
  double load(const CouplingPoint& c) {
    for (std::size_t k = 0; k < hop_.size(); ++k) hop_[k] = (bond_intra_[k] ? c.J1 : c.J2) * bond_factor_[k];
    for (std::size_t i = 0; i < L_; ++i)
      diag_[i] = cplx((site_a_[i] ? c.Va : c.Vb) * site_factor_[i], -loss_[i]);
    row_sum_.assign(L_, 0.0);
    for (std::size_t i = 0; i < L_; ++i) row_sum_[i] = std::abs(diag_[i]);
    for (std::size_t k = 0; k < hop_.size(); ++k) {
      row_sum_[bond_i_[k]] += std::abs(hop_[k]);
      row_sum_[bond_j_[k]] += std::abs(hop_[k]);
    }
    return *std::max_element(row_sum_.begin(), row_sum_.end());
  }

  // out = -i H psi
  void rhs(const cplx* psi, cplx* out) const {
    for (std::size_t i = 0; i < L_; ++i) out[i] = diag_[i] * psi[i];
    for (std::size_t k = 0; k < hop_.size(); ++k) {
      const std::size_t i = bond_i_[k];
      const std::size_t j = bond_j_[k];
      out[i] += hop_[k] * psi[j];
      out[j] += hop_[k] * psi[i];
    }
    for (std::size_t i = 0; i < L_; ++i) out[i] = cplx(out[i].imag(), -out[i].real());
  }

  std::size_t size() const { return L_; }

 private:
  std::size_t L_;
  std::vector<std::size_t> bond_i_, bond_j_;
  std::vector<bool> bond_intra_;
  std::vector<double> bond_factor_, site_factor_;
  std::vector<bool> site_a_;
  std::vector<double> loss_;
  std::vector<double> hop_;
  std::vector<cplx> diag_;
  std::vector<double> row_sum_;
};

void check_guard(double bound, double dt, double limit, double t) {
  if (dt * bound > limit) {
    std::ostringstream os;
    os << "step size dt = " << dt << " violates the stability guard: dt*|H| = " << dt * bound
       << " > " << limit << " at t = " << t;
    throw NumericalError(os.str());
  }
}

}  // namespace

EvolutionResult evolve(const ChainSpec& spec, const DriveSchedule& schedule,
                       const EvolveOptions& options) {
  const double t_star = schedule.t_star();
  const double dt_req = options.dt > 0.0 ? options.dt : default_dt(t_star);
  if (!(dt_req > 0.0)) throw std::invalid_argument("dt must be positive");
  const long n_steps = std::max(1L, static_cast<long>(std::ceil(t_star / dt_req - 1e-9)));
  const double dt = t_star / static_cast<double>(n_steps);

  StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(spec.num_sites()));
  if (options.input_site) {
    psi(static_cast<Eigen::Index>(*options.input_site)) = 1.0;
  } else {
    psi = initial_state(spec);
  }
  std::vector<std::size_t> outputs;
  if (options.output_sites) {
    outputs = *options.output_sites;
  } else if (spec.topology() == Topology::OddSSH) {
    outputs = {spec.num_sites() - 1};
  } else {
    outputs = spec.end_sites();
  }
  if (outputs.empty()) throw std::invalid_argument("at least one output site is required");

  ChainOperator op(spec, options);
  const std::size_t L = op.size();
  std::vector<cplx> y(psi.data(), psi.data() + L), k1(L), k2(L), k3(L), k4(L), tmp(L);

  EvolutionResult res;
  res.dt = dt;
  res.steps = n_steps;
  res.output_sites = outputs;

  const int max_frames = std::max(2, options.max_frames);
  const long stride = std::max(1L, (n_steps + max_frames - 2) / (max_frames - 1));
  std::vector<std::vector<double>> frames;
  auto record = [&](double t) {
    double n2 = 0.0;
    std::vector<double> pop(L);
    for (std::size_t i = 0; i < L; ++i) {
      pop[i] = std::norm(y[i]);
      n2 += pop[i];
    }
    res.frame_times.push_back(t);
    res.norm_series.push_back(n2);
    frames.push_back(std::move(pop));
  };
  if (options.record_frames) record(0.0);

  const double limit = options.stability_limit;
  for (long s = 0; s < n_steps; ++s) {
    const double t0 = dt * static_cast<double>(s);
    const double th = t0 + 0.5 * dt;
    const double t1 = (s + 1 == n_steps) ? t_star : dt * static_cast<double>(s + 1);

    // After the first step the operator still holds H(t0) from the previous stage.
    if (s == 0) check_guard(op.load(schedule.at(t0)), dt, limit, t0);
    op.rhs(y.data(), k1.data());
    check_guard(op.load(schedule.at(th)), dt, limit, th);
    for (std::size_t i = 0; i < L; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    op.rhs(tmp.data(), k2.data());
    for (std::size_t i = 0; i < L; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    op.rhs(tmp.data(), k3.data());
    check_guard(op.load(schedule.at(t1)), dt, limit, t1);
    for (std::size_t i = 0; i < L; ++i) tmp[i] = y[i] + dt * k3[i];
    op.rhs(tmp.data(), k4.data());

    double n2 = 0.0;
    for (std::size_t i = 0; i < L; ++i) {
      y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      n2 += std::norm(y[i]);
    }
    if (!std::isfinite(n2)) {
      std::ostringstream os;
      os << "non-finite state at step " << s + 1 << " (t = " << t1 << "); step rejected";
      throw NumericalError(os.str());
    }
    res.max_norm_drift = std::max(res.max_norm_drift, std::abs(1.0 - n2));
    if (options.record_frames && ((s + 1) % stride == 0 || s + 1 == n_steps)) record(t1);
  }

  res.final_state = Eigen::Map<StateVector>(y.data(), static_cast<Eigen::Index>(L));
  res.final_norm = res.final_state.squaredNorm();
  cplx amp = 0.0;
  const double w = 1.0 / std::sqrt(static_cast<double>(outputs.size()));
  for (std::size_t e : outputs) amp += w * res.final_state(static_cast<Eigen::Index>(e));
  res.fidelity = std::norm(amp);

  if (options.record_frames) {
    res.populations.resize(static_cast<Eigen::Index>(frames.size()), static_cast<Eigen::Index>(L));
    for (std::size_t f = 0; f < frames.size(); ++f)
      for (std::size_t i = 0; i < L; ++i)
        res.populations(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(i)) = frames[f][i];
  }
  return res;
}

double phase_difference(const StateVector& state, const std::vector<std::size_t>& ends) {
  if (ends.size() < 2) throw std::invalid_argument("phase difference needs at least two output sites");
  for (std::size_t e : ends) {
    if (std::abs(state(static_cast<Eigen::Index>(e))) < 1e-6) {
      std::ostringstream os;
      os << "phase undefined: amplitude at end site " << e << " is below 1e-6";
      throw NumericalError(os.str());
    }
  }
  auto wrapped = [&](std::size_t a, std::size_t b) {
    double d = std::remainder(std::arg(state(static_cast<Eigen::Index>(a))) -
                                  std::arg(state(static_cast<Eigen::Index>(b))),
                              2.0 * std::numbers::pi);
    if (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
    return d;
  };
  double best = wrapped(ends[0], ends[1]);
  for (std::size_t a = 0; a < ends.size(); ++a)
    for (std::size_t b = a + 1; b < ends.size(); ++b) {
      const double d = wrapped(ends[a], ends[b]);
      if (std::abs(d) > std::abs(best)) best = d;
    }
  return best;
}

double phase_difference(const EvolutionResult& result) {
  return phase_difference(result.final_state, result.output_sites);
}

ConvergenceReport convergence_check(const ChainSpec& spec, const DriveSchedule& schedule,
                                    EvolveOptions options) {
  options.record_frames = false;
  if (!(options.dt > 0.0)) options.dt = default_dt(schedule.t_star());
  ConvergenceReport r;
  r.fidelity_dt = evolve(spec, schedule, options).fidelity;
  options.dt *= 0.5;
  r.fidelity_half = evolve(spec, schedule, options).fidelity;
  r.delta = std::abs(r.fidelity_dt - r.fidelity_half);
  return r;
}

StateVector propagate_constant(const HamiltonianMatrix& h, const StateVector& psi, double t) {
  if (!h.hermitian) throw std::invalid_argument("spectral propagator needs a Hermitian matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.entries);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed in spectral propagator");
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index j = 0; j < phases.size(); ++j) phases(j) = std::exp(cplx(0.0, -es.eigenvalues()(j) * t));
  const auto& v = es.eigenvectors();
  return v * phases.cwiseProduct(v.adjoint() * psi);
}

StateVector integrate_constant(const HamiltonianMatrix& h, const StateVector& psi, double t,
                               double dt) {
  const long n = std::max(1L, static_cast<long>(std::ceil(t / dt - 1e-9)));
  const double h_step = t / static_cast<double>(n);
  const Eigen::MatrixXcd a = cplx(0.0, -1.0) * h.entries;
  StateVector y = psi;
  for (long s = 0; s < n; ++s) {
    const StateVector k1 = a * y;
    const StateVector k2 = a * (y + 0.5 * h_step * k1);
    const StateVector k3 = a * (y + 0.5 * h_step * k2);
    const StateVector k4 = a * (y + h_step * k3);
    y += h_step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

}  // namespace topopump
