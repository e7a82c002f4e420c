#include "topopump/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace topopump {

std::string to_string(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::Cosine: return "cosine";
    case ProtocolKind::Exponential: return "exponential";
    case ProtocolKind::ThreeStep: return "three-step";
  }
  return "unknown";
}

std::string to_string(OnsiteVariant v) {
  return v == OnsiteVariant::AsPrinted ? "as-printed" : "time-symmetric";
}

namespace {

// Times produced by uniform grids may overshoot t* by a rounding error.
double checked_time(double t, double t_star) {
  const double slack = 1e-12 * std::max(1.0, t_star);
  if (!(t >= -slack && t <= t_star + slack))
    throw std::out_of_range("time " + std::to_string(t) + " outside [0, " +
                            std::to_string(t_star) + "]");
  return std::clamp(t, 0.0, t_star);
}

void check_t_star(double t_star) {
  if (!(t_star > 0.0) || !std::isfinite(t_star))
    throw std::invalid_argument("total time t* must be positive and finite");
}

}  // namespace

CouplingPoint cosine_schedule(double t, double J0, double t_star) {
  check_t_star(t_star);
  t = checked_time(t, t_star);
  const double w = std::numbers::pi / t_star;
  const double c = std::cos(w * t);
  const double s = std::sin(w * t);
  CouplingPoint p;
  p.J1 = 0.5 * J0 * (1.0 + c);
  p.J2 = 0.5 * J0 * (1.0 - c);
  p.Vb = J0 * s;
  p.Va = -p.Vb;
  p.dJ1_dt = -0.5 * J0 * w * s;
  p.dJ2_dt = 0.5 * J0 * w * s;
  p.dVb_dt = J0 * w * c;
  p.dVa_dt = -p.dVb_dt;
  return p;
}

CouplingPoint exponential_schedule(double t, double J0, double t_star, double alpha,
                                   OnsiteVariant variant) {
  check_t_star(t_star);
  if (!(alpha > 0.0)) throw std::invalid_argument("exponential parameter alpha must be positive");
  t = checked_time(t, t_star);
  const double rate = alpha / t_star;
  const double norm = -std::expm1(-alpha);  // 1 - e^{-alpha}

  CouplingPoint p;
  p.J1 = J0 * -std::expm1(-rate * (t_star - t)) / norm;
  p.J2 = J0 * -std::expm1(-rate * t) / norm;
  p.dJ1_dt = -J0 * rate * std::exp(-rate * (t_star - t)) / norm;
  p.dJ2_dt = J0 * rate * std::exp(-rate * t) / norm;

  // Vb = J0 sqrt(J2(s)/J0) with s = 2t (or its time-symmetric fold).
  double s = 2.0 * t;
  double ds_dt = 2.0;
  if (variant == OnsiteVariant::TimeSymmetric) {
    if (2.0 * t > t_star) {
      s = 2.0 * (t_star - t);
      ds_dt = -2.0;
    } else if (2.0 * t == t_star) {
      ds_dt = 0.0;  // kink: symmetric difference quotient
    }
  }
  const double x = -std::expm1(-rate * s) / norm;
  p.Vb = J0 * std::sqrt(x);
  p.Va = -p.Vb;
  if (x > 0.0) {
    p.dVb_dt = J0 * 0.5 / std::sqrt(x) * rate * std::exp(-rate * s) / norm * ds_dt;
  } else {
    // sqrt onset at s = 0 has an unbounded slope.
    p.dVb_dt = ds_dt == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), ds_dt);
  }
  p.dVa_dt = -p.dVb_dt;
  return p;
}

CouplingPoint three_step_schedule(double t, double t_star, double t_op, double J1_0, double J2_0) {
  check_t_star(t_star);
  if (!(t_op > 0.0) || t_op > 0.5 * t_star)
    throw std::invalid_argument("three-step protocol needs 0 < t_op <= t*/2");
  if (!(J1_0 > J2_0) || J2_0 < 0.0)
    throw std::invalid_argument("three-step protocol needs J1(0) > J2(0) >= 0");
  t = checked_time(t, t_star);
  const double span = J1_0 - J2_0;
  CouplingPoint p;
  if (t <= t_star - t_op) {
    p.J1 = J1_0;
  } else {
    p.J1 = span * t_star / t_op * (1.0 - t / t_star);
    p.dJ1_dt = -span / t_op;
  }
  if (t <= t_op) {
    p.J2 = J2_0 + span * t / t_op;
    p.dJ2_dt = span / t_op;
  } else {
    p.J2 = J1_0;
  }
  return p;
}

DriveSchedule DriveSchedule::cosine(double t_star, double J0) {
  check_t_star(t_star);
  DriveSchedule d;
  d.kind_ = ProtocolKind::Cosine;
  d.t_star_ = t_star;
  d.J0_ = J0;
  return d;
}

DriveSchedule DriveSchedule::exponential(double alpha, double t_star, double J0,
                                         OnsiteVariant variant) {
  check_t_star(t_star);
  if (!(alpha > 0.0)) throw std::invalid_argument("exponential parameter alpha must be positive");
  DriveSchedule d;
  d.kind_ = ProtocolKind::Exponential;
  d.alpha_ = alpha;
  d.t_star_ = t_star;
  d.J0_ = J0;
  d.variant_ = variant;
  return d;
}

DriveSchedule DriveSchedule::three_step(double t_op, double t_star, double J1_0, double J2_0) {
  check_t_star(t_star);
  if (!(t_op > 0.0) || t_op > 0.5 * t_star)
    throw std::invalid_argument("three-step protocol needs 0 < t_op <= t*/2");
  if (!(J1_0 > J2_0) || J2_0 < 0.0)
    throw std::invalid_argument("three-step protocol needs J1(0) > J2(0) >= 0");
  DriveSchedule d;
  d.kind_ = ProtocolKind::ThreeStep;
  d.t_op_ = t_op;
  d.t_star_ = t_star;
  d.J1_0_ = J1_0;
  d.J2_0_ = J2_0;
  d.J0_ = J1_0;
  return d;
}

DriveSchedule DriveSchedule::with_t_star(double t_star) const {
  check_t_star(t_star);
  DriveSchedule d = *this;
  d.t_star_ = t_star;
  if (kind_ == ProtocolKind::ThreeStep) d.t_op_ = std::min(t_op_, 0.5 * t_star);
  return d;
}

DriveSchedule DriveSchedule::with_alpha(double alpha) const {
  if (kind_ != ProtocolKind::Exponential)
    throw std::invalid_argument("alpha only applies to the exponential protocol");
  return exponential(alpha, t_star_, J0_, variant_);
}

CouplingPoint DriveSchedule::at(double t) const {
  switch (kind_) {
    case ProtocolKind::Cosine: return cosine_schedule(t, J0_, t_star_);
    case ProtocolKind::Exponential: return exponential_schedule(t, J0_, t_star_, alpha_, variant_);
    case ProtocolKind::ThreeStep: return three_step_schedule(t, t_star_, t_op_, J1_0_, J2_0_);
  }
  throw std::logic_error("unhandled protocol kind");
}

double DriveSchedule::coupling_bound() const {
  switch (kind_) {
    case ProtocolKind::Cosine: return std::abs(J0_);
    case ProtocolKind::Exponential:
      // Vb peaks at J0 sqrt(1 + e^{-alpha}) for the as-printed form.
      return std::abs(J0_) * std::sqrt(1.0 + std::exp(-alpha_));
    case ProtocolKind::ThreeStep: return std::abs(J1_0_);
  }
  return 0.0;
}

std::string DriveSchedule::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << "(t*=" << t_star_;
  if (kind_ == ProtocolKind::Exponential) os << ", alpha=" << alpha_ << ", vb=" << to_string(variant_);
  if (kind_ == ProtocolKind::ThreeStep)
    os << ", t_op=" << t_op_ << ", J1(0)=" << J1_0_ << ", J2(0)=" << J2_0_;
  os << ")";
  return os.str();
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t index) {
  return mix64(mix64(master_seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t counter) const {
  return mix64(mix64(seed_ ^ mix64(stream)) + counter * 0x9e3779b97f4a7c15ULL);
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t counter) const {
  return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t counter, double lo, double hi) const {
  return lo + (hi - lo) * uniform(stream, counter);
}

namespace {

constexpr std::uint64_t kBondStream = 1;
constexpr std::uint64_t kSiteStream = 2;
constexpr std::uint64_t kGlobalStream = 3;
constexpr std::uint64_t kRegionStream = 4;
constexpr std::uint64_t kLossStream = 5;

}  // namespace

DisorderRealization sample_disorder(const ChainSpec& spec, DisorderKind kind,
                                    DisorderSymmetry symmetry, double strength,
                                    std::uint64_t seed, DisorderGranularity granularity) {
  if (!(strength >= 0.0)) throw std::invalid_argument("disorder strength must be non-negative");
  DisorderRealization r = clean_realization(spec);
  r.kind = kind;
  r.symmetry = symmetry;
  r.strength = strength;
  r.seed = seed;
  if (strength == 0.0) return r;

  const CounterRng rng(seed);
  const double w = strength;
  const auto& bonds = spec.bonds();

  if (symmetry == DisorderSymmetry::Asymmetric) {
    // One draw per region, applied to J2 bonds or Vb sites only.
    const auto region_delta = [&](int region) {
      return rng.uniform(kRegionStream, static_cast<std::uint64_t>(region), -w, w);
    };
    if (kind == DisorderKind::OffDiagonal) {
      for (std::size_t k = 0; k < bonds.size(); ++k) {
        const int region = spec.region_of_bond(k);
        if (bonds[k].kind == BondKind::Inter && region >= 0) r.bond_factors[k] = 1.0 + region_delta(region);
      }
    } else {
      for (std::size_t i = 0; i < spec.num_sites(); ++i) {
        const int region = spec.region_of_site(i);
        if (!spec.is_a_type(i) && region >= 0) r.site_factors[i] = 1.0 + region_delta(region);
      }
    }
    return r;
  }

  if (granularity == DisorderGranularity::Global) {
    const double d_first = rng.uniform(kGlobalStream, 0, -w, w);   // J1 bonds / a sites
    const double d_second = rng.uniform(kGlobalStream, 1, -w, w);  // J2 bonds / b sites
    if (kind == DisorderKind::OffDiagonal) {
      for (std::size_t k = 0; k < bonds.size(); ++k)
        r.bond_factors[k] = 1.0 + (bonds[k].kind == BondKind::Intra ? d_first : d_second);
    } else {
      for (std::size_t i = 0; i < spec.num_sites(); ++i)
        r.site_factors[i] = 1.0 + (spec.is_a_type(i) ? d_first : d_second);
    }
    return r;
  }

  // Per element; mirror images share the draw of their canonical representative.
  if (kind == DisorderKind::OffDiagonal) {
    for (std::size_t k = 0; k < bonds.size(); ++k)
      r.bond_factors[k] = 1.0 + rng.uniform(kBondStream, spec.canonical_bond(k), -w, w);
  } else {
    for (std::size_t i = 0; i < spec.num_sites(); ++i)
      r.site_factors[i] = 1.0 + rng.uniform(kSiteStream, spec.canonical_site(i), -w, w);
  }
  return r;
}

LossModel sample_loss(double gamma, double spread, std::uint64_t seed) {
  if (gamma < 0.0) throw std::invalid_argument("loss rate must be non-negative");
  const CounterRng rng(seed);
  LossModel m;
  m.gamma = gamma;
  m.asymmetric = true;
  m.dgamma_left = rng.uniform(kLossStream, 0, -spread, spread);
  m.dgamma_right = rng.uniform(kLossStream, 1, -spread, spread);
  return m;
}

}  // namespace topopump
