#pragma once

// Driving schedules J1(t), J2(t), Va(t), Vb(t) and disorder sampling.

#include <cstdint>
#include <string>

#include "topopump/lattice.hpp"

namespace topopump {

enum class ProtocolKind { Cosine, Exponential, ThreeStep };

/// How Vb(t) of the exponential protocol is formed.
///   AsPrinted:     Vb = J0 sqrt(J2(2t)/J0), the closed form evaluated at 2t for all t.
///   TimeSymmetric: the same expression with 2*min(t, t*-t), so Vb(t) = Vb(t*-t).
enum class OnsiteVariant { AsPrinted, TimeSymmetric };

std::string to_string(ProtocolKind k);
std::string to_string(OnsiteVariant v);

CouplingPoint cosine_schedule(double t, double J0, double t_star);
CouplingPoint exponential_schedule(double t, double J0, double t_star, double alpha,
                                   OnsiteVariant variant = OnsiteVariant::AsPrinted);
CouplingPoint three_step_schedule(double t, double t_star, double t_op, double J1_0, double J2_0);

class DriveSchedule {
 public:
  static DriveSchedule cosine(double t_star, double J0 = 1.0);
  static DriveSchedule exponential(double alpha, double t_star, double J0 = 1.0,
                                   OnsiteVariant variant = OnsiteVariant::AsPrinted);
  static DriveSchedule three_step(double t_op, double t_star, double J1_0, double J2_0);

  ProtocolKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double t_op() const { return t_op_; }
  double J1_0() const { return J1_0_; }
  double J2_0() const { return J2_0_; }
  double J0() const { return J0_; }
  double t_star() const { return t_star_; }
  OnsiteVariant onsite_variant() const { return variant_; }

  /// Same protocol with a different total time. A three-step schedule keeps
  /// t_op only while it still fits (t_op <= t*/2); otherwise it is clamped.
  DriveSchedule with_t_star(double t_star) const;
  DriveSchedule with_alpha(double alpha) const;

  /// Couplings at time t in [0, t*]; throws std::out_of_range outside.
  CouplingPoint at(double t) const;

  /// Upper bound on max_t max|coupling| over [0, t*], used by the step guard.
  double coupling_bound() const;

  std::string describe() const;

 private:
  DriveSchedule() = default;

  ProtocolKind kind_ = ProtocolKind::Cosine;
  double alpha_ = 0.0;
  double t_op_ = 0.0;
  double J1_0_ = 1.0;
  double J2_0_ = 0.0;
  double J0_ = 1.0;
  double t_star_ = 1.0;
  OnsiteVariant variant_ = OnsiteVariant::AsPrinted;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of realization `index` in an ensemble driven by `master_seed`.
std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t index);

/// Counter-based generator: draw k of stream s is a pure function of
/// (seed, s, k), so any element can be sampled independently of the others.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const;
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform(std::uint64_t stream, std::uint64_t counter) const;
  /// Uniform double in [lo, hi].
  double uniform(std::uint64_t stream, std::uint64_t counter, double lo, double hi) const;

 private:
  std::uint64_t seed_;
};

DisorderRealization sample_disorder(const ChainSpec& spec, DisorderKind kind,
                                    DisorderSymmetry symmetry, double strength,
                                    std::uint64_t seed,
                                    DisorderGranularity granularity = DisorderGranularity::PerElement);

/// Loss asymmetries dgamma_left/right drawn uniformly from [-spread, spread].
LossModel sample_loss(double gamma, double spread, std::uint64_t seed);

}  // namespace topopump
