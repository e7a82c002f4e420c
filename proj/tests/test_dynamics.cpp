#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "topopump/dynamics.hpp"
#include "topopump/errors.hpp"

using namespace topopump;

namespace {

EvolveOptions quiet() {
  EvolveOptions o;
  o.record_frames = false;
  return o;
}

}  // namespace

TEST_CASE("input and output ports") {
  const auto chain = ChainSpec::interface_chain(10);
  const auto in = initial_state(chain);
  CHECK(in(10) == cplx(1.0));
  CHECK(in.norm() == 1.0);
  const auto out = target_state(chain);
  CHECK(out(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(out(20).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(out.norm() == doctest::Approx(1.0));
  CHECK(std::abs(out.dot(in)) == 0.0);

  const auto router = ChainSpec::router(4, 10);
  CHECK(initial_state(router)(40) == cplx(1.0));
  const auto rt = target_state(router);
  for (std::size_t e : router.end_sites()) CHECK(rt(static_cast<Eigen::Index>(e)).real() == doctest::Approx(0.5));
  CHECK(std::abs(rt.dot(initial_state(router))) == 0.0);

  CHECK(initial_state(ChainSpec::odd_ssh(5))(0) == cplx(1.0));
  CHECK_THROWS_AS(initial_state(ChainSpec::even_ssh(5)), std::invalid_argument);
}

TEST_CASE("a sudden drive transfers nothing") {
  const auto r = evolve(ChainSpec::interface_chain(10), DriveSchedule::exponential(3.2, 1e-3), quiet());
  CHECK(r.fidelity < 1e-6);
}

TEST_CASE("exponential drive at t* = 100 splits the excitation with equal phase") {
  const auto spec = ChainSpec::interface_chain(10);
  const auto r = evolve(spec, DriveSchedule::exponential(3.2, 100.0));
  CHECK(r.fidelity >= 0.99);
  CHECK(std::abs(phase_difference(r)) < 1e-2);
  CHECK(r.max_norm_drift < 1e-8);
  CHECK(std::norm(r.final_state(0)) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::norm(r.final_state(20)) == doctest::Approx(0.5).epsilon(0.02));
  // Population frames sum to the squared norm.
  for (Eigen::Index f = 0; f < r.populations.rows(); ++f)
    CHECK(r.populations.row(f).sum() == doctest::Approx(r.norm_series[static_cast<std::size_t>(f)]).epsilon(1e-12));
  CHECK(r.frame_times.front() == 0.0);
  CHECK(r.frame_times.back() == 100.0);
  CHECK(r.populations.rows() <= 500);
}

TEST_CASE("cosine drive needs about a thousand time units") {
  const auto spec = ChainSpec::interface_chain(10);
  CHECK(evolve(spec, DriveSchedule::cosine(500.0), quiet()).fidelity < 0.99);
  // t* = 1080 sits right at the 0.99 threshold; 1100 is safely above it.
  CHECK(std::abs(evolve(spec, DriveSchedule::cosine(1080.0), quiet()).fidelity - 0.99) < 1e-3);
  CHECK(evolve(spec, DriveSchedule::cosine(1100.0), quiet()).fidelity >= 0.99);
}

TEST_CASE("router splits into four equal parts") {
  const auto spec = ChainSpec::router(4, 10);
  const auto r = evolve(spec, DriveSchedule::cosine(935.0), quiet());
  CHECK(r.fidelity >= 0.99 - 1e-4);
  for (std::size_t e : spec.end_sites()) CHECK(std::norm(r.final_state(static_cast<Eigen::Index>(e))) == doctest::Approx(0.25).epsilon(0.04));
  CHECK(std::abs(phase_difference(r)) < 1e-2);
}

TEST_CASE("mirror-symmetric disorder preserves the equal phase") {
  const auto spec = ChainSpec::interface_chain(10);
  auto o = quiet();
  for (auto kind : {DisorderKind::Diagonal, DisorderKind::OffDiagonal}) {
    o.disorder = sample_disorder(spec, kind, DisorderSymmetry::MirrorSymmetric, 0.4, 17);
    const auto r = evolve(spec, DriveSchedule::exponential(3.2, 100.0), o);
    CHECK(std::abs(phase_difference(r)) < 1e-2);
  }
}

TEST_CASE("phase difference of the target itself is zero, and undefined on empty ends") {
  const auto spec = ChainSpec::interface_chain(10);
  CHECK(phase_difference(target_state(spec), spec.end_sites()) == 0.0);
  CHECK_THROWS_AS(phase_difference(initial_state(spec), spec.end_sites()), NumericalError);
  StateVector v = target_state(spec);
  v(20) *= std::polar(1.0, 3.0);
  CHECK(phase_difference(v, spec.end_sites()) == doctest::Approx(-3.0));
}

TEST_CASE("step halving changes the fidelity by less than 1e-6") {
  const auto rep = convergence_check(ChainSpec::interface_chain(10), DriveSchedule::exponential(3.2, 100.0));
  CHECK(rep.delta < 1e-6);
}

TEST_CASE("uniform loss decays the norm as exp(-2 gamma t)") {
  const auto spec = ChainSpec::interface_chain(10);
  auto o = quiet();
  const double gamma = 2.5e-4;
  o.loss = LossModel{gamma, false, 0.0, 0.0};
  const auto r = evolve(spec, DriveSchedule::exponential(3.2, 100.0), o);
  CHECK(r.final_norm == doctest::Approx(std::exp(-2.0 * gamma * 100.0)).epsilon(1e-8));
  const auto clean = evolve(spec, DriveSchedule::exponential(3.2, 100.0), quiet());
  CHECK(r.fidelity == doctest::Approx(clean.fidelity * std::exp(-2.0 * gamma * 100.0)).epsilon(1e-8));
}

TEST_CASE("norm never grows under loss") {
  auto o = EvolveOptions{};
  o.loss = LossModel{1e-2, true, 0.1, -0.1};
  const auto r = evolve(ChainSpec::interface_chain(6), DriveSchedule::cosine(50.0), o);
  for (std::size_t f = 1; f < r.norm_series.size(); ++f) CHECK(r.norm_series[f] <= r.norm_series[f - 1] + 1e-15);
}

TEST_CASE("constant-H integrator matches the spectral propagator") {
  const auto spec = ChainSpec::interface_chain(10);
  CouplingPoint c;
  c.J1 = 0.7;
  c.J2 = 0.4;
  c.Va = 0.2;
  c.Vb = -0.2;
  const auto h = build_hamiltonian(spec, c);
  const StateVector psi = initial_state(spec);
  const auto exact = propagate_constant(h, psi, 25.0);
  const auto rk = integrate_constant(h, psi, 25.0, 0.005);
  CHECK((exact - rk).norm() < 1e-8);
}

TEST_CASE("step-size guard rejects unstable steps") {
  auto o = quiet();
  o.dt = 0.5;
  CHECK_THROWS_AS(evolve(ChainSpec::interface_chain(10), DriveSchedule::cosine(10.0), o), NumericalError);
}

TEST_CASE("three-step drive on a plain odd chain pumps between the ends") {
  // J1 > J2 at the start localizes the zero mode on the last site, so the
  // excitation enters there and leaves at site 0.
  const auto spec = ChainSpec::odd_ssh(6);
  auto o = quiet();
  o.input_site = spec.num_sites() - 1;
  o.output_sites = std::vector<std::size_t>{0};
  const auto r = evolve(spec, DriveSchedule::three_step(100.0, 400.0, 1.0, 0.0), o);
  CHECK(r.max_norm_drift < 1e-8);
  CHECK(r.fidelity > 0.9);
}
