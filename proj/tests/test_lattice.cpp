#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include <Eigen/Eigenvalues>

#include "topopump/lattice.hpp"
#include "topopump/protocol.hpp"
#include "topopump/spectral.hpp"

using namespace topopump;

namespace {

CouplingPoint point(double J1, double J2, double Va = 0.0) {
  CouplingPoint c;
  c.J1 = J1;
  c.J2 = J2;
  c.Va = Va;
  c.Vb = -Va;
  return c;
}

Eigen::VectorXd real_spectrum(const HamiltonianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.entries);
  return es.eigenvalues();
}

bool is_hermitian(const HamiltonianMatrix& h) { return (h.entries - h.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-12; }

}  // namespace

TEST_CASE("even chain of two cells has the J1, J2, J1 bond pattern") {
  const auto spec = ChainSpec::even_ssh(2);
  CouplingPoint c = point(1.0, 0.5);
  c.Vb = 0.0;
  const auto h = build_hamiltonian(spec, c);
  REQUIRE(h.dim() == 4);
  CHECK(h.entries(0, 1).real() == 1.0);
  CHECK(h.entries(1, 2).real() == 0.5);
  CHECK(h.entries(2, 3).real() == 1.0);
  CHECK(h.entries(0, 2) == cplx(0.0));
  CHECK(h.entries.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK(is_hermitian(h));
}

TEST_CASE("odd chain at J1 = J2 has a chiral-symmetric spectrum with an exact zero mode") {
  const auto spec = ChainSpec::odd_ssh(7);
  const auto ev = real_spectrum(build_hamiltonian(spec, point(1.0, 1.0)));
  const Eigen::Index n = ev.size();
  for (Eigen::Index i = 0; i < n; ++i) CHECK(ev(i) == doctest::Approx(-ev(n - 1 - i)).epsilon(1e-12));
  CHECK(ev.cwiseAbs().minCoeff() < 1e-12);
}

TEST_CASE("even chain N=20 in the topological phase has a split mid-gap pair") {
  const auto ev = real_spectrum(build_hamiltonian(ChainSpec::even_ssh(20), point(0.6, 1.0)));
  std::vector<double> mags(ev.data(), ev.data() + ev.size());
  for (double& m : mags) m = std::abs(m);
  std::sort(mags.begin(), mags.end());
  // Independent dense reference (40x40 eigensolve).
  CHECK(mags[0] == doctest::Approx(2.339941440525e-05).epsilon(1e-6));
  CHECK(mags[1] == doctest::Approx(2.339941440525e-05).epsilon(1e-6));
  CHECK(mags[2] > 0.3);
}

TEST_CASE("smallest interface chain has bonds J1, J2, J2, J1") {
  const auto spec = ChainSpec::interface_chain(2);
  REQUIRE(spec.num_sites() == 5);
  REQUIRE(spec.hub_index() == std::optional<std::size_t>(2));
  const auto h = build_hamiltonian(spec, point(1.0, 0.25));
  CHECK(h.entries(0, 1).real() == 1.0);
  CHECK(h.entries(1, 2).real() == 0.25);
  CHECK(h.entries(2, 3).real() == 0.25);
  CHECK(h.entries(3, 4).real() == 1.0);
  CHECK(spec.is_a_type(2));
  CHECK(spec.is_a_type(0));
  CHECK(spec.is_a_type(4));
  CHECK_FALSE(spec.is_a_type(1));
}

TEST_CASE("interface chain decouples its central site when J2 = 0") {
  const auto spec = ChainSpec::interface_chain(20);
  const auto h = build_hamiltonian(spec, point(1.0, 0.0, 0.3));
  const Eigen::Index c = 20;
  for (Eigen::Index j = 0; j < h.dim(); ++j)
    if (j != c) CHECK(h.entries(c, j) == cplx(0.0));
  CHECK(h.entries(c, c).real() == 0.3);
}

TEST_CASE("interface chain eigenvector at Va matches the analytic gap state") {
  const auto spec = ChainSpec::interface_chain(20);
  const double Va = 0.2;
  const auto s = eigendecompose(build_hamiltonian(spec, point(0.6, 1.0, Va)));
  Eigen::Index best = 0;
  for (Eigen::Index j = 0; j < s.eigenvalues.size(); ++j)
    if (std::abs(s.eigenvalues(j).real() - Va) < std::abs(s.eigenvalues(best).real() - Va)) best = j;
  CHECK(s.eigenvalues(best).real() == doctest::Approx(Va).epsilon(1e-12));
  CHECK(overlap_probability(s.eigenvectors.col(best), analytic_gap_state(spec, 0.6, 1.0)) > 0.9999);
}

TEST_CASE("two-branch router equals the interface chain up to relabeling") {
  const int n = 20;
  const auto router = ChainSpec::router(2, n);
  const auto chain = ChainSpec::interface_chain(n);
  REQUIRE(router.num_sites() == chain.num_sites());
  const auto c = point(0.7, 0.4, 0.15);
  const auto hr = build_hamiltonian(router, c);
  const auto hc = build_hamiltonian(chain, c);
  // Branch 0 runs tip->hub like the left half, branch 1 like the mirrored right half.
  std::vector<Eigen::Index> map(router.num_sites());
  for (int j = 0; j < n; ++j) {
    map[static_cast<std::size_t>(j)] = j;
    map[static_cast<std::size_t>(n + j)] = 2 * n - j;
  }
  map[static_cast<std::size_t>(2 * n)] = n;
  for (Eigen::Index p = 0; p < hr.dim(); ++p)
    for (Eigen::Index q = 0; q < hr.dim(); ++q)
      CHECK(hr.entries(p, q) == hc.entries(map[static_cast<std::size_t>(p)], map[static_cast<std::size_t>(q)]));
}

TEST_CASE("four-branch router with N=10 has 41 sites and a degree-4 hub") {
  const auto spec = ChainSpec::router(4, 10);
  REQUIRE(spec.num_sites() == 41);
  const auto h = build_hamiltonian(spec, point(0.5, 0.5));
  const Eigen::Index hub = static_cast<Eigen::Index>(*spec.hub_index());
  int degree = 0;
  for (Eigen::Index j = 0; j < h.dim(); ++j)
    if (j != hub && h.entries(hub, j) != cplx(0.0)) ++degree;
  CHECK(degree == 4);
  CHECK(spec.end_sites() == std::vector<std::size_t>{0, 10, 20, 30});
}

TEST_CASE("router hub decouples at J2 = 0 with eigenvalue Va") {
  const auto spec = ChainSpec::router(3, 4);
  const double Va = -0.35;
  const auto s = eigendecompose(build_hamiltonian(spec, point(1.0, 0.0, Va)));
  bool found = false;
  for (Eigen::Index j = 0; j < s.eigenvalues.size(); ++j) {
    if (std::abs(s.eigenvalues(j).real() - Va) > 1e-12) continue;
    if (std::norm(s.eigenvectors(static_cast<Eigen::Index>(*spec.hub_index()), j)) > 1.0 - 1e-12) found = true;
  }
  CHECK(found);
}

TEST_CASE("geometry factories enforce parity rules") {
  CHECK_THROWS_AS(ChainSpec::interface_chain(3), std::invalid_argument);
  CHECK_THROWS_AS(ChainSpec::router(4, 9), std::invalid_argument);
  CHECK_THROWS_AS(ChainSpec::router(1, 10), std::invalid_argument);
  CHECK_THROWS_AS(ChainSpec::even_ssh(0), std::invalid_argument);
}

TEST_CASE("site labels are unique and the interface/hub is an a-type site") {
  for (const auto& spec : {ChainSpec::interface_chain(10), ChainSpec::router(4, 10), ChainSpec::odd_ssh(6)}) {
    std::set<std::tuple<int, int, int>> seen;
    for (const auto& l : spec.site_map()) seen.insert({l.branch, l.cell, static_cast<int>(l.sublattice)});
    CHECK(seen.size() == spec.num_sites());
    if (spec.hub_index()) CHECK(spec.is_a_type(*spec.hub_index()));
  }
}

TEST_CASE("mirror map is an involution that preserves H") {
  const auto spec = ChainSpec::interface_chain(10);
  const auto h = build_hamiltonian(spec, point(0.3, 0.8, 0.4));
  for (std::size_t i = 0; i < spec.num_sites(); ++i) {
    CHECK(spec.mirror_of(spec.mirror_of(i)) == i);
    for (std::size_t j = 0; j < spec.num_sites(); ++j)
      CHECK(h.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
            h.entries(static_cast<Eigen::Index>(spec.mirror_of(i)), static_cast<Eigen::Index>(spec.mirror_of(j))));
  }
}

TEST_CASE("zero-strength disorder is the identity") {
  const auto spec = ChainSpec::interface_chain(10);
  for (auto kind : {DisorderKind::Diagonal, DisorderKind::OffDiagonal})
    for (auto sym : {DisorderSymmetry::MirrorSymmetric, DisorderSymmetry::Asymmetric}) {
      const auto r = sample_disorder(spec, kind, sym, 0.0, 42);
      for (double f : r.bond_factors) CHECK(f == 1.0);
      for (double f : r.site_factors) CHECK(f == 1.0);
      const auto c = point(0.4, 0.7, 0.3);
      CHECK(build_hamiltonian(spec, apply_disorder(spec, c, r)).entries == build_hamiltonian(spec, c).entries);
    }
}

TEST_CASE("mirror-symmetric diagonal disorder gives mirror sites identical energies") {
  const auto spec = ChainSpec::interface_chain(10);
  const auto r = sample_disorder(spec, DisorderKind::Diagonal, DisorderSymmetry::MirrorSymmetric, 0.4, 7);
  const auto t = apply_disorder(spec, point(0.5, 0.5, 0.8), r);
  bool any_changed = false;
  for (std::size_t i = 0; i < spec.num_sites(); ++i) {
    CHECK(t.site_values[i] == t.site_values[spec.mirror_of(i)]);
    CHECK(std::abs(r.site_factors[i] - 1.0) <= 0.4);
    if (r.site_factors[i] != 1.0) any_changed = true;
  }
  CHECK(any_changed);
  CHECK(is_hermitian(build_hamiltonian(spec, t)));
}

TEST_CASE("asymmetric off-diagonal disorder scales J2 bonds per half and leaves J1 bonds") {
  const auto spec = ChainSpec::interface_chain(10);
  const auto r = sample_disorder(spec, DisorderKind::OffDiagonal, DisorderSymmetry::Asymmetric, 0.4, 11);
  std::optional<double> left, right;
  for (std::size_t k = 0; k < spec.bonds().size(); ++k) {
    const auto& b = spec.bonds()[k];
    if (b.kind == BondKind::Intra) {
      CHECK(r.bond_factors[k] == 1.0);
      continue;
    }
    const int region = spec.region_of_bond(k);
    auto& slot = region == 0 ? left : right;
    if (!slot) slot = r.bond_factors[k];
    CHECK(r.bond_factors[k] == *slot);
  }
  REQUIRE(left);
  REQUIRE(right);
  CHECK(*left != *right);
  CHECK(std::abs(*left - 1.0) <= 0.4);
  CHECK(std::abs(*right - 1.0) <= 0.4);
}

TEST_CASE("loss adds -i gamma on the diagonal") {
  const auto spec = ChainSpec::interface_chain(10);
  const auto h = build_hamiltonian(spec, point(0.5, 0.5, 0.1));
  const auto h0 = apply_loss(h, spec, LossModel{0.0, false, 0.0, 0.0});
  CHECK(h0.hermitian);
  CHECK(h0.entries == h.entries);
  const auto hl = apply_loss(h, spec, LossModel{2.5e-5, false, 0.0, 0.0});
  CHECK_FALSE(hl.hermitian);
  const Eigen::MatrixXcd anti = 0.5 * (hl.entries - hl.entries.adjoint());
  for (Eigen::Index i = 0; i < hl.dim(); ++i) CHECK(anti(i, i).imag() == doctest::Approx(-2.5e-5).epsilon(1e-12));
  CHECK((anti - Eigen::MatrixXcd(anti.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
  const auto ha = apply_loss(h, spec, LossModel{2.5e-5, true, 0.0, 0.0});
  CHECK(ha.entries == hl.entries);
}

TEST_CASE("asymmetric loss with equal offsets is a uniform rescaling of b-site rates") {
  const auto spec = ChainSpec::interface_chain(10);
  const auto rates = LossModel{1e-3, true, 0.07, 0.07}.site_rates(spec);
  for (std::size_t i = 0; i < spec.num_sites(); ++i)
    CHECK(rates[i] == doctest::Approx(spec.is_a_type(i) ? 1e-3 : 1e-3 * 1.07).epsilon(1e-15));
  CHECK_THROWS_AS((LossModel{-1.0, false, 0.0, 0.0}.site_rates(spec)), std::invalid_argument);
  CHECK_THROWS_AS((LossModel{1e-3, true, 0.1, 0.1}.site_rates(ChainSpec::router(4, 10))), std::invalid_argument);
}
