#include "topopump/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "topopump/errors.hpp"

namespace topopump {

DVector d_vector(double k, const CouplingPoint& c) {
  return {c.J1 + c.J2 * std::cos(k), c.J2 * std::sin(k), c.Va};
}

std::pair<double, double> dispersion(double k, const CouplingPoint& c) {
  if (std::abs(c.Va + c.Vb) > 1e-12 * std::max(1.0, std::abs(c.Va)))
    throw std::invalid_argument("dispersion assumes staggered onsite energies Vb = -Va");
  const double e = std::sqrt(std::max(
      0.0, c.Va * c.Va + c.J1 * c.J1 + c.J2 * c.J2 + 2.0 * c.J1 * c.J2 * std::cos(k)));
  return {-e, e};
}

WindingResult winding_number(const CouplingPoint& c, int n_k) {
  if (c.Va != 0.0 || c.Vb != 0.0)
    throw std::invalid_argument("winding number is defined for the chiral case Va = Vb = 0");
  if (n_k < 8) throw std::invalid_argument("winding grid needs at least 8 points");
  const double scale = std::max({std::abs(c.J1), std::abs(c.J2), 1e-300});
  if (std::abs(c.J1 - c.J2) <= 1e-12 * scale)
    throw std::invalid_argument("winding undefined at J1 = J2: the d-vector loop crosses the origin");

  const double two_pi = 2.0 * std::numbers::pi;
  double accumulated = 0.0;
  DVector prev = d_vector(0.0, c);
  for (int j = 1; j <= n_k; ++j) {
    const DVector cur = d_vector(two_pi * j / n_k, c);
    // Signed angle between consecutive d-vectors, in (-pi, pi].
    const double cross = prev.dx * cur.dy - prev.dy * cur.dx;
    const double dot = prev.dx * cur.dx + prev.dy * cur.dy;
    accumulated += std::atan2(cross, dot);
    prev = cur;
  }
  WindingResult r;
  r.raw = accumulated / two_pi;
  r.value = static_cast<int>(std::lround(r.raw));
  if (std::abs(r.raw - r.value) > 1e-3) {
    std::ostringstream os;
    os << "winding raw value " << r.raw << " is not near an integer; grid of " << n_k
       << " points is too coarse";
    throw NumericalError(os.str());
  }
  return r;
}

void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  const double n = v.norm();
  if (n == 0.0) return;
  v /= n;
  const double peak = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= peak * (1.0 - 1e-9)) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      return;
    }
  }
}

std::vector<bool> a_sublattice_mask(const ChainSpec& spec) {
  std::vector<bool> mask(spec.num_sites());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = spec.is_a_type(i);
  return mask;
}

namespace {

// Rotates a degenerate pair into the difference/sum of its a- and b-supported parts.
void split_by_sublattice(Eigen::MatrixXcd& vecs, Eigen::Index lo, const std::vector<bool>& a_mask) {
  Eigen::MatrixXcd pair = vecs.middleCols(lo, 2);
  Eigen::MatrixXcd projected = pair;
  for (Eigen::Index i = 0; i < projected.rows(); ++i)
    if (!a_mask[static_cast<std::size_t>(i)]) projected.row(i).setZero();
  const Eigen::Matrix2cd weight = pair.adjoint() * projected;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(weight);
  Eigen::VectorXcd b_part = pair * es.eigenvectors().col(0);
  Eigen::VectorXcd a_part = pair * es.eigenvectors().col(1);
  fix_phase(a_part);
  fix_phase(b_part);
  Eigen::VectorXcd minus = (a_part - b_part) / std::sqrt(2.0);
  Eigen::VectorXcd plus = (a_part + b_part) / std::sqrt(2.0);
  fix_phase(minus);
  fix_phase(plus);
  vecs.col(lo) = minus;
  vecs.col(lo + 1) = plus;
}

}  // namespace

SpectrumSnapshot eigendecompose(const HamiltonianMatrix& h, const EigenOptions& opts) {
  const Eigen::Index n = h.dim();
  if (n == 0 || h.entries.cols() != n) throw std::invalid_argument("Hamiltonian must be square and non-empty");
  if (n > opts.max_dim)
    throw std::invalid_argument("matrix dimension " + std::to_string(n) + " exceeds cap " +
                                std::to_string(opts.max_dim));
  if (!h.entries.allFinite()) throw NumericalError("Hamiltonian contains non-finite entries");

  SpectrumSnapshot s;
  s.hermitian = h.hermitian;
  if (h.hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.entries);
    if (es.info() != Eigen::Success) {
      std::ostringstream os;
      os << "Hermitian eigensolver did not converge for a " << n << "x" << n
         << " matrix (max |H| = " << h.entries.cwiseAbs().maxCoeff() << ")";
      throw NumericalError(os.str());
    }
    s.eigenvalues = es.eigenvalues().cast<cplx>();
    s.eigenvectors = es.eigenvectors();
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h.entries);
    if (es.info() != Eigen::Success) {
      std::ostringstream os;
      os << "complex eigensolver did not converge for a " << n << "x" << n
         << " matrix (max |H| = " << h.entries.cwiseAbs().maxCoeff() << ")";
      throw NumericalError(os.str());
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const auto& ev = es.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      if (ev(a).real() != ev(b).real()) return ev(a).real() < ev(b).real();
      return ev(a).imag() < ev(b).imag();
    });
    s.eigenvalues.resize(n);
    s.eigenvectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      s.eigenvalues(j) = ev(order[static_cast<std::size_t>(j)]);
      s.eigenvectors.col(j) = es.eigenvectors().col(order[static_cast<std::size_t>(j)]);
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) fix_phase(s.eigenvectors.col(j));

  if (h.hermitian && !opts.a_sublattice.empty()) {
    if (static_cast<Eigen::Index>(opts.a_sublattice.size()) != n)
      throw std::invalid_argument("sublattice mask does not match matrix dimension");
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
      const bool pair_start = std::abs(s.eigenvalues(j + 1) - s.eigenvalues(j)) < opts.degeneracy_tol;
      const bool isolated_before = j == 0 || std::abs(s.eigenvalues(j) - s.eigenvalues(j - 1)) >= opts.degeneracy_tol;
      const bool isolated_after = j + 2 >= n || std::abs(s.eigenvalues(j + 2) - s.eigenvalues(j + 1)) >= opts.degeneracy_tol;
      if (pair_start && isolated_before && isolated_after) {
        split_by_sublattice(s.eigenvectors, j, opts.a_sublattice);
        ++j;
      }
    }
  }
  return s;
}

EdgeStatePair analytic_edge_states(int cells, double J1, double J2) {
  if (cells < 1) throw std::invalid_argument("edge states need at least one cell");
  if (!(J2 > 0.0) || J1 < 0.0)
    throw std::invalid_argument("edge states need J2 > 0 and J1 >= 0");
  if (!(J1 < J2))
    throw std::invalid_argument("edge states exist only in the nontrivial phase J1/J2 < 1");

  const double xi = -J1 / J2;
  const auto N = static_cast<Eigen::Index>(cells);
  EdgeStatePair p;
  p.localization = xi;
  p.left = Eigen::VectorXd::Zero(2 * N);
  p.right = Eigen::VectorXd::Zero(2 * N);
  double power = 1.0;
  for (Eigen::Index n = 0; n < N; ++n) {
    p.left(2 * n) = power;
    p.right(2 * N - 1 - 2 * n) = power;
    power *= xi;
  }
  p.left.normalize();
  p.right.normalize();
  const double xi_n = std::pow(xi, cells);
  const double xi_2n = xi_n * xi_n;
  p.overlap = -J2 * xi_n * (xi * xi - 1.0) / (xi_2n - 1.0);
  p.hybrid_energy = std::abs(p.overlap);
  return p;
}

Eigen::VectorXcd analytic_gap_state(const ChainSpec& spec, double J1, double J2) {
  if (J1 < 0.0 || J2 < 0.0) throw std::invalid_argument("gap state needs non-negative couplings");
  if (J1 == 0.0 && J2 == 0.0) throw std::invalid_argument("gap state undefined when J1 = J2 = 0");

  const auto L = static_cast<Eigen::Index>(spec.num_sites());
  // d: cell distance of an a-type site from its outer end; D: largest such distance.
  std::vector<int> distance(spec.num_sites(), -1);
  int D = 0;
  switch (spec.topology()) {
    case Topology::EvenSSH:
      throw std::invalid_argument("the even chain hosts a hybridized pair, not a single gap state");
    case Topology::OddSSH:
      for (std::size_t i = 0; i < spec.num_sites(); i += 2) distance[i] = static_cast<int>(i / 2);
      D = spec.cells();
      break;
    case Topology::InterfaceChain:
      for (std::size_t i = 0; i < spec.num_sites(); i += 2)
        distance[i] = static_cast<int>(std::min(i, spec.num_sites() - 1 - i) / 2);
      D = spec.cells() / 2;
      break;
    case Topology::Router: {
      const auto n = static_cast<std::size_t>(spec.cells());
      for (std::size_t i = 0; i + 1 < spec.num_sites(); ++i)
        if ((i % n) % 2 == 0) distance[i] = static_cast<int>((i % n) / 2);
      distance[*spec.hub_index()] = spec.cells() / 2;
      D = spec.cells() / 2;
      break;
    }
  }

  // xi = -J1/J2 without dividing by a vanishing J2: for |xi| > 1 use
  // xi^d = xi^D (-J2/J1)^(D-d) and drop the global factor.
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(L);
  const bool small_ratio = J2 >= J1;
  const double base = small_ratio ? -J1 / J2 : -J2 / J1;
  for (Eigen::Index i = 0; i < L; ++i) {
    const int d = distance[static_cast<std::size_t>(i)];
    if (d < 0) continue;
    v(i) = std::pow(base, small_ratio ? d : D - d);
  }
  fix_phase(v);
  return v;
}

double overlap_probability(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
  return std::norm(u.dot(v)) / (u.squaredNorm() * v.squaredNorm());
}

namespace {

struct Cluster {
  Eigen::Index begin = 0;
  Eigen::Index end = 0;  // exclusive
};

std::vector<Cluster> degenerate_clusters(const Eigen::VectorXcd& ev, double tol) {
  std::vector<Cluster> out;
  Eigen::Index start = 0;
  for (Eigen::Index j = 1; j <= ev.size(); ++j) {
    if (j == ev.size() || std::abs(ev(j) - ev(j - 1)) > tol) {
      out.push_back({start, j});
      start = j;
    }
  }
  return out;
}

bool permutation_symmetric(const Eigen::MatrixXcd& h, const std::vector<std::size_t>& perm) {
  const auto n = h.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(h(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]),
                     static_cast<Eigen::Index>(perm[static_cast<std::size_t>(j)])) - h(i, j)) > 1e-12)
        return false;
  return true;
}

// Average of v over the cyclic group generated by perm.
Eigen::VectorXcd symmetric_projection(const Eigen::VectorXcd& v, const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> power = perm;
  Eigen::VectorXcd acc = v;
  int order = 1;
  auto is_identity = [](const std::vector<std::size_t>& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] != i) return false;
    return true;
  };
  while (!is_identity(power)) {
    Eigen::VectorXcd moved(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i)
      moved(static_cast<Eigen::Index>(power[static_cast<std::size_t>(i)])) = v(i);
    acc += moved;
    ++order;
    for (auto& x : power) x = perm[x];
  }
  return acc / static_cast<double>(order);
}

// Component of `reference` inside the eigenspace of cluster c, normalized.
Eigen::VectorXcd cluster_projection(const SpectrumSnapshot& s, const Cluster& c,
                                    const Eigen::VectorXcd& reference, double* weight) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(reference.size());
  for (Eigen::Index j = c.begin; j < c.end; ++j) {
    const auto col = s.eigenvectors.col(j);
    out += col * col.dot(reference);
  }
  const double w = out.squaredNorm() / reference.squaredNorm();
  if (weight) *weight = w;
  fix_phase(out);
  return out;
}

std::size_t best_cluster(const SpectrumSnapshot& s, const std::vector<Cluster>& clusters,
                         const Eigen::VectorXcd& reference) {
  std::size_t best = 0;
  double best_w = -1.0;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    double w = 0.0;
    for (Eigen::Index j = clusters[c].begin; j < clusters[c].end; ++j)
      w += std::norm(s.eigenvectors.col(j).dot(reference));
    if (w > best_w) {
      best_w = w;
      best = c;
    }
  }
  return best;
}

double cluster_energy(const SpectrumSnapshot& s, const Cluster& c) {
  double e = 0.0;
  for (Eigen::Index j = c.begin; j < c.end; ++j) e += s.eigenvalues(j).real();
  return e / static_cast<double>(c.end - c.begin);
}

constexpr double kClusterTol = 1e-9;

}  // namespace

GapTrack gap_tracking(const ChainSpec& spec, const DriveSchedule& schedule,
                      std::span<const double> t_grid, const DisorderRealization* disorder) {
  if (t_grid.empty()) throw std::invalid_argument("gap tracking needs a non-empty time grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("time grid must be strictly increasing");

  const CouplingPoint c0 = schedule.at(t_grid.front());
  Eigen::VectorXcd previous = analytic_gap_state(spec, c0.J1, c0.J2);
  const auto perm = spec.symmetry_permutation();

  GapTrack track;
  track.min_gap = std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    const CouplingPoint c = schedule.at(t);
    const HamiltonianMatrix h =
        build_hamiltonian(spec, disorder ? apply_disorder(spec, c, *disorder) : coupling_table(spec, c));
    const SpectrumSnapshot s = eigendecompose(h);
    const auto clusters = degenerate_clusters(s.eigenvalues, kClusterTol);
    const std::size_t g = best_cluster(s, clusters, previous);

    GapPoint p;
    p.t = t;
    p.state = cluster_projection(s, clusters[g], previous, &p.continuity);
    if (p.continuity < 0.5) {
      std::ostringstream os;
      os << "gap-state continuity dropped to " << p.continuity << " at t = " << t
         << "; refine the time grid";
      throw NumericalError(os.str());
    }
    p.energy = cluster_energy(s, clusters[g]);

    const bool symmetric = permutation_symmetric(h.entries, perm) &&
                           symmetric_projection(p.state, perm).squaredNorm() > 0.5;
    p.min_neighbor_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < clusters.size(); ++k) {
      if (k == g) continue;
      if (symmetric) {
        double sector_weight = 0.0;
        for (Eigen::Index j = clusters[k].begin; j < clusters[k].end; ++j)
          sector_weight += symmetric_projection(s.eigenvectors.col(j), perm).squaredNorm();
        if (sector_weight < 0.5) continue;
      }
      p.min_neighbor_gap = std::min(p.min_neighbor_gap, std::abs(cluster_energy(s, clusters[k]) - p.energy));
    }
    if (p.min_neighbor_gap < track.min_gap) {
      track.min_gap = p.min_neighbor_gap;
      track.t_at_min_gap = t;
    }
    previous = p.state;
    track.points.push_back(std::move(p));
  }
  return track;
}

double adiabaticity_metric(const ChainSpec& spec, const DriveSchedule& schedule, double t) {
  const CouplingPoint c = schedule.at(t);
  for (double d : {c.dJ1_dt, c.dJ2_dt, c.dVa_dt, c.dVb_dt})
    if (!std::isfinite(d)) return std::numeric_limits<double>::infinity();

  const HamiltonianMatrix h = build_hamiltonian(spec, c);
  const HamiltonianMatrix dh = build_hamiltonian_derivative(spec, c);
  const SpectrumSnapshot s = eigendecompose(h);
  const auto clusters = degenerate_clusters(s.eigenvalues, kClusterTol);
  const Eigen::VectorXcd reference = analytic_gap_state(spec, c.J1, c.J2);
  const std::size_t g = best_cluster(s, clusters, reference);

  // Orthonormal basis with the gap state first inside its own cluster.
  Eigen::MatrixXcd basis = s.eigenvectors;
  const Eigen::VectorXcd gap = cluster_projection(s, clusters[g], reference, nullptr);
  const Eigen::Index gap_col = clusters[g].begin;
  {
    Eigen::MatrixXcd block(basis.rows(), clusters[g].end - clusters[g].begin + 1);
    block.col(0) = gap;
    block.rightCols(block.cols() - 1) = basis.middleCols(clusters[g].begin, block.cols() - 1);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(block);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(block.rows(), block.cols() - 1);
    // Keep the gap state exactly, complete the cluster with the QR complement.
    basis.middleCols(clusters[g].begin, block.cols() - 1) = q;
    basis.col(gap_col) = gap;
  }

  const double gap_energy = cluster_energy(s, clusters[g]);
  const Eigen::VectorXcd dh_gap = dh.entries * gap;
  const double coupling_floor = 1e-12 * std::max(1e-300, dh.entries.cwiseAbs().maxCoeff());
  double metric = 0.0;
  for (Eigen::Index m = 0; m < basis.cols(); ++m) {
    if (m == gap_col) continue;
    const double coupling = std::abs(basis.col(m).dot(dh_gap));
    if (coupling <= coupling_floor) continue;
    const double denom = std::abs(s.eigenvalues(m).real() - gap_energy);
    if (denom < 1e-12) {
      std::ostringstream os;
      os << "near-degeneracy |E_m - E_n| = " << denom << " at t = " << t << " (state " << m << ")";
      throw NumericalError(os.str());
    }
    metric += coupling / denom;
  }
  return metric;
}

}  // namespace topopump
