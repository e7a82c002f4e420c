#pragma once

// Eigen-analysis of Bloch and real-space Hamiltonians: bands, winding,
// analytic edge/gap states and gap tracking along a drive.

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "topopump/lattice.hpp"
#include "topopump/protocol.hpp"

namespace topopump {

/// Bloch vector d = (J1 + J2 cos k, J2 sin k, Va) of H(k) = d.sigma.
struct DVector {
  double dx = 0.0;
  double dy = 0.0;
  double dz = 0.0;
};

DVector d_vector(double k, const CouplingPoint& c);

/// Rice-Mele bands (E-, E+) at wavenumber k; requires Vb = -Va.
std::pair<double, double> dispersion(double k, const CouplingPoint& c);

struct WindingResult {
  int value = 0;
  double raw = 0.0;
};

/// Signed winding of (dx, dy) about the origin over one Brillouin zone,
/// accumulated from angle increments on an n_k point grid.
WindingResult winding_number(const CouplingPoint& c, int n_k = 4096);

struct SpectrumSnapshot {
  Eigen::VectorXcd eigenvalues;  // ascending (by real part when non-Hermitian)
  Eigen::MatrixXcd eigenvectors;  // column j belongs to eigenvalues(j)
  bool hermitian = true;
  std::optional<Eigen::Index> gap_state_index;
  double min_neighbor_gap = 0.0;

  Eigen::VectorXd real_eigenvalues() const { return eigenvalues.real(); }
};

struct EigenOptions {
  Eigen::Index max_dim = 1024;
  /// Eigenvalues closer than this (absolute) are treated as degenerate.
  double degeneracy_tol = 1e-10;
  /// When given (true = a-type site), degenerate pairs are rotated into the
  /// (|A> - |B>)/sqrt2, (|A> + |B>)/sqrt2 combinations of their a- and
  /// b-supported parts.
  std::vector<bool> a_sublattice;
};

/// Dense eigendecomposition. Each eigenvector is normalized and its
/// largest-magnitude component (the first one, among ties within 1e-9) made
/// real and positive.
SpectrumSnapshot eigendecompose(const HamiltonianMatrix& h, const EigenOptions& opts = {});

/// Mask of a-type sites for EigenOptions::a_sublattice.
std::vector<bool> a_sublattice_mask(const ChainSpec& spec);

/// Normalize and fix the global phase so the largest component (first among
/// ties) is real positive.
void fix_phase(Eigen::Ref<Eigen::VectorXcd> v);

struct EdgeStatePair {
  Eigen::VectorXd left;   // a-sublattice support
  Eigen::VectorXd right;  // b-sublattice support
  double overlap = 0.0;         // closed-form <L|H|R> of the normalized states
  double hybrid_energy = 0.0;   // |<L|H|R>|; the pair sits at +/- this value
  double localization = 0.0;    // xi = -J1/J2
};

/// Analytic hybridized edge states of the 2N-site chain (nontrivial phase only).
EdgeStatePair analytic_edge_states(int cells, double J1, double J2);

/// Analytic gap state of the odd, interface or router chain: amplitude xi^d on
/// a-type sites d cells away from the outer end(s), zero on b-type sites.
/// J2 = 0 returns the vector localized where the chain decouples.
Eigen::VectorXcd analytic_gap_state(const ChainSpec& spec, double J1, double J2);

/// |<u|v>|^2 of normalized vectors.
double overlap_probability(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v);

struct GapPoint {
  double t = 0.0;
  double energy = 0.0;
  double min_neighbor_gap = 0.0;
  double continuity = 1.0;  // overlap with the previous point's gap state
  Eigen::VectorXcd state;
};

struct GapTrack {
  std::vector<GapPoint> points;
  double min_gap = 0.0;
  double t_at_min_gap = 0.0;
};

/// Follows the gap state along the drive by maximal overlap with the previous
/// grid point, seeded with the interface/hub (or input edge) basis state.
/// Neighbor gaps only count eigenstates in the gap state's symmetry sector
/// when the Hamiltonian is symmetric, since the drive cannot couple the other
/// sectors to it.
GapTrack gap_tracking(const ChainSpec& spec, const DriveSchedule& schedule,
                      std::span<const double> t_grid,
                      const DisorderRealization* disorder = nullptr);

/// Sum over m != n of |<n|dH/dt|m>| / |E_m - E_n| for the gap state n,
/// located by maximal overlap with analytic_gap_state at the same instant.
double adiabaticity_metric(const ChainSpec& spec, const DriveSchedule& schedule, double t);

}  // namespace topopump
