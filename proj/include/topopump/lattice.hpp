#pragma once

/// Real-space and Bloch Hamiltonians for SSH-type chains: plain even/odd
/// chains, the mirror-symmetric interface chain and the K-branch router.
/// Disorder and loss are applied here as per-element tables.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "topopump/errors.hpp"

namespace topopump {

using cplx = std::complex<double>;

enum class Topology { EvenSSH, OddSSH, InterfaceChain, Router };

enum class Sublattice { A, B, Hub };

enum class BondKind { Intra, Inter };  // J1, J2

std::string to_string(Topology t);

struct SiteLabel {
  int branch = 0;  // 0 for single chains, 0..K-1 for router branches
  int cell = 0;    // 1-based cell index within the branch (0 for the hub)
  Sublattice sublattice = Sublattice::A;

  bool operator==(const SiteLabel&) const = default;
};

struct Bond {
  std::size_t i = 0;
  std::size_t j = 0;
  BondKind kind = BondKind::Intra;
};

/// Topology descriptor. Construct through the named factories, which enforce
/// the parity rules of each geometry.
class ChainSpec {
 public:
  static ChainSpec even_ssh(int cells);
  static ChainSpec odd_ssh(int cells);
  /// `cells` is the total cell count N of the 2N+1 site chain; must be even.
  static ChainSpec interface_chain(int cells);
  /// `branch_sites` is the site count N of each branch (L = K*N + 1); must be even.
  static ChainSpec router(int branches, int branch_sites);

  Topology topology() const { return topology_; }
  int cells() const { return cells_; }
  int branches() const { return branches_; }
  std::size_t num_sites() const { return labels_.size(); }

  const std::vector<SiteLabel>& site_map() const { return labels_; }
  const std::vector<Bond>& bonds() const { return bonds_; }

  /// Interface site (InterfaceChain) or hub (Router).
  std::optional<std::size_t> hub_index() const { return hub_; }
  /// Outer ends, one per output port: {0, L-1} for the interface chain,
  /// the branch tips for a router, {0, L-1} for plain chains.
  std::vector<std::size_t> end_sites() const;
  /// Site-reversal (chains) or cyclic branch shift (router).
  std::vector<std::size_t> symmetry_permutation() const;
  /// Mirror partner of site i about the interface; identity for plain chains.
  std::size_t mirror_of(std::size_t i) const;

  /// Region used by asymmetric disorder/loss: 0 for the left half and 1 for
  /// the right half of a chain, the branch index for a router, -1 for the
  /// interface/hub site or the self-mirrored central bond.
  int region_of_site(std::size_t i) const;
  int region_of_bond(std::size_t bond_index) const;
  int num_regions() const { return topology_ == Topology::Router ? branches_ : 2; }

  /// Representative of the symmetry orbit of a site/bond (mirror image for
  /// chains, branch 0 for routers).
  std::size_t canonical_site(std::size_t i) const;
  std::size_t canonical_bond(std::size_t bond_index) const;
  bool is_a_type(std::size_t i) const { return labels_[i].sublattice != Sublattice::B; }

  bool operator==(const ChainSpec& o) const {
    return topology_ == o.topology_ && cells_ == o.cells_ && branches_ == o.branches_;
  }

 private:
  ChainSpec(Topology t, int cells, int branches);

  Topology topology_;
  int cells_;
  int branches_;
  std::vector<SiteLabel> labels_;
  std::vector<Bond> bonds_;
  std::optional<std::size_t> hub_;
};

/// Instantaneous couplings (units of J0) and their time derivatives.
struct CouplingPoint {
  double J1 = 0.0;
  double J2 = 0.0;
  double Va = 0.0;
  double Vb = 0.0;
  double dJ1_dt = 0.0;
  double dJ2_dt = 0.0;
  double dVa_dt = 0.0;
  double dVb_dt = 0.0;
};

struct HamiltonianMatrix {
  Eigen::MatrixXcd entries;
  bool hermitian = true;

  Eigen::Index dim() const { return entries.rows(); }
};

/// Per-element coupling values for one instant: one hopping per bond of the
/// spec (same order as ChainSpec::bonds) and one onsite energy per site.
struct CouplingTable {
  std::vector<double> bond_values;
  std::vector<double> site_values;
};

enum class DisorderKind { Diagonal, OffDiagonal };
enum class DisorderSymmetry { MirrorSymmetric, Asymmetric };
/// PerElement: one independent draw per bond/site. Global: one draw shared by
/// every element of a given kind in a realization.
enum class DisorderGranularity { PerElement, Global };

struct DisorderRealization {
  DisorderKind kind = DisorderKind::Diagonal;
  DisorderSymmetry symmetry = DisorderSymmetry::MirrorSymmetric;
  double strength = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> bond_factors;  // 1 + delta, indexed like ChainSpec::bonds
  std::vector<double> site_factors;  // 1 + delta, indexed by site
};

/// Identity realization (all factors exactly 1) sized for `spec`.
DisorderRealization clean_realization(const ChainSpec& spec);

struct LossModel {
  double gamma = 0.0;
  bool asymmetric = false;
  double dgamma_left = 0.0;   // b-site rate gamma*(1+dgamma_left) on the left half
  double dgamma_right = 0.0;  // and gamma*(1+dgamma_right) on the right half

  /// Per-site decay rates for `spec`. Throws on negative rates.
  std::vector<double> site_rates(const ChainSpec& spec) const;
};

/// Plain hopping/onsite table for a clean chain at one coupling point.
CouplingTable coupling_table(const ChainSpec& spec, const CouplingPoint& c);

/// Same table with the realization's multiplicative factors applied.
CouplingTable apply_disorder(const ChainSpec& spec, const CouplingPoint& c,
                             const DisorderRealization& r);

/// Dense Hermitian matrix for an arbitrary per-element table.
HamiltonianMatrix build_hamiltonian(const ChainSpec& spec, const CouplingTable& table);
/// Dense matrix of the clean chain (dispatches on topology).
HamiltonianMatrix build_hamiltonian(const ChainSpec& spec, const CouplingPoint& c);

HamiltonianMatrix build_ssh_hamiltonian(const ChainSpec& spec, const CouplingPoint& c);
HamiltonianMatrix build_interface_hamiltonian(const ChainSpec& spec, const CouplingPoint& c);
HamiltonianMatrix build_router_hamiltonian(const ChainSpec& spec, const CouplingPoint& c);

/// dH/dt of the clean (or disordered) chain, assembled from the derivative
/// fields of the coupling point.
HamiltonianMatrix build_hamiltonian_derivative(const ChainSpec& spec, const CouplingPoint& c,
                                               const DisorderRealization* r = nullptr);

Eigen::Matrix2cd build_bloch_hamiltonian(double k, const CouplingPoint& c);

/// H' = H - i diag(rates). Rates must be non-negative and H Hermitian.
HamiltonianMatrix apply_loss(const HamiltonianMatrix& h, std::span<const double> rates);
HamiltonianMatrix apply_loss(const HamiltonianMatrix& h, const ChainSpec& spec,
                             const LossModel& loss);

}  // namespace topopump
