#include "topopump/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace topopump {

std::string to_string(Topology t) {
  switch (t) {
    case Topology::EvenSSH: return "even";
    case Topology::OddSSH: return "odd";
    case Topology::InterfaceChain: return "interface";
    case Topology::Router: return "router";
  }
  return "unknown";
}

ChainSpec::ChainSpec(Topology t, int cells, int branches)
    : topology_(t), cells_(cells), branches_(branches) {
  auto chain_label = [](std::size_t i) {
    // a_n at 2(n-1), b_n at 2(n-1)+1
    SiteLabel s;
    s.cell = static_cast<int>(i / 2) + 1;
    s.sublattice = (i % 2 == 0) ? Sublattice::A : Sublattice::B;
    return s;
  };

  switch (t) {
    case Topology::EvenSSH:
    case Topology::OddSSH: {
      const std::size_t L = 2 * static_cast<std::size_t>(cells) + (t == Topology::OddSSH ? 1 : 0);
      for (std::size_t i = 0; i < L; ++i) labels_.push_back(chain_label(i));
      for (std::size_t i = 0; i + 1 < L; ++i)
        bonds_.push_back({i, i + 1, i % 2 == 0 ? BondKind::Intra : BondKind::Inter});
      break;
    }
    case Topology::InterfaceChain: {
      const std::size_t N = static_cast<std::size_t>(cells);
      const std::size_t L = 2 * N + 1;
      for (std::size_t i = 0; i < L; ++i) labels_.push_back(chain_label(i));
      labels_[N].sublattice = Sublattice::Hub;
      hub_ = N;
      // (J1, J2, ...) up to the interface, mirrored (..., J2, J1) after it.
      for (std::size_t i = 0; i + 1 < L; ++i) {
        const bool intra = (i < N) ? (i % 2 == 0) : ((i - N) % 2 == 1);
        bonds_.push_back({i, i + 1, intra ? BondKind::Intra : BondKind::Inter});
      }
      break;
    }
    case Topology::Router: {
      const std::size_t K = static_cast<std::size_t>(branches);
      const std::size_t n = static_cast<std::size_t>(cells);  // sites per branch
      const std::size_t hub = K * n;
      for (std::size_t s = 0; s < K; ++s) {
        for (std::size_t j = 0; j < n; ++j) {
          SiteLabel lab = chain_label(j);
          lab.branch = static_cast<int>(s);
          labels_.push_back(lab);
        }
      }
      labels_.push_back({0, 0, Sublattice::Hub});
      hub_ = hub;
      // Each branch reads (J1, J2, ..., J1) from its tip inward, then J2 onto the hub.
      for (std::size_t s = 0; s < K; ++s) {
        const std::size_t o = s * n;
        for (std::size_t j = 0; j + 1 < n; ++j)
          bonds_.push_back({o + j, o + j + 1, j % 2 == 0 ? BondKind::Intra : BondKind::Inter});
        bonds_.push_back({o + n - 1, hub, BondKind::Inter});
      }
      break;
    }
  }
}

ChainSpec ChainSpec::even_ssh(int cells) {
  if (cells < 1) throw std::invalid_argument("even SSH chain needs at least one cell");
  return ChainSpec(Topology::EvenSSH, cells, 1);
}

ChainSpec ChainSpec::odd_ssh(int cells) {
  if (cells < 1) throw std::invalid_argument("odd SSH chain needs at least one cell");
  return ChainSpec(Topology::OddSSH, cells, 1);
}

ChainSpec ChainSpec::interface_chain(int cells) {
  if (cells < 2 || cells % 2 != 0)
    throw std::invalid_argument("interface chain needs an even, positive cell count N (got " +
                                std::to_string(cells) + ")");
  return ChainSpec(Topology::InterfaceChain, cells, 2);
}

ChainSpec ChainSpec::router(int branches, int branch_sites) {
  if (branches < 2)
    throw std::invalid_argument("router needs at least two branches (got " +
                                std::to_string(branches) + ")");
  if (branch_sites < 2 || branch_sites % 2 != 0)
    throw std::invalid_argument("router branches must hold an even, positive site count (got " +
                                std::to_string(branch_sites) + ")");
  return ChainSpec(Topology::Router, branch_sites, branches);
}

std::vector<std::size_t> ChainSpec::end_sites() const {
  if (topology_ == Topology::Router) {
    std::vector<std::size_t> ends;
    for (int s = 0; s < branches_; ++s) ends.push_back(static_cast<std::size_t>(s * cells_));
    return ends;
  }
  return {0, num_sites() - 1};
}

std::size_t ChainSpec::mirror_of(std::size_t i) const {
  if (topology_ == Topology::Router) {
    if (hub_ && i == *hub_) return i;
    // K = 2 routers are mirror chains; larger K map branch s onto K-1-s.
    const std::size_t n = static_cast<std::size_t>(cells_);
    const std::size_t s = i / n;
    return (static_cast<std::size_t>(branches_) - 1 - s) * n + i % n;
  }
  return num_sites() - 1 - i;
}

std::vector<std::size_t> ChainSpec::symmetry_permutation() const {
  std::vector<std::size_t> p(num_sites());
  if (topology_ == Topology::Router) {
    const std::size_t n = static_cast<std::size_t>(cells_);
    const std::size_t K = static_cast<std::size_t>(branches_);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i == *hub_) {
        p[i] = i;
      } else {
        p[i] = ((i / n + 1) % K) * n + i % n;
      }
    }
    return p;
  }
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = mirror_of(i);
  return p;
}

int ChainSpec::region_of_site(std::size_t i) const {
  if (hub_ && i == *hub_) return -1;
  if (topology_ == Topology::Router) return static_cast<int>(i / static_cast<std::size_t>(cells_));
  const std::size_t L = num_sites();
  if (2 * i + 1 == L) return -1;  // central site of an odd chain
  return (2 * i + 1 < L) ? 0 : 1;
}

int ChainSpec::region_of_bond(std::size_t bond_index) const {
  const Bond& b = bonds_.at(bond_index);
  if (topology_ == Topology::Router)
    return static_cast<int>(std::min(b.i, b.j) / static_cast<std::size_t>(cells_));
  // Compare the bond midpoint i + 1/2 with the chain centre (L-1)/2.
  const std::size_t twice_mid = b.i + b.j;
  const std::size_t twice_center = num_sites() - 1;
  if (twice_mid == twice_center) return -1;
  return twice_mid < twice_center ? 0 : 1;
}

std::size_t ChainSpec::canonical_site(std::size_t i) const {
  if (topology_ == Topology::Router) {
    if (i == *hub_) return i;
    return i % static_cast<std::size_t>(cells_);
  }
  return std::min(i, mirror_of(i));
}

std::size_t ChainSpec::canonical_bond(std::size_t bond_index) const {
  if (topology_ == Topology::Router) return bond_index % static_cast<std::size_t>(cells_);
  return std::min(bond_index, bonds_.size() - 1 - bond_index);
}

DisorderRealization clean_realization(const ChainSpec& spec) {
  DisorderRealization r;
  r.bond_factors.assign(spec.bonds().size(), 1.0);
  r.site_factors.assign(spec.num_sites(), 1.0);
  return r;
}

std::vector<double> LossModel::site_rates(const ChainSpec& spec) const {
  if (gamma < 0.0) throw std::invalid_argument("loss rate must be non-negative");
  std::vector<double> rates(spec.num_sites(), gamma);
  if (!asymmetric) return rates;
  if (spec.topology() == Topology::Router)
    throw std::invalid_argument("asymmetric loss is defined for two-halved chains only");
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (spec.is_a_type(i)) continue;
    const int region = spec.region_of_site(i);
    if (region == 0) rates[i] = gamma * (1.0 + dgamma_left);
    if (region == 1) rates[i] = gamma * (1.0 + dgamma_right);
  }
  for (double g : rates)
    if (g < 0.0) throw std::invalid_argument("asymmetric loss produced a negative rate");
  return rates;
}

CouplingTable coupling_table(const ChainSpec& spec, const CouplingPoint& c) {
  CouplingTable t;
  t.bond_values.reserve(spec.bonds().size());
  for (const Bond& b : spec.bonds()) t.bond_values.push_back(b.kind == BondKind::Intra ? c.J1 : c.J2);
  t.site_values.reserve(spec.num_sites());
  for (std::size_t i = 0; i < spec.num_sites(); ++i)
    t.site_values.push_back(spec.is_a_type(i) ? c.Va : c.Vb);
  return t;
}

CouplingTable apply_disorder(const ChainSpec& spec, const CouplingPoint& c,
                             const DisorderRealization& r) {
  if (r.bond_factors.size() != spec.bonds().size())
    throw std::invalid_argument("disorder realization is missing bond factors (have " +
                                std::to_string(r.bond_factors.size()) + ", need " +
                                std::to_string(spec.bonds().size()) + ")");
  if (r.site_factors.size() != spec.num_sites())
    throw std::invalid_argument("disorder realization is missing site factors (have " +
                                std::to_string(r.site_factors.size()) + ", need " +
                                std::to_string(spec.num_sites()) + ")");
  CouplingTable t = coupling_table(spec, c);
  for (std::size_t k = 0; k < t.bond_values.size(); ++k) t.bond_values[k] *= r.bond_factors[k];
  for (std::size_t i = 0; i < t.site_values.size(); ++i) t.site_values[i] *= r.site_factors[i];
  return t;
}

HamiltonianMatrix build_hamiltonian(const ChainSpec& spec, const CouplingTable& table) {
  const auto L = static_cast<Eigen::Index>(spec.num_sites());
  if (table.site_values.size() != spec.num_sites() || table.bond_values.size() != spec.bonds().size())
    throw std::invalid_argument("coupling table does not match chain dimensions");
  HamiltonianMatrix h;
  h.entries = Eigen::MatrixXcd::Zero(L, L);
  for (Eigen::Index i = 0; i < L; ++i) h.entries(i, i) = table.site_values[static_cast<std::size_t>(i)];
  const auto& bonds = spec.bonds();
  for (std::size_t k = 0; k < bonds.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(bonds[k].i);
    const auto j = static_cast<Eigen::Index>(bonds[k].j);
    h.entries(i, j) = table.bond_values[k];
    h.entries(j, i) = table.bond_values[k];
  }
  h.hermitian = true;
  return h;
}

HamiltonianMatrix build_hamiltonian(const ChainSpec& spec, const CouplingPoint& c) {
  return build_hamiltonian(spec, coupling_table(spec, c));
}

namespace {

void require_topology(const ChainSpec& spec, std::initializer_list<Topology> allowed,
                      const char* builder) {
  for (Topology t : allowed)
    if (spec.topology() == t) return;
  throw std::invalid_argument(std::string(builder) + " cannot build a '" +
                              to_string(spec.topology()) + "' chain");
}

}  // namespace

HamiltonianMatrix build_ssh_hamiltonian(const ChainSpec& spec, const CouplingPoint& c) {
  require_topology(spec, {Topology::EvenSSH, Topology::OddSSH}, "build_ssh_hamiltonian");
  return build_hamiltonian(spec, c);
}

HamiltonianMatrix build_interface_hamiltonian(const ChainSpec& spec, const CouplingPoint& c) {
  require_topology(spec, {Topology::InterfaceChain}, "build_interface_hamiltonian");
  return build_hamiltonian(spec, c);
}

HamiltonianMatrix build_router_hamiltonian(const ChainSpec& spec, const CouplingPoint& c) {
  require_topology(spec, {Topology::Router}, "build_router_hamiltonian");
  return build_hamiltonian(spec, c);
}

HamiltonianMatrix build_hamiltonian_derivative(const ChainSpec& spec, const CouplingPoint& c,
                                               const DisorderRealization* r) {
  CouplingPoint d;
  d.J1 = c.dJ1_dt;
  d.J2 = c.dJ2_dt;
  d.Va = c.dVa_dt;
  d.Vb = c.dVb_dt;
  return build_hamiltonian(spec, r ? apply_disorder(spec, d, *r) : coupling_table(spec, d));
}

Eigen::Matrix2cd build_bloch_hamiltonian(double k, const CouplingPoint& c) {
  const cplx off = c.J1 + c.J2 * std::exp(cplx(0.0, -k));
  Eigen::Matrix2cd h;
  h << c.Va, off, std::conj(off), c.Vb;
  return h;
}

HamiltonianMatrix apply_loss(const HamiltonianMatrix& h, std::span<const double> rates) {
  if (!h.hermitian) throw std::invalid_argument("apply_loss expects a Hermitian Hamiltonian");
  if (static_cast<Eigen::Index>(rates.size()) != h.dim())
    throw std::invalid_argument("loss rate count does not match Hamiltonian dimension");
  HamiltonianMatrix out = h;
  bool lossy = false;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (rates[i] < 0.0) throw std::invalid_argument("loss rate must be non-negative");
    const auto d = static_cast<Eigen::Index>(i);
    out.entries(d, d) -= cplx(0.0, rates[i]);
    lossy = lossy || rates[i] > 0.0;
  }
  out.hermitian = !lossy;
  return out;
}

HamiltonianMatrix apply_loss(const HamiltonianMatrix& h, const ChainSpec& spec,
                             const LossModel& loss) {
  const auto rates = loss.site_rates(spec);
  return apply_loss(h, rates);
}

}  // namespace topopump
