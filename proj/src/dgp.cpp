#include "godds/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "godds/error.hpp"
#include "godds/rng.hpp"

namespace godds {
namespace {

void require_binary(int v, const char* what) {
  if (v != 0 && v != 1) throw InvalidArgument(std::string(what) + " must be 0 or 1");
}

bool open_unit(Real v, Real eps) { return v > eps && v < 1 - eps; }

// Inverse-CDF sampler over a finite set of weighted cells.
class CellSampler {
 public:
  explicit CellSampler(std::vector<double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    cumulative_.reserve(weights.size());
    double run = 0.0;
    for (double w : weights) {
      run += w / total;
      cumulative_.push_back(run);
    }
    cumulative_.back() = 1.0;
  }

  std::size_t pick(double u) const {
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                 cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

// Cell index layout shared by the samplers: (x * 2 + a) * 2 + y.
struct CellIndex {
  std::size_t x;
  int a;
  int y;
};

CellIndex decode(std::size_t cell) {
  return {cell / 4, static_cast<int>((cell / 2) % 2), static_cast<int>(cell % 2)};
}

Dataset assemble(const DiscreteDgp& dgp, const std::vector<CellIndex>& cells,
                 SamplingScheme scheme, std::optional<double> omega, std::uint64_t seed) {
  const std::size_t dim = dgp.feature_dim();
  std::vector<double> features;
  features.reserve(cells.size() * dim);
  std::vector<int> a;
  std::vector<int> y;
  a.reserve(cells.size());
  y.reserve(cells.size());
  for (const auto& c : cells) {
    const auto& f = dgp.stratum(c.x).features;
    features.insert(features.end(), f.begin(), f.end());
    a.push_back(c.a);
    y.push_back(c.y);
  }
  return Dataset(dim, std::move(features), std::move(a), std::move(y), scheme, omega, seed);
}

}  // namespace

DiscreteDgp::DiscreteDgp(std::vector<Stratum> strata, Real eps)
    : strata_(std::move(strata)), eps_(eps) {
  if (strata_.empty()) throw InvalidArgument("DiscreteDgp needs at least one stratum");
  if (!(eps_ > 0 && eps_ < 0.5L)) throw InvalidArgument("overlap eps must lie in (0, 0.5)");

  const bool assign_one_hot =
      std::all_of(strata_.begin(), strata_.end(), [](const Stratum& s) { return s.features.empty(); });
  Real total = 0;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < strata_.size(); ++i) {
    auto& s = strata_[i];
    if (s.label.empty()) s.label = "x" + std::to_string(i + 1);
    if (!labels.insert(s.label).second) throw InvalidArgument("duplicate stratum label: " + s.label);
    if (assign_one_hot) {
      s.features.assign(strata_.size(), 0.0);
      s.features[i] = 1.0;
    }
    if (!(s.p_x >= kMinStratumMass)) {
      throw InvalidArgument("stratum " + s.label + " has degenerate mass (below 1e-12)");
    }
    if (!open_unit(s.pi1, eps_)) throw InvalidArgument("stratum " + s.label + ": pi1 violates overlap");
    if (!open_unit(s.nu1, eps_) || !open_unit(s.nu0, eps_)) {
      throw InvalidArgument("stratum " + s.label + ": outcome risk outside (eps, 1-eps)");
    }
    total += s.p_x;
  }
  if (std::abs(total - 1) > 1e-12L) throw InvalidArgument("stratum masses must sum to 1");

  const std::size_t dim = strata_.front().features.size();
  if (dim == 0) throw InvalidArgument("stratum features must be non-empty");
  std::set<std::vector<double>> distinct;
  for (const auto& s : strata_) {
    if (s.features.size() != dim) throw InvalidArgument("strata have ragged feature vectors");
    for (double v : s.features) {
      if (!std::isfinite(v)) throw InvalidArgument("stratum " + s.label + " has a non-finite feature");
    }
    if (!distinct.insert(s.features).second) {
      throw InvalidArgument("stratum " + s.label + " repeats another stratum's feature vector");
    }
  }
}

Real DiscreteDgp::pi(int a, std::size_t x) const {
  require_binary(a, "a");
  return a == 1 ? strata_.at(x).pi1 : 1 - strata_.at(x).pi1;
}

Real DiscreteDgp::nu(int a, std::size_t x) const {
  require_binary(a, "a");
  return a == 1 ? strata_.at(x).nu1 : strata_.at(x).nu0;
}

Real DiscreteDgp::joint(std::size_t x, int a, int y) const {
  require_binary(y, "y");
  const Real risk = nu(a, x);
  return p_x(x) * pi(a, x) * (y == 1 ? risk : 1 - risk);
}

Real DiscreteDgp::outcome_rate() const {
  Real rho = 0;
  for (std::size_t x = 0; x < size(); ++x) rho += joint(x, 1, 1) + joint(x, 0, 1);
  return rho;
}

std::optional<std::size_t> DiscreteDgp::find(std::span<const double> features) const {
  for (std::size_t x = 0; x < strata_.size(); ++x) {
    const auto& f = strata_[x].features;
    if (f.size() == features.size() && std::equal(f.begin(), f.end(), features.begin())) return x;
  }
  return std::nullopt;
}

QLaw derive_q(const DiscreteDgp& dgp, Real omega, std::optional<Real> rho) {
  const Real rho_dgp = dgp.outcome_rate();
  if (!(rho_dgp > 0 && rho_dgp < 1)) throw InvalidArgument("P(Y=1) must lie strictly in (0, 1)");
  if (rho && std::abs(*rho - rho_dgp) > 1e-12L) {
    throw InvalidArgument("supplied rho disagrees with P(Y=1) of the population law");
  }
  if (!open_unit(omega, dgp.eps())) throw InvalidArgument("omega must lie in (eps, 1-eps)");

  QLaw q;
  q.strata_ = dgp.strata();
  q.omega_ = omega;
  q.rho_ = rho_dgp;
  q.eps_ = dgp.eps();
  const Real tilt1 = omega / rho_dgp;
  const Real tilt0 = (1 - omega) / (1 - rho_dgp);
  q.mass_.resize(dgp.size());
  for (std::size_t x = 0; x < dgp.size(); ++x) {
    for (int a = 0; a < 2; ++a) {
      q.mass_[x][a * 2 + 1] = dgp.joint(x, a, 1) * tilt1;
      q.mass_[x][a * 2 + 0] = dgp.joint(x, a, 0) * tilt0;
    }
  }
  return q;
}

Real QLaw::mass(std::size_t x, int a, int y) const {
  require_binary(a, "a");
  require_binary(y, "y");
  return mass_.at(x)[a * 2 + y];
}

Real QLaw::q_x(std::size_t x) const {
  const auto& m = mass_.at(x);
  return m[0] + m[1] + m[2] + m[3];
}

Real QLaw::q_y(int y) const {
  require_binary(y, "y");
  Real total = 0;
  for (const auto& m : mass_) total += m[y] + m[2 + y];
  return total;
}

Real QLaw::mu(int a, std::size_t x) const {
  const Real m1 = mass(x, a, 1);
  return m1 / (m1 + mass(x, a, 0));
}

Real QLaw::pi(int a, std::size_t x) const {
  return (mass(x, a, 0) + mass(x, a, 1)) / q_x(x);
}

Real QLaw::eta(std::size_t x) const { return eta_y(1, x); }

Real QLaw::eta_y(int y, std::size_t x) const {
  return (mass(x, 0, y) + mass(x, 1, y)) / q_x(x);
}

Real QLaw::x_given_y(std::size_t x, int y) const {
  return (mass(x, 0, y) + mass(x, 1, y)) / q_y(y);
}

Real QLaw::xa_given_y(std::size_t x, int a, int y) const { return mass(x, a, y) / q_y(y); }

std::optional<std::size_t> QLaw::find(std::span<const double> features) const {
  for (std::size_t x = 0; x < strata_.size(); ++x) {
    const auto& f = strata_[x].features;
    if (f.size() == features.size() && std::equal(f.begin(), f.end(), features.begin())) return x;
  }
  return std::nullopt;
}

std::string to_string(SamplingScheme scheme) {
  return scheme == SamplingScheme::RandomSampling ? "random" : "outcome_dependent";
}

Dataset::Dataset(std::size_t dim, std::vector<double> features, std::vector<int> a,
                 std::vector<int> y, SamplingScheme scheme, std::optional<double> omega_design,
                 std::uint64_t seed)
    : dim_(dim),
      features_(std::move(features)),
      a_(std::move(a)),
      y_(std::move(y)),
      scheme_(scheme),
      omega_design_(omega_design),
      seed_(seed) {
  if (a_.size() != y_.size() || features_.size() != a_.size() * dim_) {
    throw DataError("dataset columns have mismatched lengths");
  }
  for (std::size_t i = 0; i < a_.size(); ++i) {
    if ((a_[i] != 0 && a_[i] != 1) || (y_[i] != 0 && y_[i] != 1)) {
      throw DataError("row " + std::to_string(i + 1) + ": a and y must be binary");
    }
  }
  if (omega_design_ && !(*omega_design_ > 0.0 && *omega_design_ < 1.0)) {
    throw DataError("design omega must lie in (0, 1)");
  }
}

bool Dataset::same_rows(const Dataset& other) const {
  return dim_ == other.dim_ && features_ == other.features_ && a_ == other.a_ && y_ == other.y_;
}

Dataset draw_random(const DiscreteDgp& dgp, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("draw_random needs n >= 1");
  std::vector<double> weights;
  weights.reserve(dgp.size() * 4);
  for (std::size_t x = 0; x < dgp.size(); ++x) {
    for (int a = 0; a < 2; ++a) {
      for (int y = 0; y < 2; ++y) weights.push_back(static_cast<double>(dgp.joint(x, a, y)));
    }
  }
  const CellSampler sampler(std::move(weights));
  std::vector<CellIndex> cells(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng = row_stream(seed, i);
    cells[i] = decode(sampler.pick(rng.uniform()));
  }
  return assemble(dgp, cells, SamplingScheme::RandomSampling, std::nullopt, seed);
}

Dataset draw_outcome_dependent(const DiscreteDgp& dgp, std::size_t n, double omega,
                               std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("draw_outcome_dependent needs n >= 1");
  if (!(omega > 0.0 && omega < 1.0)) throw InvalidArgument("omega must lie in (0, 1)");
  const Real rho = dgp.outcome_rate();
  if (!(rho > 0 && rho < 1)) {
    throw InvalidArgument("population law has P(Y=y) = 0 for an outcome the design samples");
  }
  // Conditional samplers over (x, a) given y; cell index x * 2 + a.
  std::array<std::vector<double>, 2> weights;
  for (std::size_t x = 0; x < dgp.size(); ++x) {
    for (int a = 0; a < 2; ++a) {
      for (int y = 0; y < 2; ++y) weights[y].push_back(static_cast<double>(dgp.joint(x, a, y)));
    }
  }
  const CellSampler given0(std::move(weights[0]));
  const CellSampler given1(std::move(weights[1]));
  std::vector<CellIndex> cells(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng = row_stream(seed, i);
    const int y = rng.bernoulli(omega) ? 1 : 0;
    const std::size_t xa = (y == 1 ? given1 : given0).pick(rng.uniform());
    cells[i] = {xa / 2, static_cast<int>(xa % 2), y};
  }
  return assemble(dgp, cells, SamplingScheme::OutcomeDependent, omega, seed);
}

DiscreteDgp worked_example() {
  return DiscreteDgp({
      {"Female", {}, 0.5L, 0.5L, 1.0L / 6.0L, 9.0L / 10.0L},
      {"Male", {}, 0.5L, 0.5L, 1.0L / 26.0L, 9.0L / 14.0L},
  });
}

DiscreteDgp het3() {
  // nu0 = 0.2, 0.3, 0.4 with OR(x) = 0.5, 1, 3 gives nu1 = 1/9, 3/10, 2/3.
  return DiscreteDgp({
      {"x1", {}, 0.3L, 0.3L, 1.0L / 9.0L, 0.2L},
      {"x2", {}, 0.4L, 0.5L, 0.3L, 0.3L},
      {"x3", {}, 0.3L, 0.7L, 2.0L / 3.0L, 0.4L},
  });
}

DiscreteDgp random_dgp(std::uint64_t seed, std::size_t min_strata, std::size_t max_strata, Real lo,
                       Real hi) {
  if (min_strata < 1 || max_strata < min_strata) throw InvalidArgument("bad strata range");
  CounterRng rng(derive_seed(seed, 0x5eed));
  const std::size_t span = max_strata - min_strata + 1;
  const std::size_t k = min_strata + static_cast<std::size_t>(rng.uniform() * static_cast<double>(span));
  std::vector<Stratum> strata(k);
  Real total = 0;
  auto in_range = [&] { return lo + (hi - lo) * static_cast<Real>(rng.uniform()); };
  for (std::size_t i = 0; i < k; ++i) {
    strata[i].label = "s" + std::to_string(i);
    strata[i].p_x = 0.2L + 0.8L * static_cast<Real>(rng.uniform());
    strata[i].pi1 = in_range();
    strata[i].nu1 = in_range();
    strata[i].nu0 = in_range();
    total += strata[i].p_x;
  }
  Real assigned = 0;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    strata[i].p_x /= total;
    assigned += strata[i].p_x;
  }
  strata[k - 1].p_x = 1 - assigned;
  return DiscreteDgp(std::move(strata));
}

}  // namespace godds
