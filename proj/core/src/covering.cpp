#include "nlheat/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <utility>

#include "nlheat/error.hpp"
#include "nlheat/kernel.hpp"
#include "nlheat/parallel.hpp"

namespace nlheat {

double parabolic_distance(const Point& x, double t, const Point& y, double tau, int dim,
                          double sigma, double s) {
  if (tau >= t) return std::numeric_limits<double>::infinity();
  return std::max(distance(x, y, dim), std::pow((t - tau) / sigma, 1.0 / (2.0 * s)));
}

CoveringHost::CoveringHost(int dim, double h, double dt, double r, double sigma, double s,
                           std::vector<LatticeIndex> space_index, std::vector<Point> space,
                           std::vector<std::int64_t> time_index, std::vector<double> times)
    : dim_(dim), h_(h), dt_(dt), r_(r), sigma_(sigma), s_(s),
      sidx_(std::move(space_index)), space_(std::move(space)), tidx_(std::move(time_index)),
      times_(std::move(times)) {
  require(dim == 1 || dim == 2, ErrorCode::InvalidParameter, "dimension must be 1 or 2");
  require(h > 0.0 && dt > 0.0 && r > 0.0 && sigma > 0.0 && s > 0.0 && s < 1.0,
          ErrorCode::InvalidParameter, "covering host parameters out of range");
  require(sidx_.size() == space_.size() && tidx_.size() == times_.size(), ErrorCode::InvalidParameter,
          "covering host index/coordinate mismatch");
  require(!space_.empty() && !times_.empty(), ErrorCode::EmptyCylinder, "covering host has no members");
  cell_ = std::pow(h, dim) * dt;

  lo_ = hi_ = sidx_.front();
  for (const auto& idx : sidx_)
    for (int a = 0; a < dim; ++a) {
      lo_[a] = std::min(lo_[a], idx[a]);
      hi_[a] = std::max(hi_[a], idx[a]);
    }
  const std::size_t w0 = static_cast<std::size_t>(hi_[0] - lo_[0] + 1);
  const std::size_t w1 = dim == 2 ? static_cast<std::size_t>(hi_[1] - lo_[1] + 1) : 1;
  table_.assign(w0 * w1, -1);
  for (std::size_t p = 0; p < sidx_.size(); ++p) {
    const std::size_t k = static_cast<std::size_t>(sidx_[p][0] - lo_[0]) +
                          (dim == 2 ? static_cast<std::size_t>(sidx_[p][1] - lo_[1]) * w0 : 0);
    table_[k] = static_cast<std::int64_t>(p);
  }
  t_lo_ = *std::min_element(tidx_.begin(), tidx_.end());
  const std::int64_t t_hi = *std::max_element(tidx_.begin(), tidx_.end());
  time_table_.assign(static_cast<std::size_t>(t_hi - t_lo_ + 1), -1);
  for (std::size_t m = 0; m < tidx_.size(); ++m)
    time_table_[static_cast<std::size_t>(tidx_[m] - t_lo_)] = static_cast<std::int64_t>(m);
}

std::int64_t CoveringHost::lookup_space(const LatticeIndex& idx) const {
  for (int a = 0; a < dim_; ++a)
    if (idx[a] < lo_[a] || idx[a] > hi_[a]) return -1;
  const std::size_t w0 = static_cast<std::size_t>(hi_[0] - lo_[0] + 1);
  std::size_t k = static_cast<std::size_t>(idx[0] - lo_[0]);
  if (dim_ == 2) k += static_cast<std::size_t>(idx[1] - lo_[1]) * w0;
  return table_[k];
}

std::int64_t CoveringHost::lookup_time(std::int64_t m) const {
  if (m < t_lo_ || m >= t_lo_ + static_cast<std::int64_t>(time_table_.size())) return -1;
  return time_table_[static_cast<std::size_t>(m - t_lo_)];
}

std::shared_ptr<const CoveringHost> host_from_cylinder(const Grid& grid, const TimeGrid& time,
                                                       const Cylinder& cyl) {
  std::vector<LatticeIndex> sidx;
  std::vector<Point> pts;
  for (std::size_t j : cyl.member_nodes(grid)) {
    sidx.push_back(grid.index(j));
    pts.push_back(grid.point(j));
  }
  std::vector<std::int64_t> tidx;
  std::vector<double> ts;
  for (std::size_t m : cyl.member_steps(time)) {
    tidx.push_back(static_cast<std::int64_t>(m));
    ts.push_back(time.time(m));
  }
  require(!pts.empty() && !ts.empty(), ErrorCode::EmptyCylinder,
          "cylinder contains no lattice points at this resolution");
  return std::make_shared<const CoveringHost>(grid.dim(), grid.h(), time.dt(), cyl.r(), cyl.sigma(),
                                              cyl.s(), std::move(sidx), std::move(pts),
                                              std::move(tidx), std::move(ts));
}

std::shared_ptr<const CoveringHost> make_lattice_host(int dim, int nodes_across, int steps,
                                                      double r, double sigma, double s) {
  require(nodes_across >= 1 && steps >= 1, ErrorCode::InvalidParameter, "host needs at least one node and step");
  require(r > 0.0, ErrorCode::InvalidRadius, "host radius must be positive");
  const double h = 2.0 * r / nodes_across;
  const double length = sigma * std::pow(r, 2.0 * s);
  const double dt = length / steps;
  std::vector<LatticeIndex> sidx;
  std::vector<Point> pts;
  const int n1 = dim == 2 ? nodes_across : 1;
  for (int j = 0; j < n1; ++j)
    for (int i = 0; i < nodes_across; ++i) {
      Point x{-r + (i + 0.5) * h, dim == 2 ? -r + (j + 0.5) * h : 0.0};
      if (distance(x, Point{0.0, 0.0}, dim) < r) {
        sidx.push_back({i, dim == 2 ? j : 0});
        pts.push_back(x);
      }
    }
  std::vector<std::int64_t> tidx;
  std::vector<double> ts;
  for (int m = 0; m < steps; ++m) {
    tidx.push_back(m);
    ts.push_back(-length + (m + 1) * dt);
  }
  return std::make_shared<const CoveringHost>(dim, h, dt, r, sigma, s, std::move(sidx), std::move(pts),
                                              std::move(tidx), std::move(ts));
}

ParabolicPointSet::ParabolicPointSet(std::shared_ptr<const CoveringHost> host)
    : host_(std::move(host)) {
  require(host_ != nullptr, ErrorCode::InvalidParameter, "point set without host");
  mask_.assign(host_->size(), 0);
}

void ParabolicPointSet::fill(bool on) { std::fill(mask_.begin(), mask_.end(), on ? 1 : 0); }

std::size_t ParabolicPointSet::count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

bool ParabolicPointSet::subset_of(const ParabolicPointSet& other) const {
  require(host_ == other.host_, ErrorCode::IncompatibleFields, "point sets live on different hosts");
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (mask_[i] && !other.mask_[i]) return false;
  return true;
}

bool ParabolicPointSet::operator==(const ParabolicPointSet& other) const {
  return host_ == other.host_ && mask_ == other.mask_;
}

ParabolicPointSet random_set(std::shared_ptr<const CoveringHost> host, double density,
                             std::mt19937_64& rng) {
  require(density >= 0.0 && density <= 1.0, ErrorCode::InvalidParameter, "density must lie in [0,1]");
  ParabolicPointSet E(std::move(host));
  std::bernoulli_distribution coin(density);
  for (std::size_t i = 0; i < E.size(); ++i) E.set(i, coin(rng));
  return E;
}

std::vector<double> dilation_scales(double rho_max, std::size_t count) {
  require(rho_max > 0.0, ErrorCode::InvalidRadius, "rho_max must be positive");
  require(count >= 1, ErrorCode::InvalidParameter, "need at least one scale");
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = rho_max * std::pow(2.0, -static_cast<double>(k + 1) / 4.0);
  return out;
}

namespace {

// Visits members Y of the host whose cell (y, (tau - dt, tau]) has its midpoint in Q+_radius(X),
// i.e. dd(X, (y, tau - dt/2)) < radius. The centre's own step is included.
template <class Visit>
void for_each_in_plus_cylinder(const CoveringHost& host, std::size_t p, std::size_t m, double radius,
                               Visit&& visit) {
  const int n = host.dim();
  const int K = static_cast<int>(std::floor(radius / host.h())) + 1;
  const std::int64_t Mt =
      static_cast<std::int64_t>(std::floor(host.sigma() * std::pow(radius, 2.0 * host.s()) / host.dt())) + 1;
  const LatticeIndex c = host.space_index(p);
  const std::int64_t tc = host.time_index(m);
  const Point& x = host.point(p);
  const double t = host.time(m);
  for (std::int64_t dm = 0; dm <= Mt; ++dm) {
    const std::int64_t q = host.lookup_time(tc - dm);
    if (q < 0) continue;
    const double tau = host.time(static_cast<std::size_t>(q)) - 0.5 * host.dt();
    for (int d1 = (n == 2 ? -K : 0); d1 <= (n == 2 ? K : 0); ++d1)
      for (int d0 = -K; d0 <= K; ++d0) {
        const std::int64_t y = host.lookup_space({c[0] + d0, c[1] + d1});
        if (y < 0) continue;
        const std::size_t yp = static_cast<std::size_t>(y);
        if (parabolic_distance(x, t, host.point(yp), tau, n, host.sigma(), host.s()) < radius)
          visit(host.flat(yp, static_cast<std::size_t>(q)));
      }
  }
}

}  // namespace

ParabolicPointSet dilate_set(const ParabolicPointSet& E, double gamma, double rho_max,
                             std::size_t scales) {
  require(gamma > 0.0 && gamma < 1.0, ErrorCode::InvalidParameter, "gamma must lie in (0,1)");
  const CoveringHost& host = E.host();
  const auto rhos = dilation_scales(rho_max, scales);
  const int n = host.dim();
  const std::size_t total = host.size();

  std::vector<std::uint8_t> out(total, 0);
  std::mutex merge;
  parallel_for(total, [&](std::size_t b, std::size_t e) {
    std::vector<std::uint8_t> local(total, 0);
    for (std::size_t i = b; i < e; ++i) {
      const std::size_t p = i % host.num_space();
      const std::size_t m = i / host.num_space();
      for (double rho : rhos) {
        std::size_t hits = 0;
        for_each_in_plus_cylinder(host, p, m, 3.0 * rho, [&](std::size_t y) { hits += E.test(y); });
        const double lhs = static_cast<double>(hits) * host.cell_measure();
        const double rhs = gamma * ball_measure(n, rho) * host.sigma() * std::pow(rho, 2.0 * host.s());
        if (lhs > rhs)
          for_each_in_plus_cylinder(host, p, m, 3.0 * rho, [&](std::size_t y) { local[y] = 1; });
      }
    }
    std::lock_guard<std::mutex> lock(merge);
    for (std::size_t k = 0; k < total; ++k) out[k] |= local[k];
  });

  ParabolicPointSet D(E.host_ptr());
  for (std::size_t k = 0; k < total; ++k) D.set(k, out[k] != 0);
  return D;
}

CoveringReport covering_dichotomy(const ParabolicPointSet& E, double gamma, double rho_max,
                                  std::size_t scales) {
  const CoveringHost& host = E.host();
  const int n = host.dim();
  ParabolicPointSet dilated = dilate_set(E, gamma, rho_max, scales);
  const double growth = std::pow(2.0, -(n + 2.0 * host.s())) / gamma * E.measure();
  const double tolerance = (2.0 * n + 2.0) * host.cell_measure();
  CoveringReport rep{
      .gamma = gamma,
      .measure_set = E.measure(),
      .measure_dilated = dilated.measure(),
      .growth_threshold = growth,
      .tolerance = tolerance,
      .growth_branch = dilated.measure() >= growth - tolerance,
      .full_branch = dilated.full(),
      .scales = scales,
      .measure_convention = "lattice count on the left, analytic |B_rho|*sigma*rho^(2s) on the right",
      .dilated = std::move(dilated),
  };
  if (!rep.growth_branch && !rep.full_branch) {
    std::ostringstream msg;
    msg << "covering dichotomy fails: |E^rho_gamma|=" << rep.measure_dilated
        << " < " << rep.growth_threshold << " and the dilated set is not the host";
    fail(ErrorCode::DichotomyViolation, msg.str());
  }
  return rep;
}

std::string write_mask_rle(const ParabolicPointSet& set) {
  std::ostringstream os;
  os << "rle " << set.size() << '\n';
  std::size_t i = 0;
  bool first = true;
  while (i < set.size()) {
    const bool bit = set.test(i);
    std::size_t j = i;
    while (j < set.size() && set.test(j) == bit) ++j;
    os << (first ? "" : " ") << (j - i) << ':' << (bit ? 1 : 0);
    first = false;
    i = j;
  }
  os << '\n';
  return os.str();
}

ParabolicPointSet read_mask_rle(std::shared_ptr<const CoveringHost> host, const std::string& text) {
  ParabolicPointSet set(std::move(host));
  std::istringstream is(text);
  std::string tag;
  std::size_t length = 0;
  if (!(is >> tag >> length) || tag != "rle")
    fail(ErrorCode::IoError, "mask text must start with 'rle <length>'");
  require(length == set.size(), ErrorCode::IncompatibleFields,
          "mask length " + std::to_string(length) + " does not match host size " + std::to_string(set.size()));
  std::size_t pos = 0;
  std::string token;
  while (is >> token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos || colon + 2 != token.size() ||
        (token[colon + 1] != '0' && token[colon + 1] != '1'))
      fail(ErrorCode::IoError, "bad run token '" + token + "'");
    std::size_t run = 0;
    try {
      run = std::stoull(token.substr(0, colon));
    } catch (const std::exception&) {
      fail(ErrorCode::IoError, "bad run length in '" + token + "'");
    }
    require(pos + run <= length, ErrorCode::IoError, "runs exceed the declared length");
    const bool bit = token[colon + 1] == '1';
    for (std::size_t k = 0; k < run; ++k) set.set(pos++, bit);
  }
  require(pos == length, ErrorCode::IoError, "runs do not cover the declared length");
  return set;
}

}  // namespace nlheat
