#include "nlheat/field.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "nlheat/error.hpp"

namespace nlheat {

double ExteriorRule::at(const Point& x, int dim) const {
  double v = value;
  for (int k = 0; k < dim; ++k) v += gradient[k] * x[k];
  return v;
}

double ExteriorRule::sup_abs() const {
  require(is_bounded(), ErrorCode::InvalidParameter,
          "exterior rule with nonzero gradient has no finite supremum");
  return std::abs(value);
}

SpaceTimeField::SpaceTimeField(std::shared_ptr<const Grid> grid, TimeGrid time)
    : grid_(std::move(grid)), time_(time) {
  require(grid_ != nullptr, ErrorCode::InvalidParameter, "field needs a grid");
  values_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid_->num_nodes()),
                                  static_cast<Eigen::Index>(time_.size()));
  exterior_.assign(time_.size(), ExteriorRule::zero());
}

void SpaceTimeField::set_exterior_all(ExteriorRule rule) {
  std::fill(exterior_.begin(), exterior_.end(), rule);
}

bool SpaceTimeField::vanishes_outside() const {
  for (const auto& r : exterior_)
    if (!r.is_zero()) return false;
  return grid_->num_collar() == 0 ||
         values_.bottomRows(static_cast<Eigen::Index>(grid_->num_collar())).isZero(0.0);
}

bool SpaceTimeField::all_finite() const { return values_.allFinite(); }

bool SpaceTimeField::compatible(const SpaceTimeField& other) const {
  return grid_->same_as(*other.grid_) && time_.same_as(other.time_);
}

SpaceTimeField sample_field(std::shared_ptr<const Grid> grid, const TimeGrid& time,
                            const SpaceTimeFunction& u,
                            const std::function<ExteriorRule(double)>& far) {
  SpaceTimeField field(grid, time);
  for (std::size_t m = 0; m < time.size(); ++m) {
    const double t = time.time(m);
    for (std::size_t j = 0; j < grid->num_nodes(); ++j) field(j, m) = u(grid->point(j), t);
    if (far) field.set_exterior(m, far(t));
  }
  return field;
}

void write_field_csv(const SpaceTimeField& field, std::ostream& out, bool interior_only) {
  const Grid& g = field.grid();
  out << (g.dim() == 1 ? "x,t,value\n" : "x,y,t,value\n");
  out.precision(17);
  const std::size_t nodes = interior_only ? g.num_interior() : g.num_nodes();
  for (std::size_t m = 0; m < field.time().size(); ++m) {
    const double t = field.time().time(m);
    for (std::size_t j = 0; j < nodes; ++j) {
      const Point& p = g.point(j);
      out << p[0] << ',';
      if (g.dim() == 2) out << p[1] << ',';
      out << t << ',' << field(j, m) << '\n';
    }
  }
}

namespace {

template <class T>
void put(std::ostream& out, T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
  } else {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
}

template <class T>
T get(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T));
  require(static_cast<bool>(in), ErrorCode::IoError, "truncated field dump");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

}  // namespace

void write_field_binary(const SpaceTimeField& field, std::ostream& out) {
  const Grid& g = field.grid();
  out.write("NLHF", 4);
  put<std::uint32_t>(out, 1);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
  put<std::uint64_t>(out, g.num_nodes());
  put<std::uint64_t>(out, field.time().size());
  for (std::size_t m = 0; m < field.time().size(); ++m) put<double>(out, field.time().time(m));
  for (std::size_t j = 0; j < g.num_nodes(); ++j)
    for (int k = 0; k < g.dim(); ++k) put<double>(out, g.point(j)[k]);
  for (std::size_t m = 0; m < field.time().size(); ++m)
    for (std::size_t j = 0; j < g.num_nodes(); ++j) put<double>(out, field(j, m));
}

FieldDump read_field_binary(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  require(static_cast<bool>(in) && std::memcmp(magic, "NLHF", 4) == 0, ErrorCode::IoError,
          "not a field dump");
  const auto version = get<std::uint32_t>(in);
  require(version == 1, ErrorCode::IoError, "unsupported field dump version");
  FieldDump d;
  d.dim = static_cast<int>(get<std::uint32_t>(in));
  require(d.dim == 1 || d.dim == 2, ErrorCode::IoError, "bad dimension in field dump");
  const auto nodes = get<std::uint64_t>(in);
  const auto times = get<std::uint64_t>(in);
  d.times.resize(times);
  for (auto& t : d.times) t = get<double>(in);
  d.coords.resize(nodes, Point{0.0, 0.0});
  for (auto& p : d.coords)
    for (int k = 0; k < d.dim; ++k) p[k] = get<double>(in);
  d.values.resize(nodes * times);
  for (auto& v : d.values) v = get<double>(in);
  return d;
}

}  // namespace nlheat
