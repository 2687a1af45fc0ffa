#include "maptest/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maptest/error.hpp"

namespace maptest {

Grid::Grid(double a, double b, std::size_t n, NodeRule rule) : a_(a), b_(b), n_(n), rule_(rule) {
  if (n < 2) fail(ErrorCode::invalid_argument, "grid needs at least 2 nodes, got " + std::to_string(n));
  if (!(b > a)) fail(ErrorCode::invalid_argument, "grid interval must satisfy a < b");
  h_ = rule == NodeRule::periodic ? (b - a) / static_cast<double>(n) : (b - a) / static_cast<double>(n + 1);
}

double Grid::node(std::size_t j) const {
  const double idx = rule_ == NodeRule::periodic ? static_cast<double>(j) : static_cast<double>(j + 1);
  return a_ + idx * h_;
}

std::vector<double> Grid::nodes() const {
  std::vector<double> x(n_);
  for (std::size_t j = 0; j < n_; ++j) x[j] = node(j);
  return x;
}

GridFunction::GridFunction(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

GridFunction::GridFunction(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    fail(ErrorCode::dimension_mismatch, "expected N=" + std::to_string(grid_.size()) +
                                            ", got " + std::to_string(values_.size()));
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  require_same_grid(grid_, other.grid_, "operator+=");
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  require_same_grid(grid_, other.grid_, "operator-=");
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

GridFunction& GridFunction::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

GridFunction operator+(GridFunction lhs, const GridFunction& rhs) { return lhs += rhs; }
GridFunction operator-(GridFunction lhs, const GridFunction& rhs) { return lhs -= rhs; }
GridFunction operator*(double s, GridFunction f) { return f *= s; }

double inner(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f.grid(), g.grid(), "inner");
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * g[j];
  return f.grid().spacing() * s;
}

double norm(const GridFunction& f) { return std::sqrt(f.grid().spacing()) * euclidean_norm(f.values()); }

double euclidean_norm(std::span<const double> v) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double x : v) {
    const double r = x / scale;
    s += r * r;
  }
  return scale * std::sqrt(s);
}

void require_same_grid(const Grid& expected, const Grid& actual, const char* what) {
  if (expected.size() != actual.size())
    fail(ErrorCode::dimension_mismatch, std::string(what) + ": expected N=" + std::to_string(expected.size()) +
                                            ", got N=" + std::to_string(actual.size()));
  if (!(expected == actual)) fail(ErrorCode::dimension_mismatch, std::string(what) + ": grids differ");
}

}  // namespace maptest
