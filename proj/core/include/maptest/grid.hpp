#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace maptest {

// periodic: nodes a + j*h, j = 0..N-1, h = (b-a)/N.
// interior: nodes a + j*h, j = 1..N, h = (b-a)/(N+1).
enum class NodeRule { periodic, interior };

class Grid {
public:
  Grid(double a, double b, std::size_t n, NodeRule rule);

  static Grid periodic(double a, double b, std::size_t n) { return Grid(a, b, n, NodeRule::periodic); }
  static Grid interior(double a, double b, std::size_t n) { return Grid(a, b, n, NodeRule::interior); }

  double a() const { return a_; }
  double b() const { return b_; }
  std::size_t size() const { return n_; }
  double spacing() const { return h_; }
  NodeRule rule() const { return rule_; }

  double node(std::size_t j) const;
  std::vector<double> nodes() const;

  bool operator==(const Grid& other) const = default;

private:
  double a_;
  double b_;
  std::size_t n_;
  NodeRule rule_;
  double h_;
};

class GridFunction {
public:
  explicit GridFunction(Grid grid);
  GridFunction(Grid grid, std::vector<double> values);

  static GridFunction zeros(const Grid& grid) { return GridFunction(grid); }
  template <class F>
  static GridFunction sample(const Grid& grid, F&& f) {
    GridFunction out(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) out.values_[j] = f(grid.node(j));
    return out;
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }
  double& operator[](std::size_t j) { return values_[j]; }

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double s);

private:
  Grid grid_;
  std::vector<double> values_;
};

GridFunction operator+(GridFunction lhs, const GridFunction& rhs);
GridFunction operator-(GridFunction lhs, const GridFunction& rhs);
GridFunction operator*(double s, GridFunction f);

// h * sum f_j g_j
double inner(const GridFunction& f, const GridFunction& g);
double norm(const GridFunction& f);

// Overflow-safe Euclidean norm of a coefficient vector.
double euclidean_norm(std::span<const double> v);

void require_same_grid(const Grid& expected, const Grid& actual, const char* what);

}  // namespace maptest
