#pragma once

#include <stdexcept>
#include <vector>

namespace bayup {

// Uniform discretization of the parameter axis, endpoints included.
// All curves in an analysis live on one shared grid.
struct ParameterGrid {
  double lower;
  double upper;
  int num_points;

  ParameterGrid(double lo, double hi, int n) : lower(lo), upper(hi), num_points(n) {
    if (!(lo < hi)) throw std::invalid_argument("ParameterGrid: lower must be < upper");
    if (n < 2) throw std::invalid_argument("ParameterGrid: need at least 2 points");
  }

  double spacing() const { return (upper - lower) / (num_points - 1); }

  double point(int i) const { return lower + i * spacing(); }

  std::vector<double> points() const {
    std::vector<double> p(num_points);
    for (int i = 0; i < num_points; ++i) p[i] = point(i);
    return p;
  }

  bool same_as(const ParameterGrid& o) const {
    return lower == o.lower && upper == o.upper && num_points == o.num_points;
  }
};

inline void require_same_grid(const ParameterGrid& a, const ParameterGrid& b) {
  if (!a.same_as(b)) throw std::invalid_argument("grid mismatch between curves");
}

}  // namespace bayup
