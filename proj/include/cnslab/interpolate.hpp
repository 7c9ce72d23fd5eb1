#pragma once

#include <vector>

#include "cnslab/grid.hpp"

namespace cnslab {

// Lagrange interpolation of cell-centered samples on a uniform radial grid.
// order 1 -> 2-point linear, order 3 -> 4-point cubic.  Queries that hit a
// node reproduce the sample bitwise.  Queries must lie inside
// [r_min - eps, r_max + eps]; beyond that OutOfDomain is thrown.
class RadialInterpolant {
  public:
    RadialInterpolant(std::vector<double> samples, const RadialGrid& grid, int order = 3);

    double value(double r) const;
    double deriv(double r) const;
    double deriv2(double r) const;

    const RadialGrid& grid() const { return grid_; }
    int order() const { return order_; }

  private:
    int stencil_start(double r) const;

    std::vector<double> samples_;
    RadialGrid grid_;
    int order_;
};

}  // namespace cnslab
