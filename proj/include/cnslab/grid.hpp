#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace cnslab {

// Uniform cell-centered radial grid on [r_min, r_max].
struct RadialGrid {
    double r_min = 0.0;
    double r_max = 1.0;
    int cells = 100;

    double spacing() const { return (r_max - r_min) / cells; }
    double center(int i) const { return r_min + (i + 0.5) * spacing(); }
    double face(int i) const { return r_min + i * spacing(); }  // i in [0, cells]

    // integral of r^{n-1} dr over cell i (solid angle factor not included)
    double cell_volume(int i, int n) const {
        double a = face(i), b = face(i + 1);
        return (std::pow(b, n) - std::pow(a, n)) / n;
    }

    bool same_as(const RadialGrid& other) const {
        return r_min == other.r_min && r_max == other.r_max && cells == other.cells;
    }
};

// |S^{n-1}|: length/area of the unit circle/sphere
inline double sphere_area(int n) {
    return n == 2 ? 2.0 * M_PI : 4.0 * M_PI;
}

// Cell-centered fields (rho, u_radial) at time t.
struct State {
    std::vector<double> rho;
    std::vector<double> u;
    double t = 0.0;

    int cells() const { return static_cast<int>(rho.size()); }
};

// midpoint-rule integral sum f_i * V_i (no solid angle)
inline double cell_integral(const std::vector<double>& f, const RadialGrid& grid, int n) {
    double sum = 0.0;
    for (int i = 0; i < grid.cells; ++i) sum += f[i] * grid.cell_volume(i, n);
    return sum;
}

// full n-dimensional integral of a radial field
inline double volume_integral(const std::vector<double>& f, const RadialGrid& grid, int n) {
    return sphere_area(n) * cell_integral(f, grid, n);
}

}  // namespace cnslab
