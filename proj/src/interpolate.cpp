#include "cnslab/interpolate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cnslab/errors.hpp"

namespace cnslab {

RadialInterpolant::RadialInterpolant(std::vector<double> samples, const RadialGrid& grid,
                                     int order)
    : samples_(std::move(samples)), grid_(grid), order_(order) {
    if (order_ != 1 && order_ != 3) {
        throw Error(ErrorCode::config_error, "interpolation order must be 1 or 3");
    }
    if (static_cast<int>(samples_.size()) != grid_.cells) {
        throw Error(ErrorCode::grid_mismatch, "sample count does not match the grid");
    }
    if (grid_.cells < order_ + 1) {
        throw Error(ErrorCode::grid_mismatch, "grid too small for the requested order");
    }
}

int RadialInterpolant::stencil_start(double r) const {
    double span = grid_.r_max - grid_.r_min;
    double eps = 1e-9 * span;
    if (r < grid_.r_min - eps || r > grid_.r_max + eps) {
        std::ostringstream msg;
        msg << "sample point r = " << r << " outside source domain [" << grid_.r_min
            << ", " << grid_.r_max << "]";
        throw Error(ErrorCode::out_of_domain, msg.str());
    }
    double s = (r - grid_.center(0)) / grid_.spacing();
    int left = static_cast<int>(std::floor(s));
    int start = left - (order_ - 1) / 2;
    return std::clamp(start, 0, grid_.cells - (order_ + 1));
}

double RadialInterpolant::value(double r) const {
    int s = stencil_start(r);
    double result = 0.0;
    for (int k = 0; k <= order_; ++k) {
        double xk = grid_.center(s + k);
        double w = 1.0;
        for (int m = 0; m <= order_; ++m) {
            if (m == k) continue;
            double xm = grid_.center(s + m);
            w *= (r - xm) / (xk - xm);
        }
        result += w * samples_[s + k];
    }
    return result;
}

double RadialInterpolant::deriv(double r) const {
    int s = stencil_start(r);
    double result = 0.0;
    for (int k = 0; k <= order_; ++k) {
        double xk = grid_.center(s + k);
        double lk = 0.0;
        for (int m = 0; m <= order_; ++m) {
            if (m == k) continue;
            double term = 1.0 / (xk - grid_.center(s + m));
            for (int j = 0; j <= order_; ++j) {
                if (j == k || j == m) continue;
                double xj = grid_.center(s + j);
                term *= (r - xj) / (xk - xj);
            }
            lk += term;
        }
        result += lk * samples_[s + k];
    }
    return result;
}

double RadialInterpolant::deriv2(double r) const {
    int s = stencil_start(r);
    double result = 0.0;
    for (int k = 0; k <= order_; ++k) {
        double xk = grid_.center(s + k);
        double lk = 0.0;
        for (int m = 0; m <= order_; ++m) {
            if (m == k) continue;
            for (int p = 0; p <= order_; ++p) {
                if (p == k || p == m) continue;
                double term = 1.0 / ((xk - grid_.center(s + m)) * (xk - grid_.center(s + p)));
                for (int j = 0; j <= order_; ++j) {
                    if (j == k || j == m || j == p) continue;
                    double xj = grid_.center(s + j);
                    term *= (r - xj) / (xk - xj);
                }
                lk += term;
            }
        }
        result += lk * samples_[s + k];
    }
    return result;
}

}  // namespace cnslab
