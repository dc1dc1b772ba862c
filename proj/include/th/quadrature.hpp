#pragma once

#include <functional>
#include <vector>

#include "th/common.hpp"

namespace th::quad {

struct Rule {
    std::vector<double> x; // nodes on [-1, 1]
    std::vector<double> w;
};

// Gauss-Legendre by Newton on P_n, cached per n.
const Rule& gauss_legendre(int n);

double integrate(const std::function<double(double)>& f, double a, double b, int n = 64);
cd integrate(const std::function<cd(double)>& f, double a, double b, int n = 64);

// Adaptive Gauss-Kronrod 7-15 along a straight complex segment z(t) = z0 + t (z1 - z0), t in [0, 1].
// Returns the integral of f(z) dz.  `ok` is cleared if max depth was hit before tolerance.
cd gk15_segment(const std::function<cd(cd)>& f, cd z0, cd z1, double abs_tol, double rel_tol,
                int max_depth, bool* ok = nullptr);

} // namespace th::quad
