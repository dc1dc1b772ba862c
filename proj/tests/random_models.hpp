#pragma once

#include <optional>
#include <random>

#include "th/normalform.hpp"

namespace thtest {

using namespace th;

struct CriticalModel {
    ModelSpec spec;
    int k1 = 0, k2 = 0;
    double omega = 0;
};

// Two species, lags {0, 1}, l = 1.  D0, A1 = s B, omega and the Hopf vector are drawn at random;
// A0 is then fixed by Delta_k2(i omega) v2 = 0 and s by det Delta_k1(0) = 0 (a quadratic in s).
inline std::optional<CriticalModel> random_critical_model(std::mt19937_64& g, int k1, int k2, bool nonlinear = true)
{
    std::uniform_real_distribution<double> u(-1, 1), pos(0.2, 2), om(0.5, 2), im(0.3, 1.5);
    const double mu1 = double(k1) * k1, mu2 = double(k2) * k2;
    RMat D0 = RMat::Zero(2, 2);
    D0(0, 0) = pos(g);
    D0(1, 1) = pos(g);
    RMat B(2, 2);
    for (int i = 0; i < 4; ++i) B(i / 2, i % 2) = u(g);
    const double w = om(g);
    CVec v2(2);
    v2 << 1.0, cd(u(g), (u(g) > 0 ? 1 : -1) * im(g));
    Eigen::Matrix2d V;
    V << v2[0].real(), v2[0].imag(), v2[1].real(), v2[1].imag();
    if (std::abs(V.determinant()) < 0.2) return std::nullopt;
    const cd e = std::exp(cd(0, -w));
    // A0 v2 = (i w + mu2 D0 - s B e^{-i w}) v2 = w0 + s w1
    CVec w0 = (cd(0, w) * CMat::Identity(2, 2) + mu2 * D0.cast<cd>()) * v2;
    CVec w1 = -(B.cast<cd>() * e) * v2;
    auto real_solve = [&](const CVec& x) {
        Eigen::Matrix2d W;
        W << x[0].real(), x[0].imag(), x[1].real(), x[1].imag();
        return RMat(W * V.inverse());
    };
    RMat P = real_solve(w0), R = real_solve(w1);
    // det(X - s Y) = 0
    RMat X = mu1 * D0 - P, Y = R + B;
    double a = Y.determinant();
    double b = -(X(0, 0) * Y(1, 1) + X(1, 1) * Y(0, 0) - X(0, 1) * Y(1, 0) - X(1, 0) * Y(0, 1));
    double c = X.determinant();
    double s;
    if (std::abs(a) < 1e-9) {
        if (std::abs(b) < 1e-9) return std::nullopt;
        s = -c / b;
    } else {
        double disc = b * b - 4 * a * c;
        if (disc < 0) return std::nullopt;
        double r1 = (-b + std::sqrt(disc)) / (2 * a), r2 = (-b - std::sqrt(disc)) / (2 * a);
        s = std::abs(r1) < std::abs(r2) ? r1 : r2;
    }
    if (!(std::abs(s) > 0.05 && std::abs(s) < 5)) return std::nullopt;

    CriticalModel cm;
    cm.k1 = k1;
    cm.k2 = k2;
    cm.omega = w;
    ModelSpec& m = cm.spec;
    m.name = "random";
    m.m = 2;
    m.l = 1;
    m.lags = {0.0, 1.0};
    m.D0 = D0;
    m.A = {P + s * R, s * B};
    for (int i = 0; i < 2; ++i) {
        RMat dd = RMat::Zero(2, 2);
        dd(0, 0) = 0.1 * u(g);
        dd(1, 1) = 0.1 * u(g);
        m.dD[i] = dd;
        m.dA[i] = {RMat::Zero(2, 2), RMat::Zero(2, 2)};
        for (int j = 0; j < 2; ++j)
            for (int q = 0; q < 4; ++q) m.dA[i][j](q / 2, q % 2) = u(g);
    }
    QuadTensor qt(2, 2);
    CubicTensor ct(2, 2);
    if (nonlinear) {
        for (int o = 0; o < 2; ++o)
            for (int x = 0; x < 4; ++x)
                for (int y = x; y < 4; ++y) {
                    qt.add_symmetric(o, x, y, u(g));
                    for (int z = y; z < 4; ++z) ct.add_symmetric(o, x, y, z, u(g));
                }
    }
    m.Q = quadratic_form(std::move(qt));
    m.C = cubic_form(std::move(ct));
    return cm;
}

// (k1, k2) pairs representative of the five cases; case 5 alternates between
// non-resonant and both resonant pairs.
inline std::pair<int, int> case_modes(int case_id, int i)
{
    switch (case_id) {
    case 1:
        return {0, 0};
    case 2:
        return {1 + i % 2, 1 + i % 2};
    case 3:
        return {1 + i % 2, 0};
    case 4:
        return {0, 1 + i % 2};
    default: {
        static const std::pair<int, int> p[] = {{1, 3}, {1, 2}, {2, 1}, {3, 2}};
        return p[i % 4];
    }
    }
}

inline CriticalModel draw(std::mt19937_64& g, int case_id, int i, bool nonlinear = true)
{
    auto [k1, k2] = case_modes(case_id, i);
    for (;;)
        if (auto cm = random_critical_model(g, k1, k2, nonlinear)) return *cm;
}

} // namespace thtest
