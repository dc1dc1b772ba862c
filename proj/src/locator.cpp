#include "th/locator.hpp"

#include <cmath>
#include <sstream>

namespace th {

namespace {

struct Eval {
    Eigen::Vector3d F;
    Eigen::Matrix3d J;
    double r1 = 0, r2 = 0;  // scaled residuals
};

Eval evaluate(const ParametricModel& pm, int k1, int k2, const Eigen::Vector3d& x, const Eigen::Vector2d& sc)
{
    ModelSpec s = pm.at(x[0], x[1]);
    CharMatrixContext c1(s, k1), c2(s, k2);
    cd l2(0.0, x[2]);
    auto [d1, d1p] = det_and_derivative(c1, 0.0);
    (void)d1p;
    auto [d2, d2p] = det_and_derivative(c2, l2);
    Eval e;
    e.F << d1.real() / sc[0], d2.real() / sc[1], d2.imag() / sc[1];
    for (int i = 0; i < 2; ++i) {
        cd a = det_dalpha(c1, 0.0, i), b = det_dalpha(c2, l2, i);
        e.J(0, i) = a.real() / sc[0];
        e.J(1, i) = b.real() / sc[1];
        e.J(2, i) = b.imag() / sc[1];
    }
    cd dw = I_ * d2p;
    e.J(0, 2) = 0;
    e.J(1, 2) = dw.real() / sc[1];
    e.J(2, 2) = dw.imag() / sc[1];
    e.r1 = std::abs(d1) / det_scale(c1, 0.0);
    e.r2 = std::abs(d2) / det_scale(c2, l2);
    return e;
}

} // namespace

ModelSpec spec_at(const ParametricModel& pm, const CriticalPoint& cp)
{
    return pm.at(cp.alpha_star[0], cp.alpha_star[1]);
}

CriticalPoint locate(const ParametricModel& pm, int k1, int k2, std::array<double, 3> guess, const LocateOptions& o)
{
    Eigen::Vector3d x(guess[0], guess[1], guess[2]);
    Eigen::Vector2d sc;
    {
        ModelSpec s = pm.at(x[0], x[1]);
        sc << det_scale(CharMatrixContext(s, k1), 0.0), det_scale(CharMatrixContext(s, k2), cd(0, x[2]));
    }
    Eval e = evaluate(pm, k1, k2, x, sc);
    int it = 0, polish = 0;
    for (; it < o.max_iter; ++it) {
        if (!e.F.allFinite()) fail("locator", "NoConvergence", "non-finite residual");
        if (std::max(e.r1, e.r2) < o.tol && ++polish > 2) break;
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(e.J);
        auto sv = svd.singularValues();
        if (!(sv[2] > 0) || sv[0] / sv[2] > o.degenerate_cond) {
            std::ostringstream os;
            os << "Jacobian condition " << (sv[2] > 0 ? sv[0] / sv[2] : INFINITY) << " at iteration " << it;
            fail("locator", "DegenerateJacobian", os.str());
        }
        Eigen::Vector3d dx = -e.J.partialPivLu().solve(e.F);
        double f0 = e.F.norm();
        double t = 1;
        Eval en;
        Eigen::Vector3d xn;
        int h = 0;
        for (; h <= o.max_halvings; ++h, t *= 0.5) {
            xn = x + t * dx;
            en = evaluate(pm, k1, k2, xn, sc);
            if (en.F.allFinite() && en.F.norm() < f0) break;
            if (polish > 0 && en.F.allFinite() && en.F.norm() <= 1.0001 * f0) break;
        }
        if (h > o.max_halvings) {
            if (std::max(e.r1, e.r2) < o.tol) break;
            fail("locator", "NoConvergence", "damping exhausted");
        }
        x = xn;
        e = en;
    }
    if (!(std::max(e.r1, e.r2) < o.tol)) {
        std::ostringstream os;
        os << "residual " << std::max(e.r1, e.r2) << " after " << it << " iterations";
        fail("locator", "NoConvergence", os.str());
    }
    if (std::abs(x[2]) < 1e-5) fail("locator", "NoConvergence", "converged to omega = 0");
    if (x[2] < 0) x[2] = -x[2];  // the conjugate root; same point

    CriticalPoint cp;
    cp.model = pm.name;
    cp.param_names = pm.param_names;
    cp.alpha_star = {x[0], x[1]};
    cp.k1 = k1;
    cp.k2 = k2;
    cp.omega0 = x[2];
    cp.omega_physical = pm.physical_omega(x[0], x[1], x[2]);
    cp.iterations = it;

    ModelSpec s = spec_at(pm, cp);
    CharMatrixContext c1(s, k1), c2(s, k2);
    cd l2(0, cp.omega0);
    auto [d1, d1p] = det_and_derivative(c1, 0.0);
    auto [d2, d2p] = det_and_derivative(c2, l2);
    cp.residual_k1 = std::abs(d1);
    cp.residual_k2 = std::abs(d2);
    cp.hygiene.simplicity_k1 = std::abs(d1p) / det_scale(c1, 0.0);
    cp.hygiene.simplicity_k2 = std::abs(d2p) / det_scale(c2, l2);
    if (cp.hygiene.simplicity_k1 < o.roots.simplicity || cp.hygiene.simplicity_k2 < o.roots.simplicity)
        fail("locator", "SimplicityFailure", "critical root is not simple");

    transversality(pm, cp, o.roots.simplicity);
    for (double v : cp.transversality)
        if (!(std::abs(v) > 1e-8)) fail("locator", "SimplicityFailure", "transversality derivative vanishes");

    if (o.hygiene) {
        Hygiene& hy = cp.hygiene;
        hy.ran = true;
        hy.k_scan = o.k_scan;
        hy.re0 = o.hygiene_re0;
        hy.im_bound = o.hygiene_bound > 0 ? o.hygiene_bound : std::max(4.0, 1.5 * cp.omega0 + 1);
        hy.re1 = hy.im_bound;
        for (int k = 0; k <= o.k_scan; ++k) {
            CharMatrixContext c(s, k);
            auto roots = find_roots_in_box(c, {hy.re0, hy.re1}, {-hy.im_bound, hy.im_bound}, o.roots);
            for (const auto& r : roots) {
                ++hy.roots_found;
                double g = o.critical_gap * std::max(1.0, cp.omega0);
                bool crit = (k == k1 && std::abs(r.lambda) < g) ||
                            (k == k2 && (std::abs(r.lambda - l2) < g || std::abs(r.lambda + l2) < g));
                if (crit) continue;
                if (std::abs(r.lambda.real()) < o.critical_gap) {
                    std::ostringstream os;
                    os << "extra near-critical root " << r.lambda << " at k = " << k;
                    fail("locator", "HygieneFailure", os.str());
                }
                if (r.lambda.real() > hy.rightmost_other) {
                    hy.rightmost_other = r.lambda.real();
                    hy.rightmost_k = k;
                    hy.rightmost_lambda = r.lambda;
                }
            }
        }
    }
    return cp;
}

std::array<double, 2> transversality(const ParametricModel& pm, CriticalPoint& cp, double simplicity)
{
    ModelSpec s = spec_at(pm, cp);
    CharMatrixContext c1(s, cp.k1), c2(s, cp.k2);
    cd l2(0, cp.omega0);
    auto [d1, d1p] = det_and_derivative(c1, 0.0);
    auto [d2, d2p] = det_and_derivative(c2, l2);
    (void)d1;
    (void)d2;
    if (std::abs(d1p) / det_scale(c1, 0.0) < simplicity || std::abs(d2p) / det_scale(c2, l2) < simplicity)
        fail("locator", "SimplicityFailure", "d det / d lambda below threshold");
    for (int i = 0; i < 2; ++i) {
        cp.dlambda_k1[i] = -det_dalpha(c1, 0.0, i) / d1p;
        cp.dlambda_k2[i] = -det_dalpha(c2, l2, i) / d2p;
    }
    cp.transversality = {cp.dlambda_k1[1].real(), cp.dlambda_k2[0].real()};
    return cp.transversality;
}

} // namespace th
