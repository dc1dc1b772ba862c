#include "th/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "th/quadrature.hpp"

namespace th {

CharMatrixContext::CharMatrixContext(const ModelSpec& s, int k_, ParameterPoint a)
    : spec(&s), k(k_), mu_k(s.mu(k_)), alpha(a), D(s.D_at(a)), A(s.A_at(a))
{
}

CMat char_matrix(const CharMatrixContext& c, cd lambda)
{
    const ModelSpec& s = *c.spec;
    CMat M = lambda * CMat::Identity(s.m, s.m) + c.mu_k * c.D.cast<cd>();
    for (int j = 0; j < s.nlags(); ++j) M -= std::exp(-lambda * s.lags[j]) * c.A[j].cast<cd>();
    return M;
}

CMat char_matrix_dlambda(const CharMatrixContext& c, cd lambda)
{
    const ModelSpec& s = *c.spec;
    CMat M = CMat::Identity(s.m, s.m);
    for (int j = 0; j < s.nlags(); ++j) {
        if (s.lags[j] == 0.0) continue;
        M += s.lags[j] * std::exp(-lambda * s.lags[j]) * c.A[j].cast<cd>();
    }
    return M;
}

CMat char_matrix_dalpha(const CharMatrixContext& c, cd lambda, int i)
{
    const ModelSpec& s = *c.spec;
    CMat M = c.mu_k * s.dD[i].cast<cd>();
    for (int j = 0; j < s.nlags(); ++j) M -= std::exp(-lambda * s.lags[j]) * s.dA[i][j].cast<cd>();
    return M;
}

cd det_directional(const CMat& M, const CMat& dM)
{
    const int n = static_cast<int>(M.rows());
    if (n == 1) return dM(0, 0);
    if (n == 2) return dM(0, 0) * M(1, 1) + M(0, 0) * dM(1, 1) - dM(0, 1) * M(1, 0) - M(0, 1) * dM(1, 0);
    cd s = 0;
    for (int r = 0; r < n; ++r) {
        CMat T = M;
        T.row(r) = dM.row(r);
        s += T.partialPivLu().determinant();
    }
    return s;
}

namespace {

cd det_of(const CMat& M)
{
    if (M.rows() == 1) return M(0, 0);
    if (M.rows() == 2) return M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    return M.partialPivLu().determinant();
}

} // namespace

std::pair<cd, cd> det_and_derivative(const CharMatrixContext& c, cd lambda)
{
    CMat M = char_matrix(c, lambda);
    return {det_of(M), det_directional(M, char_matrix_dlambda(c, lambda))};
}

cd det_dalpha(const CharMatrixContext& c, cd lambda, int i)
{
    return det_directional(char_matrix(c, lambda), char_matrix_dalpha(c, lambda, i));
}

double det_scale(const CharMatrixContext& c, cd lambda)
{
    CMat M = char_matrix(c, lambda);
    double h = 1;
    for (int r = 0; r < M.rows(); ++r) h *= M.row(r).norm();
    return std::max(1.0, h);
}

bool newton_root(const CharMatrixContext& c, cd& z, const RootOptions& o)
{
    for (int it = 0; it < o.max_newton; ++it) {
        auto [d, dp] = det_and_derivative(c, z);
        double sc = det_scale(c, z);
        if (std::abs(d) <= o.tol * sc) return true;
        if (dp == 0.0 || !std::isfinite(std::abs(dp))) return false;
        cd step = d / dp;
        z -= step;
        if (!std::isfinite(std::abs(z))) return false;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) {
            auto [d2, dp2] = det_and_derivative(c, z);
            (void)dp2;
            return std::abs(d2) <= 1e3 * o.tol * det_scale(c, z);
        }
    }
    return false;
}

namespace {

struct Finder {
    const CharMatrixContext& c;
    const RootOptions& o;
    std::vector<SpectralRoot> out;

    cd logderiv(cd z) const
    {
        auto [d, dp] = det_and_derivative(c, z);
        return dp / d;
    }

    double segment_clearance(cd a, cd b) const
    {
        double m = std::numeric_limits<double>::infinity();
        const int n = 96;
        for (int i = 0; i <= n; ++i) {
            cd z = a + (b - a) * (double(i) / n);
            m = std::min(m, std::abs(det_of(char_matrix(c, z))) / det_scale(c, z));
        }
        return m;
    }

    bool clear(const Box& b) const
    {
        cd z00(b.re0, b.im0), z10(b.re1, b.im0), z11(b.re1, b.im1), z01(b.re0, b.im1);
        return segment_clearance(z00, z10) > o.boundary_guard && segment_clearance(z10, z11) > o.boundary_guard &&
               segment_clearance(z11, z01) > o.boundary_guard && segment_clearance(z01, z00) > o.boundary_guard;
    }

    // (1/2 pi i) \oint w(z) det'/det dz
    cd contour(const Box& b, bool weighted, bool& ok) const
    {
        cd z[5] = {{b.re0, b.im0}, {b.re1, b.im0}, {b.re1, b.im1}, {b.re0, b.im1}, {b.re0, b.im0}};
        auto f = [&](cd w) { return weighted ? w * logderiv(w) : logderiv(w); };
        cd s = 0;
        ok = true;
        for (int e = 0; e < 4; ++e) {
            bool eok = true;
            s += quad::gk15_segment(f, z[e], z[e + 1], 1e-10, 1e-10, 40, &eok);
            ok = ok && eok;
        }
        return s / (2.0 * std::numbers::pi * I_);
    }

    int winding(const Box& b) const
    {
        bool ok = true;
        cd w = contour(b, false, ok);
        long n = std::lround(w.real());
        if (!ok || std::abs(w - double(n)) > 0.05 || n < 0) {
            std::ostringstream os;
            os << "winding integral " << w << " not integral on box [" << b.re0 << "," << b.re1 << "]x[" << b.im0
               << "," << b.im1 << "]";
            fail("spectral", "BoundaryRoot", os.str());
        }
        return static_cast<int>(n);
    }

    bool inside(const Box& b, cd z) const
    {
        double sl = 1e-9 * std::max({1.0, b.re1 - b.re0, b.im1 - b.im0});
        return z.real() >= b.re0 - sl && z.real() <= b.re1 + sl && z.imag() >= b.im0 - sl && z.imag() <= b.im1 + sl;
    }

    void accept(cd z, bool force_nonsimple = false)
    {
        auto [d, dp] = det_and_derivative(c, z);
        double sc = det_scale(c, z);
        SpectralRoot r;
        r.k = c.k;
        r.lambda = z;
        r.residual = std::abs(d);
        r.multiplicity_evidence = dp;
        r.simple = !force_nonsimple && std::abs(dp) / sc > o.simplicity;
        out.push_back(r);
    }

    void split(const Box& b, int n, int depth)
    {
        static const double fr[] = {0.5317, 0.4581, 0.5713, 0.4129, 0.6237, 0.3791};
        bool horiz = (b.re1 - b.re0) >= (b.im1 - b.im0);
        for (double f : fr) {
            Box l = b, r = b;
            cd a, e;
            if (horiz) {
                double x = b.re0 + f * (b.re1 - b.re0);
                l.re1 = r.re0 = x;
                a = {x, b.im0};
                e = {x, b.im1};
            } else {
                double y = b.im0 + f * (b.im1 - b.im0);
                l.im1 = r.im0 = y;
                a = {b.re0, y};
                e = {b.re1, y};
            }
            if (segment_clearance(a, e) <= o.boundary_guard) continue;
            int nl, nr;
            try {
                nl = winding(l);
                nr = winding(r);
            } catch (const Error&) {
                continue;
            }
            if (nl + nr != n) continue;
            search(l, nl, depth + 1);
            search(r, nr, depth + 1);
            return;
        }
        fail("spectral", "NonConvergence", "no admissible split line");
    }

    void search(const Box& b, int n, int depth)
    {
        if (n == 0) return;
        if (n > 1 && depth < o.max_depth) return split(b, n, depth);
        bool ok = true;
        cd z = contour(b, true, ok) / double(n);
        if (n == 1) {
            cd w = z;
            if (ok && newton_root(c, w, o) && inside(b, w)) {
                accept(w);
                return;
            }
            if (depth < o.max_depth) return split(b, n, depth);
            fail("spectral", "NonConvergence", "Newton failed at maximum subdivision depth");
        }
        cd w = z;
        if (newton_root(c, w, o) && inside(b, w)) {
            accept(w, true);
            return;
        }
        fail("spectral", "NonConvergence", "clustered roots unresolved at maximum depth");
    }
};

} // namespace

int winding_number(const CharMatrixContext& c, const Box& b, const RootOptions& o)
{
    Finder f{c, o, {}};
    return f.winding(b);
}

std::vector<SpectralRoot> find_roots_in_box(const CharMatrixContext& c, std::pair<double, double> re,
                                            std::pair<double, double> im, const RootOptions& o)
{
    Finder f{c, o, {}};
    Box b{re.first, re.second, im.first, im.second};
    int tries = 0;
    while (!f.clear(b)) {
        if (++tries > o.max_dilations) fail("spectral", "BoundaryRoot", "root on box boundary after dilation");
        double dr = 0.01 * (b.re1 - b.re0), di = 0.01 * (b.im1 - b.im0);
        b = {b.re0 - dr, b.re1 + dr, b.im0 - di, b.im1 + di};
    }
    int n = f.winding(b);
    f.search(b, n, 0);

    auto& v = f.out;
    // conjugate symmetry for real-coefficient models
    for (auto& r : v) {
        if (std::abs(r.lambda.imag()) < 1e-9 * std::max(1.0, std::abs(r.lambda))) {
            cd w(r.lambda.real(), 0.0);
            if (newton_root(c, w, o) && std::abs(w.imag()) < 1e-12) r.lambda = w;
        }
    }
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j)
            if (i != j && v[i].lambda.imag() > 0 &&
                std::abs(v[j].lambda - std::conj(v[i].lambda)) < 1e-8 * std::max(1.0, std::abs(v[i].lambda)))
                v[j].lambda = std::conj(v[i].lambda);
    std::sort(v.begin(), v.end(), [](const SpectralRoot& a, const SpectralRoot& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() > b.lambda.real();
        return a.lambda.imag() > b.lambda.imag();
    });
    return v;
}

double rightmost_real_part(const CharMatrixContext& c, double bound, const RootOptions& o)
{
    auto roots = find_roots_in_box(c, {-bound, bound}, {-bound, bound}, o);
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& r : roots) m = std::max(m, r.lambda.real());
    return m;
}

std::vector<DispersionRow> dispersion_scan(const ModelSpec& spec, ParameterPoint alpha, int k_max, double bound,
                                           const RootOptions& o)
{
    std::vector<DispersionRow> rows;
    for (int k = 0; k <= k_max; ++k) {
        CharMatrixContext c(spec, k, alpha);
        DispersionRow row;
        row.k = k;
        row.mu = c.mu_k;
        std::vector<SpectralRoot> roots;
        // a root on the box edge only blocks this box; nudge the edges outwards and retry
        for (int attempt = 0;; ++attempt) {
            const double b = bound * (1 + 0.0713 * attempt);
            try {
                roots = find_roots_in_box(c, {-b, b}, {-b, b}, o);
                break;
            } catch (const Error& e) {
                if (e.kind() != "BoundaryRoot" || attempt == 4) throw;
            }
        }
        if (!roots.empty()) {
            row.found = true;
            row.lambda = roots.front().lambda;
            row.residual = roots.front().residual;
        }
        rows.push_back(row);
    }
    return rows;
}

std::string dispersion_csv(const std::vector<DispersionRow>& rows)
{
    std::ostringstream os;
    os.precision(17);
    os << "k,mu_k,re_lambda,im_lambda,residual\n";
    for (const auto& r : rows) {
        os << r.k << "," << r.mu << ",";
        if (r.found)
            os << r.lambda.real() << "," << r.lambda.imag() << "," << r.residual << "\n";
        else
            os << "-inf,nan,nan\n";
    }
    return os.str();
}

} // namespace th
