#include "th/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace th::quad {

namespace {

Rule build_gl(int n)
{
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = x; p0 = 1; }
            dp = n * (x * p1 - p0) / (x * x - 1);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = r.w[n - 1 - i] = 2 / ((1 - x * x) * dp * dp);
    }
    return r;
}

// Kronrod 15-point nodes/weights, Gauss 7 embedded at odd indices.
constexpr double xk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                          0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                          0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                          0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                          0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                          0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                          0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk_once(const std::function<cd(cd)>& f, cd z0, cd z1, cd& kr, cd& err)
{
    cd c = 0.5 * (z0 + z1), h = 0.5 * (z1 - z0);
    cd fc = f(c);
    cd sk = wk[7] * fc, sg = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        cd a = f(c - h * xk[j]), b = f(c + h * xk[j]);
        sk += wk[j] * (a + b);
        if (j % 2 == 1) sg += wg[j / 2] * (a + b);
    }
    kr = sk * h;
    err = (sk - sg) * h;
}

cd gk_rec(const std::function<cd(cd)>& f, cd z0, cd z1, double tol, int depth, bool& ok)
{
    cd kr, err;
    gk_once(f, z0, z1, kr, err);
    if (std::abs(err) <= tol || !std::isfinite(std::abs(kr))) return kr;
    if (depth <= 0) {
        ok = false;
        return kr;
    }
    cd m = 0.5 * (z0 + z1);
    return gk_rec(f, z0, m, 0.5 * tol, depth - 1, ok) + gk_rec(f, m, z1, 0.5 * tol, depth - 1, ok);
}

} // namespace

const Rule& gauss_legendre(int n)
{
    static std::map<int, Rule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_gl(n)).first;
    return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b, int n)
{
    const Rule& r = gauss_legendre(n);
    double c = 0.5 * (a + b), h = 0.5 * (b - a), s = 0;
    for (int i = 0; i < n; ++i) s += r.w[i] * f(c + h * r.x[i]);
    return s * h;
}

cd integrate(const std::function<cd(double)>& f, double a, double b, int n)
{
    const Rule& r = gauss_legendre(n);
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cd s = 0;
    for (int i = 0; i < n; ++i) s += r.w[i] * f(c + h * r.x[i]);
    return s * h;
}

cd gk15_segment(const std::function<cd(cd)>& f, cd z0, cd z1, double abs_tol, double rel_tol,
                int max_depth, bool* ok)
{
    cd kr, err;
    gk_once(f, z0, z1, kr, err);
    double tol = std::max(abs_tol, rel_tol * std::abs(kr));
    bool good = true;
    cd v = gk_rec(f, z0, z1, tol, max_depth, good);
    if (ok) *ok = good;
    return v;
}

} // namespace th::quad
