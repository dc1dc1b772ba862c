#include "th/amplitude.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace th {

namespace {

const double kPi = 3.14159265358979323846;

bool nz(double x, double tol) { return std::abs(x) > tol; }

std::array<cd, 2> eig2(const Eigen::Matrix2d& J)
{
    double tr = J.trace(), det = J.determinant();
    cd disc = std::sqrt(cd(tr * tr / 4 - det, 0.0));
    std::array<cd, 2> e{tr / 2 + disc, tr / 2 - disc};
    if (e[0].real() < e[1].real()) std::swap(e[0], e[1]);
    return e;
}

int positive(double x) { return x > 0 ? 1 : 0; }

std::vector<double> real_roots(std::vector<double> c)  // c[0] + c[1] z + ...
{
    double big = 0;
    for (double v : c) big = std::max(big, std::abs(v));
    while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * std::max(1.0, big)) c.pop_back();
    const int n = static_cast<int>(c.size()) - 1;
    std::vector<double> out;
    if (n < 1) return out;
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
    for (int i = 0; i < n; ++i) {
        cd z = es.eigenvalues()[i];
        if (std::abs(z.imag()) <= 1e-10 * std::max(1.0, std::abs(z))) out.push_back(z.real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

double wedge_angle(const Eigen::Vector2d& v)
{
    double a = std::atan2(v[1], v[0]);
    return a < 0 ? a + 2 * kPi : a;
}

std::vector<Eigen::Vector2d> case3_dirs(const AmplitudeSystem& s)
{
    return {Eigen::Vector2d(0, 1), Eigen::Vector2d(-1, 0), Eigen::Vector2d(-1, -s.c0),
            Eigen::Vector2d(0, -1), Eigen::Vector2d(1, s.d0 / s.b0), Eigen::Vector2d(1, 0)};
}

Eigen::Matrix2d inverse_map(const AmplitudeSystem& s)
{
    if (std::abs(s.eps_map.determinant()) <= 1e-12) fail("amplitude", "SingularEpsMap", "eps map not invertible");
    return s.eps_map.inverse();
}

std::string row_name(int which, int k1, int k2)
{
    switch (which) {
    case 0:
        return "homogeneous steady state";
    case 1:
        return k1 == 0 ? "homogeneous steady state (mode 0 branch)" : "non-homogeneous steady state";
    case 2:
        return k2 == 0 ? "homogeneous periodic orbit" : "non-homogeneous periodic orbit (mode k2)";
    default:
        return (k1 == 0 && k2 == 0) ? "homogeneous periodic orbit (mixed branch)" : "non-homogeneous periodic orbit";
    }
}

} // namespace

const char* to_string(Degeneracy d)
{
    switch (d) {
    case Degeneracy::Transcritical:
        return "transcritical";
    case Degeneracy::Pitchfork:
        return "pitchfork";
    default:
        return "unsupported";
    }
}

Degeneracy classify_degeneracy(const NormalForm& nf, double tol)
{
    const auto& c = nf.coef;
    double a11 = c.a11.real(), a23 = c.a23.real(), rb12 = c.b12.real();
    if (nz(a11, tol) && nz(a23, tol) && nz(rb12, tol) && nz(a11 - rb12, tol)) return Degeneracy::Transcritical;
    double a111 = c.a111.real(), a123 = c.a123.real(), rb112 = c.b112.real(), rb223 = c.b223.real();
    if (!nz(std::abs(c.a11), tol) && !nz(std::abs(c.a23), tol) && !nz(std::abs(c.b12), tol) && nz(a111, tol) &&
        nz(a123, tol) && nz(rb112, tol) && nz(rb223, tol) && nz(a111 * rb223 - a123 * rb112, tol))
        return Degeneracy::Pitchfork;
    return Degeneracy::Unsupported;
}

std::string transcritical_case(double a, double b)
{
    if (b > 0) return a > 0 ? "I" : "II";
    return a > 0 ? "III" : "IV";
}

std::string table1_case(double d0, double b0, double c0, double tol)
{
    double g = d0 - b0 * c0;
    if (!nz(b0, tol) || !nz(c0, tol) || !nz(g, tol) || !nz(d0, tol))
        fail("amplitude", "DegenerateCoefficient", "zero entry in (d0, b0, c0, d0 - b0 c0)");
    struct Row {
        int d, b, c, g;
        const char* name;
    };
    static const Row rows[] = {{1, 1, 1, 1, "Ia"},     {1, 1, 1, -1, "Ib"},    {1, 1, -1, 1, "II"},
                               {1, -1, 1, 1, "III"},   {1, -1, -1, 1, "IVa"},  {1, -1, -1, -1, "IVb"},
                               {-1, 1, 1, -1, "V"},    {-1, 1, -1, 1, "VIa"},  {-1, 1, -1, -1, "VIb"},
                               {-1, -1, 1, 1, "VIIa"}, {-1, -1, 1, -1, "VIIb"}, {-1, -1, -1, -1, "VIII"}};
    int sd = static_cast<int>(sgn(d0)), sb = static_cast<int>(sgn(b0)), sc = static_cast<int>(sgn(c0)),
        sg = static_cast<int>(sgn(g));
    for (const auto& r : rows)
        if (r.d == sd && r.b == sb && r.c == sc && r.g == sg) return r.name;
    std::ostringstream os;
    os << "sign pattern (" << sd << "," << sb << "," << sc << "," << sg << ") is not reachable";
    fail("amplitude", "DegenerateCoefficient", os.str());
}

Eigen::Vector2d AmplitudeSystem::field(double r, double z, const Eigen::Vector2d& eps) const
{
    if (kind == "pitchfork")
        return {r * (eps[0] + r * r + b0 * z * z), z * (eps[1] + c0 * r * r + d0 * z * z)};
    return {r * (eps[0] + a * z + c * r * r + d * z * z), eps[1] * z + b * r * r - z * z + e * r * r * z + f * z * z * z};
}

Eigen::Matrix2d AmplitudeSystem::jacobian(double r, double z, const Eigen::Vector2d& eps) const
{
    Eigen::Matrix2d J;
    if (kind == "pitchfork") {
        J << eps[0] + 3 * r * r + b0 * z * z, 2 * b0 * r * z, 2 * c0 * r * z, eps[1] + c0 * r * r + 3 * d0 * z * z;
    } else {
        J << eps[0] + a * z + 3 * c * r * r + d * z * z, r * (a + 2 * d * z), 2 * b * r + 2 * e * r * z,
            eps[1] - 2 * z + e * r * r + 3 * f * z * z;
    }
    return J;
}

AmplitudeSystem reduce_transcritical(const NormalForm& nf)
{
    const auto& k = nf.coef;
    double a11 = k.a11.real(), a23 = k.a23.real();
    if (std::abs(a11 * a23) < 1e-12) fail("amplitude", "DegenerateCoefficient", "|a11 a23| below 1e-12");
    AmplitudeSystem s;
    s.kind = "transcritical";
    s.k1 = nf.k1;
    s.k2 = nf.k2;
    s.a = -k.b12.real() / a11;
    s.b = -sgn(a11 * a23);
    s.c = k.b223.real() / std::abs(a11 * a23);
    s.d = k.b112.real() / (a11 * a11);
    s.e = k.a123.real() / std::abs(a11 * a23);
    s.f = k.a111.real() / (a11 * a11);
    s.eps_map << nf.b2[0].real(), nf.b2[1].real(), nf.a1[0], nf.a1[1];
    s.unfolding_case = transcritical_case(s.a, s.b);
    return s;
}

AmplitudeSystem reduce_pitchfork(const NormalForm& nf)
{
    const auto& k = nf.coef;
    double a111 = k.a111.real(), rb223 = k.b223.real();
    if (std::abs(a111) < 1e-12 || std::abs(rb223) < 1e-12)
        fail("amplitude", "DegenerateCoefficient", "a111 or Re b223 below 1e-12");
    AmplitudeSystem s;
    s.kind = "pitchfork";
    s.k1 = nf.k1;
    s.k2 = nf.k2;
    double sg = sgn(rb223);
    s.b0 = k.b112.real() / std::abs(a111) * sg;
    s.c0 = k.a123.real() / std::abs(rb223) * sg;
    s.d0 = sgn(a111 * rb223);
    s.time_reversed = sg < 0;
    s.eps_map << sg * nf.b2[0].real(), sg * nf.b2[1].real(), sg * nf.a1[0], sg * nf.a1[1];
    s.unfolding_case = table1_case(s.d0, s.b0, s.c0);
    return s;
}

AmplitudeSystem reduce(const NormalForm& nf, double tol)
{
    switch (classify_degeneracy(nf, tol)) {
    case Degeneracy::Transcritical:
        return reduce_transcritical(nf);
    case Degeneracy::Pitchfork:
        return reduce_pitchfork(nf);
    default:
        fail("amplitude", "UnsupportedDegeneracy", "neither the transcritical nor the pitchfork conditions hold");
    }
}

std::vector<Equilibrium> equilibria(const AmplitudeSystem& sys, const Eigen::Vector2d& eps)
{
    std::vector<Equilibrium> out;
    const double ts = sys.time_sign();
    auto add = [&](const std::string& label, double r, double z, int count, int row) {
        Equilibrium q;
        q.label = label;
        q.r = r;
        q.z = z;
        q.count = count;
        Eigen::Matrix2d J = sys.jacobian(r, z, eps);
        q.eig = eig2(J);
        q.eig_original = {ts * q.eig[0], ts * q.eig[1]};
        if (q.eig_original[0].real() < q.eig_original[1].real()) std::swap(q.eig_original[0], q.eig_original[1]);
        Eigen::Matrix2d Jo = ts * J;
        if (r == 0)  // r-direction stands for a complex pair
            q.morse = 2 * positive(Jo(0, 0)) + positive(Jo(1, 1));
        else if (z == 0 && sys.kind == "pitchfork")
            q.morse = positive(Jo(0, 0)) + positive(Jo(1, 1));
        else
            q.morse = positive(q.eig_original[0].real()) + positive(q.eig_original[1].real());
        q.object = row_name(row, sys.k1, sys.k2);
        out.push_back(q);
    };

    add("E1", 0, 0, 1, 0);
    if (sys.kind == "pitchfork") {
        const double b0 = sys.b0, c0 = sys.c0, d0 = sys.d0;
        if (eps[0] < 0) add("E2", std::sqrt(-eps[0]), 0, 1, 2);
        if (eps[1] / d0 < 0) add("E3", 0, std::sqrt(-eps[1] / d0), 2, 1);
        double den = d0 - b0 * c0;
        double r2 = (b0 * eps[1] - d0 * eps[0]) / den, z2 = (c0 * eps[0] - eps[1]) / den;
        if (r2 > 0 && z2 > 0) add("E4", std::sqrt(r2), std::sqrt(z2), 2, 3);
        return out;
    }
    // transcritical: z-axis roots of eps2 - z + f z^2, then r > 0 branches
    for (double z : real_roots({eps[1], -1.0, sys.f}))
        if (z != 0) add("Ez", 0, z, 1, 1);
    if (sys.c != 0) {
        const double a = sys.a, b = sys.b, c = sys.c, d = sys.d, e = sys.e, f = sys.f;
        std::vector<double> P = {-b * eps[0] / c, eps[1] - (a * b + e * eps[0]) / c, -1.0 - (b * d + a * e) / c,
                                 f - e * d / c};
        for (double z : real_roots(P)) {
            double rr = -(eps[0] + a * z + d * z * z) / c;
            if (rr > 0) add("Erz", std::sqrt(rr), z, 1, z == 0 ? 2 : 3);
        }
    }
    return out;
}

std::vector<HalfLine> critical_lines(const AmplitudeSystem& sys)
{
    Eigen::Matrix2d inv = inverse_map(sys);
    std::vector<HalfLine> out;
    auto push = [&](const std::string& label, const Eigen::Vector2d& de, bool full) {
        HalfLine h;
        h.label = label;
        h.eps_dir = de.normalized();
        Eigen::Vector2d da = inv * de;
        h.alpha_dir = da.normalized();
        h.slope = da[0] != 0 ? da[1] / da[0] : INFINITY;
        h.p1_side = static_cast<int>(sgn(da[0]));
        h.full_line = full;
        out.push_back(h);
    };
    if (sys.kind == "pitchfork" && sys.unfolding_case == "III") {
        auto dirs = case3_dirs(sys);
        for (int i = 0; i < 6; ++i) push("L" + std::to_string(i + 1), dirs[i], false);
        return out;
    }
    push("eps1=0", {0, 1}, true);
    push("eps2=0", {1, 0}, true);
    if (sys.kind == "pitchfork") {
        push("eps2=c0*eps1", {1, sys.c0}, true);
        push("b0*eps2=d0*eps1", {sys.b0, sys.d0}, true);
    }
    return out;
}

std::string case3_region(const AmplitudeSystem& sys, const Eigen::Vector2d& eps)
{
    auto dirs = case3_dirs(sys);
    double a = wedge_angle(eps);
    std::array<double, 7> edges{};
    edges[0] = 0;
    for (int i = 0; i < 5; ++i) edges[i + 1] = wedge_angle(dirs[i]);
    edges[6] = 2 * kPi;
    // D1 = [L6, L1), D2 = [L1, L2), ..., D6 = [L5, L6)
    for (int i = 0; i < 6; ++i)
        if (a >= edges[i] && a < edges[i + 1]) return "D" + std::to_string(i + 1);
    return "D1";
}

Eigen::Vector2d case3_sample(const AmplitudeSystem& sys, int region, double radius, double frac)
{
    auto dirs = case3_dirs(sys);
    std::array<double, 7> edges{};
    for (int i = 0; i < 5; ++i) edges[i + 1] = wedge_angle(dirs[i]);
    edges[6] = 2 * kPi;
    double mid = edges[region - 1] + frac * (edges[region] - edges[region - 1]);
    Eigen::Vector2d eps(radius * std::cos(mid), radius * std::sin(mid));
    return inverse_map(sys) * eps;
}

SlopeSummary case3_slopes(const AmplitudeSystem& sys)
{
    SlopeSummary s;
    for (const auto& h : critical_lines(sys)) {
        if (h.label == "L2") s.l2 = h.slope;
        if (h.label == "L3") s.l3 = h.slope;
        if (h.label == "L5") s.l5 = h.slope;
    }
    return s;
}

RegionReport region_inventory(const AmplitudeSystem& sys, const CriticalPoint& cp, const Eigen::Vector2d& alpha,
                              const RegionOptions& o)
{
    if (alpha.norm() >= o.locality) {
        std::ostringstream os;
        os << "|alpha| = " << alpha.norm() << " outside the locality bound " << o.locality;
        fail("amplitude", "OutsideLocality", os.str());
    }
    RegionReport rep;
    rep.alpha = alpha;
    rep.eps = sys.eps_map * alpha;
    rep.raw = {cp.alpha_star[0] + alpha[0], cp.alpha_star[1] + alpha[1]};
    std::vector<Eigen::Vector2d> lines;
    if (sys.kind == "pitchfork") {
        lines = {{0, 1}, {1, 0}, {1, sys.c0}, {sys.b0, sys.d0}};
    } else {
        lines = {{0, 1}, {1, 0}};
    }
    for (const auto& l : lines) {
        double dist = std::abs(l[0] * rep.eps[1] - l[1] * rep.eps[0]) / l.norm();
        if (dist < o.boundary) fail("amplitude", "OnBoundary", "sample lies on a critical line");
    }
    rep.label = (sys.kind == "pitchfork" && sys.unfolding_case == "III") ? case3_region(sys, rep.eps) : "sample";
    rep.equilibria = equilibria(sys, rep.eps);
    for (int row = 0; row < 4; ++row) {
        RegionObject ob;
        ob.name = row_name(row, sys.k1, sys.k2);
        for (const auto& q : rep.equilibria) {
            if (q.object != ob.name) continue;
            ob.count += q.count;
            ob.index = q.morse;
        }
        rep.objects.push_back(ob);
    }
    return rep;
}

} // namespace th
