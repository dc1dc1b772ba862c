#include "th/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace th {

RMat ModelSpec::D_at(const ParameterPoint& a) const
{
    return D0 + a.a1 * dD[0] + a.a2 * dD[1];
}

std::vector<RMat> ModelSpec::A_at(const ParameterPoint& a) const
{
    std::vector<RMat> out = A;
    for (size_t j = 0; j < out.size(); ++j) out[j] += a.a1 * dA[0][j] + a.a2 * dA[1][j];
    return out;
}

RMat ModelSpec::D1(const ParameterPoint& a) const
{
    return 2.0 * (a.a1 * dD[0] + a.a2 * dD[1]);
}

std::vector<RMat> ModelSpec::L1(const ParameterPoint& a) const
{
    std::vector<RMat> out(A.size());
    for (size_t j = 0; j < A.size(); ++j) out[j] = 2.0 * (a.a1 * dA[0][j] + a.a2 * dA[1][j]);
    return out;
}

void QuadTensor::add_symmetric(int o, int a, int b, double v)
{
    at(o, a, b) = v;
    at(o, b, a) = v;
}

CubicTensor::CubicTensor(int m_, int nl_) : m(m_), nl(nl_)
{
    size_t s = static_cast<size_t>(m_) * nl_;
    c.assign(static_cast<size_t>(m_) * s * s * s, 0.0);
}

double& CubicTensor::at(int o, int a, int b, int d)
{
    size_t s = slots();
    return c[((static_cast<size_t>(o) * s + a) * s + b) * s + d];
}

double CubicTensor::at(int o, int a, int b, int d) const
{
    size_t s = slots();
    return c[((static_cast<size_t>(o) * s + a) * s + b) * s + d];
}

void CubicTensor::add_symmetric(int o, int a, int b, int d, double v)
{
    int p[3] = {a, b, d};
    std::sort(p, p + 3);
    do {
        at(o, p[0], p[1], p[2]) = v;
    } while (std::next_permutation(p, p + 3));
}

namespace {

CVec flatten(const LagTuple& x, int m, int nl)
{
    CVec f(m * nl);
    for (int j = 0; j < nl; ++j) f.segment(j * m, m) = x.values[j];
    return f;
}

} // namespace

QForm quadratic_form(QuadTensor t)
{
    return [t = std::move(t)](const LagTuple& x, const LagTuple& y) {
        CVec fx = flatten(x, t.m, t.nl), fy = flatten(y, t.m, t.nl);
        int s = t.slots();
        CVec out = CVec::Zero(t.m);
        for (int o = 0; o < t.m; ++o)
            for (int a = 0; a < s; ++a) {
                if (fx[a] == 0.0) continue;
                cd acc = 0;
                for (int b = 0; b < s; ++b) acc += t.at(o, a, b) * fy[b];
                out[o] += fx[a] * acc;
            }
        return out;
    };
}

CForm cubic_form(CubicTensor t)
{
    return [t = std::move(t)](const LagTuple& x, const LagTuple& y, const LagTuple& z) {
        CVec fx = flatten(x, t.m, t.nl), fy = flatten(y, t.m, t.nl), fz = flatten(z, t.m, t.nl);
        int s = t.slots();
        CVec out = CVec::Zero(t.m);
        for (int o = 0; o < t.m; ++o)
            for (int a = 0; a < s; ++a) {
                if (fx[a] == 0.0) continue;
                for (int b = 0; b < s; ++b) {
                    if (fy[b] == 0.0) continue;
                    cd acc = 0;
                    for (int d = 0; d < s; ++d) acc += t.at(o, a, b, d) * fz[d];
                    out[o] += fx[a] * fy[b] * acc;
                }
            }
        return out;
    };
}

QForm zero_quadratic(int m)
{
    return [m](const LagTuple&, const LagTuple&) { return CVec(CVec::Zero(m)); };
}

CForm zero_cubic(int m)
{
    return [m](const LagTuple&, const LagTuple&, const LagTuple&) { return CVec(CVec::Zero(m)); };
}

LagTuple eigenprofile_samples(cd lambda, const CVec& v0, const std::vector<double>& lags)
{
    LagTuple t;
    t.values.reserve(lags.size());
    for (double r : lags) t.values.push_back(v0 * std::exp(-lambda * r));
    return t;
}

LagTuple zero_tuple(int m, int nlags)
{
    return LagTuple{std::vector<CVec>(nlags, CVec::Zero(m))};
}

namespace {

LagTuple random_tuple(std::mt19937_64& g, int m, int nl)
{
    std::normal_distribution<double> n;
    LagTuple t;
    for (int j = 0; j < nl; ++j) {
        CVec v(m);
        for (int i = 0; i < m; ++i) v[i] = cd(n(g), n(g));
        t.values.push_back(v);
    }
    return t;
}

LagTuple scaled(const LagTuple& x, cd c)
{
    LagTuple y = x;
    for (auto& v : y.values) v *= c;
    return y;
}

double rel_gap(const CVec& a, const CVec& b)
{
    double s = std::max(a.norm(), b.norm());
    if (s < 1e-300) return 0;
    return (a - b).norm() / s;
}

} // namespace

ValidationReport validate(const ModelSpec& s, bool strict, double tol)
{
    ValidationReport rep;
    rep.seed = kProbeSeed;
    auto add = [&](std::string name, bool pass, std::string detail) {
        rep.checks.push_back({std::move(name), pass, std::move(detail)});
        if (!pass) rep.ok = false;
    };

    bool shape = s.m > 0 && !s.lags.empty() && s.lags[0] == 0.0 && s.A.size() == s.lags.size() &&
                 s.dA[0].size() == s.lags.size() && s.dA[1].size() == s.lags.size() && s.D0.rows() == s.m &&
                 s.D0.cols() == s.m && s.l > 0;
    for (size_t j = 1; shape && j < s.lags.size(); ++j) shape = s.lags[j] > s.lags[j - 1];
    add("structure", shape, shape ? "" : "lag/matrix dimensions inconsistent");
    if (!shape) {
        if (strict) fail("model", "InvalidChemistry", "malformed model structure");
        return rep;
    }

    double dmin = s.D0.diagonal().minCoeff();
    bool diag = (s.D0 - RMat(s.D0.diagonal().asDiagonal())).norm() == 0.0;
    {
        std::ostringstream os;
        os << "min diagonal " << dmin;
        add("positive_diffusion", dmin > 0 && diag, os.str());
    }

    std::mt19937_64 g(kProbeSeed);
    std::uniform_real_distribution<double> u(-1, 1);
    int nl = s.nlags();
    double qs = 0, qh = 0, cs = 0, ch = 0;
    for (int probe = 0; probe < 8; ++probe) {
        LagTuple x = random_tuple(g, s.m, nl), y = random_tuple(g, s.m, nl), z = random_tuple(g, s.m, nl);
        cd c(u(g), u(g));
        qs = std::max(qs, rel_gap(s.Q(x, y), s.Q(y, x)));
        qh = std::max(qh, rel_gap(s.Q(scaled(x, c), y), c * s.Q(x, y)));
        CVec cxyz = s.C(x, y, z);
        for (auto v : {s.C(x, z, y), s.C(y, x, z), s.C(y, z, x), s.C(z, x, y), s.C(z, y, x)})
            cs = std::max(cs, rel_gap(cxyz, v));
        ch = std::max(ch, rel_gap(s.C(scaled(x, c), y, z), c * cxyz));
    }
    auto fmt = [](double v) {
        std::ostringstream os;
        os << "max relative gap " << v;
        return os.str();
    };
    add("Q_symmetric", qs <= tol, fmt(qs));
    add("Q_homogeneous", qh <= tol, fmt(qh));
    add("C_symmetric", cs <= tol, fmt(cs));
    add("C_homogeneous", ch <= tol, fmt(ch));

    if (strict && !rep.ok) {
        for (const auto& c : rep.checks) {
            if (c.pass) continue;
            if (c.name == "positive_diffusion") fail("model", "NonPositiveDiffusion", c.detail);
            fail("model", "SymmetryViolation", c.name + ": " + c.detail);
        }
    }
    return rep;
}

namespace {

RMat diag2(double x, double y)
{
    RMat m = RMat::Zero(2, 2);
    m(0, 0) = x;
    m(1, 1) = y;
    return m;
}

} // namespace

ParametricModel schnakenberg(double a, double b, double d)
{
    if (!(b > 0) || !(d > 0) || !(a >= 0)) fail("model", "InvalidChemistry", "need a >= 0, b > 0, d > 0");
    Chemistry ch{a, b, d};
    double us = ch.u_star(), vs = ch.v_star();

    ParametricModel pm;
    pm.name = "schnakenberg";
    pm.param_names = {"tau", "eps"};
    pm.at = [us, vs, d](double tau, double eps) {
        ModelSpec s;
        s.name = "schnakenberg";
        s.m = 2;
        s.l = 1.0 / std::numbers::pi;
        s.lags = {0.0, 1.0};
        s.D0 = d * tau * diag2(eps, 1.0);
        s.dD[0] = d * diag2(eps, 1.0);
        s.dD[1] = d * diag2(tau, 0.0);
        RMat A0(2, 2), A1(2, 2);
        A0 << -1, 0, 0, 0;
        A1 << 2 * us * vs, us * us, -2 * us * vs, -us * us;
        s.A = {tau * A0, tau * A1};
        s.dA[0] = {A0, A1};
        s.dA[1] = {RMat::Zero(2, 2), RMat::Zero(2, 2)};

        QuadTensor q(2, 2);
        // slots 2, 3 are (u, v) at lag 1
        for (int o = 0; o < 2; ++o) {
            double sg = o == 0 ? 1.0 : -1.0;
            q.add_symmetric(o, 2, 2, sg * 2 * tau * vs);
            q.add_symmetric(o, 2, 3, sg * 2 * tau * us);
        }
        CubicTensor c(2, 2);
        c.add_symmetric(0, 2, 2, 3, 2 * tau);
        c.add_symmetric(1, 2, 2, 3, -2 * tau);
        s.Q = quadratic_form(std::move(q));
        s.C = cubic_form(std::move(c));
        return s;
    };
    pm.pde = [a, b, d, us, vs](double tau, double eps) {
        PdeSystem p;
        p.m = 2;
        p.length = 1;
        p.lags = {0.0, tau};
        p.diffusion = RVec(2);
        p.diffusion << eps * d, d;
        p.steady = RVec(2);
        p.steady << us, vs;
        p.reaction = [a, b](const std::vector<RMat>& lag, RMat& out) {
            const RMat& now = lag[0];
            const RMat& old = lag[1];
            auto g = (old.col(0).array().square() * old.col(1).array()).matrix();
            out.resize(now.rows(), 2);
            out.col(0) = (a - now.col(0).array()).matrix() + g;
            out.col(1) = (b - g.array()).matrix();
        };
        return p;
    };
    pm.physical_omega = [](double tau, double, double w) { return w / tau; };
    return pm;
}

ModelSpec schnakenberg_builtin(double a, double b, double d, double tau_star, double eps_star)
{
    return schnakenberg(a, b, d).at(tau_star, eps_star);
}

ParametricModel affine_family(const ModelSpec& base, std::array<std::string, 2> names)
{
    ParametricModel pm;
    pm.name = base.name;
    pm.param_names = std::move(names);
    pm.at = [base](double p1, double p2) {
        ModelSpec s = base;
        ParameterPoint a{p1, p2};
        s.D0 = base.D_at(a);
        s.A = base.A_at(a);
        return s;
    };
    // translated Taylor system u_t = D u_xx + sum_j A_j u(t - r_j) + Q(u, u)/2 + C(u, u, u)/6
    pm.pde = [base](double p1, double p2) {
        ParameterPoint a{p1, p2};
        RMat D = base.D_at(a);
        if ((D - RMat(D.diagonal().asDiagonal())).norm() != 0.0)
            fail("model", "InvalidChemistry", "simulation needs a diagonal diffusion matrix");
        PdeSystem p;
        p.m = base.m;
        p.length = base.l * std::numbers::pi;
        p.lags = base.lags;
        p.diffusion = D.diagonal();
        p.steady = RVec::Zero(base.m);
        std::vector<RMat> A = base.A_at(a);
        p.reaction = [base, A](const std::vector<RMat>& lag, RMat& out) {
            const int N = static_cast<int>(lag[0].rows()), m = base.m, nl = base.nlags();
            out.setZero(N, m);
            LagTuple x;
            x.values.assign(nl, CVec(m));
            for (int i = 0; i < N; ++i) {
                for (int j = 0; j < nl; ++j) {
                    x.values[j] = lag[j].row(i).transpose().cast<cd>();
                    out.row(i) += (A[j] * lag[j].row(i).transpose()).transpose();
                }
                CVec nl2 = 0.5 * base.Q(x, x) + base.C(x, x, x) / 6.0;
                out.row(i) += nl2.real().transpose();
            }
        };
        return p;
    };
    return pm;
}

} // namespace th
