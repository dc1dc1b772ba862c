#include "th/eigensystem.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "th/quadrature.hpp"

namespace th {

Profile Profile::constant(const CVec& v)
{
    Profile p(static_cast<int>(v.size()));
    p.terms.push_back({v, 0, 0.0});
    return p;
}

Profile Profile::exponential(const CVec& v, cd c)
{
    Profile p(static_cast<int>(v.size()));
    p.terms.push_back({v, 0, c});
    return p;
}

CVec Profile::at(double th) const
{
    CVec s = CVec::Zero(m);
    for (const auto& t : terms) s += t.v * (std::pow(th, t.p) * std::exp(t.c * th));
    return s;
}

CVec Profile::derivative(double th) const
{
    CVec s = CVec::Zero(m);
    for (const auto& t : terms) {
        cd e = std::exp(t.c * th);
        cd d = t.c * std::pow(th, t.p) * e;
        if (t.p > 0) d += double(t.p) * std::pow(th, t.p - 1) * e;
        s += t.v * d;
    }
    return s;
}

LagTuple Profile::samples(const std::vector<double>& lags) const
{
    LagTuple t;
    for (double r : lags) t.values.push_back(at(-r));
    return t;
}

Profile Profile::conj() const
{
    Profile p(m);
    for (const auto& t : terms) p.terms.push_back({t.v.conjugate(), t.p, std::conj(t.c)});
    return p;
}

Profile& Profile::add(const CVec& v, int p, cd c)
{
    terms.push_back({v, p, c});
    return *this;
}

Profile& Profile::add(const Profile& o, cd scale)
{
    if (m == 0) m = o.m;
    for (const auto& t : o.terms) terms.push_back({t.v * scale, t.p, t.c});
    return *this;
}

Profile Profile::scaled(cd s) const
{
    Profile p(m);
    for (const auto& t : terms) p.terms.push_back({t.v * s, t.p, t.c});
    return p;
}

void Profile::compress(double drop)
{
    std::vector<ProfileTerm> out;
    for (const auto& t : terms) {
        bool merged = false;
        for (auto& u : out)
            if (u.p == t.p && std::abs(u.c - t.c) <= 1e-14 * std::max(1.0, std::abs(t.c))) {
                u.v += t.v;
                merged = true;
                break;
            }
        if (!merged) out.push_back(t);
    }
    terms.clear();
    for (auto& t : out)
        if (t.v.norm() > drop) terms.push_back(std::move(t));
}

cd J_integral(int p, cd a, double r)
{
    if (r == 0) return 0.0;
    if (std::abs(a) * r < 1.0) {
        cd s = 0, an = 1;
        double fact = 1;
        for (int n = 0; n < 60; ++n) {
            if (n > 0) {
                an *= a;
                fact *= n;
            }
            int q = p + n + 1;
            cd term = an / fact * (-std::pow(-r, q)) / double(q);
            s += term;
            if (n > 3 && std::abs(term) < 1e-18 * std::max(1.0, std::abs(s))) break;
        }
        return s;
    }
    cd e = std::exp(-a * r);
    cd J = (1.0 - e) / a;
    for (int q = 1; q <= p; ++q) J = (-std::pow(-r, q) * e) / a - (double(q) / a) * J;
    return J;
}

cd bilinear_form(const ModelSpec& s, int /*k*/, const AdjointProfile& psi, const Profile& phi)
{
    cd v = (psi.psi0 * phi.at(0.0))(0, 0);
    for (int j = 0; j < s.nlags(); ++j) {
        double r = s.lags[j];
        if (r == 0) continue;
        CRow w = psi.psi0 * s.A[j].cast<cd>() * std::exp(-psi.lambda * r);
        for (const auto& t : phi.terms) {
            if (t.p > 12) fail("eigensystem", "UnsupportedProfile", "polynomial degree above 12");
            v += (w * t.v)(0, 0) * J_integral(t.p, t.c - psi.lambda, r);
        }
    }
    return v;
}

cd bilinear_form_quadrature(const ModelSpec& s, int, const AdjointProfile& psi, const std::function<CVec(double)>& phi,
                            int nodes)
{
    cd v = (psi.psi0 * phi(0.0))(0, 0);
    for (int j = 0; j < s.nlags(); ++j) {
        double r = s.lags[j];
        if (r == 0) continue;
        CMat A = s.A[j].cast<cd>();
        v += quad::integrate(
            [&](double xi) -> cd { return (psi.psi0 * A * phi(xi))(0, 0) * std::exp(-psi.lambda * (xi + r)); }, -r,
            0.0, nodes);
    }
    return v;
}

CVec null_vector(const CMat& M, Side side, const KernelOptions& o)
{
    CMat X = side == Side::Right ? M : CMat(M.transpose());
    Eigen::JacobiSVD<CMat> svd(X, Eigen::ComputeFullV);
    auto sv = svd.singularValues();
    const int n = static_cast<int>(sv.size());
    double scale = std::max(1.0, sv[0]);
    if (sv[n - 1] / scale >= o.small) {
        std::ostringstream os;
        os << "smallest singular value " << sv[n - 1];
        fail("eigensystem", "NoKernel", os.str());
    }
    if (n > 1 && sv[n - 2] / scale <= o.gap) {
        std::ostringstream os;
        os << "second singular value " << sv[n - 2];
        fail("eigensystem", "MultiDimensionalKernel", os.str());
    }
    CVec v = svd.matrixV().col(n - 1);
    for (int i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > 1e-8) return v / v[i];
    fail("eigensystem", "NoKernel", "null vector vanished");
}

EigenQuadruple normalized_quadruple(const ModelSpec& s, int k1, int k2, double omega0, const KernelOptions& o)
{
    EigenQuadruple q;
    q.k1 = k1;
    q.k2 = k2;
    q.omega0 = omega0;
    CharMatrixContext c1(s, k1), c2(s, k2);
    cd l2(0, omega0);
    CMat M1 = char_matrix(c1, 0.0), M2 = char_matrix(c2, l2);
    q.phi1 = null_vector(M1, Side::Right, o);
    q.phi2 = null_vector(M2, Side::Right, o);
    CRow y1 = null_vector(M1, Side::Left, o).transpose();
    CRow y2 = null_vector(M2, Side::Left, o).transpose();
    q.psi1 = y1 / bilinear_form(s, k1, {y1, 0.0}, q.phi1_profile());
    q.psi2 = y2 / bilinear_form(s, k2, {y2, l2}, q.phi2_profile());
    q.kernel_residual = std::max({(M1 * q.phi1).norm(), (M2 * q.phi2).norm(), (q.psi1 * M1).norm(),
                                  (q.psi2 * M2).norm()});
    q.normalization_residual = std::max(std::abs(bilinear_form(s, k1, q.psi1_adj(), q.phi1_profile()) - 1.0),
                                        std::abs(bilinear_form(s, k2, q.psi2_adj(), q.phi2_profile()) - 1.0));
    return q;
}

EigenQuadruple normalized_quadruple(const ModelSpec& s, const CriticalPoint& cp, const KernelOptions& o)
{
    return normalized_quadruple(s, cp.k1, cp.k2, cp.omega0, o);
}

EtaIntegrals eta_integrals(const ModelSpec& s, int k, ParameterPoint alpha)
{
    EtaIntegrals e;
    e.k = k;
    RMat D = s.D_at(alpha);
    std::vector<RMat> A = s.A_at(alpha);
    double mu = s.mu(k);
    std::vector<double> lags = s.lags;
    e.int_deta = -mu * D.cast<cd>();
    e.int_theta_deta = CMat::Zero(s.m, s.m);
    for (int j = 0; j < s.nlags(); ++j) {
        e.int_deta += A[j].cast<cd>();
        e.int_theta_deta -= lags[j] * A[j].cast<cd>();
    }
    e.exp_weighted = [D, A, mu, lags](cd c) {
        CMat M = -mu * D.cast<cd>();
        for (size_t j = 0; j < lags.size(); ++j) M += A[j].cast<cd>() * std::exp(-c * lags[j]);
        return M;
    };
    return e;
}

CVec apply_eta(const ModelSpec& s, int k, const Profile& phi)
{
    CVec out = -s.mu(k) * (s.D0.cast<cd>() * phi.at(0.0));
    for (int j = 0; j < s.nlags(); ++j) out += s.A[j].cast<cd>() * phi.at(-s.lags[j]);
    return out;
}

} // namespace th
