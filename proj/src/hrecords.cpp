#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "nf_internal.hpp"

namespace th {

namespace detail {

Ingredients::Ingredients(const ModelSpec& s_, const EigenQuadruple& e_)
    : s(s_), e(e_), m(s_.m), w(e_.omega0), iw(0.0, e_.omega0)
{
    p1 = e.phi1_profile();
    p2 = e.phi2_profile();
    p2b = p2.conj();
    psi1 = e.psi1;
    psi2 = e.psi2;
    psi2b = e.psi2.conjugate();
    Q11 = Q(p1, p1);
    Q12 = Q(p1, p2);
    Q12b = Q(p1, p2b);
    Q22 = Q(p2, p2);
    Q22b = Q(p2, p2b);
    Q2b2b = Q(p2b, p2b);
    C111 = C(p1, p1, p1);
    C122b = C(p1, p2, p2b);
    C112 = C(p1, p1, p2);
    C222b = C(p2, p2, p2b);
}

QIndex q_index(const Ingredients& in, const std::string& q)
{
    const int k1 = in.e.k1, k2 = in.e.k2;
    if (q == "200") return {0.5, in.Q11, 0.0, k1, k1};
    if (q == "011") return {1.0, in.Q22b, 0.0, k2, k2};
    if (q == "020") return {0.5, in.Q22, 2.0 * in.iw, k2, k2};
    if (q == "002") return {0.5, in.Q2b2b, -2.0 * in.iw, k2, k2};
    if (q == "110") return {1.0, in.Q12, in.iw, k1, k2};
    if (q == "101") return {1.0, in.Q12b, -in.iw, k1, k2};
    fail("normalform", "InvalidIndex", "unknown index " + q);
}

} // namespace detail

namespace {

using detail::Ingredients;

struct Centre {
    CVec phi0;
    CRow psi0;
    cd lambda;
};

std::vector<Centre> centres(const EigenQuadruple& e, int mode)
{
    std::vector<Centre> c;
    if (mode == e.k1) c.push_back({e.phi1, e.psi1, 0.0});
    if (mode == e.k2) {
        cd l(0, e.omega0);
        c.push_back({e.phi2, e.psi2, l});
        c.push_back({e.phi2.conjugate(), e.psi2.conjugate(), -l});
    }
    return c;
}

bool same(cd a, cd b, double w) { return std::abs(a - b) < 1e-9 * std::max(1.0, w); }

const char* const kBase[] = {"200", "011", "020", "110"};

void append_conjugates(HSet& h)
{
    std::vector<HRecord> extra;
    for (const auto& r : h.records) {
        if (r.q != "020" && r.q != "110") continue;
        HRecord c = r;
        c.q = r.q == "020" ? "002" : "101";
        c.c = std::conj(r.c);
        c.profile = r.profile.conj();
        c.E = r.E.conjugate();
        extra.push_back(std::move(c));
    }
    for (auto& r : extra) h.records.push_back(std::move(r));
}

CVec checked_solve(const CMat& M, const CVec& v, const std::string& what)
{
    Eigen::JacobiSVD<CMat> svd(M);
    auto sv = svd.singularValues();
    if (sv[sv.size() - 1] / std::max(1.0, sv[0]) < 1e-8)
        fail("normalform", "ResonantSolve", what + " is singular");
    return M.partialPivLu().solve(v);
}

} // namespace

const HRecord* HSet::find(const std::string& q, int mode) const
{
    for (const auto& r : records)
        if (r.q == q && r.mode == mode) return &r;
    return nullptr;
}

Profile HSet::get(const std::string& q, int mode, int m) const
{
    const HRecord* r = find(q, mode);
    return r ? r->profile : Profile(m);
}

std::vector<int> HSet::modes(const std::string& q) const
{
    std::vector<int> out;
    for (const auto& r : records)
        if (r.q == q) out.push_back(r.mode);
    return out;
}

HEquation h_equation(const ModelSpec& s, const EigenQuadruple& e, const std::string& q, int mode)
{
    Ingredients in(s, e);
    auto qi = detail::q_index(in, q);
    CVec g = qi.f * bracket2(qi.ka, qi.kb, mode) * qi.g;
    HEquation eq;
    eq.c = qi.c;
    eq.forcing = Profile(s.m);
    eq.boundary = -g;
    for (const auto& c : centres(e, mode)) {
        CVec u = c.phi0 * (c.psi0 * g)(0, 0);
        eq.forcing.add(u, 0, c.lambda);
        eq.boundary += u;
    }
    return eq;
}

void h_residuals(const ModelSpec& s, const EigenQuadruple& e, HRecord& r)
{
    HEquation eq = h_equation(s, e, r.q, r.mode);
    CVec b = apply_eta(s, r.mode, r.profile) - eq.c * r.profile.at(0.0) - eq.boundary;
    double scale = std::max({1.0, eq.boundary.norm(), r.profile.at(0.0).norm()});
    r.boundary_residual = b.norm() / scale;
    double worst = 0;
    const double R = s.max_lag();
    for (int i = 0; i <= 20; ++i) {
        double th = -R * i / 20.0;
        CVec d = r.profile.derivative(th) - eq.c * r.profile.at(th) - eq.forcing.at(th);
        worst = std::max(worst, d.norm() / scale);
    }
    r.interior_residual = worst;
}

CVec solve_E(const ModelSpec& s, const EigenQuadruple& e, int k, cd c, const CVec& rhs, const Profile& p,
             bool* projected)
{
    if (projected) *projected = false;
    CMat M = char_matrix(CharMatrixContext(s, k), c);
    Eigen::JacobiSVD<CMat> svd(M);
    auto sv = svd.singularValues();
    double scale = std::max(1.0, sv[0]);
    if (sv[sv.size() - 1] / scale >= 1e-8) return M.partialPivLu().solve(rhs);

    auto cs = centres(e, k);
    bool resonant = std::any_of(cs.begin(), cs.end(), [&](const Centre& x) { return same(x.lambda, c, e.omega0); });
    if (!resonant) {
        std::ostringstream os;
        os << "Delta_" << k << "(" << c << ") singular away from the centre spectrum";
        fail("normalform", "ResonantSolve", os.str());
    }
    const int m = s.m;
    const int n = m + static_cast<int>(cs.size());
    CMat A(n, m);
    CVec b(n);
    A.topRows(m) = M;
    b.head(m) = rhs;
    for (size_t i = 0; i < cs.size(); ++i) {
        AdjointProfile psi{cs[i].psi0, cs[i].lambda};
        for (int l = 0; l < m; ++l)
            A(m + i, l) = bilinear_form(s, k, psi, Profile::exponential(CVec::Unit(m, l), c));
        b[m + i] = -bilinear_form(s, k, psi, p);
    }
    CVec E = A.colPivHouseholderQr().solve(b);
    double res = (A * E - b).norm() / std::max(1.0, b.norm());
    if (res > 1e-8) {
        std::ostringstream os;
        os << "projected solve inconsistent (residual " << res << ") at mode " << k;
        fail("normalform", "ResonantSolve", os.str());
    }
    if (projected) *projected = true;
    return E;
}

HSet compute_h(const ModelSpec& s, const EigenQuadruple& e)
{
    Ingredients in(s, e);
    HSet h;
    for (const char* q : kBase) {
        auto qi = detail::q_index(in, q);
        for (auto [mode, w] : beta_product(qi.ka, qi.kb)) {
            if (w == 0) continue;
            HEquation eq = h_equation(s, e, q, mode);
            Profile p(s.m);
            for (const auto& t : eq.forcing.terms) {
                if (same(t.c, eq.c, e.omega0))
                    p.add(t.v, 1, eq.c);
                else
                    p.add(t.v / (t.c - eq.c), 0, t.c);
            }
            CVec rhs = apply_eta(s, mode, p) - eq.c * p.at(0.0) - eq.boundary;
            HRecord r;
            r.q = q;
            r.mode = mode;
            r.c = eq.c;
            r.E = solve_E(s, e, mode, eq.c, rhs, p, &r.projected);
            r.profile = p;
            r.profile.add(r.E, 0, eq.c);
            r.profile.compress();
            h.records.push_back(std::move(r));
        }
    }
    append_conjugates(h);
    for (auto& r : h.records) h_residuals(s, e, r);
    return h;
}

HSet compute_h_cases(const ModelSpec& s, const EigenQuadruple& e)
{
    Ingredients in(s, e);
    const int m = s.m, k1 = e.k1, k2 = e.k2;
    const cd iw = in.iw;
    const double r2 = M_SQRT2;
    HSet h;

    // building blocks
    auto P1 = [&](const CVec& v, int p = 0) { return Profile(m).add(e.phi1 * (in.psi1 * v)(0, 0), p, 0.0); };
    auto P2 = [&](const CVec& v, int p = 0) { return Profile(m).add(e.phi2 * (in.psi2 * v)(0, 0), p, iw); };
    auto P2b = [&](const CVec& v) { return Profile(m).add(e.phi2.conjugate() * (in.psi2b * v)(0, 0), 0, -iw); };
    auto eta = [&](int k) { return eta_integrals(s, k).int_deta; };
    auto theta_eta = [&](int k) { return eta_integrals(s, k).int_theta_deta; };
    auto inv_eta = [&](int k, const CVec& v) { return checked_solve(eta(k), v, "int d eta_" + std::to_string(k)); };
    auto inv_w = [&](int k, cd c, const CVec& v) {
        return checked_solve(char_matrix(CharMatrixContext(s, k), c), v, "c I - int e^{c theta} d eta");
    };
    auto push = [&](const std::string& q, int mode, cd c, Profile p, const CVec& E, bool proj = false) {
        HRecord r;
        r.q = q;
        r.mode = mode;
        r.c = c;
        r.E = E;
        r.projected = proj;
        p.add(E, 0, c);
        p.compress();
        r.profile = std::move(p);
        h.records.push_back(std::move(r));
    };
    CMat Id = CMat::Identity(m, m);
    // [int d eta_k] E = f [-I + (I - int theta d eta_k) phi1 psi1] Q  at a zero centre eigenvalue
    auto zero_centre = [&](const std::string& q, int k, double f, const CVec& Qv, Profile p) {
        CVec R = f * (-Id + (Id - theta_eta(k)) * (e.phi1 * in.psi1)) * Qv;
        bool proj = false;
        CVec E = solve_E(s, e, k, 0.0, -R, p, &proj);
        push(q, k, 0.0, std::move(p), E, proj);
    };
    // [i w I - int e^{i w theta} d eta_k] E = f [I - phi2 psi2 + int theta d eta_k phi2(theta) psi2] Q12
    auto hopf_centre = [&](int k, double f, Profile p) {
        CVec tphi = apply_eta(s, k, Profile(m).add(e.phi2, 1, iw));
        CVec R = f * (in.Q12 - e.phi2 * (in.psi2 * in.Q12)(0, 0) + tphi * (in.psi2 * in.Q12)(0, 0));
        bool proj = false;
        CVec E = solve_E(s, e, k, iw, R, p, &proj);
        push("110", k, iw, std::move(p), E, proj);
    };

    switch (case_of(k1, k2)) {
    case 1: {
        Profile p200 = P1(in.Q11, 1).add(P2(in.Q11), 1.0 / iw).add(P2b(in.Q11), -1.0 / iw).scaled(0.5);
        zero_centre("200", 0, 0.5, in.Q11, p200);
        Profile p011 = P1(in.Q22b, 1).add(P2(in.Q22b), 1.0 / iw).add(P2b(in.Q22b), -1.0 / iw);
        zero_centre("011", 0, 1.0, in.Q22b, p011);
        Profile p020 = P1(in.Q22).scaled(0.5).add(P2(in.Q22)).add(P2b(in.Q22), 1.0 / 3).scaled(-1.0 / (2.0 * iw));
        push("020", 0, 2.0 * iw, p020, 0.5 * inv_w(0, 2.0 * iw, in.Q22));
        Profile p110 = P1(in.Q12).scaled(-1.0 / iw).add(P2(in.Q12, 1)).add(P2b(in.Q12), -0.5 / iw);
        hopf_centre(0, 1.0, p110);
        break;
    }
    case 2: {
        const int k = k1;
        push("200", 0, 0.0, Profile(m), -0.5 * inv_eta(0, in.Q11));
        push("200", 2 * k, 0.0, Profile(m), -1.0 / (2 * r2) * inv_eta(2 * k, in.Q11));
        push("011", 0, 0.0, Profile(m), -inv_eta(0, in.Q22b));
        push("011", 2 * k, 0.0, Profile(m), -1.0 / r2 * inv_eta(2 * k, in.Q22b));
        push("020", 0, 2.0 * iw, Profile(m), 0.5 * inv_w(0, 2.0 * iw, in.Q22));
        push("020", 2 * k, 2.0 * iw, Profile(m), 1.0 / (2 * r2) * inv_w(2 * k, 2.0 * iw, in.Q22));
        push("110", 0, iw, Profile(m), inv_w(0, iw, in.Q12));
        push("110", 2 * k, iw, Profile(m), 1.0 / r2 * inv_w(2 * k, iw, in.Q12));
        break;
    }
    case 3: {
        push("200", 0, 0.0, P2(in.Q11).add(P2b(in.Q11), -1.0).scaled(1.0 / (2.0 * iw)),
             -0.5 * inv_eta(0, in.Q11));
        push("200", 2 * k1, 0.0, Profile(m), -1.0 / (2 * r2) * inv_eta(2 * k1, in.Q11));
        push("011", 0, 0.0, P2(in.Q22b).add(P2b(in.Q22b), -1.0).scaled(1.0 / iw), -inv_eta(0, in.Q22b));
        push("020", 0, 2.0 * iw, P2(in.Q22).add(P2b(in.Q22), 1.0 / 3).scaled(-1.0 / (2.0 * iw)),
             0.5 * inv_w(0, 2.0 * iw, in.Q22));
        push("110", k1, iw, P1(in.Q12).scaled(-1.0 / iw), inv_w(k1, iw, in.Q12));
        break;
    }
    case 4: {
        zero_centre("200", 0, 0.5, in.Q11, P1(in.Q11, 1).scaled(0.5));
        zero_centre("011", 0, 1.0, in.Q22b, P1(in.Q22b, 1));
        push("011", 2 * k2, 0.0, Profile(m), -1.0 / r2 * inv_eta(2 * k2, in.Q22b));
        push("020", 0, 2.0 * iw, P1(in.Q22).scaled(-1.0 / (4.0 * iw)), 0.5 * inv_w(0, 2.0 * iw, in.Q22));
        push("020", 2 * k2, 2.0 * iw, Profile(m), 1.0 / (2 * r2) * inv_w(2 * k2, 2.0 * iw, in.Q22));
        hopf_centre(k2, 1.0, P2(in.Q12, 1).add(P2b(in.Q12), -0.5 / iw));
        break;
    }
    default: {
        // Case 5.  h200^0 carries no P2 terms (mode 0 holds no centre eigenvalue here); the
        // resonant sub-cases k2 = 2 k1 and k1 = 2 k2 pick up projection terms.
        const bool r21 = k2 == 2 * k1, r12 = k1 == 2 * k2;
        const int dm = std::abs(k1 - k2);
        push("200", 0, 0.0, Profile(m), -0.5 * inv_eta(0, in.Q11));
        {
            Profile p(m);
            if (r21) p = P2(in.Q11).add(P2b(in.Q11), -1.0).scaled(1.0 / (2 * r2 * iw));
            push("200", 2 * k1, 0.0, p, -1.0 / (2 * r2) * inv_eta(2 * k1, in.Q11));
        }
        push("011", 0, 0.0, Profile(m), -inv_eta(0, in.Q22b));
        if (r12)
            zero_centre("011", 2 * k2, 1.0 / r2, in.Q22b, P1(in.Q22b, 1).scaled(1.0 / r2));
        else
            push("011", 2 * k2, 0.0, Profile(m), -1.0 / r2 * inv_eta(2 * k2, in.Q22b));
        push("020", 0, 2.0 * iw, Profile(m), 0.5 * inv_w(0, 2.0 * iw, in.Q22));
        {
            Profile p(m);
            if (r12) p = P1(in.Q22).scaled(-1.0 / (4 * r2 * iw));
            push("020", 2 * k2, 2.0 * iw, p, 1.0 / (2 * r2) * inv_w(2 * k2, 2.0 * iw, in.Q22));
        }
        if (r12) {
            hopf_centre(dm, 1.0 / r2, P2(in.Q12, 1).add(P2b(in.Q12), -0.5 / iw).scaled(1.0 / r2));
        } else {
            Profile p(m);
            if (r21) p = P1(in.Q12).scaled(-1.0 / (r2 * iw));
            push("110", dm, iw, p, 1.0 / r2 * inv_w(dm, iw, in.Q12));
        }
        push("110", k1 + k2, iw, Profile(m), 1.0 / r2 * inv_w(k1 + k2, iw, in.Q12));
    }
    }
    append_conjugates(h);
    for (auto& r : h.records) h_residuals(s, e, r);
    return h;
}

} // namespace th
