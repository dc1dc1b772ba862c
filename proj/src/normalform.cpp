#include <algorithm>
#include <cmath>

#include "nf_internal.hpp"

namespace th {

using detail::Ingredients;

namespace {

cd dot(const CRow& r, const CVec& v) { return (r * v)(0, 0); }

// <Q_{phi h_q} beta_a, beta_b> = sum_k Q(phi, h_q^k) <beta_a beta_k, beta_b>
CVec Qh(const Ingredients& in, const HSet& h, const std::string& q, const Profile& phi, int a, int b)
{
    CVec out = CVec::Zero(in.m);
    for (const auto& r : h.records) {
        if (r.q != q) continue;
        double w = bracket2(a, r.mode, b);
        if (w != 0) out += w * in.Q(phi, r.profile);
    }
    return out;
}

const char* proposition_name(int c)
{
    static const char* names[] = {"", "k1=k2=0", "k1=k2!=0", "k2=0,k1!=0", "k1=0,k2!=0", "k1!=k2,k1,k2!=0"};
    return names[c];
}

} // namespace

void linear_coefficients(const ModelSpec& s, const EigenQuadruple& e, std::array<double, 2>& a1, std::array<cd, 2>& b2)
{
    Profile p1 = e.phi1_profile(), p2 = e.phi2_profile();
    for (int i = 0; i < 2; ++i) {
        // psi (dL/d alpha_i phi - mu dD_i phi(0)); D1 and L1 carry the factor 2 absorbed by the 1/2
        CVec v1 = -s.mu(e.k1) * (s.dD[i].cast<cd>() * p1.at(0.0));
        CVec v2 = -s.mu(e.k2) * (s.dD[i].cast<cd>() * p2.at(0.0));
        for (int j = 0; j < s.nlags(); ++j) {
            v1 += s.dA[i][j].cast<cd>() * p1.at(-s.lags[j]);
            v2 += s.dA[i][j].cast<cd>() * p2.at(-s.lags[j]);
        }
        a1[i] = dot(e.psi1, v1).real();
        b2[i] = dot(e.psi2, v2);
    }
}

Coefficients general_coefficients(const ModelSpec& s, const EigenQuadruple& e, const HSet& h)
{
    Ingredients in(s, e);
    const int k1 = e.k1, k2 = e.k2;
    const cd iw = in.iw;
    const CRow &y1 = in.psi1, &y2 = in.psi2, &y2b = in.psi2b;
    const double k1sq_k1 = bracket2(k1, k1, k1), k2sq_k1 = bracket2(k2, k2, k1), k1k2_k2 = bracket2(k1, k2, k2),
                 k1sq_k2 = bracket2(k1, k1, k2), k2sq_k2 = bracket2(k2, k2, k2), k1k2_k1 = bracket2(k1, k2, k1);

    Coefficients c;
    c.a11 = 0.5 * dot(y1, in.Q11) * k1sq_k1;
    c.a23 = dot(y1, in.Q22b) * k2sq_k1;
    c.b12 = dot(y2, in.Q12) * k1k2_k2;

    c.a111 = dot(y1, in.C111) * bracket3(k1, k1, k1, k1) / 6.0 + dot(y1, Qh(in, h, "200", in.p1, k1, k1)) +
             (1.0 / (2.0 * iw)) *
                 (-dot(y1, in.Q12) * dot(y2, in.Q11) + dot(y1, in.Q12b) * dot(y2b, in.Q11)) * k1k2_k1 * k1sq_k2;

    c.a123 = dot(y1, in.C122b) * bracket3(k1, k2, k2, k1) +
             (1.0 / iw) * ((-dot(y1, in.Q12) * dot(y2, in.Q22b) + dot(y1, in.Q12b) * dot(y2b, in.Q22b)) * k1k2_k1 *
                               k2sq_k2 +
                           0.5 * (-dot(y1, in.Q22) * dot(y2, in.Q12b) + dot(y1, in.Q2b2b) * dot(y2b, in.Q12)) *
                               k1k2_k2 * k2sq_k1) +
             dot(y1, Qh(in, h, "011", in.p1, k1, k1) + Qh(in, h, "101", in.p2, k2, k1) +
                         Qh(in, h, "110", in.p2b, k2, k1));

    c.b112 = 0.5 * dot(y2, in.C112) * bracket3(k1, k1, k2, k2) +
             (1.0 / (2.0 * iw)) *
                 ((2.0 * dot(y2, in.Q11) * dot(y1, in.Q12) * k1k2_k1 * k1sq_k2 +
                   dot(y2, in.Q12b) * dot(y2b, in.Q12) * k1k2_k2 * k1k2_k2) +
                  (-dot(y2, in.Q22) * dot(y2, in.Q11) + dot(y2, in.Q22b) * dot(y2b, in.Q11)) * k1sq_k2 * k2sq_k2) +
             dot(y2, Qh(in, h, "110", in.p1, k1, k2) + Qh(in, h, "200", in.p2, k2, k2));

    c.b223 = 0.5 * dot(y2, in.C222b) * bracket3(k2, k2, k2, k2) +
             (1.0 / (4.0 * iw)) *
                 (dot(y2, in.Q12b) * dot(y1, in.Q22) * k1k2_k2 * k2sq_k1 +
                  (2.0 / 3.0) * dot(y2, in.Q2b2b) * dot(y2b, in.Q22) * k2sq_k2 * k2sq_k2 +
                  (-2.0 * dot(y2, in.Q22) * dot(y2, in.Q22b) + 4.0 * dot(y2, in.Q22b) * dot(y2b, in.Q22b)) *
                      k2sq_k2 * k2sq_k2) +
             dot(y2, Qh(in, h, "011", in.p2, k2, k2) + Qh(in, h, "020", in.p2b, k2, k2));
    return c;
}

Coefficients case_coefficients(const ModelSpec& s, const EigenQuadruple& e, const HSet& h)
{
    Ingredients in(s, e);
    const int m = s.m, k1 = e.k1, k2 = e.k2;
    const double w = in.w, r2 = M_SQRT2;
    const cd iw = in.iw;
    const CRow &y1 = in.psi1, &y2 = in.psi2, &y2b = in.psi2b;
    auto H = [&](const char* q, int mode) { return h.get(q, mode, m); };
    auto Qp = [&](const Profile& phi, const Profile& x) { return in.Q(phi, x); };
    // Re(i a) for the scalar products written as Re(i Q psi) Q in the case formulas
    auto rei = [](cd a) { return (I_ * a).real(); };
    const Profile &f1 = in.p1, &f2 = in.p2, &f2b = in.p2b;

    Coefficients c;
    switch (case_of(k1, k2)) {
    case 1: {
        c.a11 = 0.5 * dot(y1, in.Q11);
        c.a23 = dot(y1, in.Q22b);
        c.b12 = dot(y2, in.Q12);
        c.a111 = dot(y1, in.C111) / 6.0 + rei(dot(y1, in.Q12) * dot(y2, in.Q11)) / w + dot(y1, Qp(f1, H("200", 0)));
        c.a123 = dot(y1, in.C122b) + 2.0 / w * rei(dot(y1, in.Q12) * dot(y2, in.Q22b)) +
                 rei(dot(y1, in.Q22) * dot(y2, in.Q12b)) / w +
                 dot(y1, Qp(f1, H("011", 0)) + Qp(f2, H("101", 0)) + Qp(f2b, H("110", 0)));
        c.b112 = 0.5 * dot(y2, in.C112) +
                 (1.0 / (2.0 * iw)) * (2.0 * dot(y2, in.Q11) * dot(y1, in.Q12) + dot(y2, in.Q12b) * dot(y2b, in.Q12) -
                                       dot(y2, in.Q22) * dot(y2, in.Q11) + dot(y2, in.Q22b) * dot(y2b, in.Q11)) +
                 dot(y2, Qp(f1, H("110", 0)) + Qp(f2, H("200", 0)));
        c.b223 = 0.5 * dot(y2, in.C222b) +
                 (1.0 / (4.0 * iw)) * (dot(y2, in.Q12b) * dot(y1, in.Q22) +
                                       2.0 / 3.0 * dot(y2, in.Q2b2b) * dot(y2b, in.Q22) -
                                       2.0 * dot(y2, in.Q22) * dot(y2, in.Q22b) +
                                       4.0 * dot(y2, in.Q22b) * dot(y2b, in.Q22b)) +
                 dot(y2, Qp(f2, H("011", 0)) + Qp(f2b, H("020", 0)));
        break;
    }
    case 2: {
        const int d = 2 * k1;
        c.a11 = c.a23 = c.b12 = 0.0;
        c.a111 = 0.25 * dot(y1, in.C111) + dot(y1, Qp(f1, H("200", 0)) + Qp(f1, H("200", d)) / r2);
        c.a123 = 1.5 * dot(y1, in.C122b) +
                 dot(y1, Qp(f1, H("011", 0)) + Qp(f1, H("011", d)) / r2 + Qp(f2, H("101", 0)) +
                             Qp(f2, H("101", d)) / r2 + Qp(f2b, H("110", 0)) + Qp(f2b, H("110", d)) / r2);
        c.b112 = 0.75 * dot(y2, in.C112) +
                 dot(y2, Qp(f1, H("110", 0)) + Qp(f1, H("110", d)) / r2 + Qp(f2, H("200", 0)) + Qp(f2, H("200", d)) / r2);
        c.b223 = 0.75 * dot(y2, in.C222b) + dot(y2, Qp(f2, H("011", 0)) + Qp(f2, H("011", d)) / r2 +
                                                       Qp(f2b, H("020", 0)) + Qp(f2b, H("020", d)) / r2);
        break;
    }
    case 3: {
        const int d = 2 * k1;
        c.a11 = c.a23 = c.b12 = 0.0;
        c.a111 = 0.25 * dot(y1, in.C111) + rei(dot(y1, in.Q12) * dot(y2, in.Q11)) / w +
                 dot(y1, Qp(f1, H("200", 0)) + Qp(f1, H("200", d)) / r2);
        c.a123 = dot(y1, in.C122b) + 2.0 / w * rei(dot(y1, in.Q12) * dot(y2, in.Q22b)) +
                 dot(y1, Qp(f1, H("011", 0)) + Qp(f1, H("011", d)) / r2 + Qp(f2, H("101", k1)) + Qp(f2b, H("110", k1)));
        c.b112 = 0.5 * dot(y2, in.C112) +
                 (1.0 / (2.0 * iw)) * (2.0 * dot(y2, in.Q11) * dot(y1, in.Q12) - dot(y2, in.Q22) * dot(y2, in.Q11) +
                                       dot(y2, in.Q22b) * dot(y2b, in.Q11)) +
                 dot(y2, Qp(f1, H("110", k1)) + Qp(f2, H("200", 0)));
        c.b223 = 0.5 * dot(y2, in.C222b) +
                 (1.0 / (4.0 * iw)) * (2.0 / 3.0 * dot(y2, in.Q2b2b) * dot(y2b, in.Q22) -
                                       2.0 * dot(y2, in.Q22) * dot(y2, in.Q22b) +
                                       4.0 * dot(y2, in.Q22b) * dot(y2b, in.Q22b)) +
                 dot(y2, Qp(f2, H("011", 0)) + Qp(f2b, H("020", 0)));
        break;
    }
    case 4: {
        const int d = 2 * k2;
        c.a11 = 0.5 * dot(y1, in.Q11);
        c.a23 = dot(y1, in.Q22b);
        c.b12 = dot(y2, in.Q12);
        c.a111 = dot(y1, in.C111) / 6.0 + dot(y1, Qp(f1, H("200", 0)));
        c.a123 = dot(y1, in.C122b) + rei(dot(y1, in.Q22) * dot(y2, in.Q12b)) / w +
                 dot(y1, Qp(f1, H("011", 0)) + Qp(f2, H("101", k2)) + Qp(f2b, H("110", k2)));
        c.b112 = 0.5 * dot(y2, in.C112) + (1.0 / (2.0 * iw)) * dot(y2, in.Q12b) * dot(y2b, in.Q12) +
                 dot(y2, Qp(f1, H("110", k2)) + Qp(f2, H("200", 0)) + Qp(f2, H("200", d)) / r2);
        c.b223 = 0.75 * dot(y2, in.C222b) + (1.0 / (4.0 * iw)) * dot(y2, in.Q12b) * dot(y1, in.Q22) +
                 dot(y2, Qp(f2, H("011", 0)) + Qp(f2, H("011", d)) / r2 + Qp(f2b, H("020", 0)) +
                             Qp(f2b, H("020", d)) / r2);
        break;
    }
    default: {
        // Case 5 with Q_phi1 h200^0 restored in a111, h011^0 in place of h011^{2k1} in a123 and
        // Q_phi2 h200^0 restored in b112.
        const double d12 = k1 == 2 * k2 ? 1.0 : 0.0, d21 = k2 == 2 * k1 ? 1.0 : 0.0;
        const int dm = std::abs(k1 - k2), sm = k1 + k2;
        c.a11 = 0.0;
        c.a23 = d12 / r2 * dot(y1, in.Q22b);
        c.b12 = d12 / r2 * dot(y2, in.Q12);
        c.a111 = 0.25 * dot(y1, in.C111) + d21 / (2.0 * w) * rei(dot(y1, in.Q12) * dot(y2, in.Q11)) +
                 dot(y1, Qp(f1, H("200", 0)) + Qp(f1, H("200", 2 * k1)) / r2);
        c.a123 = dot(y1, in.C122b) + d12 / (2.0 * w) * rei(dot(y1, in.Q22) * dot(y2, in.Q12b)) +
                 dot(y1, Qp(f1, H("011", 0)) + Qp(f2, H("101", dm)) / r2 + Qp(f2, H("101", sm)) / r2 +
                             Qp(f2, H("101", 0)) + Qp(f2b, H("110", dm)) / r2 + Qp(f2b, H("110", sm)) / r2 +
                             Qp(f2b, H("110", 0)));
        c.b112 = 0.5 * dot(y2, in.C112) +
                 (1.0 / (4.0 * iw)) *
                     (2.0 * d21 * dot(y2, in.Q11) * dot(y1, in.Q12) + d12 * dot(y2, in.Q12b) * dot(y2b, in.Q12)) +
                 dot(y2, Qp(f1, H("110", dm)) / r2 + Qp(f1, H("110", sm)) / r2 + Qp(f1, H("110", 0)) +
                             Qp(f2, H("200", 0)) + Qp(f2, H("200", 2 * k2)) / r2);
        c.b223 = 0.75 * dot(y2, in.C222b) + d12 / (8.0 * iw) * dot(y2, in.Q12b) * dot(y1, in.Q22) +
                 dot(y2, Qp(f2, H("011", 0)) + Qp(f2, H("011", 2 * k2)) / r2 + Qp(f2b, H("020", 0)) +
                             Qp(f2b, H("020", 2 * k2)) / r2);
    }
    }
    return c;
}

double coefficient_discrepancy(const Coefficients& x, const Coefficients& y)
{
    const cd xs[] = {x.a11, x.a23, x.b12, x.a111, x.a123, x.b112, x.b223};
    const cd ys[] = {y.a11, y.a23, y.b12, y.a111, y.a123, y.b112, y.b223};
    double big = 0;
    for (int i = 0; i < 7; ++i) big = std::max({big, std::abs(xs[i]), std::abs(ys[i])});
    const double floor = 1e-12 * std::max(1.0, big);
    double worst = 0;
    for (int i = 0; i < 7; ++i) {
        double d = std::abs(xs[i] - ys[i]);
        double n = std::max(std::abs(xs[i]), std::abs(ys[i]));
        if (n < floor) continue;
        worst = std::max(worst, d / n);
    }
    return worst;
}

NormalForm compute_normal_form(const ModelSpec& s, const EigenQuadruple& e)
{
    NormalForm nf;
    nf.k1 = e.k1;
    nf.k2 = e.k2;
    nf.case_id = case_of(e.k1, e.k2);
    nf.proposition = proposition_name(nf.case_id);
    nf.omega0 = e.omega0;
    linear_coefficients(s, e, nf.a1, nf.b2);
    nf.h = compute_h(s, e);
    nf.coef = general_coefficients(s, e, nf.h);
    HSet hc = compute_h_cases(s, e);
    nf.coef_cases = case_coefficients(s, e, hc);
    nf.dual_path_discrepancy = coefficient_discrepancy(nf.coef, nf.coef_cases);
    for (const HSet* set : {&nf.h, &hc})
        for (const auto& r : set->records) {
            nf.max_boundary_residual = std::max(nf.max_boundary_residual, r.boundary_residual);
            nf.max_interior_residual = std::max(nf.max_interior_residual, r.interior_residual);
        }
    return nf;
}

} // namespace th
