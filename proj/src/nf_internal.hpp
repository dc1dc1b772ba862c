#pragma once

#include "th/normalform.hpp"

namespace th::detail {

// Quantities shared by the h solver and both coefficient paths.
struct Ingredients {
    const ModelSpec& s;
    const EigenQuadruple& e;
    int m;
    double w;
    cd iw;
    Profile p1, p2, p2b;
    CRow psi1, psi2, psi2b;
    CVec Q11, Q12, Q12b, Q22, Q22b, Q2b2b;
    CVec C111, C122b, C112, C222b;

    Ingredients(const ModelSpec& s_, const EigenQuadruple& e_);

    CVec Q(const Profile& a, const Profile& b) const { return s.Q(a.samples(s.lags), b.samples(s.lags)); }
    CVec C(const Profile& a, const Profile& b, const Profile& c) const
    {
        return s.C(a.samples(s.lags), b.samples(s.lags), c.samples(s.lags));
    }
};

// (f, Q_ab, c, k_a, k_b) for a second-order index q
struct QIndex {
    double f;
    CVec g;
    cd c;
    int ka, kb;
};

QIndex q_index(const Ingredients& in, const std::string& q);

} // namespace th::detail
