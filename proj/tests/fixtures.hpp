#pragma once

#include "th/amplitude.hpp"

namespace thtest {

struct Schnak {
    th::ParametricModel pm;
    th::CriticalPoint cp;
    th::ModelSpec spec;
    th::EigenQuadruple eig;
    th::NormalForm nf;
    th::AmplitudeSystem sys;
};

inline const Schnak& schnak()
{
    static const Schnak s = [] {
        Schnak x;
        x.pm = th::schnakenberg(1, 2, 4);
        x.cp = th::locate(x.pm, 1, 0, {0.2, 0.002, 1.5});
        x.spec = th::spec_at(x.pm, x.cp);
        x.eig = th::normalized_quadruple(x.spec, x.cp);
        x.nf = th::compute_normal_form(x.spec, x.eig);
        x.sys = th::reduce(x.nf);
        return x;
    }();
    return s;
}

} // namespace thtest
