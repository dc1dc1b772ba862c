#pragma once

#include <array>
#include <string>

#include "th/spectral.hpp"

namespace th {

struct Hygiene {
    int k_scan = 0;
    double re0 = 0, re1 = 0, im_bound = 0;  // scanned box per wavenumber
    double rightmost_other = -std::numeric_limits<double>::infinity();
    int rightmost_k = -1;
    cd rightmost_lambda;
    int roots_found = 0;
    double simplicity_k1 = 0, simplicity_k2 = 0;  // |det'| / scale at the critical roots
    bool ran = false;
};

struct CriticalPoint {
    std::string model;
    std::array<std::string, 2> param_names{"p1", "p2"};
    std::array<double, 2> alpha_star{};  // raw parameter values
    int k1 = 0, k2 = 0;
    double omega0 = 0;          // model time units
    double omega_physical = 0;  // via ParametricModel::physical_omega
    std::array<double, 2> transversality{};  // (Re dlambda_k1/dalpha2, Re dlambda_k2/dalpha1)
    std::array<cd, 2> dlambda_k1{}, dlambda_k2{};
    double residual_k1 = 0, residual_k2 = 0;
    int iterations = 0;
    Hygiene hygiene;
};

struct LocateOptions {
    double tol = 1e-10;
    int max_iter = 100;
    int max_halvings = 20;
    double degenerate_cond = 1e12;
    bool hygiene = true;
    int k_scan = 20;
    double hygiene_re0 = -0.05;
    double hygiene_bound = 0;  // 0: max(4, 1.5 omega0 + 1)
    double critical_gap = 1e-6;
    RootOptions roots;
};

CriticalPoint locate(const ParametricModel& pm, int k1, int k2, std::array<double, 3> guess,
                     const LocateOptions& o = {});

// (Re dlambda_k1/dalpha2, Re dlambda_k2/dalpha1) by implicit differentiation; fills cp's complex derivatives
std::array<double, 2> transversality(const ParametricModel& pm, CriticalPoint& cp, double simplicity = 1e-6);

// The spec with alpha = 0 at the located point.
ModelSpec spec_at(const ParametricModel& pm, const CriticalPoint& cp);

} // namespace th
