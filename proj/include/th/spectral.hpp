#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "th/model.hpp"

namespace th {

struct CharMatrixContext {
    const ModelSpec* spec = nullptr;
    int k = 0;
    double mu_k = 0;
    ParameterPoint alpha;
    RMat D;               // D(alpha)
    std::vector<RMat> A;  // A_j(alpha)

    CharMatrixContext(const ModelSpec& s, int k, ParameterPoint a = {});
};

struct SpectralRoot {
    int k = 0;
    cd lambda;
    double residual = 0;        // |det|
    cd multiplicity_evidence;   // d det / d lambda at lambda
    bool simple = false;
};

struct RootOptions {
    double tol = 1e-10;         // on |det| / scale
    double simplicity = 1e-6;   // on |det'| / scale
    int max_depth = 12;
    int max_newton = 100;
    double boundary_guard = 1e-8;
    int max_dilations = 5;
};

struct Box {
    double re0, re1, im0, im1;
};

// Delta_k(lambda) = lambda I + mu_k D(alpha) - sum_j A_j(alpha) exp(-lambda r_j)
CMat char_matrix(const CharMatrixContext& ctx, cd lambda);
// I + sum_j r_j A_j exp(-lambda r_j)
CMat char_matrix_dlambda(const CharMatrixContext& ctx, cd lambda);
// d Delta / d alpha_i  (i = 0, 1)
CMat char_matrix_dalpha(const CharMatrixContext& ctx, cd lambda, int i);

// d/dt det(M + t dM) at t = 0, via row replacement (valid for singular M)
cd det_directional(const CMat& M, const CMat& dM);

std::pair<cd, cd> det_and_derivative(const CharMatrixContext& ctx, cd lambda);
cd det_dalpha(const CharMatrixContext& ctx, cd lambda, int i);
// Hadamard bound on |det|, floored at 1; residuals are measured against it
double det_scale(const CharMatrixContext& ctx, cd lambda);

// (1 / 2 pi i) \oint det'/det over the box edges; throws BoundaryRoot if not near an integer
int winding_number(const CharMatrixContext& ctx, const Box& b, const RootOptions& o = {});

std::vector<SpectralRoot> find_roots_in_box(const CharMatrixContext& ctx, std::pair<double, double> re_range,
                                            std::pair<double, double> im_range, const RootOptions& o = {});

// Newton polish from a seed; returns false if no convergence
bool newton_root(const CharMatrixContext& ctx, cd& lambda, const RootOptions& o = {});

// max Re over roots in [-bound, bound]^2; -inf when the box holds none
double rightmost_real_part(const CharMatrixContext& ctx, double search_bound, const RootOptions& o = {});

struct DispersionRow {
    int k = 0;
    double mu = 0;
    bool found = false;
    cd lambda;
    double residual = 0;
};

std::vector<DispersionRow> dispersion_scan(const ModelSpec& spec, ParameterPoint alpha, int k_max,
                                           double search_bound = 4.0, const RootOptions& o = {});
std::string dispersion_csv(const std::vector<DispersionRow>& rows);

} // namespace th
