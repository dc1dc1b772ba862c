#pragma once

#include <array>
#include <string>
#include <vector>

#include "th/normalform.hpp"

namespace th {

enum class Degeneracy { Transcritical, Pitchfork, Unsupported };
const char* to_string(Degeneracy d);

Degeneracy classify_degeneracy(const NormalForm& nf, double tol = 1e-8);

struct AmplitudeSystem {
    std::string kind;          // transcritical | pitchfork
    Eigen::Matrix2d eps_map;   // (eps1, eps2) = eps_map * (alpha1, alpha2)
    double a = 0, b = 0, c = 0, d = 0, e = 0, f = 0;  // transcritical
    double b0 = 0, c0 = 0, d0 = 0;                    // pitchfork
    bool time_reversed = false;
    std::string unfolding_case;
    int k1 = 0, k2 = 0;

    double time_sign() const { return time_reversed ? -1.0 : 1.0; }
    // planar vector field (in the reduced time)
    Eigen::Vector2d field(double r, double z, const Eigen::Vector2d& eps) const;
    Eigen::Matrix2d jacobian(double r, double z, const Eigen::Vector2d& eps) const;
};

AmplitudeSystem reduce_transcritical(const NormalForm& nf);
AmplitudeSystem reduce_pitchfork(const NormalForm& nf);
AmplitudeSystem reduce(const NormalForm& nf, double tol = 1e-8);  // UnsupportedDegeneracy otherwise

// Table 1 label from the signs of (d0, b0, c0, d0 - b0 c0)
std::string table1_case(double d0, double b0, double c0, double tol = 1e-8);
std::string transcritical_case(double a, double b);

struct Equilibrium {
    std::string label;  // E1 E2 E3 E4 (E3, E4 stand for the +- pair)
    double r = 0, z = 0;
    std::array<cd, 2> eig{};           // planar Jacobian, reduced time
    std::array<cd, 2> eig_original{};  // times the time sign
    int count = 1;
    int morse = 0;                     // full-system index
    std::string object;
};

std::vector<Equilibrium> equilibria(const AmplitudeSystem& sys, const Eigen::Vector2d& eps);

struct HalfLine {
    std::string label;
    Eigen::Vector2d eps_dir;
    Eigen::Vector2d alpha_dir;  // raw parameter direction from the critical point
    double slope = 0;           // d p2 / d p1 (inf for vertical)
    int p1_side = 0;            // sign of the p1 offset along the half-line
    bool full_line = false;     // generic cases: both directions
};

std::vector<HalfLine> critical_lines(const AmplitudeSystem& sys);

struct RegionObject {
    std::string name;
    int count = 0;
    int index = -1;  // -1 when count == 0
};

struct RegionReport {
    std::string label;  // D1..D6 for case III, otherwise "sample"
    Eigen::Vector2d eps, alpha;
    std::array<double, 2> raw{};
    std::vector<Equilibrium> equilibria;
    std::vector<RegionObject> objects;  // constant SS, non-constant SS, homogeneous PO, non-homogeneous PO
};

struct RegionOptions {
    double locality = 0.05;
    double boundary = 1e-10;
};

RegionReport region_inventory(const AmplitudeSystem& sys, const CriticalPoint& cp, const Eigen::Vector2d& alpha,
                              const RegionOptions& o = {});
std::string case3_region(const AmplitudeSystem& sys, const Eigen::Vector2d& eps);
// alpha inside region D1..D6 at eps-plane radius `radius`; frac 0.5 is the bisector
Eigen::Vector2d case3_sample(const AmplitudeSystem& sys, int region, double radius, double frac = 0.5);

// half-line slopes used by the report: L2/L6 (eps2 = 0), L3, L5
struct SlopeSummary {
    double l2 = 0, l3 = 0, l5 = 0;
};
SlopeSummary case3_slopes(const AmplitudeSystem& sys);

} // namespace th
