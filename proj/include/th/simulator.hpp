#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "th/amplitude.hpp"

namespace th {

struct SimConfig {
    int N = 128;
    double dt = 0;          // 0: min(lag/64, ...) see effective_dt
    double T = 400;
    double noise = 1e-3;    // seeded low-mode noise amplitude
    int noise_modes = 5;
    double offset = 0;      // constant perturbation added to every species
    int bias_mode = -1;     // optional cosine bias: species vector * sqrt(2) cos(bias_mode pi x / L)
    CVec bias;              // real part used; length m
    double transient = 0.5;
    int record_every = 4;
    int record_modes = 16;
    int snapshot_every = 0; // 0: no field snapshots
    uint64_t seed = 0;
};

// Step actually used: the configured dt, or lag/64 (delay-free systems: 1e-3).
double effective_dt(const PdeSystem& p, const SimConfig& c);

struct Trajectory {
    int m = 0, N = 0;
    double dt = 0, length = 1;
    RVec steady;
    std::vector<double> t;                 // record times
    std::vector<RMat> modes;               // record_modes x m cosine coefficients of the field
    std::vector<double> snap_t;
    std::vector<RMat> snapshots;           // N x m fields
    RMat final_field;                      // N x m
    std::vector<double> grid() const;
};

Trajectory integrate(const PdeSystem& p, const SimConfig& c);

enum class AttractorKind { HomogeneousSteady, InhomogeneousSteady, HomogeneousPeriodic, InhomogeneousPeriodic, Unresolved };
const char* to_string(AttractorKind k);

struct AttractorClass {
    AttractorKind kind = AttractorKind::Unresolved;
    int dominant_mode = 0;
    double frequency = 0;             // cycles per unit time
    std::vector<double> amplitudes;   // per mode, max over species of the tail deviation
    double oscillation = 0;           // half peak-to-peak of the oscillating signal
    double peak_ratio = 0;            // spectral peak / noise floor
    double signed_mode_amplitude = 0; // tail mean of species-0 coefficient of the dominant non-zero mode
};

struct ClassifyOptions {
    double active_abs = 1e-4;
    double active_rel = 0.05;
    double peak_factor = 10;
    double decay = 0.5;  // late/early envelope below this reads as a transient
    double transient = 0.5;
};

AttractorClass classify_attractor(const Trajectory& tr, const ClassifyOptions& o = {});

struct ScoreEntry {
    std::string region;
    Eigen::Vector2d alpha;
    std::array<double, 2> raw{};
    double eps_radius = 0;
    AttractorKind predicted = AttractorKind::Unresolved;
    std::vector<AttractorClass> observed;  // one per start
    std::vector<std::string> starts;
    bool pass = false;
};

struct Scoreboard {
    std::vector<ScoreEntry> entries;
    int passed = 0, total = 0;
    double seconds = 0;
    SimConfig config;
    double radius = 0;
};

struct ValidateOptions {
    int samples_per_region = 1;
    double radius = 0.01;     // eps-plane distance from the critical point
    double bias_scale = 1.0;  // times the predicted planar z amplitude
    bool parallel = true;
};

AttractorKind predicted_stable(const RegionReport& rr);

Scoreboard validate_predictions(const ParametricModel& pm, const CriticalPoint& cp, const EigenQuadruple& eig,
                                const NormalForm& nf, const AmplitudeSystem& sys, const SimConfig& sim,
                                const ValidateOptions& o = {});

std::string modes_csv(const Trajectory& tr);
std::string snapshots_csv(const Trajectory& tr);

} // namespace th
