#include "th/simulator.hpp"

#include <fftw3.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <mutex>
#include <random>
#include <sstream>

namespace th {

namespace {

const double kPi = 3.14159265358979323846;

std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

// Cosine transform on the midpoint grid x_j = (j + 1/2) L / N, coefficients of cos(k pi x / L).
class Dct {
public:
    Dct(int N, int m) : N_(N), m_(m)
    {
        std::lock_guard<std::mutex> g(planner_mutex());
        in_ = fftw_alloc_real(static_cast<size_t>(N) * m);
        out_ = fftw_alloc_real(static_cast<size_t>(N) * m);
        fftw_r2r_kind k10 = FFTW_REDFT10, k01 = FFTW_REDFT01;
        fwd_ = fftw_plan_many_r2r(1, &N_, m, in_, nullptr, 1, N, out_, nullptr, 1, N, &k10, FFTW_ESTIMATE);
        inv_ = fftw_plan_many_r2r(1, &N_, m, in_, nullptr, 1, N, out_, nullptr, 1, N, &k01, FFTW_ESTIMATE);
    }
    ~Dct()
    {
        std::lock_guard<std::mutex> g(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
        fftw_free(in_);
        fftw_free(out_);
    }
    Dct(const Dct&) = delete;
    Dct& operator=(const Dct&) = delete;

    void forward(const RMat& U, RMat& C)
    {
        std::copy(U.data(), U.data() + U.size(), in_);
        fftw_execute(fwd_);
        C.resize(N_, m_);
        for (int s = 0; s < m_; ++s) {
            C(0, s) = out_[s * N_] / (2.0 * N_);
            for (int k = 1; k < N_; ++k) C(k, s) = out_[s * N_ + k] / N_;
        }
    }
    void inverse(const RMat& C, RMat& U)
    {
        for (int s = 0; s < m_; ++s) {
            in_[s * N_] = C(0, s);
            for (int k = 1; k < N_; ++k) in_[s * N_ + k] = 0.5 * C(k, s);
        }
        fftw_execute(inv_);
        U.resize(N_, m_);
        std::copy(out_, out_ + U.size(), U.data());
    }

private:
    int N_, m_;
    double *in_ = nullptr, *out_ = nullptr;
    fftw_plan fwd_, inv_;
};

// phi1(z) = (e^z - 1)/z, phi2(z) = (e^z - 1 - z)/z^2
void phis(double z, double& e, double& p1, double& p2)
{
    e = std::exp(z);
    if (std::abs(z) < 1e-3) {
        p1 = 1 + z / 2 + z * z / 6 + z * z * z / 24;
        p2 = 0.5 + z / 6 + z * z / 24 + z * z * z / 120;
    } else {
        p1 = (e - 1) / z;
        p2 = (e - 1 - z) / (z * z);
    }
}

double median(std::vector<double> v)
{
    if (v.empty()) return 0;
    auto mid = v.begin() + v.size() / 2;
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

} // namespace

double effective_dt(const PdeSystem& p, const SimConfig& c)
{
    if (c.dt > 0) return c.dt;
    double lag = 0;
    for (double r : p.lags)
        if (r > 0 && (lag == 0 || r < lag)) lag = r;
    return lag > 0 ? lag / 64 : 1e-3;
}

std::vector<double> Trajectory::grid() const
{
    std::vector<double> x(N);
    for (int j = 0; j < N; ++j) x[j] = (j + 0.5) * length / N;
    return x;
}

Trajectory integrate(const PdeSystem& p, const SimConfig& c)
{
    if (c.N < 32) fail("simulator", "InvalidConfig", "N must be at least 32");
    const int N = c.N, m = p.m;
    const double h = effective_dt(p, c), L = p.length;
    const long steps = static_cast<long>(std::llround(c.T / h));

    Trajectory tr;
    tr.m = m;
    tr.N = N;
    tr.dt = h;
    tr.length = L;
    tr.steady = p.steady;

    // initial history, constant on [-max lag, 0]
    RMat U0(N, m);
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int s = 0; s < m; ++s) {
        std::vector<double> xi(c.noise_modes);
        for (auto& v : xi) v = uni(rng);
        for (int j = 0; j < N; ++j) {
            double x = (j + 0.5) * L / N;
            double v = p.steady[s] + c.offset;
            for (int n = 0; n < c.noise_modes; ++n) v += c.noise * xi[n] * std::cos(n * kPi * x / L);
            if (c.bias_mode >= 0 && c.bias.size() == m)
                v += c.bias[s].real() * std::sqrt(2.0) * std::cos(c.bias_mode * kPi * x / L);
            U0(j, s) = v;
        }
    }

    Dct dct(N, m);
    RMat E(N, m), P1(N, m), P2(N, m), lapl(N, m);
    for (int s = 0; s < m; ++s)
        for (int k = 0; k < N; ++k) {
            double q = (k * kPi / L) * (k * kPi / L);
            lapl(k, s) = -q;
            phis(-p.diffusion[s] * q * h, E(k, s), P1(k, s), P2(k, s));
        }

    // lags in steps; non-integer lags use cubic Hermite interpolation on stored derivatives
    const int nl = static_cast<int>(p.lags.size());
    std::vector<double> ratio(nl);
    bool need_deriv = false;
    double maxlag = 0;
    for (int j = 0; j < nl; ++j) {
        ratio[j] = p.lags[j] / h;
        maxlag = std::max(maxlag, p.lags[j]);
        if (std::abs(ratio[j] - std::round(ratio[j])) > 1e-9) need_deriv = true;
    }
    const long cap = static_cast<long>(std::ceil(maxlag / h)) + 4;
    std::vector<RMat> ring(cap), dring(need_deriv ? cap : 0);
    auto slot = [&](long n) { return static_cast<size_t>(((n % cap) + cap) % cap); };

    auto fetch = [&](long n, int j, RMat& out) {
        if (p.lags[j] == 0) {
            out = ring[slot(n)];
            return;
        }
        double r = ratio[j];
        double rr = std::round(r);
        if (std::abs(r - rr) <= 1e-9) {
            long i = n - static_cast<long>(rr);
            out = i < 0 ? U0 : ring[slot(i)];
            return;
        }
        double tpos = n - r;  // in steps
        long a = static_cast<long>(std::floor(tpos));
        if (a + 1 <= 0) {
            out = U0;
            return;
        }
        double s = tpos - a;
        const RMat& Ua = a < 0 ? U0 : ring[slot(a)];
        RMat dA = a < 0 ? RMat::Zero(N, m) : dring[slot(a)];
        const RMat& Ub = ring[slot(a + 1)];
        const RMat& dB = dring[slot(a + 1)];
        double h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s, h01 = -2 * s * s * s + 3 * s * s,
               h11 = s * s * s - s * s;
        out = h00 * Ua + (h10 * h) * dA + h01 * Ub + (h11 * h) * dB;
    };

    RMat U = U0, Uh, R(N, m), Rh, Rh_prev, tmp;
    dct.forward(U, Uh);
    ring[slot(0)] = U;
    std::vector<RMat> lagged(nl);
    const int K = std::min(c.record_modes, N);

    auto record = [&](long n) {
        if (n % std::max(1, c.record_every) == 0) {
            tr.t.push_back(n * h);
            tr.modes.push_back(Uh.topRows(K));
        }
        if (c.snapshot_every > 0 && n % c.snapshot_every == 0) {
            tr.snap_t.push_back(n * h);
            tr.snapshots.push_back(U);
        }
    };
    record(0);

    for (long n = 0; n < steps; ++n) {
        for (int j = 0; j < nl; ++j) fetch(n, j, lagged[j]);
        p.reaction(lagged, R);
        dct.forward(R, Rh);
        if (need_deriv) {
            dct.inverse(RMat(lapl.cwiseProduct(Uh)), tmp);
            for (int s = 0; s < m; ++s) tmp.col(s) *= p.diffusion[s];
            dring[slot(n)] = tmp + R;
        }
        if (n == 0)
            Uh = E.cwiseProduct(Uh) + h * P1.cwiseProduct(Rh);
        else
            Uh = E.cwiseProduct(Uh) + h * (P1.cwiseProduct(Rh) + P2.cwiseProduct(Rh - Rh_prev));
        Rh_prev = Rh;
        dct.inverse(Uh, U);
        if (!U.allFinite()) {
            std::ostringstream os;
            os << "non-finite state at t = " << (n + 1) * h;
            fail("simulator", "NonFiniteState", os.str());
        }
        if (U.cwiseAbs().maxCoeff() > 1e6) {
            std::ostringstream os;
            os << "solution norm above 1e6 at t = " << (n + 1) * h;
            fail("simulator", "BlowUp", os.str());
        }
        ring[slot(n + 1)] = U;
        record(n + 1);
    }
    tr.final_field = U;
    return tr;
}

const char* to_string(AttractorKind k)
{
    switch (k) {
    case AttractorKind::HomogeneousSteady:
        return "homogeneous steady";
    case AttractorKind::InhomogeneousSteady:
        return "inhomogeneous steady";
    case AttractorKind::HomogeneousPeriodic:
        return "homogeneous periodic";
    case AttractorKind::InhomogeneousPeriodic:
        return "inhomogeneous periodic";
    default:
        return "unresolved";
    }
}

AttractorClass classify_attractor(const Trajectory& tr, const ClassifyOptions& o)
{
    AttractorClass ac;
    if (tr.t.size() < 16) return ac;
    const double t_end = tr.t.back();
    size_t first = 0;
    while (first < tr.t.size() && tr.t[first] < o.transient * t_end) ++first;
    const size_t n = tr.t.size() - first;
    if (n < 16) return ac;
    const double dt_rec = tr.t[first + 1] - tr.t[first];
    const int K = static_cast<int>(tr.modes[0].rows()), m = tr.m;

    auto coef = [&](size_t i, int k, int s) {
        double v = tr.modes[i](k, s);
        return k == 0 ? v - tr.steady[s] : v;
    };

    ac.amplitudes.assign(K, 0.0);
    for (size_t i = first; i < tr.t.size(); ++i)
        for (int k = 0; k < K; ++k)
            for (int s = 0; s < m; ++s) ac.amplitudes[k] = std::max(ac.amplitudes[k], std::abs(coef(i, k, s)));
    double amax = *std::max_element(ac.amplitudes.begin(), ac.amplitudes.end());
    std::vector<int> active;
    for (int k = 0; k < K; ++k)
        if (ac.amplitudes[k] > o.active_abs && ac.amplitudes[k] > o.active_rel * amax) active.push_back(k);
    if (active.empty()) {
        ac.kind = AttractorKind::HomogeneousSteady;
        return ac;
    }
    bool inhom = false;
    double best = 0;
    for (int k : active)
        if (k > 0) {
            inhom = true;
            if (ac.amplitudes[k] > best) {
                best = ac.amplitudes[k];
                ac.dominant_mode = k;
            }
        }
    if (inhom) {
        double sum = 0;
        for (size_t i = first; i < tr.t.size(); ++i) sum += coef(i, ac.dominant_mode, 0);
        ac.signed_mode_amplitude = sum / n;
    }

    // temporal test on the active signals
    bool periodic = false, ambiguous = false;
    std::vector<double> sig(n);
    fftw_complex* out = nullptr;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> g(planner_mutex());
        out = fftw_alloc_complex(n / 2 + 1);
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), sig.data(), out, FFTW_ESTIMATE);
    }
    for (int k : active)
        for (int s = 0; s < m; ++s) {
            // remove a linear trend so slow drifts do not read as oscillation
            double st = 0, sy = 0, stt = 0, sty = 0;
            for (size_t i = 0; i < n; ++i) {
                double t = static_cast<double>(i), y = coef(first + i, k, s);
                st += t;
                sy += y;
                stt += t * t;
                sty += t * y;
            }
            double slope = (n * sty - st * sy) / (n * stt - st * st), icpt = (sy - slope * st) / n;
            double lo = INFINITY, hi = -INFINITY;
            for (size_t i = 0; i < n; ++i) {
                sig[i] = coef(first + i, k, s) - icpt - slope * i;
                lo = std::min(lo, sig[i]);
                hi = std::max(hi, sig[i]);
            }
            double osc = 0.5 * (hi - lo);
            if (osc <= o.active_abs) continue;
            fftw_execute(plan);
            std::vector<double> pw(n / 2);
            for (size_t q = 1; q <= n / 2; ++q) pw[q - 1] = out[q][0] * out[q][0] + out[q][1] * out[q][1];
            size_t qmax = std::max_element(pw.begin(), pw.end()) - pw.begin() + 1;
            double floor = std::max(median(pw), 1e-300);
            double ratio = pw[qmax - 1] / floor;
            if (osc > ac.oscillation) {
                ac.oscillation = osc;
                ac.peak_ratio = ratio;
                ac.frequency = qmax / (n * dt_rec);
            }
            // fewer than 4 cycles in the window is drift, not oscillation
            if (qmax < 4) continue;
            // envelope over the first and last quarter of the window: a decaying ring-down is not an orbit
            const size_t qn = n / 4;
            auto half_range = [&](size_t b) {
                auto [lo_it, hi_it] = std::minmax_element(sig.begin() + b, sig.begin() + b + qn);
                return 0.5 * (*hi_it - *lo_it);
            };
            double early = half_range(0), late = half_range(n - qn);
            if (late <= o.active_abs) continue;
            if (late < o.decay * early) {
                ambiguous = true;
                continue;
            }
            if (ratio > o.peak_factor)
                periodic = true;
            else
                ambiguous = true;
        }
    {
        std::lock_guard<std::mutex> g(planner_mutex());
        fftw_destroy_plan(plan);
        fftw_free(out);
    }
    if (periodic)
        ac.kind = inhom ? AttractorKind::InhomogeneousPeriodic : AttractorKind::HomogeneousPeriodic;
    else if (ambiguous)
        ac.kind = AttractorKind::Unresolved;
    else
        ac.kind = inhom ? AttractorKind::InhomogeneousSteady : AttractorKind::HomogeneousSteady;
    return ac;
}

AttractorKind predicted_stable(const RegionReport& rr)
{
    for (const auto& ob : rr.objects) {
        if (ob.count == 0 || ob.index != 0) continue;
        bool steady = ob.name.find("steady") != std::string::npos;
        bool inhom = ob.name.find("non-homogeneous") != std::string::npos;
        if (steady) return inhom ? AttractorKind::InhomogeneousSteady : AttractorKind::HomogeneousSteady;
        return inhom ? AttractorKind::InhomogeneousPeriodic : AttractorKind::HomogeneousPeriodic;
    }
    return AttractorKind::Unresolved;
}

Scoreboard validate_predictions(const ParametricModel& pm, const CriticalPoint& cp, const EigenQuadruple& eig,
                                const NormalForm& nf, const AmplitudeSystem& sys, const SimConfig& sim,
                                const ValidateOptions& o)
{
    auto t0 = std::chrono::steady_clock::now();
    Scoreboard sb;
    sb.config = sim;
    sb.radius = o.radius;
    if (!pm.pde) fail("simulator", "InvalidConfig", "model has no simulation right-hand side");
    const bool case3 = sys.kind == "pitchfork" && sys.unfolding_case == "III";

    struct Job {
        size_t entry;
        SimConfig cfg;
        PdeSystem pde;
    };
    std::vector<Job> jobs;
    const double za = std::sqrt(std::abs(nf.coef.a111.real()));
    for (int region = 1; region <= 6; ++region) {
        for (int sidx = 0; sidx < o.samples_per_region; ++sidx) {
            Eigen::Vector2d alpha;
            const double frac = (sidx + 1.0) / (o.samples_per_region + 1.0);
            if (case3) {
                alpha = case3_sample(sys, region, o.radius, frac);
            } else {
                double ang = 2 * kPi * (region - 1 + frac) / 6;
                alpha = sys.eps_map.inverse() * Eigen::Vector2d(o.radius * std::cos(ang), o.radius * std::sin(ang));
            }
            RegionReport rr = region_inventory(sys, cp, alpha);
            ScoreEntry se;
            se.region = case3 ? "D" + std::to_string(region) : rr.label + std::to_string(region);
            se.alpha = alpha;
            se.raw = rr.raw;
            se.eps_radius = rr.eps.norm();
            se.predicted = predicted_stable(rr);
            sb.entries.push_back(se);
            const size_t ei = sb.entries.size() - 1;
            PdeSystem pde = pm.pde(rr.raw[0], rr.raw[1]);

            // pairs are probed with opposite mode-k1 biases at the predicted planar amplitude
            double zamp = 0;
            for (const auto& q : rr.equilibria)
                if (q.morse == 0 && q.count == 2) zamp = q.z;
            if (zamp > 0 && za > 0) {
                for (int sign : {1, -1}) {
                    SimConfig c = sim;
                    c.seed = sim.seed + 10 * region + 100 * sidx + (sign > 0 ? 1 : 2);
                    c.bias_mode = nf.k1;
                    c.bias = eig.phi1.real().cast<cd>() * (sign * o.bias_scale * zamp / za);
                    jobs.push_back({ei, c, pde});
                    sb.entries[ei].starts.push_back(sign > 0 ? "+bias" : "-bias");
                }
            } else {
                SimConfig c = sim;
                c.seed = sim.seed + 10 * region + 100 * sidx;
                jobs.push_back({ei, c, pde});
                sb.entries[ei].starts.push_back("noise");
            }
        }
    }

    std::vector<AttractorClass> results(jobs.size());
    auto run = [&](size_t i) {
        try {
            Trajectory tr = integrate(jobs[i].pde, jobs[i].cfg);
            ClassifyOptions co;
            co.transient = jobs[i].cfg.transient;
            results[i] = classify_attractor(tr, co);
        } catch (const Error&) {
            results[i] = AttractorClass{};
        }
    };
    if (o.parallel) {
        std::vector<std::future<void>> fut;
        for (size_t i = 0; i < jobs.size(); ++i) fut.push_back(std::async(std::launch::async, run, i));
        for (auto& f : fut) f.get();
    } else {
        for (size_t i = 0; i < jobs.size(); ++i) run(i);
    }
    for (size_t i = 0; i < jobs.size(); ++i) sb.entries[jobs[i].entry].observed.push_back(results[i]);

    for (auto& e : sb.entries) {
        bool ok = !e.observed.empty();
        for (const auto& a : e.observed) ok = ok && a.kind == e.predicted;
        if (ok && e.observed.size() == 2)
            ok = e.observed[0].signed_mode_amplitude * e.observed[1].signed_mode_amplitude < 0;
        e.pass = ok;
        sb.passed += ok;
        ++sb.total;
    }
    sb.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sb;
}

std::string modes_csv(const Trajectory& tr)
{
    std::ostringstream os;
    os.precision(10);
    os << "t";
    const int K = tr.modes.empty() ? 0 : static_cast<int>(tr.modes[0].rows());
    for (int s = 0; s < tr.m; ++s)
        for (int k = 0; k < K; ++k) os << ",s" << s << "_k" << k;
    os << "\n";
    for (size_t i = 0; i < tr.t.size(); ++i) {
        os << tr.t[i];
        for (int s = 0; s < tr.m; ++s)
            for (int k = 0; k < K; ++k) os << "," << tr.modes[i](k, s);
        os << "\n";
    }
    return os.str();
}

std::string snapshots_csv(const Trajectory& tr)
{
    std::ostringstream os;
    os.precision(10);
    os << "t,species";
    for (double x : tr.grid()) os << ",x=" << x;
    os << "\n";
    for (size_t i = 0; i < tr.snap_t.size(); ++i)
        for (int s = 0; s < tr.m; ++s) {
            os << tr.snap_t[i] << "," << s;
            for (int j = 0; j < tr.N; ++j) os << "," << tr.snapshots[i](j, s);
            os << "\n";
        }
    return os.str();
}

} // namespace th
