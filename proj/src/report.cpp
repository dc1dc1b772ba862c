#include "th/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace th {

namespace {

// Non-finite doubles have no JSON literal; they travel as strings.
Json num(double v)
{
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double num_of(const Json& j)
{
    if (j.is_number()) return j.get<double>();
    std::string s = j.get<std::string>();
    if (s == "nan") return NAN;
    return s == "inf" ? INFINITY : -INFINITY;
}

Json cnum(cd z)
{
    return Json::array({num(z.real()), num(z.imag())});
}

cd cnum_of(const Json& j)
{
    return {num_of(j.at(0)), num_of(j.at(1))};
}

template <class V>
Json cvec(const V& v)
{
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(cnum(v[i]));
    return a;
}

Json vec2(const Eigen::Vector2d& v)
{
    return Json::array({num(v[0]), num(v[1])});
}

} // namespace

Json to_json(const CriticalPoint& cp)
{
    Json j;
    j["model"] = cp.model;
    j["param_names"] = cp.param_names;
    j["alpha_star"] = Json::array({num(cp.alpha_star[0]), num(cp.alpha_star[1])});
    j["k1"] = cp.k1;
    j["k2"] = cp.k2;
    j["omega0"] = num(cp.omega0);
    j["omega_physical"] = num(cp.omega_physical);
    j["transversality"] = Json::array({num(cp.transversality[0]), num(cp.transversality[1])});
    j["dlambda_k1"] = Json::array({cnum(cp.dlambda_k1[0]), cnum(cp.dlambda_k1[1])});
    j["dlambda_k2"] = Json::array({cnum(cp.dlambda_k2[0]), cnum(cp.dlambda_k2[1])});
    j["residual_k1"] = num(cp.residual_k1);
    j["residual_k2"] = num(cp.residual_k2);
    j["iterations"] = cp.iterations;
    const Hygiene& h = cp.hygiene;
    j["hygiene"] = {{"ran", h.ran},
                    {"k_scan", h.k_scan},
                    {"box", Json::array({num(h.re0), num(h.re1), num(h.im_bound)})},
                    {"rightmost_other", num(h.rightmost_other)},
                    {"rightmost_k", h.rightmost_k},
                    {"rightmost_lambda", cnum(h.rightmost_lambda)},
                    {"roots_found", h.roots_found},
                    {"simplicity_k1", num(h.simplicity_k1)},
                    {"simplicity_k2", num(h.simplicity_k2)}};
    return j;
}

CriticalPoint critical_point_from_json(const Json& j)
{
    CriticalPoint cp;
    cp.model = j.at("model").get<std::string>();
    cp.param_names = j.at("param_names").get<std::array<std::string, 2>>();
    cp.alpha_star = {num_of(j.at("alpha_star")[0]), num_of(j.at("alpha_star")[1])};
    cp.k1 = j.at("k1").get<int>();
    cp.k2 = j.at("k2").get<int>();
    cp.omega0 = num_of(j.at("omega0"));
    cp.omega_physical = num_of(j.at("omega_physical"));
    cp.transversality = {num_of(j.at("transversality")[0]), num_of(j.at("transversality")[1])};
    cp.dlambda_k1 = {cnum_of(j.at("dlambda_k1")[0]), cnum_of(j.at("dlambda_k1")[1])};
    cp.dlambda_k2 = {cnum_of(j.at("dlambda_k2")[0]), cnum_of(j.at("dlambda_k2")[1])};
    cp.residual_k1 = num_of(j.at("residual_k1"));
    cp.residual_k2 = num_of(j.at("residual_k2"));
    cp.iterations = j.at("iterations").get<int>();
    const Json& h = j.at("hygiene");
    cp.hygiene.ran = h.at("ran").get<bool>();
    cp.hygiene.k_scan = h.at("k_scan").get<int>();
    cp.hygiene.re0 = num_of(h.at("box")[0]);
    cp.hygiene.re1 = num_of(h.at("box")[1]);
    cp.hygiene.im_bound = num_of(h.at("box")[2]);
    cp.hygiene.rightmost_other = num_of(h.at("rightmost_other"));
    cp.hygiene.rightmost_k = h.at("rightmost_k").get<int>();
    cp.hygiene.rightmost_lambda = cnum_of(h.at("rightmost_lambda"));
    cp.hygiene.roots_found = h.at("roots_found").get<int>();
    cp.hygiene.simplicity_k1 = num_of(h.at("simplicity_k1"));
    cp.hygiene.simplicity_k2 = num_of(h.at("simplicity_k2"));
    return cp;
}

Json to_json(const EigenQuadruple& e)
{
    Json j;
    j["k1"] = e.k1;
    j["k2"] = e.k2;
    j["omega0"] = num(e.omega0);
    j["phi1"] = cvec(e.phi1);
    j["phi2"] = cvec(e.phi2);
    j["psi1"] = cvec(e.psi1);
    j["psi2"] = cvec(e.psi2);
    j["kernel_residual"] = num(e.kernel_residual);
    j["normalization_residual"] = num(e.normalization_residual);
    return j;
}

Json to_json(const Coefficients& c)
{
    return Json{{"a11", cnum(c.a11)},   {"a23", cnum(c.a23)},   {"b12", cnum(c.b12)},  {"a111", cnum(c.a111)},
                {"a123", cnum(c.a123)}, {"b112", cnum(c.b112)}, {"b223", cnum(c.b223)}};
}

Coefficients coefficients_from_json(const Json& j)
{
    Coefficients c;
    c.a11 = cnum_of(j.at("a11"));
    c.a23 = cnum_of(j.at("a23"));
    c.b12 = cnum_of(j.at("b12"));
    c.a111 = cnum_of(j.at("a111"));
    c.a123 = cnum_of(j.at("a123"));
    c.b112 = cnum_of(j.at("b112"));
    c.b223 = cnum_of(j.at("b223"));
    return c;
}

Json to_json(const NormalForm& nf)
{
    Json j;
    j["k1"] = nf.k1;
    j["k2"] = nf.k2;
    j["case"] = nf.case_id;
    j["proposition"] = nf.proposition;
    j["omega0"] = num(nf.omega0);
    j["a1"] = Json::array({num(nf.a1[0]), num(nf.a1[1])});
    j["b2"] = Json::array({cnum(nf.b2[0]), cnum(nf.b2[1])});
    j["coefficients"] = to_json(nf.coef);
    j["coefficients_case_path"] = to_json(nf.coef_cases);
    j["dual_path_discrepancy"] = num(nf.dual_path_discrepancy);
    j["max_boundary_residual"] = num(nf.max_boundary_residual);
    j["max_interior_residual"] = num(nf.max_interior_residual);
    Json hs = Json::array();
    for (const auto& r : nf.h.records) {
        Json h;
        h["q"] = r.q;
        h["mode"] = r.mode;
        h["c"] = cnum(r.c);
        h["at_0"] = cvec(r.profile.at(0.0));
        h["E"] = cvec(r.E);
        h["projected"] = r.projected;
        h["boundary_residual"] = num(r.boundary_residual);
        h["interior_residual"] = num(r.interior_residual);
        hs.push_back(h);
    }
    j["h"] = hs;
    return j;
}

Json to_json(const AmplitudeSystem& s)
{
    Json j;
    j["kind"] = s.kind;
    j["k1"] = s.k1;
    j["k2"] = s.k2;
    j["eps_map"] = Json::array({vec2(s.eps_map.row(0).transpose()), vec2(s.eps_map.row(1).transpose())});
    if (s.kind == "transcritical") {
        j["a"] = num(s.a);
        j["b"] = num(s.b);
        j["c"] = num(s.c);
        j["d"] = num(s.d);
        j["e"] = num(s.e);
        j["f"] = num(s.f);
    } else {
        j["b0"] = num(s.b0);
        j["c0"] = num(s.c0);
        j["d0"] = num(s.d0);
    }
    j["time_reversed"] = s.time_reversed;
    j["unfolding_case"] = s.unfolding_case;
    return j;
}

Json to_json(const HalfLine& h)
{
    Json j;
    j["label"] = h.label;
    j["eps_dir"] = vec2(h.eps_dir);
    j["alpha_dir"] = vec2(h.alpha_dir);
    j["slope"] = num(h.slope);
    j["p1_side"] = h.p1_side;
    j["full_line"] = h.full_line;
    return j;
}

Json to_json(const RegionReport& r)
{
    Json j;
    j["label"] = r.label;
    j["eps"] = vec2(r.eps);
    j["alpha"] = vec2(r.alpha);
    j["raw"] = Json::array({num(r.raw[0]), num(r.raw[1])});
    Json eq = Json::array();
    for (const auto& q : r.equilibria)
        eq.push_back({{"label", q.label},
                      {"r", num(q.r)},
                      {"z", num(q.z)},
                      {"eig", Json::array({cnum(q.eig[0]), cnum(q.eig[1])})},
                      {"eig_original_time", Json::array({cnum(q.eig_original[0]), cnum(q.eig_original[1])})},
                      {"count", q.count},
                      {"index", q.morse},
                      {"object", q.object}});
    j["equilibria"] = eq;
    Json ob = Json::array();
    for (const auto& o : r.objects) ob.push_back({{"object", o.name}, {"count", o.count}, {"index", o.index}});
    j["objects"] = ob;
    return j;
}

Json to_json(const AttractorClass& a)
{
    Json j;
    j["kind"] = to_string(a.kind);
    j["dominant_mode"] = a.dominant_mode;
    j["frequency"] = num(a.frequency);
    j["oscillation"] = num(a.oscillation);
    j["peak_ratio"] = num(a.peak_ratio);
    j["signed_mode_amplitude"] = num(a.signed_mode_amplitude);
    Json amps = Json::array();
    for (double v : a.amplitudes) amps.push_back(num(v));
    j["amplitudes"] = amps;
    return j;
}

Json to_json(const Scoreboard& sb)
{
    Json j;
    j["passed"] = sb.passed;
    j["total"] = sb.total;
    j["eps_radius"] = num(sb.radius);
    j["config"] = {{"N", sb.config.N},
                   {"dt", num(sb.config.dt)},
                   {"T", num(sb.config.T)},
                   {"noise", num(sb.config.noise)},
                   {"transient", num(sb.config.transient)},
                   {"seed", sb.config.seed}};
    Json es = Json::array();
    for (const auto& e : sb.entries) {
        Json x;
        x["region"] = e.region;
        x["alpha"] = vec2(e.alpha);
        x["raw"] = Json::array({num(e.raw[0]), num(e.raw[1])});
        x["eps_radius"] = num(e.eps_radius);
        x["predicted"] = to_string(e.predicted);
        x["starts"] = e.starts;
        Json obs = Json::array();
        for (const auto& a : e.observed) obs.push_back(to_json(a));
        x["observed"] = obs;
        x["pass"] = e.pass;
        es.push_back(x);
    }
    j["entries"] = es;
    return j;
}

Json new_report(const std::string& subcommand)
{
    Json j;
    j["format"] = "turinghopf-report";
    j["version"] = kReportVersion;
    j["subcommand"] = subcommand;
    j["provenance"] = Json::object();
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    j["metadata"] = {{"generated", os.str()}};
    return j;
}

Json without_metadata(const Json& report)
{
    Json j = report;
    j.erase("metadata");
    return j;
}

// nlohmann writes the shortest representation that parses back to the same double.
std::string emit(const Json& j)
{
    return j.dump(2) + "\n";
}

Json parse_report(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        fail("cli", "ConfigParse", std::string("malformed report: ") + e.what());
    }
}

} // namespace th
