#include <doctest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "th/report.hpp"

using namespace th;

namespace {

Json full_report()
{
    const auto& f = thtest::schnak();
    Json r = new_report("classify");
    r["critical_point"] = to_json(f.cp);
    r["eigenvectors"] = to_json(f.eig);
    r["normal_form"] = to_json(f.nf);
    r["amplitude"] = to_json(f.sys);
    Json lines = Json::array();
    for (const auto& h : critical_lines(f.sys)) lines.push_back(to_json(h));
    r["lines"] = lines;
    r["region"] = to_json(region_inventory(f.sys, f.cp, case3_sample(f.sys, 4, 0.01)));
    return r;
}

} // namespace

TEST_CASE("critical point and coefficients survive a text round trip")
{
    const auto& f = thtest::schnak();
    Json back = parse_report(emit(full_report()));
    CriticalPoint cp = critical_point_from_json(back.at("critical_point"));
    CHECK(cp.alpha_star[0] == f.cp.alpha_star[0]);
    CHECK(cp.alpha_star[1] == f.cp.alpha_star[1]);
    CHECK(cp.omega0 == f.cp.omega0);
    CHECK(cp.omega_physical == f.cp.omega_physical);
    CHECK(cp.dlambda_k2[0] == f.cp.dlambda_k2[0]);
    CHECK(cp.k1 == 1);
    CHECK(cp.k2 == 0);
    Coefficients c = coefficients_from_json(back.at("normal_form").at("coefficients"));
    CHECK(c.a111 == f.nf.coef.a111);
    CHECK(c.a123 == f.nf.coef.a123);
    CHECK(c.b112 == f.nf.coef.b112);
    CHECK(c.b223 == f.nf.coef.b223);
    CHECK(back == parse_report(emit(back)));
}

TEST_CASE("report header")
{
    Json r = new_report("locate");
    CHECK(r.at("format") == "turinghopf-report");
    CHECK(r.at("version") == kReportVersion);
    CHECK(r.at("subcommand") == "locate");
    CHECK(r.at("metadata").contains("generated"));
    CHECK(!without_metadata(r).contains("metadata"));
}

TEST_CASE("reports are deterministic apart from metadata")
{
    std::string a = emit(without_metadata(full_report())), b = emit(without_metadata(full_report()));
    CHECK(a == b);
}

TEST_CASE("non-finite values are written as strings")
{
    HalfLine h;
    h.label = "L1";
    h.eps_dir = {0, 1};
    h.alpha_dir = {0, 1};
    h.slope = std::numeric_limits<double>::infinity();
    Json j = to_json(h);
    CHECK(j.at("slope") == "inf");
    CHECK(parse_report(emit(j)) == j);
}

TEST_CASE("malformed report text")
{
    CHECK_THROWS_WITH_AS(parse_report("{\"a\": "), doctest::Contains("ConfigParse"), Error);
}
