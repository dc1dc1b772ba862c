#include "th/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

namespace th {

namespace {

using nlohmann::json;

[[noreturn]] void parse_error(const std::string& origin, int line, const std::string& msg)
{
    std::ostringstream os;
    os << origin;
    if (line > 0) os << ":" << line;
    os << ": " << msg;
    fail("cli", "ConfigParse", os.str());
}

std::string trim(const std::string& s)
{
    size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(trim(tok));
    return out;
}

struct Entry {
    std::string value;
    int line = 0;
};

using Section = std::vector<std::pair<std::string, Entry>>;

const Entry* lookup(const Section& s, const std::string& key)
{
    for (const auto& kv : s)
        if (kv.first == key) return &kv.second;
    return nullptr;
}

double number(const std::string& origin, const Entry& e)
{
    try {
        size_t pos = 0;
        double v = std::stod(e.value, &pos);
        if (trim(e.value.substr(pos)).empty()) return v;
    } catch (const std::exception&) {
    }
    parse_error(origin, e.line, "expected a number, got '" + e.value + "'");
}

std::vector<double> numbers(const std::string& origin, const Entry& e)
{
    std::vector<double> out;
    for (const auto& t : split_list(e.value)) out.push_back(number(origin, Entry{t, e.line}));
    return out;
}

RMat matrix(const std::string& origin, const Entry& e, int m)
{
    json j;
    try {
        j = json::parse(e.value);
    } catch (const json::exception&) {
        parse_error(origin, e.line, "malformed matrix '" + e.value + "'");
    }
    if (!j.is_array() || static_cast<int>(j.size()) != m) parse_error(origin, e.line, "matrix must have m rows");
    RMat M(m, m);
    for (int r = 0; r < m; ++r) {
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != m)
            parse_error(origin, e.line, "matrix must have m columns");
        for (int c = 0; c < m; ++c) {
            if (!j[r][c].is_number()) parse_error(origin, e.line, "matrix entries must be numbers");
            M(r, c) = j[r][c].get<double>();
        }
    }
    return M;
}

} // namespace

ModelSource parse_model_config(const std::string& text, const std::string& origin)
{
    std::map<std::string, Section> sections;
    std::string current;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos) {
            current = trim(line.substr(1, line.size() - 2));
            static const std::vector<std::string> known{"model", "lags", "matrices", "quadratic", "cubic", "run"};
            if (std::find(known.begin(), known.end(), current) == known.end())
                parse_error(origin, lineno, "unknown section [" + current + "]");
            sections[current];
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) parse_error(origin, lineno, "expected key = value");
        if (current.empty()) parse_error(origin, lineno, "entry outside a section");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) parse_error(origin, lineno, "empty key or value");
        if (lookup(sections[current], key)) parse_error(origin, lineno, "duplicate key '" + key + "'");
        sections[current].push_back({key, Entry{value, lineno}});
    }

    ModelSource src;
    src.origin = origin;
    for (const auto& kv : sections["run"]) src.run[kv.first] = kv.second.value;

    const Section& model = sections["model"];
    if (const Entry* b = lookup(model, "builtin")) {
        if (b->value != "schnakenberg") parse_error(origin, b->line, "unknown builtin '" + b->value + "'");
        double a = 1, bb = 2, d = 4;
        if (const Entry* e = lookup(model, "a")) a = number(origin, *e);
        if (const Entry* e = lookup(model, "b")) bb = number(origin, *e);
        if (const Entry* e = lookup(model, "d")) d = number(origin, *e);
        src.model = schnakenberg(a, bb, d);
        src.species = {"u", "v"};
        return src;
    }

    const Entry* sp = lookup(model, "species");
    if (!sp) parse_error(origin, 0, "[model] needs 'species' or 'builtin'");
    src.species = split_list(sp->value);
    const int m = static_cast<int>(src.species.size());

    ModelSpec s;
    s.m = m;
    s.name = "external";
    if (const Entry* e = lookup(model, "name")) s.name = e->value;
    if (const Entry* e = lookup(model, "l")) s.l = number(origin, *e);
    std::array<std::string, 2> pnames{"p1", "p2"};
    if (const Entry* e = lookup(model, "params")) {
        auto v = split_list(e->value);
        if (v.size() != 2) parse_error(origin, e->line, "exactly two parameter names required");
        pnames = {v[0], v[1]};
    }

    const Entry* lr = lookup(sections["lags"], "r");
    s.lags = lr ? numbers(origin, *lr) : std::vector<double>{0.0};
    const int nl = s.nlags();

    const Section& mats = sections["matrices"];
    auto mat_or_zero = [&](const std::string& key, bool required) {
        const Entry* e = lookup(mats, key);
        if (!e) {
            if (required) parse_error(origin, 0, "[matrices] missing " + key);
            return RMat(RMat::Zero(m, m));
        }
        return matrix(origin, *e, m);
    };
    s.D0 = mat_or_zero("D0", true);
    s.dD[0] = mat_or_zero("dD1", false);
    s.dD[1] = mat_or_zero("dD2", false);
    for (int j = 0; j < nl; ++j) {
        s.A.push_back(mat_or_zero("A" + std::to_string(j), false));
        s.dA[0].push_back(mat_or_zero("dA1_" + std::to_string(j), false));
        s.dA[1].push_back(mat_or_zero("dA2_" + std::to_string(j), false));
    }
    for (const auto& kv : mats) {
        static const std::regex ok(R"(D0|dD[12]|A\d+|dA[12]_\d+)");
        if (!std::regex_match(kv.first, ok)) parse_error(origin, kv.second.line, "unknown matrix '" + kv.first + "'");
    }

    auto slot = [&](const std::string& tok, int line) {
        size_t at = tok.find('@');
        std::string name = trim(tok.substr(0, at));
        auto it = std::find(src.species.begin(), src.species.end(), name);
        if (it == src.species.end()) parse_error(origin, line, "unknown species '" + name + "'");
        int lag = 0;
        if (at != std::string::npos) {
            try {
                lag = std::stoi(tok.substr(at + 1));
            } catch (const std::exception&) {
                parse_error(origin, line, "bad lag index in '" + tok + "'");
            }
        }
        if (lag < 0 || lag >= nl) parse_error(origin, line, "lag index out of range in '" + tok + "'");
        return lag * m + static_cast<int>(it - src.species.begin());
    };
    auto parse_entry = [&](const std::string& key, const Entry& e, char head, size_t arity) {
        std::string k = key;
        if (k.size() < 3 || k[0] != head || k[1] != '[' || k.back() != ']')
            parse_error(origin, e.line, std::string("expected ") + head + "[...] entry");
        auto toks = split_list(k.substr(2, k.size() - 3));
        if (toks.size() != arity) parse_error(origin, e.line, "wrong number of slots");
        std::vector<int> slots;
        for (const auto& t : toks) slots.push_back(slot(t, e.line));
        auto v = numbers(origin, e);
        if (static_cast<int>(v.size()) != m) parse_error(origin, e.line, "value must list one entry per species");
        return std::make_pair(slots, v);
    };

    QuadTensor q(m, nl);
    for (const auto& kv : sections["quadratic"]) {
        auto [sl, v] = parse_entry(kv.first, kv.second, 'Q', 2);
        for (int o = 0; o < m; ++o) q.add_symmetric(o, sl[0], sl[1], v[o]);
    }
    CubicTensor c(m, nl);
    for (const auto& kv : sections["cubic"]) {
        auto [sl, v] = parse_entry(kv.first, kv.second, 'C', 3);
        for (int o = 0; o < m; ++o) c.add_symmetric(o, sl[0], sl[1], sl[2], v[o]);
    }
    s.Q = quadratic_form(std::move(q));
    s.C = cubic_form(std::move(c));

    try {
        validate(s, true);
    } catch (const Error& e) {
        parse_error(origin, 0, std::string("model rejected: ") + e.what());
    }
    src.model = affine_family(s, pnames);
    return src;
}

ModelSource load_model_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f) fail("cli", "ConfigParse", "cannot open model file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_model_config(ss.str(), path);
}

ModelSource resolve_model(const std::string& name)
{
    if (name.rfind("schnakenberg", 0) == 0 && !std::filesystem::exists(name)) {
        double a = 1, b = 2, d = 4;
        if (name.size() > 12) {
            if (name[12] != ':') fail("cli", "ConfigParse", "unknown model " + name);
            auto v = split_list(name.substr(13));
            if (v.size() != 3) fail("cli", "ConfigParse", "schnakenberg:a,b,d expects three numbers");
            try {
                a = std::stod(v[0]);
                b = std::stod(v[1]);
                d = std::stod(v[2]);
            } catch (const std::exception&) {
                fail("cli", "ConfigParse", "schnakenberg:a,b,d expects three numbers");
            }
        }
        ModelSource s;
        s.model = schnakenberg(a, b, d);
        s.origin = "builtin:" + name;
        s.species = {"u", "v"};
        return s;
    }
    return load_model_file(name);
}

} // namespace th
