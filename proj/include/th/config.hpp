#pragma once

#include <map>
#include <string>
#include <vector>

#include "th/model.hpp"

namespace th {

// Model file sections:
//   [model]      name, species = u, v, l, params = p1, p2   (or builtin = schnakenberg with a, b, d)
//   [lags]       r = 0, 1
//   [matrices]   D0, dD1, dD2, A<j>, dA1_<j>, dA2_<j> as nested lists, e.g. [[1, 0], [0, 2]]
//   [quadratic]  Q[u@1, v@1] = 0.5, -0.5      (output vector; symmetric fill)
//   [cubic]      C[u@1, u@1, v@1] = 1, -1
//   [run]        free-form defaults for the CLI (k1, k2, guess, ...)
// Q and C are the second and third derivatives, so the nonlinearity is Q(u, u)/2 + C(u, u, u)/6.
struct ModelSource {
    ParametricModel model;
    std::string origin;
    std::vector<std::string> species;
    std::map<std::string, std::string> run;
};

ModelSource parse_model_config(const std::string& text, const std::string& origin = "<text>");
ModelSource load_model_file(const std::string& path);
// builtin name (schnakenberg, optionally "schnakenberg:a,b,d") or a file path
ModelSource resolve_model(const std::string& name_or_path);

} // namespace th
