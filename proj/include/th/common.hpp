#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace th {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using CRow = Eigen::RowVectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr cd I_{0.0, 1.0};

// All library failures carry a kind tag (e.g. "BoundaryRoot") and the module
// that raised it, so the CLI can render provenance without string parsing.
class Error : public std::runtime_error {
public:
    Error(std::string module, std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), module_(std::move(module)), kind_(std::move(kind)) {}
    const std::string& module() const { return module_; }
    const std::string& kind() const { return kind_; }

private:
    std::string module_;
    std::string kind_;
};

[[noreturn]] inline void fail(const char* module, const char* kind, const std::string& msg)
{
    throw Error(module, kind, msg);
}

inline double sgn(double x) { return (x > 0) - (x < 0); }

} // namespace th
