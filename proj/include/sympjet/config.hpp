#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

namespace sympjet {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

/// Global comparison tolerance. Every approximate comparison in the library
/// defaults to this value; it starts at 1e-9.
double tolerance();
void set_tolerance(double tol);

/// RAII override of the global tolerance, restored on scope exit.
class ScopedTolerance {
public:
    explicit ScopedTolerance(double tol) : saved_(tolerance()) { set_tolerance(tol); }
    ~ScopedTolerance() { set_tolerance(saved_); }
    ScopedTolerance(const ScopedTolerance&) = delete;
    ScopedTolerance& operator=(const ScopedTolerance&) = delete;

private:
    double saved_;
};

/// Global cap on the degree of attenuation factors (default 4096); the
/// effective cap of every call is the smaller of this and its argument.
int degree_cap();
void set_degree_cap(int cap);

class ScopedDegreeCap {
public:
    explicit ScopedDegreeCap(int cap) : saved_(degree_cap()) { set_degree_cap(cap); }
    ~ScopedDegreeCap() { set_degree_cap(saved_); }
    ScopedDegreeCap(const ScopedDegreeCap&) = delete;
    ScopedDegreeCap& operator=(const ScopedDegreeCap&) = delete;

private:
    int saved_;
};

enum class ErrorKind {
    schema,        // malformed input (exit 2)
    precondition,  // mathematical hypothesis violated (exit 3)
    numeric,       // internal tolerance failure (exit 4)
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, nlohmann::json diagnostic = {})
        : std::runtime_error(what), kind_(kind), diagnostic_(std::move(diagnostic)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const nlohmann::json& diagnostic() const noexcept { return diagnostic_; }

private:
    ErrorKind kind_;
    nlohmann::json diagnostic_;
};

struct SchemaError : Error {
    explicit SchemaError(const std::string& what, nlohmann::json d = {})
        : Error(ErrorKind::schema, what, std::move(d)) {}
};

struct PreconditionError : Error {
    explicit PreconditionError(const std::string& what, nlohmann::json d = {})
        : Error(ErrorKind::precondition, what, std::move(d)) {}
};

struct NumericError : Error {
    explicit NumericError(const std::string& what, nlohmann::json d = {})
        : Error(ErrorKind::numeric, what, std::move(d)) {}
};

/// Δ = (1,…,1) in ℂ^dim.
Vec delta_vector(int dim);

}  // namespace sympjet
