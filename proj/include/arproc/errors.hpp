#pragma once

#include <stdexcept>
#include <string>

namespace arproc {

// Base class for every error the library raises on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonConvergence : Error {
    using Error::Error;
};

struct SingularMatrix : Error {
    using Error::Error;
};

// Adaptive quadrature gave up; carries the best estimate so callers can
// decide whether it is still usable.
struct ToleranceNotMet : Error {
    double estimate_re = 0.0;
    double estimate_im = 0.0;
    double error_bound = 0.0;
    ToleranceNotMet(const std::string& msg, double re, double im, double err)
        : Error(msg), estimate_re(re), estimate_im(im), error_bound(err) {}
};

struct DomainError : Error {
    using Error::Error;
};

struct NotRational : Error {
    using Error::Error;
};

struct PoleHit : Error {
    using Error::Error;
};

struct PoleCollision : Error {
    using Error::Error;
};

struct RootCountMismatch : Error {
    int expected = 0;
    int found = 0;
    RootCountMismatch(const std::string& msg, int exp, int got)
        : Error(msg), expected(exp), found(got) {}
};

struct SeriesBudgetExceeded : Error {
    using Error::Error;
};

struct StabilityError : Error {
    using Error::Error;
};

struct ExtrapolationMismatch : Error {
    using Error::Error;
};

struct SchemaError : Error {
    std::string field;
    SchemaError(const std::string& msg, std::string fld = {})
        : Error(msg), field(std::move(fld)) {}
};

struct GridTooCoarse : Error {
    using Error::Error;
};

struct UnsupportedParameter : Error {
    using Error::Error;
};

struct Inconclusive : Error {
    using Error::Error;
};

struct SEvalAtLambda : Error {
    using Error::Error;
};

}  // namespace arproc
