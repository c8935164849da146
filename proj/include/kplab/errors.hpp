#pragma once

#include <stdexcept>
#include <string>

namespace kplab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidGrid : public Error {
public:
    using Error::Error;
};

class NegativeXOrder : public Error {
public:
    using Error::Error;
};

/// Raised when a field has x-mean content that the antiderivative cannot accept.
class NonZeroXMean : public Error {
public:
    explicit NonZeroXMean(double max_mode)
        : Error("field has nonzero x-mean (max |f^(0,eta)| = " + std::to_string(max_mode) + ")"),
          max_mode_(max_mode) {}
    double max_mode() const { return max_mode_; }

private:
    double max_mode_;
};

class InvalidWeight : public Error {
public:
    using Error::Error;
};

class FactViolation : public Error {
public:
    FactViolation(std::string fact, double x)
        : Error("weight fact '" + fact + "' violated at x = " + std::to_string(x)),
          fact_(std::move(fact)), x_(x) {}
    const std::string& fact() const { return fact_; }
    double x() const { return x_; }

private:
    std::string fact_;
    double x_;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

class BlowupDetected : public Error {
public:
    explicit BlowupDetected(double t)
        : Error("solution blew up at t = " + std::to_string(t)), t_(t) {}
    double time() const { return t_; }

private:
    double t_;
};

class SpecInfeasible : public Error {
public:
    using Error::Error;
};

class HypothesisFailed : public Error {
public:
    using Error::Error;
};

class ProbeOutOfRange : public Error {
public:
    using Error::Error;
};

class InvalidOrder : public Error {
public:
    using Error::Error;
};

class BrokenChain : public Error {
public:
    using Error::Error;
};

class ReportIncomplete : public Error {
public:
    using Error::Error;
};

} // namespace kplab
