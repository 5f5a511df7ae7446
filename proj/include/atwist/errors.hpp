#pragma once

#include <stdexcept>
#include <string>

namespace atwist {

/// Base class for all errors raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation hit a quotient whose denominator is below the chart guard.
/// Samplers treat this as "pick another point", not as a hard failure.
struct DivisionNearZero : Error {
    using Error::Error;
};

/// ln() evaluated at (numerically) zero. Same resample treatment as division.
struct LnOfZero : Error {
    using Error::Error;
};

/// A randomized check exhausted its resample budget on singular points.
struct TooManySingularPoints : Error {
    using Error::Error;
};

/// Wirtinger derivative requested for a pair the chart does not declare.
struct NoSuchPair : Error {
    using Error::Error;
};

struct VarianceMismatch : Error {
    using Error::Error;
};

struct ChartMismatch : Error {
    using Error::Error;
};

/// Coboundary input grade outside the supported 0..3 range.
struct GradeUnsupported : Error {
    using Error::Error;
};

/// Curvature failed its C^inf-multiplicativity spot check; the structure the
/// derivative was built on is broken (or there is a bug upstream).
struct NotTensorial : Error {
    using Error::Error;
};

/// Certificate has no connection potential but one is required.
struct MissingPotential : Error {
    using Error::Error;
};

/// Generator values are pointwise linearly dependent at a sample point.
struct DegenerateGenerators : Error {
    using Error::Error;
};

/// A CLI subcommand needs a manifest block that is absent.
class MissingBlock : public Error {
public:
    explicit MissingBlock(const std::string& block)
        : Error("missing manifest block [" + block + "]"), block_(block) {}
    const std::string& block() const { return block_; }

private:
    std::string block_;
};

enum class ParseErrorKind {
    Syntax,
    UnknownIdentifier,
    DuplicateComponent,
    IndexOutOfRange,
    CyclicScalarDefinition,
};

const char* to_string(ParseErrorKind kind);

/// Structured parse failure: kind + 1-based location + offending token.
class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, int line, int column, const std::string& token,
               const std::string& message);

    ParseErrorKind kind() const { return kind_; }
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& token() const { return token_; }

private:
    ParseErrorKind kind_;
    int line_;
    int column_;
    std::string token_;
};

} // namespace atwist
