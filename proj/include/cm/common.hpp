// Shared error types and small numeric helpers for the configuration-model
// verification toolkit.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cm {

// All toolkit errors derive from Error so callers can catch one base type.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Degree sequence sums to an odd number of half-edges; no perfect matching exists.
struct OddTotal : Error {
    explicit OddTotal(const std::string& msg) : Error(msg) {}
};

// A falling-factorial denominator ((N-1))_e is non-positive: the model is too
// small for the requested motif class to have a well-defined occupation probability.
struct DegenerateN : Error {
    explicit DegenerateN(const std::string& msg) : Error(msg) {}
};

// A switching stage was asked to act on a matching outside its domain.
struct PreconditionViolated : Error {
    explicit PreconditionViolated(const std::string& msg) : Error(msg) {}
};

// Exhaustive enumeration requested beyond the supported size cap.
struct TooLarge : Error {
    explicit TooLarge(const std::string& msg) : Error(msg) {}
};

// Rejection sampler hit its attempt cap without producing a simple graph.
struct AttemptsExhausted : Error {
    AttemptsExhausted(const std::string& msg, std::uint64_t n) : Error(msg), attempts(n) {}
    std::uint64_t attempts;
};

// Sampling from a model with zero half-edges.
struct EmptyModel : Error {
    explicit EmptyModel(const std::string& msg) : Error(msg) {}
};

// A moment or bound needs more half-edges than the sequence provides (denominators
// like N-7 or N-15 must be positive).
struct NeedsLargerN : Error {
    explicit NeedsLargerN(const std::string& msg) : Error(msg) {}
};

// A truncated series could not meet its declared error budget within the cap.
struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& msg) : Error(msg) {}
};

// A Poisson rate that must be strictly positive is not.
struct NonpositiveLambda : Error {
    explicit NonpositiveLambda(const std::string& msg) : Error(msg) {}
};

// Malformed input file / config / CLI usage.
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

} // namespace cm
