#ifndef LAMBDA_FORGE_ERROR_HPP
#define LAMBDA_FORGE_ERROR_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lf {

/* Malformed input: bad syntax, violated type invariants, wrong field.
 * The CLI maps these to exit status 1. */
class InvalidInput : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/* A well-formed request that the library declines to answer, either
 * because the answer would rely on a hypothesis that does not hold
 * (density, a failed precondition) or because a configured bound was
 * hit. The CLI maps these to exit status 2. */
class Refusal : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class BoundExceeded : public Refusal {
  public:
    using Refusal::Refusal;
};

class DensityRequired : public Refusal {
  public:
    using Refusal::Refusal;
};

class PreconditionFailed : public Refusal {
  public:
    using Refusal::Refusal;
};

/* Size limits for enumerations. LAMBDA_FORGE_BOUND=<n> sets both. */
struct Bounds {
    std::uint64_t residue_norm = 1'000'000;
    std::size_t monoid_size = 10'000;

    static Bounds from_env();
};

}  // namespace lf

#endif  // LAMBDA_FORGE_ERROR_HPP
