#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "qkd/csbounds.hpp"
#include "qkd/lp.hpp"

namespace qkd::decoy {

/// How the gain constraints bind the observables to the yields.
/// General: two-sided inequalities with the lower statistics (leaky source).
/// DiscreteExact: adds the upper-statistics gain row (discrete randomization).
/// ThaExact: statistics known exactly and support-complete; equalities.
enum class GainMode { General, DiscreteExact, ThaExact };

using RefMatrix = std::array<std::vector<double>, 3>;  // [intensity][n]

/// Everything one linear program needs, for a fixed encoding.
struct DecoyInputs {
    int n_cut = 0;
    GainMode mode = GainMode::General;
    std::array<double, 3> gains{};        // Q per intensity (mu, nu, omega)
    std::array<double, 3> error_gains{};  // E*Q per intensity
    std::array<std::vector<double>, 3> p_lower;  // per intensity, n = 0..n_cut
    std::array<std::vector<double>, 3> p_upper;
    // squared-overlap lower bounds z[i][j][n] for the ordered pair (i, j)
    std::array<std::array<std::vector<double>, 3>, 3> z;

    void validate() const;
};

struct Target {
    int n = 1;
    int intensity = 0;  // 0 = mu, 1 = nu, 2 = omega
};

struct LpOutcome {
    double bound = 0.0;   // certified LP value (lower for yields, upper for errors)
    RefMatrix solution;   // full optimal vector, reusable as references
};

/// Lower-bounds the target yield (Eq.-(19)-style program).
LpOutcome solve_yield_lp(const DecoyInputs& in, Target target, const RefMatrix& refs);

/// Upper-bounds the target error probability (Eq.-(29)-style program).
LpOutcome solve_error_lp(const DecoyInputs& in, Target target, const RefMatrix& refs);

/// Reference policy: Monte Carlo restarts at a cold start, warm start from the
/// previous solution otherwise, then a fixed-point polish on the incumbent.
struct ReferencePolicy {
    int restarts = 50;     // cold-start Monte Carlo draws
    int polish_iters = 2;  // re-solves at the incumbent solution
};

LpOutcome solve_yield_best(const DecoyInputs& in, Target target,
                           const RefMatrix* warm, const ReferencePolicy& policy,
                           std::mt19937_64& rng);
LpOutcome solve_error_best(const DecoyInputs& in, Target target,
                           const RefMatrix* warm, const ReferencePolicy& policy,
                           std::mt19937_64& rng);

/// Per-basis combination of per-encoding LP outputs.
struct BoundSet {
    double yield_lower = 0.0;   // min over encodings
    double xi_upper = 0.0;      // max over encodings
    double bit_error_upper = 1.0;  // min(1, xi_upper / yield_lower)
};

BoundSet combine_bounds(const std::vector<double>& yield_lower_per_encoding,
                        const std::vector<double>& xi_upper_per_encoding);

/// Uniform random reference matrix, clamped away from the tangent poles.
RefMatrix random_references(int n_cut, std::mt19937_64& rng);

}  // namespace qkd::decoy
