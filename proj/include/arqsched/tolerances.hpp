#pragma once

namespace arqsched {

/// Numerical tolerances shared by every module.
struct Tolerances {
    double algebraic = 1e-12;    // identities, orderings, row sums
    double convergence = 1e-9;   // P^k considered equal to the steady state
    double limit = 1e-6;         // curve limits checked at the lag cap
};

inline constexpr Tolerances kTolerances{};

inline constexpr int kDefaultLagCap = 64;

}  // namespace arqsched
