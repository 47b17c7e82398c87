#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "arqsched/tolerances.hpp"

namespace arqsched {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

double dot(const Vec3& a, const Vec3& b);
Vec3 row_times(const Vec3& row, const Mat3& m);  // row * m
Vec3 times_col(const Mat3& m, const Vec3& col);  // m * col
Mat3 multiply(const Mat3& a, const Mat3& b);
Mat3 identity3();

/// Nondecreasing, nonnegative per-state reward alpha = (a1, a2, a3).
class RewardVector {
public:
    /// General nondecreasing nonnegative vector; throws InvalidReward.
    static RewardVector make(double a1, double a2, double a3);
    /// The normalized form a1 = 0, a3 = 1.
    static RewardVector normalized(double a2);

    const Vec3& values() const noexcept { return alpha_; }
    double operator[](int state) const { return alpha_[state]; }

private:
    explicit RewardVector(const Vec3& a) : alpha_(a) {}
    Vec3 alpha_;
};

/// A validated 3x3 channel transition matrix.
///
/// Rows are indexed by the current state and columns by the next state, with
/// state 0 the weakest channel and state 2 the strongest. Construction enforces
/// row-stochasticity, positive correlation / smoothness ordering
///
///     p11 >= p21 >= p31,   p22 >= p12 >= p32,   p33 >= p23 >= p13
///
/// and the positivity constraints that guarantee a unique positive steady
/// state (p11, p22, p33, p12, p21, p23 > 0 and not p31 = p32 = 0), which
/// together make P^2 entrywise positive.
///
/// Matrix powers up to the lag cap are precomputed, so a TransitionMatrix is
/// immutable and safe to share between threads.
class TransitionMatrix {
public:
    /// Throws Error{NotStochastic | OrderingViolation | DegenerateChain}.
    static TransitionMatrix validate(const Mat3& raw, int lag_cap = kDefaultLagCap);

    const Mat3& entries() const noexcept { return p_; }
    double operator()(int from, int to) const { return p_[from][to]; }
    const Vec3& row(int state) const { return p_[state]; }

    const Vec3& steady_state() const noexcept { return steady_; }
    int lag_cap() const noexcept { return lag_cap_; }

    /// P^k. Cached for k <= lag_cap; computed on demand beyond.
    Mat3 n_step(int k) const;

    /// Smallest r in {1, 2} with P^r entrywise positive.
    int regularity_exponent() const;

    /// Smallest k <= lag_cap at which every row of P^k is within the
    /// convergence tolerance of the steady state, if any.
    std::optional<int> mixing_lag() const { return mixing_lag_; }

private:
    TransitionMatrix() = default;

    Mat3 p_{};
    Vec3 steady_{};
    int lag_cap_ = kDefaultLagCap;
    std::shared_ptr<const std::vector<Mat3>> powers_;
    std::optional<int> mixing_lag_;
};

/// Solves pi P = pi, sum(pi) = 1 directly (Gaussian elimination with partial
/// pivoting). Identical rows short-circuit to the row itself.
Vec3 solve_steady_state(const Mat3& p);

inline Vec3 steady_state(const TransitionMatrix& p) { return p.steady_state(); }
inline Mat3 n_step(const TransitionMatrix& p, int k) { return p.n_step(k); }
inline int is_regular(const TransitionMatrix& p) { return p.regularity_exponent(); }

/// r_i(k) = p_i P^k alpha for k = 0..k_max.
std::vector<double> reward_curve(const TransitionMatrix& p, const RewardVector& alpha,
                                 int origin, int k_max);

/// All three curves at once; element k holds (r_1(k), r_2(k), r_3(k)).
std::vector<Vec3> reward_curves(const TransitionMatrix& p, const RewardVector& alpha,
                                int k_max);

/// p_ss . alpha
double steady_reward(const TransitionMatrix& p, const RewardVector& alpha);
/// p_i . alpha, the reward expected one slot after observing state i.
double fresh_reward(const TransitionMatrix& p, const RewardVector& alpha, int state);

}  // namespace arqsched
