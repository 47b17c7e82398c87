#include "arqsched/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "arqsched/error.hpp"

namespace arqsched {

double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Vec3 row_times(const Vec3& row, const Mat3& m) {
    Vec3 out{};
    for (int j = 0; j < 3; ++j) {
        out[j] = row[0] * m[0][j] + row[1] * m[1][j] + row[2] * m[2][j];
    }
    return out;
}

Vec3 times_col(const Mat3& m, const Vec3& col) {
    return {dot(m[0], col), dot(m[1], col), dot(m[2], col)};
}

Mat3 multiply(const Mat3& a, const Mat3& b) {
    Mat3 out{};
    for (int i = 0; i < 3; ++i) out[i] = row_times(a[i], b);
    return out;
}

Mat3 identity3() {
    return {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
}

RewardVector RewardVector::make(double a1, double a2, double a3) {
    if (!std::isfinite(a1) || !std::isfinite(a2) || !std::isfinite(a3)) {
        throw Error(ErrorCode::InvalidReward, "reward entries must be finite");
    }
    if (a1 < 0.0 || a1 > a2 || a2 > a3) {
        std::ostringstream msg;
        msg << "reward must satisfy 0 <= a1 <= a2 <= a3, got (" << a1 << ", " << a2
            << ", " << a3 << ")";
        throw Error(ErrorCode::InvalidReward, msg.str());
    }
    return RewardVector({a1, a2, a3});
}

RewardVector RewardVector::normalized(double a2) { return make(0.0, a2, 1.0); }

namespace {

std::string entry_name(int i, int j) {
    return "p" + std::to_string(i + 1) + std::to_string(j + 1);
}

void check_stochastic(const Mat3& p, double tol) {
    for (int i = 0; i < 3; ++i) {
        double sum = 0.0;
        for (int j = 0; j < 3; ++j) {
            const double v = p[i][j];
            if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
                std::ostringstream msg;
                msg << entry_name(i, j) << " = " << v << " is outside [0, 1]";
                throw Error(ErrorCode::NotStochastic, msg.str());
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > tol) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "row " << (i + 1) << " sums to " << sum;
            throw Error(ErrorCode::NotStochastic, msg.str());
        }
    }
}

// Each chain (hi, mid, lo) must satisfy p[hi] >= p[mid] >= p[lo].
void check_ordering(const Mat3& p) {
    struct Pair {
        int gi, gj, li, lj;
    };
    constexpr Pair pairs[] = {
        {0, 0, 1, 0}, {1, 0, 2, 0},  // p11 >= p21 >= p31
        {1, 1, 0, 1}, {0, 1, 2, 1},  // p22 >= p12 >= p32
        {2, 2, 1, 2}, {1, 2, 0, 2},  // p33 >= p23 >= p13
    };
    for (const auto& c : pairs) {
        const double greater = p[c.gi][c.gj];
        const double lesser = p[c.li][c.lj];
        if (greater < lesser) {
            std::ostringstream msg;
            msg << entry_name(c.li, c.lj) << " <= " << entry_name(c.gi, c.gj) << " violated ("
                << lesser << " > " << greater << ")";
            throw Error(ErrorCode::OrderingViolation, msg.str());
        }
    }
}

void check_nondegenerate(const Mat3& p) {
    constexpr std::pair<int, int> must_be_positive[] = {
        {0, 0}, {1, 1}, {2, 2}, {0, 1}, {1, 0}, {1, 2},
    };
    for (auto [i, j] : must_be_positive) {
        if (!(p[i][j] > 0.0)) {
            throw Error(ErrorCode::DegenerateChain,
                        entry_name(i, j) + " must be positive for a positive steady state");
        }
    }
    if (p[2][0] == 0.0 && p[2][1] == 0.0) {
        throw Error(ErrorCode::DegenerateChain, "p31 and p32 are both zero: state 3 is absorbing");
    }
    const Mat3 sq = multiply(p, p);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (!(sq[i][j] > 0.0)) {
                throw Error(ErrorCode::DegenerateChain,
                            "P^2 is not entrywise positive at " + entry_name(i, j));
            }
        }
    }
}

double max_row_distance(const Mat3& m, const Vec3& target) {
    double worst = 0.0;
    for (const auto& r : m) {
        for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(r[j] - target[j]));
    }
    return worst;
}

}  // namespace

Vec3 solve_steady_state(const Mat3& p) {
    if (p[0] == p[1] && p[1] == p[2]) return p[0];

    // Rows 0..1: (P^T - I) pi = 0; row 2: sum(pi) = 1.
    std::array<std::array<double, 4>, 3> a{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 3; ++j) a[i][j] = p[j][i] - (i == j ? 1.0 : 0.0);
        a[i][3] = 0.0;
    }
    a[2] = {1.0, 1.0, 1.0, 1.0};

    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
        }
    }
    Vec3 pi{a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]};
    const double total = pi[0] + pi[1] + pi[2];
    for (auto& v : pi) v /= total;
    return pi;
}

TransitionMatrix TransitionMatrix::validate(const Mat3& raw, int lag_cap) {
    if (lag_cap < 1) throw Error(ErrorCode::InvalidConfig, "lag cap must be at least 1");
    check_stochastic(raw, kTolerances.algebraic);
    check_ordering(raw);
    check_nondegenerate(raw);

    TransitionMatrix m;
    m.p_ = raw;
    m.lag_cap_ = lag_cap;
    m.steady_ = solve_steady_state(raw);

    auto powers = std::make_shared<std::vector<Mat3>>();
    powers->reserve(static_cast<std::size_t>(lag_cap) + 1);
    powers->push_back(identity3());
    for (int k = 1; k <= lag_cap; ++k) {
        powers->push_back(multiply(powers->back(), raw));
        if (!m.mixing_lag_ &&
            max_row_distance(powers->back(), m.steady_) <= kTolerances.convergence) {
            m.mixing_lag_ = k;
        }
    }
    m.powers_ = std::move(powers);
    return m;
}

Mat3 TransitionMatrix::n_step(int k) const {
    if (k < 0) throw Error(ErrorCode::InvalidConfig, "matrix power must be nonnegative");
    if (k <= lag_cap_) return (*powers_)[static_cast<std::size_t>(k)];
    Mat3 out = (*powers_)[static_cast<std::size_t>(k % lag_cap_)];
    Mat3 base = (*powers_)[static_cast<std::size_t>(lag_cap_)];
    for (int q = k / lag_cap_; q > 0; q >>= 1) {
        if (q & 1) out = multiply(out, base);
        base = multiply(base, base);
    }
    return out;
}

int TransitionMatrix::regularity_exponent() const {
    for (const auto& r : p_) {
        for (double v : r) {
            if (!(v > 0.0)) return 2;
        }
    }
    return 1;
}

std::vector<Vec3> reward_curves(const TransitionMatrix& p, const RewardVector& alpha,
                                int k_max) {
    if (k_max < 0) throw Error(ErrorCode::InvalidConfig, "k_max must be nonnegative");
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(k_max) + 1);
    // p_i P^k alpha is component i of P^{k+1} alpha.
    Vec3 w = times_col(p.entries(), alpha.values());
    for (int k = 0; k <= k_max; ++k) {
        out.push_back(w);
        w = times_col(p.entries(), w);
    }
    return out;
}

std::vector<double> reward_curve(const TransitionMatrix& p, const RewardVector& alpha,
                                 int origin, int k_max) {
    if (origin < 0 || origin > 2) throw Error(ErrorCode::InvalidConfig, "origin must be 0..2");
    const auto all = reward_curves(p, alpha, k_max);
    std::vector<double> out;
    out.reserve(all.size());
    for (const auto& v : all) out.push_back(v[static_cast<std::size_t>(origin)]);
    return out;
}

double steady_reward(const TransitionMatrix& p, const RewardVector& alpha) {
    return dot(p.steady_state(), alpha.values());
}

double fresh_reward(const TransitionMatrix& p, const RewardVector& alpha, int state) {
    return dot(p.row(state), alpha.values());
}

}  // namespace arqsched
