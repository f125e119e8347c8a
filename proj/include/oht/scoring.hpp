#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "oht/distribution.hpp"

namespace oht {

// Extended non-negative real. +inf is a first-class value (support violation
// in KL), greater than every finite score under the built-in comparisons.
using ScoreValue = double;

enum class ScoringFunction { KL, GJS };

inline constexpr double kScoreInf = std::numeric_limits<double>::infinity();

namespace detail {

// KL divergence of frequency/probability vectors, natural log.
// Conventions: 0*log(0/q) = 0; p > 0 with q = 0 gives +inf.
inline ScoreValue kl(std::span<const double> p, std::span<const double> q) {
    double s = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) {
        if (p[a] > 0.0) {
            if (q[a] <= 0.0) return kScoreInf;
            s += p[a] * std::log(p[a] / q[a]);
        }
    }
    return s < 0.0 ? 0.0 : s;  // clamp away -1e-17 round-off on near-equal inputs
}

// GJS divergence D(p||m) + D(q||m), m = (p+q)/2. The mixture and the two KL
// sums use commutative operations only, so gjs(p, q) == gjs(q, p) bitwise.
inline ScoreValue gjs(std::span<const double> p, std::span<const double> q) {
    double dp = 0.0, dq = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) {
        const double m = 0.5 * (p[a] + q[a]);
        if (p[a] > 0.0) dp += p[a] * std::log(p[a] / m);
        if (q[a] > 0.0) dq += q[a] * std::log(q[a] / m);
    }
    const double s = dp + dq;
    return s < 0.0 ? 0.0 : s;
}

inline ScoreValue score(ScoringFunction f, std::span<const double> p, std::span<const double> q) {
    return f == ScoringFunction::KL ? kl(p, q) : gjs(p, q);
}

}  // namespace detail

inline void check_same_alphabet(const Distribution& p, const Distribution& q) {
    if (p.alphabet_size() != q.alphabet_size()) throw std::invalid_argument("distributions on different alphabets");
}

inline ScoreValue kl_div(const Distribution& p, const Distribution& q) {
    check_same_alphabet(p, q);
    return detail::kl(p.probs(), q.probs());
}

inline ScoreValue gjs_div(const Distribution& p, const Distribution& q) {
    check_same_alphabet(p, q);
    return detail::gjs(p.probs(), q.probs());
}

inline ScoreValue score(ScoringFunction f, const Distribution& p, const Distribution& q) {
    check_same_alphabet(p, q);
    return detail::score(f, p.probs(), q.probs());
}

}  // namespace oht
