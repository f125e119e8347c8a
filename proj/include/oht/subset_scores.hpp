#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "oht/common.hpp"
#include "oht/distribution.hpp"
#include "oht/scoring.hpp"

namespace oht {

inline constexpr std::uint64_t kDefaultEnumCap = 10'000'000;

namespace detail {

inline void check_subset(std::size_t m, std::span<const std::uint32_t> b) {
    if (b.empty() || b.size() >= m) throw std::invalid_argument("subset score: need 0 < |B| < M");
    for (std::uint32_t i : b)
        if (i >= m) throw std::invalid_argument("subset score: index out of range");
}

// Mean empirical distribution of the masked group (equal sequence lengths,
// so this equals pooled counts over pooled length).
inline void group_mean(const std::vector<EmpiricalType>& types, std::span<const std::uint8_t> mask,
                       std::size_t group_size, std::vector<double>& mean) {
    const std::size_t ax = types.front().counts.size();
    mean.assign(ax, 0.0);
    for (std::size_t i = 0; i < types.size(); ++i) {
        if (!mask[i]) continue;
        for (std::size_t a = 0; a < ax; ++a) mean[a] += static_cast<double>(types[i].counts[a]);
    }
    const double denom = static_cast<double>(group_size) * static_cast<double>(types.front().length);
    for (std::size_t a = 0; a < ax; ++a) mean[a] /= denom;
}

inline ScoreValue sum_kl_to_mean(const std::vector<EmpiricalType>& types, std::span<const std::uint8_t> mask,
                                 std::span<const double> mean, std::vector<double>& scratch) {
    double s = 0.0;
    const std::size_t ax = mean.size();
    scratch.resize(ax);
    for (std::size_t i = 0; i < types.size(); ++i) {
        if (!mask[i]) continue;
        const double inv_n = 1.0 / static_cast<double>(types[i].length);
        for (std::size_t a = 0; a < ax; ++a) scratch[a] = static_cast<double>(types[i].counts[a]) * inv_n;
        s += kl(scratch, mean);
        if (s == kScoreInf) return kScoreInf;
    }
    return s;
}

// One-sided score used by g_li_score and both halves of s_b_score.
inline ScoreValue group_score(const std::vector<EmpiricalType>& types, std::span<const std::uint8_t> mask,
                              std::size_t group_size) {
    std::vector<double> mean, scratch;
    group_mean(types, mask, group_size, mean);
    return sum_kl_to_mean(types, mask, mean, scratch);
}

}  // namespace detail

// Homogeneity score of the non-B group: sum over j not in B of
// D(type_j || mean of non-B types). Zero iff all non-B types are equal.
inline ScoreValue g_li_score(const std::vector<EmpiricalType>& types, std::span<const std::uint32_t> b) {
    detail::check_subset(types.size(), b);
    std::vector<std::uint8_t> outside(types.size(), 1);
    for (std::uint32_t i : b) outside[i] = 0;
    return detail::group_score(types, outside, types.size() - b.size());
}

// Two-sided clustering score: within-B divergence sum to the B mean plus
// within-complement divergence sum to the complement mean. Zero iff each
// group is internally identical.
inline ScoreValue s_b_score(const std::vector<EmpiricalType>& types, std::span<const std::uint32_t> b) {
    detail::check_subset(types.size(), b);
    std::vector<std::uint8_t> inside(types.size(), 0);
    for (std::uint32_t i : b) inside[i] = 1;
    std::vector<std::uint8_t> outside(types.size());
    for (std::size_t i = 0; i < types.size(); ++i) outside[i] = inside[i] ^ 1;

    const ScoreValue s = detail::group_score(types, inside, b.size());
    if (s == kScoreInf) return kScoreInf;
    return s + detail::group_score(types, outside, types.size() - b.size());
}

// Visits all size-t subsets of [0, M) in lexicographic order of sorted index
// tuples. Visitor receives the current subset as a span.
template <class F>
void for_each_subset(std::uint32_t m, std::uint32_t t, F&& visit) {
    std::vector<std::uint32_t> idx(t);
    for (std::uint32_t i = 0; i < t; ++i) idx[i] = i;
    while (true) {
        visit(std::span<const std::uint32_t>(idx.data(), idx.size()));
        // advance to the next combination
        std::int64_t pos = static_cast<std::int64_t>(t) - 1;
        while (pos >= 0 && idx[pos] == m - t + pos) --pos;
        if (pos < 0) return;
        ++idx[pos];
        for (std::uint32_t j = static_cast<std::uint32_t>(pos) + 1; j < t; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace oht
