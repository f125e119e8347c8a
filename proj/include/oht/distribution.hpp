#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oht/rng.hpp"

namespace oht {

// Probability vector over a dense finite alphabet {0, ..., |X|-1}.
class Distribution {
  public:
    // Default: fair coin, so aggregate types holding a Distribution stay
    // default-constructible.
    Distribution() : probs_{0.5, 0.5} {}

    // Entries must be >= 0, sum to 1 within 1e-12, and |X| >= 2.
    explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
        if (probs_.size() < 2) throw std::invalid_argument("Distribution: alphabet size must be >= 2");
        double sum = 0.0;
        for (double p : probs_) {
            if (!(p >= 0.0)) throw std::invalid_argument("Distribution: negative or NaN entry");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("Distribution: entries sum to " + std::to_string(sum));
    }

    // Bern(p): probability p on symbol 1, 1-p on symbol 0.
    static Distribution bernoulli(double p) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli: p outside [0,1]");
        return Distribution(std::vector<double>{1.0 - p, p});
    }

    std::uint32_t alphabet_size() const { return static_cast<std::uint32_t>(probs_.size()); }
    double operator[](std::uint32_t a) const { return probs_[a]; }
    const std::vector<double>& probs() const { return probs_; }

  private:
    std::vector<double> probs_;
};

// Symbol counts of one observed sequence. counts/length is the empirical
// distribution (the type) of the sequence.
struct EmpiricalType {
    std::vector<std::uint64_t> counts;
    std::uint64_t length = 0;

    std::vector<double> freq() const {
        std::vector<double> f(counts.size());
        for (std::size_t a = 0; a < counts.size(); ++a) f[a] = static_cast<double>(counts[a]) / static_cast<double>(length);
        return f;
    }
};

inline EmpiricalType empirical_type(std::span<const std::uint32_t> seq, std::uint32_t alphabet_size) {
    if (seq.empty()) throw std::invalid_argument("empirical_type: empty sequence");
    EmpiricalType t;
    t.counts.assign(alphabet_size, 0);
    for (std::uint32_t s : seq) {
        if (s >= alphabet_size) throw std::invalid_argument("empirical_type: symbol out of range");
        ++t.counts[s];
    }
    t.length = seq.size();
    return t;
}

// M sequences of common length over one alphabet.
struct SequenceSet {
    std::vector<std::vector<std::uint32_t>> sequences;
    std::uint32_t alphabet_size = 0;

    std::uint32_t num_sequences() const { return static_cast<std::uint32_t>(sequences.size()); }
    std::uint64_t common_length() const { return sequences.empty() ? 0 : sequences.front().size(); }

    void validate() const {
        if (sequences.empty()) throw std::invalid_argument("SequenceSet: no sequences");
        if (alphabet_size < 2) throw std::invalid_argument("SequenceSet: alphabet size must be >= 2");
        const std::size_t n = sequences.front().size();
        if (n == 0) throw std::invalid_argument("SequenceSet: empty sequences");
        for (const auto& s : sequences) {
            if (s.size() != n) throw std::invalid_argument("SequenceSet: lengths differ");
            for (std::uint32_t x : s)
                if (x >= alphabet_size) throw std::invalid_argument("SequenceSet: symbol out of range");
        }
    }

    std::vector<EmpiricalType> types() const {
        std::vector<EmpiricalType> out;
        out.reserve(sequences.size());
        for (const auto& s : sequences) out.push_back(empirical_type(s, alphabet_size));
        return out;
    }
};

// Inverse-CDF draw: walks the cumulative sum, so the symbol is a deterministic
// function of (dist, u) independent of platform RNG facilities.
inline std::uint32_t sample_symbol(const Distribution& dist, double u) {
    double acc = 0.0;
    const std::uint32_t a_max = dist.alphabet_size() - 1;
    for (std::uint32_t a = 0; a < a_max; ++a) {
        acc += dist[a];
        if (u < acc) return a;
    }
    return a_max;
}

}  // namespace oht
