#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "oht/distribution.hpp"
#include "oht/fixed_tests.hpp"
#include "oht/hypothesis.hpp"
#include "oht/rng.hpp"
#include "oht/scoring.hpp"
#include "oht/seq_tests.hpp"
#include "oht/subset_scores.hpp"

namespace oht {

enum class TestKind { FixKnown, FixUnknown, Li, Zhou, SeqKnown, SeqUnknown, DiaoKnown, DiaoUnknown };

inline bool is_sequential(TestKind k) {
    return k == TestKind::SeqKnown || k == TestKind::SeqUnknown || k == TestKind::DiaoKnown ||
           k == TestKind::DiaoUnknown;
}

inline bool knows_outlier_count(TestKind k) {
    return k == TestKind::FixKnown || k == TestKind::Li || k == TestKind::SeqKnown || k == TestKind::DiaoKnown;
}

struct TestSpec {
    TestKind kind = TestKind::FixKnown;
    ScoringFunction scoring = ScoringFunction::GJS;
    std::uint32_t t = 0;        // outlier count for known-count tests
    std::uint32_t T = 0;        // upper bound for the exhaustive unknown-count tests
    double lambda = 0.0;        // threshold for FixUnknown / Zhou
    std::uint64_t enum_cap = kDefaultEnumCap;
};

struct TrialSetup {
    std::uint32_t M = 0;
    Hypothesis truth = Hypothesis::no_outlier();
    Distribution p_n;
    Distribution p_a;
    std::optional<std::uint32_t> fixed_n;
    std::optional<SeqTestConfig> seq_cfg;
    std::uint64_t trials = 0;
    std::uint64_t base_seed = 0;

    void validate() const {
        if (M < 3) throw std::invalid_argument("need at least 3 sequences");
        check_same_alphabet(p_n, p_a);
        if (fixed_n.has_value() == seq_cfg.has_value())
            throw std::invalid_argument("exactly one of fixed_n and seq_cfg must be set");
        if (fixed_n && *fixed_n == 0) throw std::invalid_argument("fixed_n must be positive");
        if (seq_cfg) seq_cfg->validate();
        if (!truth.is_no_outlier()) {
            const auto& b = truth.outliers();
            if (b.size() > max_known_outliers(M) || b.back() >= M)
                throw std::invalid_argument("truth outlier set invalid for M");
        }
        if (trials == 0) throw std::invalid_argument("trials must be positive");
    }

    const Distribution& source(std::uint32_t i) const {
        if (!truth.is_no_outlier()) {
            const auto& b = truth.outliers();
            if (std::binary_search(b.begin(), b.end(), i)) return p_a;
        }
        return p_n;
    }
};

struct EstimateResult {
    double p_mis = std::numeric_limits<double>::quiet_NaN();
    double se_mis = std::numeric_limits<double>::quiet_NaN();
    double p_fr = std::numeric_limits<double>::quiet_NaN();
    double se_fr = std::numeric_limits<double>::quiet_NaN();
    double p_fa = std::numeric_limits<double>::quiet_NaN();
    double se_fa = std::numeric_limits<double>::quiet_NaN();
    double mean_tau = std::numeric_limits<double>::quiet_NaN();
    double se_tau = std::numeric_limits<double>::quiet_NaN();
    double capped_fraction = 0.0;
    std::uint64_t trials_run = 0;
    bool reliability_warning = false;
};

struct RuntimeStat {
    std::uint64_t median_ns_per_trial = 0;
    std::uint64_t p90_ns_per_trial = 0;
    std::uint64_t trials_timed = 0;
};

// Unbounded i.i.d. symbol source for the sequential tests. Column k of
// sequence i depends only on (base_seed, trial_index, i, k), so any prefix
// matches the fixed-length generator and replays are exact.
class IidStream {
  public:
    IidStream(const TrialSetup& setup, std::uint64_t trial_index) : setup_(&setup) {
        seeds_.reserve(setup.M);
        for (std::uint32_t i = 0; i < setup.M; ++i) seeds_.push_back(derive_seed(setup.base_seed, trial_index, i));
    }

    std::uint32_t num_sequences() const { return setup_->M; }
    std::uint32_t alphabet_size() const { return setup_->p_n.alphabet_size(); }

    void next_column(std::span<std::uint32_t> out) {
        for (std::uint32_t i = 0; i < setup_->M; ++i)
            out[i] = sample_symbol(setup_->source(i), to_unit(SplitMix64::at(seeds_[i], k_)));
        ++k_;
    }

  private:
    const TrialSetup* setup_;
    std::vector<std::uint64_t> seeds_;
    std::uint64_t k_ = 0;
};

// Full sequences for one fixed-length trial.
inline SequenceSet gen_sequences(const TrialSetup& setup, std::uint64_t trial_index) {
    setup.validate();
    if (!setup.fixed_n) throw std::invalid_argument("gen_sequences requires fixed-length mode");
    SequenceSet out;
    out.alphabet_size = setup.p_n.alphabet_size();
    out.sequences.resize(setup.M);
    for (std::uint32_t i = 0; i < setup.M; ++i) {
        const Distribution& src = setup.source(i);
        std::uint64_t seed = derive_seed(setup.base_seed, trial_index, i);
        auto& seq = out.sequences[i];
        seq.resize(*setup.fixed_n);
        for (std::uint32_t k = 0; k < *setup.fixed_n; ++k)
            seq[k] = sample_symbol(src, to_unit(SplitMix64::at(seed, k)));
    }
    return out;
}

namespace detail {

// Same draws as gen_sequences, accumulated straight into types.
inline std::vector<EmpiricalType> gen_types(const TrialSetup& setup, std::uint64_t trial_index) {
    const std::uint32_t ax = setup.p_n.alphabet_size();
    const std::uint32_t n = *setup.fixed_n;
    std::vector<EmpiricalType> types(setup.M);
    for (std::uint32_t i = 0; i < setup.M; ++i) {
        const Distribution& src = setup.source(i);
        std::uint64_t seed = derive_seed(setup.base_seed, trial_index, i);
        auto& ty = types[i];
        ty.counts.assign(ax, 0);
        ty.length = n;
        for (std::uint32_t k = 0; k < n; ++k) ++ty.counts[sample_symbol(src, to_unit(SplitMix64::at(seed, k)))];
    }
    return types;
}

struct TrialOutcome {
    Hypothesis decision = Hypothesis::no_outlier();
    std::uint64_t tau = 0;
    bool capped = false;
};

// Per-trial randomness for the test itself (reference draws) is seeded one
// index past the last sequence, so it never collides with data seeds.
inline std::uint64_t test_seed(const TrialSetup& setup, std::uint64_t trial_index) {
    return derive_seed(setup.base_seed, trial_index, setup.M);
}

inline TrialOutcome run_trial(const TestSpec& spec, const TrialSetup& setup, std::uint64_t trial_index) {
    TrialOutcome out;
    if (!is_sequential(spec.kind)) {
        auto types = gen_types(setup, trial_index);
        switch (spec.kind) {
            case TestKind::FixKnown: {
                auto rep = phi_fix_known(types, spec.t, spec.scoring,
                                         ReferenceChoice::seeded(test_seed(setup, trial_index)));
                out.decision = rep.decision;
                break;
            }
            case TestKind::FixUnknown: {
                auto rep = phi_fix_unknown(types, spec.lambda, spec.scoring,
                                           ReferenceChoice::seeded(test_seed(setup, trial_index)));
                out.decision = rep.decision;
                break;
            }
            case TestKind::Li:
                out.decision = phi_li(types, spec.t, spec.enum_cap);
                break;
            case TestKind::Zhou:
                out.decision = phi_zhou(types, spec.T, spec.lambda, spec.enum_cap);
                break;
            default: break;
        }
        out.tau = *setup.fixed_n;
        return out;
    }
    IidStream stream(setup, trial_index);
    const SeqTestConfig& cfg = *setup.seq_cfg;
    SeqTestReport rep;
    switch (spec.kind) {
        case TestKind::SeqKnown:
            rep = phi_seq_known(stream, spec.t, cfg, spec.scoring, test_seed(setup, trial_index));
            break;
        case TestKind::SeqUnknown:
            rep = phi_seq_unknown(stream, cfg, spec.scoring, test_seed(setup, trial_index));
            break;
        case TestKind::DiaoKnown:
            rep = phi_diao_known(stream, spec.t, cfg.n_min, cfg.k_max, spec.enum_cap);
            break;
        case TestKind::DiaoUnknown:
            rep = phi_diao_unknown(stream, spec.T, cfg.lambda1, cfg.lambda2, cfg.n_min, cfg.k_max, spec.enum_cap);
            break;
        default: break;
    }
    out.decision = rep.decision;
    out.tau = rep.stopping_time;
    out.capped = rep.capped;
    return out;
}

struct Tally {
    std::uint64_t mis = 0, fr = 0, fa = 0, capped = 0;
    std::uint64_t tau_sum = 0;
    std::uint64_t tau_sq_sum = 0;

    void add(const Tally& o) {
        mis += o.mis;
        fr += o.fr;
        fa += o.fa;
        capped += o.capped;
        tau_sum += o.tau_sum;
        tau_sq_sum += o.tau_sq_sum;
    }
};

inline void classify(const TrialOutcome& o, const Hypothesis& truth, Tally& tally) {
    if (truth.is_no_outlier()) {
        if (!o.decision.is_no_outlier()) ++tally.fa;
    } else if (o.decision.is_no_outlier()) {
        ++tally.fr;
    } else if (!(o.decision == truth)) {
        ++tally.mis;
    }
    if (o.capped) ++tally.capped;
    tally.tau_sum += o.tau;
    tally.tau_sq_sum += o.tau * o.tau;
}

inline double binom_se(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

}  // namespace detail

// Monte Carlo error estimation. Integer tallies merged in worker order make
// the result byte-identical for every thread count.
inline EstimateResult estimate(const TestSpec& spec, const TrialSetup& setup, std::uint32_t threads = 1) {
    setup.validate();
    if (is_sequential(spec.kind) != setup.seq_cfg.has_value())
        throw std::invalid_argument("test mode does not match setup mode");
    const std::uint64_t n = setup.trials;
    std::uint32_t nt = std::max<std::uint32_t>(1, threads);
    nt = static_cast<std::uint32_t>(std::min<std::uint64_t>(nt, n));
    std::vector<detail::Tally> parts(nt);
    auto worker = [&](std::uint32_t tid) {
        std::uint64_t lo = n * tid / nt, hi = n * (tid + 1) / nt;
        for (std::uint64_t tr = lo; tr < hi; ++tr)
            detail::classify(detail::run_trial(spec, setup, tr), setup.truth, parts[tid]);
    };
    if (nt == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (std::uint32_t tid = 0; tid < nt; ++tid) pool.emplace_back(worker, tid);
        for (auto& th : pool) th.join();
    }
    detail::Tally total;
    for (const auto& part : parts) total.add(part);

    EstimateResult res;
    res.trials_run = n;
    const double dn = static_cast<double>(n);
    if (setup.truth.is_no_outlier()) {
        res.p_fa = static_cast<double>(total.fa) / dn;
        res.se_fa = detail::binom_se(res.p_fa, dn);
    } else {
        res.p_mis = static_cast<double>(total.mis) / dn;
        res.se_mis = detail::binom_se(res.p_mis, dn);
        res.p_fr = static_cast<double>(total.fr) / dn;
        res.se_fr = detail::binom_se(res.p_fr, dn);
    }
    if (setup.seq_cfg) {
        const double mean = static_cast<double>(total.tau_sum) / dn;
        res.mean_tau = mean;
        if (n >= 2) {
            double num = static_cast<double>(total.tau_sq_sum) - dn * mean * mean;
            double var = std::max(0.0, num / (dn - 1.0));
            res.se_tau = std::sqrt(var / dn);
        } else {
            res.se_tau = 0.0;
        }
        res.capped_fraction = static_cast<double>(total.capped) / dn;
        res.reliability_warning = res.capped_fraction > 0.01;
    }
    return res;
}

// Wall-clock cost of the decision computation alone: data generation happens
// outside the timed region, sequential trials are replayed from materialized
// columns, and at least 100 warm-up runs are discarded. Single-threaded.
inline RuntimeStat measure_runtime(const TestSpec& spec, const TrialSetup& setup) {
    setup.validate();
    if (is_sequential(spec.kind) != setup.seq_cfg.has_value())
        throw std::invalid_argument("test mode does not match setup mode");
    using clock = std::chrono::steady_clock;
    const std::uint64_t n = setup.trials;
    // Folding every decision into a checksum read through a volatile at the
    // end keeps the optimizer from discarding the timed calls.
    std::uint64_t checksum = 0;
    auto fold = [&](const Hypothesis& h) { checksum += h.is_no_outlier() ? 1 : 2 + h.outliers().front(); };

    auto timed_fixed = [&](std::uint64_t tr) -> std::uint64_t {
        auto types = detail::gen_types(setup, tr);
        auto t0 = clock::now();
        Hypothesis decision = Hypothesis::no_outlier();
        switch (spec.kind) {
            case TestKind::FixKnown:
                decision =
                    phi_fix_known(types, spec.t, spec.scoring, ReferenceChoice::seeded(detail::test_seed(setup, tr)))
                        .decision;
                break;
            case TestKind::FixUnknown:
                decision = phi_fix_unknown(types, spec.lambda, spec.scoring,
                                           ReferenceChoice::seeded(detail::test_seed(setup, tr)))
                               .decision;
                break;
            case TestKind::Li:
                decision = phi_li(types, spec.t, spec.enum_cap);
                break;
            case TestKind::Zhou:
                decision = phi_zhou(types, spec.T, spec.lambda, spec.enum_cap);
                break;
            default: break;
        }
        auto t1 = clock::now();
        fold(decision);
        return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    };

    auto timed_seq = [&](std::uint64_t tr) -> std::uint64_t {
        // Untimed dry run finds the stopping time, then the exact columns are
        // materialized so the timed replay does no data generation.
        IidStream probe(setup, tr);
        const SeqTestConfig& cfg = *setup.seq_cfg;
        SeqTestReport rep;
        switch (spec.kind) {
            case TestKind::SeqKnown:
                rep = phi_seq_known(probe, spec.t, cfg, spec.scoring, detail::test_seed(setup, tr));
                break;
            case TestKind::SeqUnknown:
                rep = phi_seq_unknown(probe, cfg, spec.scoring, detail::test_seed(setup, tr));
                break;
            case TestKind::DiaoKnown:
                rep = phi_diao_known(probe, spec.t, cfg.n_min, cfg.k_max, spec.enum_cap);
                break;
            case TestKind::DiaoUnknown:
                rep = phi_diao_unknown(probe, spec.T, cfg.lambda1, cfg.lambda2, cfg.n_min, cfg.k_max, spec.enum_cap);
                break;
            default: break;
        }
        IidStream regen(setup, tr);
        MaterializedStream mat;
        mat.alphabet = setup.p_n.alphabet_size();
        mat.columns.assign(rep.stopping_time, std::vector<std::uint32_t>(setup.M));
        for (auto& col : mat.columns) regen.next_column(col);
        auto t0 = clock::now();
        SeqTestReport rerun;
        switch (spec.kind) {
            case TestKind::SeqKnown:
                rerun = phi_seq_known(mat, spec.t, cfg, spec.scoring, detail::test_seed(setup, tr));
                break;
            case TestKind::SeqUnknown:
                rerun = phi_seq_unknown(mat, cfg, spec.scoring, detail::test_seed(setup, tr));
                break;
            case TestKind::DiaoKnown:
                rerun = phi_diao_known(mat, spec.t, cfg.n_min, cfg.k_max, spec.enum_cap);
                break;
            case TestKind::DiaoUnknown:
                rerun = phi_diao_unknown(mat, spec.T, cfg.lambda1, cfg.lambda2, cfg.n_min, cfg.k_max, spec.enum_cap);
                break;
            default: break;
        }
        auto t1 = clock::now();
        fold(rerun.decision);
        return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    };

    auto run_one = [&](std::uint64_t tr) -> std::uint64_t { return setup.fixed_n ? timed_fixed(tr) : timed_seq(tr); };

    for (std::uint64_t w = 0; w < 100; ++w) run_one(w % n);
    std::vector<std::uint64_t> samples;
    samples.reserve(n);
    for (std::uint64_t tr = 0; tr < n; ++tr) samples.push_back(run_one(tr));
    volatile std::uint64_t sink = checksum;
    (void)sink;
    std::sort(samples.begin(), samples.end());
    RuntimeStat st;
    st.trials_timed = n;
    st.median_ns_per_trial = samples[(samples.size() - 1) / 2];
    st.p90_ns_per_trial = samples[std::min(samples.size() - 1, static_cast<std::size_t>(0.9 * samples.size()))];
    return st;
}

}  // namespace oht
