#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "oht/common.hpp"
#include "oht/distribution.hpp"
#include "oht/scoring.hpp"

namespace oht {

// Controls the simplex discretization used by the exponent scans.
// alphabet_size 0 means "infer from the input distributions".
struct SimplexGrid {
    std::uint32_t alphabet_size = 0;
    std::uint32_t resolution = 400;
    std::uint32_t refine_rounds = 3;

    void validate() const {
        if (resolution < 50) throw std::invalid_argument("grid resolution must be at least 50");
    }
};

struct ExponentValue {
    double value = kScoreInf;
    std::vector<std::vector<double>> minimizers;  // one probability vector per optimization variable
    double resolution_used = 0.0;                 // final lattice spacing
    bool feasible = false;
};

namespace detail {

// Largest alphabet admitted per scan family; beyond these the lattice blows up.
inline constexpr std::uint32_t kMaxAlphabetTriple = 4;
inline constexpr std::uint32_t kMaxAlphabetPair = 6;
inline constexpr std::uint64_t kScanWorkCap = 300'000'000ULL;

// All lattice points with coordinates i/r, enumerated in lexicographic order
// of the coordinate tuple. Row-major storage, d doubles per point.
struct Lattice {
    std::vector<double> pts;
    std::size_t n = 0;
    std::uint32_t d = 0;
    double h = 0.0;

    std::span<const double> operator[](std::size_t i) const { return {pts.data() + i * d, d}; }
};

inline std::uint64_t lattice_size(std::uint32_t d, std::uint32_t r) {
    return binomial_capped(static_cast<std::uint64_t>(r) + d - 1, d - 1, kScanWorkCap);
}

inline Lattice make_lattice(std::uint32_t d, std::uint32_t r) {
    Lattice lat;
    lat.d = d;
    lat.h = 1.0 / static_cast<double>(r);
    std::vector<std::uint32_t> c(d, 0);
    // Recursive composition enumeration keeps the point order lexicographic.
    auto rec = [&](auto&& self, std::uint32_t pos, std::uint32_t rem) -> void {
        if (pos + 1 == d) {
            c[pos] = rem;
            for (std::uint32_t a = 0; a < d; ++a) lat.pts.push_back(static_cast<double>(c[a]) * lat.h);
            return;
        }
        for (std::uint32_t v = 0; v <= rem; ++v) {
            c[pos] = v;
            self(self, pos + 1, rem - v);
        }
    };
    rec(rec, 0, r);
    lat.n = lat.pts.size() / d;
    return lat;
}

inline std::vector<double> kl_table(const Lattice& lat, const Distribution& p) {
    std::vector<double> out(lat.n);
    for (std::size_t i = 0; i < lat.n; ++i) out[i] = kl(lat[i], std::span<const double>(p.probs()));
    return out;
}

inline std::vector<double> f_table(const Lattice& lat, ScoringFunction f) {
    std::vector<double> out(lat.n * lat.n);
    for (std::size_t i = 0; i < lat.n; ++i)
        for (std::size_t j = 0; j < lat.n; ++j) out[i * lat.n + j] = score(f, lat[i], lat[j]);
    return out;
}

// Incumbent during a lattice pass: best value plus the lex-smallest index
// tuple achieving it. "found" covers the +inf-objective corner where a
// feasible point exists but every feasible objective is infinite.
struct Incumbent {
    double val = kScoreInf;
    std::array<std::size_t, 3> idx{0, 0, 0};
    bool found = false;

    void offer(double v, std::size_t i, std::size_t j, std::size_t k) {
        if (!found || v < val) {
            val = v;
            idx = {i, j, k};
            found = true;
        }
    }
};

inline bool idx_less(const std::array<std::size_t, 3>& a, const std::array<std::size_t, 3>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Order-sensitive merge: value first, then lexicographically smaller index
// tuple, so the reduction result is independent of the chunk partition.
inline void merge(Incumbent& into, const Incumbent& from) {
    if (!from.found) return;
    if (!into.found || from.val < into.val || (from.val == into.val && idx_less(from.idx, into.idx))) into = from;
}

struct ScanOutcome {
    Incumbent strict;  // violation <= 0
    Incumbent slack;   // violation <= one lattice spacing; seeds refinement
};

template <class Body>
inline ScanOutcome parallel_outer(std::size_t n, std::uint32_t threads, Body body) {
    std::uint32_t nt = std::max<std::uint32_t>(1, threads);
    nt = static_cast<std::uint32_t>(std::min<std::size_t>(nt, std::max<std::size_t>(1, n)));
    std::vector<ScanOutcome> parts(nt);
    if (nt == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i, parts[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (std::uint32_t tid = 0; tid < nt; ++tid) {
            pool.emplace_back([&, tid] {
                std::size_t lo = n * tid / nt, hi = n * (tid + 1) / nt;
                for (std::size_t i = lo; i < hi; ++i) body(i, parts[tid]);
            });
        }
        for (auto& th : pool) th.join();
    }
    ScanOutcome total;
    for (const auto& part : parts) {
        merge(total.strict, part.strict);
        merge(total.slack, part.slack);
    }
    return total;
}

// ---- continuous-point evaluation used by refinement ----

// A candidate tuple of probability vectors with its objective value.
struct RefPoint {
    double val = kScoreInf;
    std::vector<std::vector<double>> q;
    bool found = false;

    void offer(double v, const std::vector<const std::vector<double>*>& cand) {
        if (!found || v < val) {
            val = v;
            q.clear();
            for (const auto* c : cand) q.push_back(*c);
            found = true;
        }
    }
};

// Neighborhood of a point: offsets of {-4..4} * step on each free coordinate
// (the last coordinate absorbs the complement). Points leaving the simplex
// are dropped.
inline void add_neighborhood(std::vector<std::vector<double>>& out, const std::vector<double>& center, double step) {
    const std::size_t d = center.size();
    std::vector<int> off(d - 1, -4);
    for (;;) {
        std::vector<double> q(d, 0.0);
        double sum = 0.0;
        bool ok = true;
        for (std::size_t a = 0; a + 1 < d; ++a) {
            double v = center[a] + off[a] * step;
            if (v < -1e-9 || v > 1.0 + 1e-9) { ok = false; break; }
            v = std::clamp(v, 0.0, 1.0);
            q[a] = v;
            sum += v;
        }
        if (ok) {
            double last = 1.0 - sum;
            if (last >= -1e-9) {
                q[d - 1] = std::max(0.0, last);
                bool dup = false;
                for (const auto& e : out)
                    if (e == q) { dup = true; break; }
                if (!dup) out.push_back(q);
            }
        }
        std::size_t a = 0;
        for (; a + 1 < d; ++a) {
            if (off[a] < 4) { ++off[a]; break; }
            off[a] = -4;
        }
        if (a + 1 >= d) break;
    }
}

// Violation conventions: feasible iff violation <= 0; the slack pass admits
// violation <= slack. Objective is the sum of KL terms.
struct PairProblem {
    const Distribution* p1;
    const Distribution* p2;
    ScoringFunction f;
    double lambda;
    bool upper;  // true: f <= lambda; false: f >= lambda

    double objective(const std::vector<double>& q1, const std::vector<double>& q2) const {
        return kl(std::span<const double>(q1), std::span<const double>(p1->probs())) +
               kl(std::span<const double>(q2), std::span<const double>(p2->probs()));
    }
    double violation(const std::vector<double>& q1, const std::vector<double>& q2) const {
        double fv = score(f, std::span<const double>(q1), std::span<const double>(q2));
        return upper ? fv - lambda : lambda - fv;
    }
};

struct TripleProblem {
    const Distribution* p1;
    const Distribution* p2;
    ScoringFunction f;
    bool gamma_form;  // false: eta (obj q1:P1 q2,q3:P2, f(q1,q2)<=f(q3,q2));
                      // true: gamma (obj q1,q2:P1 q3:P2, f(q1,q3)<=f(q1,q2))

    double objective(const std::vector<double>& q1, const std::vector<double>& q2, const std::vector<double>& q3) const {
        const auto& pa = p1->probs();
        const auto& pb = p2->probs();
        if (!gamma_form)
            return kl(std::span<const double>(q1), std::span<const double>(pa)) +
                   kl(std::span<const double>(q2), std::span<const double>(pb)) +
                   kl(std::span<const double>(q3), std::span<const double>(pb));
        return kl(std::span<const double>(q1), std::span<const double>(pa)) +
               kl(std::span<const double>(q2), std::span<const double>(pa)) +
               kl(std::span<const double>(q3), std::span<const double>(pb));
    }
    double violation(const std::vector<double>& q1, const std::vector<double>& q2, const std::vector<double>& q3) const {
        if (!gamma_form)
            return score(f, std::span<const double>(q1), std::span<const double>(q2)) -
                   score(f, std::span<const double>(q3), std::span<const double>(q2));
        return score(f, std::span<const double>(q1), std::span<const double>(q3)) -
               score(f, std::span<const double>(q1), std::span<const double>(q2));
    }
};

// Shrinks the lattice spacing 4x per round around the best slack-feasible
// point (and the best strict point, when distinct), re-checking feasibility
// without slack before accepting a value. The reported value is always the
// slack-free re-check.
template <int NVars, class Problem>
inline ExponentValue refine(const Problem& prob, RefPoint strict, RefPoint center, double h, std::uint32_t rounds) {
    for (std::uint32_t round = 0; round < rounds; ++round) {
        const double step = h / 4.0;
        const RefPoint& seed = center.found ? center : strict;
        if (!seed.found) break;
        std::vector<std::vector<std::vector<double>>> cand(NVars);
        for (int v = 0; v < NVars; ++v) {
            add_neighborhood(cand[v], seed.q[v], step);
            if (strict.found && (!center.found || strict.q != center.q)) add_neighborhood(cand[v], strict.q[v], step);
        }
        RefPoint new_center;
        std::vector<const std::vector<double>*> pick(NVars);
        auto consider = [&] {
            double viol, obj;
            if constexpr (NVars == 2) {
                viol = prob.violation(*pick[0], *pick[1]);
                obj = prob.objective(*pick[0], *pick[1]);
            } else {
                viol = prob.violation(*pick[0], *pick[1], *pick[2]);
                obj = prob.objective(*pick[0], *pick[1], *pick[2]);
            }
            if (viol <= 0.0) strict.offer(obj, pick);
            if (viol <= step) new_center.offer(obj, pick);
        };
        if constexpr (NVars == 2) {
            for (const auto& a : cand[0])
                for (const auto& b : cand[1]) {
                    pick[0] = &a;
                    pick[1] = &b;
                    consider();
                }
        } else {
            for (const auto& a : cand[0])
                for (const auto& b : cand[1])
                    for (const auto& c : cand[2]) {
                        pick[0] = &a;
                        pick[1] = &b;
                        pick[2] = &c;
                        consider();
                    }
        }
        if (new_center.found) center = std::move(new_center);
        h = step;
    }
    ExponentValue out;
    out.resolution_used = h;
    out.feasible = strict.found;
    if (strict.found) {
        out.value = strict.val;
        out.minimizers = std::move(strict.q);
    }
    return out;
}

inline RefPoint to_ref(const Incumbent& inc, const Lattice& lat, int nvars) {
    RefPoint rp;
    if (!inc.found) return rp;
    rp.found = true;
    rp.val = inc.val;
    for (int v = 0; v < nvars; ++v) {
        auto pt = lat[inc.idx[static_cast<std::size_t>(v)]];
        rp.q.emplace_back(pt.begin(), pt.end());
    }
    return rp;
}

inline std::uint32_t resolve_alphabet(const SimplexGrid& grid, std::uint32_t from_inputs) {
    if (grid.alphabet_size != 0 && grid.alphabet_size != from_inputs)
        throw std::invalid_argument("grid alphabet_size disagrees with the input distributions");
    return from_inputs;
}

inline void check_pair_capacity(std::uint32_t ax, std::uint32_t r) {
    if (ax > kMaxAlphabetPair) throw capacity_error("alphabet too large for two-variable exponent scan");
    std::uint64_t n = lattice_size(ax, r);
    if (n > kScanWorkCap || n * n > kScanWorkCap)
        throw capacity_error("lattice too large for two-variable exponent scan; lower the resolution");
}

inline void check_triple_capacity(std::uint32_t ax, std::uint32_t r) {
    if (ax > kMaxAlphabetTriple) throw capacity_error("alphabet too large for three-variable exponent scan");
    std::uint64_t n = lattice_size(ax, r);
    if (n > kScanWorkCap || n * n * n > kScanWorkCap)
        throw capacity_error("lattice too large for three-variable exponent scan; lower the resolution");
}

inline ExponentValue pair_exponent(const Distribution& p1, const Distribution& p2, double lambda, ScoringFunction f,
                                   bool upper, const SimplexGrid& grid, std::uint32_t threads) {
    grid.validate();
    check_same_alphabet(p1, p2);
    const std::uint32_t ax = resolve_alphabet(grid, p1.alphabet_size());
    check_pair_capacity(ax, grid.resolution);
    const Lattice lat = make_lattice(ax, grid.resolution);
    const auto kl1 = kl_table(lat, p1);
    const auto kl2 = kl_table(lat, p2);
    const PairProblem prob{&p1, &p2, f, lambda, upper};

    ScanOutcome base;
    if (upper && lambda == 0.0) {
        // f(q,q) = 0 for both scoring functions, so the constraint set at
        // lambda = 0 is exactly the diagonal.
        for (std::size_t i = 0; i < lat.n; ++i) {
            double obj = kl1[i] + kl2[i];
            base.strict.offer(obj, i, i, 0);
            base.slack.offer(obj, i, i, 0);
        }
    } else {
        base = parallel_outer(lat.n, threads, [&](std::size_t i, ScanOutcome& acc) {
            auto qi = lat[i];
            const double ki = kl1[i];
            for (std::size_t j = 0; j < lat.n; ++j) {
                double obj = ki + kl2[j];
                if (acc.strict.found && obj >= acc.strict.val && acc.slack.found && obj >= acc.slack.val) continue;
                double fv = score(f, qi, lat[j]);
                double viol = upper ? fv - lambda : lambda - fv;
                if (viol <= 0.0) acc.strict.offer(obj, i, j, 0);
                if (viol <= lat.h) acc.slack.offer(obj, i, j, 0);
            }
        });
    }
    return refine<2>(prob, to_ref(base.strict, lat, 2), to_ref(base.slack, lat, 2), lat.h, grid.refine_rounds);
}

inline ExponentValue triple_exponent(const Distribution& p1, const Distribution& p2, ScoringFunction f,
                                     bool gamma_form, const SimplexGrid& grid, std::uint32_t threads) {
    grid.validate();
    check_same_alphabet(p1, p2);
    const std::uint32_t ax = resolve_alphabet(grid, p1.alphabet_size());
    check_triple_capacity(ax, grid.resolution);
    const Lattice lat = make_lattice(ax, grid.resolution);
    const auto klp1 = kl_table(lat, p1);
    const auto klp2 = kl_table(lat, p2);
    const auto ftab = f_table(lat, f);
    const std::size_t n = lat.n;
    const TripleProblem prob{&p1, &p2, f, gamma_form};

    // eta:   obj = D(q_i||P1) + D(q_j||P2) + D(q_k||P2), feasible iff F[i][j] <= F[k][j]
    // gamma: obj = D(q_i||P1) + D(q_j||P1) + D(q_k||P2), feasible iff F[i][k] <= F[i][j]
    const double* oa = klp1.data();
    const double* ob = gamma_form ? klp1.data() : klp2.data();
    const double* oc = klp2.data();
    const double h = lat.h;
    ScanOutcome base = parallel_outer(n, threads, [&](std::size_t i, ScanOutcome& acc) {
        for (std::size_t j = 0; j < n; ++j) {
            const double oij = oa[i] + ob[j];
            if (acc.strict.found && oij >= acc.strict.val && acc.slack.found && oij >= acc.slack.val) continue;
            const double fij = ftab[i * n + j];
            for (std::size_t k = 0; k < n; ++k) {
                double obj = oij + oc[k];
                if (acc.strict.found && obj >= acc.strict.val && acc.slack.found && obj >= acc.slack.val) continue;
                double viol = gamma_form ? ftab[i * n + k] - fij : fij - ftab[k * n + j];
                if (viol <= 0.0) acc.strict.offer(obj, i, j, k);
                if (viol <= h) acc.slack.offer(obj, i, j, k);
            }
        }
    });
    return refine<3>(prob, to_ref(base.strict, lat, 3), to_ref(base.slack, lat, 3), lat.h, grid.refine_rounds);
}

}  // namespace detail

// min D(Q1||P1) + D(Q2||P2) subject to f(Q1, Q2) <= lambda.
inline ExponentValue omega(const Distribution& p1, const Distribution& p2, double lambda, ScoringFunction f,
                           const SimplexGrid& grid = {}, std::uint32_t threads = 1) {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    return detail::pair_exponent(p1, p2, lambda, f, true, grid, threads);
}

// min D(Q1||P) + D(Q2||P) subject to f(Q1, Q2) >= lambda.
inline ExponentValue upsilon(const Distribution& p, double lambda, ScoringFunction f, const SimplexGrid& grid = {},
                             std::uint32_t threads = 1) {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    return detail::pair_exponent(p, p, lambda, f, false, grid, threads);
}

// min D(Q1||P1) + D(Q2||P2) + D(Q3||P2) subject to f(Q1, Q2) <= f(Q3, Q2).
inline ExponentValue eta(const Distribution& p1, const Distribution& p2, ScoringFunction f,
                         const SimplexGrid& grid = {}, std::uint32_t threads = 1) {
    return detail::triple_exponent(p1, p2, f, false, grid, threads);
}

// min D(Q1||P1) + D(Q2||P1) + D(Q3||P2) subject to f(Q1, Q3) <= f(Q1, Q2).
inline ExponentValue gamma_exp(const Distribution& p1, const Distribution& p2, ScoringFunction f,
                               const SimplexGrid& grid = {}, std::uint32_t threads = 1) {
    return detail::triple_exponent(p1, p2, f, true, grid, threads);
}

// Closed form: -2 ln sum_a sqrt(P1(a) P2(a)).
inline double renyi_half(const Distribution& p1, const Distribution& p2) {
    check_same_alphabet(p1, p2);
    double s = 0.0;
    for (std::uint32_t a = 0; a < p1.alphabet_size(); ++a) s += std::sqrt(p1[a] * p2[a]);
    if (s <= 0.0) return kScoreInf;
    return -2.0 * std::log(s);
}

enum class BoundKind {
    Thm1_mis,
    Thm2_mis,
    Thm3_mis,
    Thm3_fr,
    Thm3_fa,
    Thm4_mis,
    Thm4_fr,
    Thm4_fa,
};

inline std::string to_string(BoundKind k) {
    switch (k) {
        case BoundKind::Thm1_mis: return "Thm1_mis";
        case BoundKind::Thm2_mis: return "Thm2_mis";
        case BoundKind::Thm3_mis: return "Thm3_mis";
        case BoundKind::Thm3_fr: return "Thm3_fr";
        case BoundKind::Thm3_fa: return "Thm3_fa";
        case BoundKind::Thm4_mis: return "Thm4_mis";
        case BoundKind::Thm4_fr: return "Thm4_fr";
        case BoundKind::Thm4_fa: return "Thm4_fa";
    }
    return "?";
}

struct TheoremBound {
    BoundKind kind{};
    double value = kScoreInf;
    std::vector<std::pair<std::string, double>> components;
};

namespace detail {

inline double reduce_min(const std::vector<std::pair<std::string, double>>& comps) {
    double v = kScoreInf;
    for (const auto& c : comps) v = std::min(v, c.second);
    return v;
}

inline double reduce_max(const std::vector<std::pair<std::string, double>>& comps) {
    double v = -kScoreInf;
    for (const auto& c : comps) v = std::max(v, c.second);
    return v;
}

}  // namespace detail

// Error exponent guarantees for the four tests, assembled from the scan
// primitives. Kinds with a single threshold read it from lambda1.
inline TheoremBound theorem_bound(BoundKind kind, const Distribution& pn, const Distribution& pa, ScoringFunction f,
                                  double lambda1 = 0.0, double lambda2 = 0.0, const SimplexGrid& grid = {},
                                  std::uint32_t threads = 1) {
    TheoremBound out;
    out.kind = kind;
    auto& comps = out.components;
    switch (kind) {
        case BoundKind::Thm1_mis:
            comps.emplace_back("eta_pa_pn", eta(pa, pn, f, grid, threads).value);
            comps.emplace_back("eta_pn_pa", eta(pn, pa, f, grid, threads).value);
            out.value = detail::reduce_min(comps);
            break;
        case BoundKind::Thm2_mis:
            comps.emplace_back("omega_pn_pa_l1", omega(pn, pa, lambda1, f, grid, threads).value);
            comps.emplace_back("upsilon_pn_l2", upsilon(pn, lambda2, f, grid, threads).value);
            out.value = detail::reduce_min(comps);
            break;
        case BoundKind::Thm3_mis:
            comps.emplace_back("eta_pn_pa", eta(pn, pa, f, grid, threads).value);
            comps.emplace_back("eta_pa_pn", eta(pa, pn, f, grid, threads).value);
            comps.emplace_back("gamma_pa_pn", gamma_exp(pa, pn, f, grid, threads).value);
            comps.emplace_back("gamma_pn_pa", gamma_exp(pn, pa, f, grid, threads).value);
            out.value = detail::reduce_min(comps);
            break;
        case BoundKind::Thm3_fr:
            comps.emplace_back("omega_pa_pn_l", omega(pa, pn, lambda1, f, grid, threads).value);
            comps.emplace_back("omega_pn_pa_l", omega(pn, pa, lambda1, f, grid, threads).value);
            out.value = detail::reduce_max(comps);
            break;
        case BoundKind::Thm3_fa:
            comps.emplace_back("upsilon_pn_l", upsilon(pn, lambda1, f, grid, threads).value);
            out.value = comps.back().second;
            break;
        case BoundKind::Thm4_mis:
            comps.emplace_back("omega_pn_pa_l1", omega(pn, pa, lambda1, f, grid, threads).value);
            comps.emplace_back("omega_pa_pn_l1", omega(pa, pn, lambda1, f, grid, threads).value);
            comps.emplace_back("upsilon_pn_l2", upsilon(pn, lambda2, f, grid, threads).value);
            comps.emplace_back("upsilon_pa_l2", upsilon(pa, lambda2, f, grid, threads).value);
            out.value = detail::reduce_min(comps);
            break;
        case BoundKind::Thm4_fr:
            comps.emplace_back("omega_pa_pn_l1", omega(pa, pn, lambda1, f, grid, threads).value);
            comps.emplace_back("omega_pn_pa_l1", omega(pn, pa, lambda1, f, grid, threads).value);
            out.value = detail::reduce_max(comps);
            break;
        case BoundKind::Thm4_fa:
            comps.emplace_back("upsilon_pn_l2", upsilon(pn, lambda2, f, grid, threads).value);
            out.value = comps.back().second;
            break;
    }
    return out;
}

// Full misclassification guarantee of the exhaustive unknown-count test:
// the Thm3 components together with both fixed-threshold rejection terms.
inline TheoremBound thm3_full_min(const Distribution& pn, const Distribution& pa, ScoringFunction f, double lambda,
                                  const SimplexGrid& grid = {}, std::uint32_t threads = 1) {
    TheoremBound out = theorem_bound(BoundKind::Thm3_mis, pn, pa, f, 0.0, 0.0, grid, threads);
    out.components.emplace_back("omega_pa_pn_l", omega(pa, pn, lambda, f, grid, threads).value);
    out.components.emplace_back("omega_pn_pa_l", omega(pn, pa, lambda, f, grid, threads).value);
    out.value = detail::reduce_min(out.components);
    return out;
}

// (fixed-length exponent, sequential exponent) for tests that know the
// outlier count. The sequential side is evaluated at the zero-threshold
// acceptance region and the f(P_A, P_N) rejection level.
inline std::pair<double, double> sequentiality_gap_known(const Distribution& pn, const Distribution& pa,
                                                         ScoringFunction f, const SimplexGrid& grid = {},
                                                         std::uint32_t threads = 1) {
    double fixed = theorem_bound(BoundKind::Thm1_mis, pn, pa, f, 0.0, 0.0, grid, threads).value;
    double lam = score(f, pa, pn);
    double seq = std::min(omega(pa, pn, 0.0, f, grid, threads).value, upsilon(pn, lam, f, grid, threads).value);
    return {fixed, seq};
}

// Same comparison without knowledge of the outlier count.
inline std::pair<double, double> sequentiality_gap_unknown(const Distribution& pn, const Distribution& pa,
                                                           ScoringFunction f, const SimplexGrid& grid = {},
                                                           std::uint32_t threads = 1) {
    double fixed = theorem_bound(BoundKind::Thm3_mis, pn, pa, f, 0.0, 0.0, grid, threads).value;
    double lam = score(f, pa, pn);
    double seq = std::min({omega(pa, pn, 0.0, f, grid, threads).value, upsilon(pn, lam, f, grid, threads).value,
                           omega(pn, pa, 0.0, f, grid, threads).value, upsilon(pa, lam, f, grid, threads).value});
    return {fixed, seq};
}

}  // namespace oht
