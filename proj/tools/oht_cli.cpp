// Command-line front end: exponent queries, Monte Carlo simulation sweeps,
// and decision-runtime benchmarks, all emitting CSV.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "oht/exponents.hpp"
#include "oht/sim.hpp"

namespace {

std::string fmt(double v, int sig) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", sig, v);
    return buf;
}

std::string fmt_prob(double v) { return fmt(v, 6); }
std::string fmt_exp(double v) { return fmt(v, 5); }

bool is_list(const std::string& s) {
    return s.find(':') != std::string::npos || s.find(',') != std::string::npos;
}

// Accepts "x", "a,b,c", or "start:stop:step"; lists must increase strictly.
std::vector<double> parse_axis(const std::string& s, const char* what) {
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        double start = 0, stop = 0, step = 0;
        char extra = 0;
        if (std::sscanf(s.c_str(), "%lf:%lf:%lf%c", &start, &stop, &step, &extra) != 3 || step <= 0)
            throw CLI::ValidationError(std::string(what) + ": expected start:stop:step with positive step");
        for (double v = start; v <= stop + step * 1e-9; v += step) out.push_back(v);
    } else {
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            out.push_back(std::stod(item));
        }
    }
    if (out.empty()) throw CLI::ValidationError(std::string(what) + ": empty sweep axis");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i] <= out[i - 1]) throw CLI::ValidationError(std::string(what) + ": axis must be strictly increasing");
    return out;
}

std::vector<double> parse_vec(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

oht::Distribution make_dist(const std::string& vec, double bern, const char* what) {
    if (!vec.empty()) return oht::Distribution(parse_vec(vec));
    if (bern < 0.0 || bern > 1.0) throw CLI::ValidationError(std::string(what) + ": Bernoulli parameter outside [0,1]");
    return oht::Distribution::bernoulli(bern);
}

oht::ScoringFunction parse_scoring(const std::string& s) {
    if (s == "kl") return oht::ScoringFunction::KL;
    if (s == "gjs") return oht::ScoringFunction::GJS;
    throw CLI::ValidationError("scoring must be kl or gjs");
}

// Flat JSON config: keys mirror flag names without dashes; explicit CLI
// flags win over file values.
void merge_config(std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    nlohmann::json doc = nlohmann::json::parse(in);
    if (!doc.is_object()) throw std::runtime_error("config: top level must be a JSON object");
    for (const auto& [key, val] : doc.items()) {
        const std::string flag = "--" + key;
        bool present = false;
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) { present = true; break; }
        if (present) continue;
        std::string sval;
        if (val.is_string()) sval = val.get<std::string>();
        else if (val.is_boolean()) sval = val.get<bool>() ? "true" : "false";
        else sval = val.dump();
        args.push_back(flag + "=" + sval);
    }
}

struct OutFile {
    std::ofstream file;
    std::ostream* os = &std::cout;

    void open(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw std::runtime_error("out: cannot open " + path);
        os = &file;
    }
};

// ---- exponent command ----

struct ExponentArgs {
    std::string kind;
    double pn = 0.5;
    std::string pa = "0.5";     // scalar or sweep
    std::string lambda;         // scalar or sweep; empty = use --lambda1
    std::string pn_vec, pa_vec;
    std::string scoring = "gjs";
    double lambda1 = 0.0, lambda2 = 0.0;
    std::uint32_t grid_res = 400, refine = 3, threads = 1;
    std::uint64_t seed = 0;
    std::string out;
};

int run_exponent(const ExponentArgs& a) {
    oht::SimplexGrid grid{0, a.grid_res, a.refine};
    oht::ScoringFunction f = parse_scoring(a.scoring);
    const bool sweep_lambda = is_list(a.lambda);
    const bool sweep_pa = is_list(a.pa);
    if (sweep_lambda && sweep_pa) throw CLI::ValidationError("sweep either --pa or --lambda, not both");

    const bool single_lambda_kind = a.kind == "omega" || a.kind == "upsilon" || a.kind == "thm3_fr" ||
                                    a.kind == "thm3_fa" || a.kind == "thm3_full";
    if (sweep_lambda && !single_lambda_kind)
        throw CLI::ValidationError("--lambda sweep is only supported for single-threshold kinds");

    const double pa_scalar = sweep_pa ? 0.0 : std::stod(a.pa);
    const double lambda_base = a.lambda.empty() || sweep_lambda ? a.lambda1 : std::stod(a.lambda);

    std::vector<double> axis;
    if (sweep_lambda) axis = parse_axis(a.lambda, "lambda");
    else if (sweep_pa) axis = parse_axis(a.pa, "pa");
    else axis = {a.kind == "upsilon" ? lambda_base : pa_scalar};

    OutFile sink;
    sink.open(a.out);
    *sink.os << "sweep_param,kind,value,resolution,components\n";

    oht::Distribution pn = make_dist(a.pn_vec, a.pn, "pn");
    for (double x : axis) {
        const double lam = sweep_lambda ? x : lambda_base;
        oht::Distribution pa = make_dist(a.pa_vec, sweep_pa ? x : pa_scalar, "pa");

        double value = 0.0;
        double resolution = (1.0 / a.grid_res) / std::pow(4.0, a.refine);
        std::vector<std::string> comps;
        auto add_comp = [&](const std::string& name, double v) { comps.push_back(name + "=" + fmt_exp(v)); };
        auto add_primitive = [&](const oht::ExponentValue& e) {
            value = e.value;
            resolution = e.resolution_used;
            comps.push_back(e.feasible ? "feasible=1" : "feasible=0");
        };

        using oht::BoundKind;
        auto run_bound = [&](BoundKind k, double l1, double l2) {
            auto b = oht::theorem_bound(k, pn, pa, f, l1, l2, grid, a.threads);
            value = b.value;
            for (const auto& [nm, v] : b.components) add_comp(nm, v);
        };

        if (a.kind == "thm1") run_bound(BoundKind::Thm1_mis, 0, 0);
        else if (a.kind == "thm2") run_bound(BoundKind::Thm2_mis, a.lambda1, a.lambda2);
        else if (a.kind == "thm3") run_bound(BoundKind::Thm3_mis, 0, 0);
        else if (a.kind == "thm3_fr") run_bound(BoundKind::Thm3_fr, lam, 0);
        else if (a.kind == "thm3_fa") run_bound(BoundKind::Thm3_fa, lam, 0);
        else if (a.kind == "thm4") run_bound(BoundKind::Thm4_mis, a.lambda1, a.lambda2);
        else if (a.kind == "thm4_fr") run_bound(BoundKind::Thm4_fr, a.lambda1, a.lambda2);
        else if (a.kind == "thm4_fa") run_bound(BoundKind::Thm4_fa, a.lambda1, a.lambda2);
        else if (a.kind == "thm3_full") {
            auto b = oht::thm3_full_min(pn, pa, f, lam, grid, a.threads);
            value = b.value;
            for (const auto& [nm, v] : b.components) add_comp(nm, v);
        } else if (a.kind == "eta") add_primitive(oht::eta(pn, pa, f, grid, a.threads));
        else if (a.kind == "gamma") add_primitive(oht::gamma_exp(pn, pa, f, grid, a.threads));
        else if (a.kind == "omega") add_primitive(oht::omega(pn, pa, lam, f, grid, a.threads));
        else if (a.kind == "upsilon") add_primitive(oht::upsilon(pn, lam, f, grid, a.threads));
        else if (a.kind == "renyi") {
            value = oht::renyi_half(pn, pa);
            resolution = 0.0;
            comps.push_back("closed_form=1");
        } else if (a.kind == "benefit_known") {
            auto [fixed, seq] = oht::sequentiality_gap_known(pn, pa, f, grid, a.threads);
            value = seq - fixed;
            add_comp("fixed", fixed);
            add_comp("seq", seq);
        } else if (a.kind == "benefit_unknown") {
            auto [fixed, seq] = oht::sequentiality_gap_unknown(pn, pa, f, grid, a.threads);
            value = seq - fixed;
            add_comp("fixed", fixed);
            add_comp("seq", seq);
        } else {
            throw CLI::ValidationError("unknown exponent kind: " + a.kind);
        }

        std::string comp_str;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            if (i) comp_str += ';';
            comp_str += comps[i];
        }
        *sink.os << fmt_prob(x) << ',' << a.kind << ',' << fmt_exp(value) << ',' << fmt_exp(resolution) << ','
                 << comp_str << '\n';
        std::cerr << "# exponent " << a.kind << " sweep_param=" << fmt_prob(x) << " done\n";
    }
    return 0;
}

// ---- simulate command ----

struct SimulateArgs {
    std::string test;
    std::uint32_t M = 0;
    std::uint32_t t = 0;
    std::uint32_t T = 0;
    double pn = 0.5, pa = 0.5;
    std::string pn_vec, pa_vec;
    std::string scoring = "gjs";
    std::string n_axis, nmin_axis;
    std::uint32_t kmax = 100000;
    double lambda = 0.0, lambda1 = 0.0, lambda2 = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint32_t threads = 1;
    std::string out;
};

oht::TestKind parse_test(const std::string& s) {
    if (s == "fix-known") return oht::TestKind::FixKnown;
    if (s == "fix-unknown") return oht::TestKind::FixUnknown;
    if (s == "li") return oht::TestKind::Li;
    if (s == "zhou") return oht::TestKind::Zhou;
    if (s == "seq-known") return oht::TestKind::SeqKnown;
    if (s == "seq-unknown") return oht::TestKind::SeqUnknown;
    if (s == "diao") return oht::TestKind::DiaoKnown;
    if (s == "diao-u") return oht::TestKind::DiaoUnknown;
    throw CLI::ValidationError("unknown test: " + s);
}

oht::Hypothesis truth_from_t(std::uint32_t t) {
    if (t == 0) return oht::Hypothesis::no_outlier();
    std::vector<std::uint32_t> b(t);
    for (std::uint32_t i = 0; i < t; ++i) b[i] = i;
    return oht::Hypothesis::outlier_set(std::move(b));
}

int run_simulate(const SimulateArgs& a) {
    oht::TestKind kind = parse_test(a.test);
    const bool seq = oht::is_sequential(kind);
    if (seq && a.nmin_axis.empty()) throw CLI::ValidationError("sequential test needs --nmin");
    if (!seq && a.n_axis.empty()) throw CLI::ValidationError("fixed-length test needs --n");

    oht::TestSpec spec;
    spec.kind = kind;
    spec.scoring = parse_scoring(a.scoring);
    spec.t = a.t;
    spec.T = a.T;
    spec.lambda = a.lambda;

    oht::TrialSetup setup;
    setup.M = a.M;
    setup.truth = truth_from_t(a.t);
    setup.p_n = make_dist(a.pn_vec, a.pn, "pn");
    setup.p_a = make_dist(a.pa_vec, a.pa, "pa");
    setup.trials = a.trials;
    setup.base_seed = a.seed;

    // The sequential split tests only converge when the acceptance threshold
    // sits below the separation between the two distributions.
    if (kind == oht::TestKind::SeqKnown || kind == oht::TestKind::SeqUnknown) {
        double fab = oht::score(spec.scoring, setup.p_a, setup.p_n);
        double fba = oht::score(spec.scoring, setup.p_n, setup.p_a);
        if (a.lambda2 >= std::min(fab, fba))
            std::cerr << "# warning: lambda2 >= separation between the distributions; expect capped trials\n";
    }

    std::vector<double> axis = parse_axis(seq ? a.nmin_axis : a.n_axis, seq ? "nmin" : "n");

    OutFile sink;
    sink.open(a.out);
    *sink.os << "n,trials,p_mis,se_mis,p_fr,se_fr,p_fa,se_fa";
    if (seq) *sink.os << ",mean_tau,se_tau,capped_fraction";
    *sink.os << '\n';

    for (double xv : axis) {
        auto x = static_cast<std::uint32_t>(xv + 0.5);
        if (seq) {
            oht::SeqTestConfig cfg;
            cfg.lambda1 = a.lambda1;
            cfg.lambda2 = a.lambda2;
            // The subset-score stopping rule has no thresholds; keep the
            // config valid with placeholders.
            if (kind == oht::TestKind::DiaoKnown && cfg.lambda1 == 0.0 && cfg.lambda2 == 0.0)
                cfg.lambda1 = cfg.lambda2 = 1.0;
            cfg.n_min = x;
            cfg.k_max = a.kmax;
            setup.seq_cfg = cfg;
            setup.fixed_n.reset();
        } else {
            setup.fixed_n = x;
            setup.seq_cfg.reset();
        }
        auto res = oht::estimate(spec, setup, a.threads);
        *sink.os << x << ',' << res.trials_run << ',' << fmt_prob(res.p_mis) << ',' << fmt_prob(res.se_mis) << ','
                 << fmt_prob(res.p_fr) << ',' << fmt_prob(res.se_fr) << ',' << fmt_prob(res.p_fa) << ','
                 << fmt_prob(res.se_fa);
        if (seq)
            *sink.os << ',' << fmt_prob(res.mean_tau) << ',' << fmt_prob(res.se_tau) << ','
                     << fmt_prob(res.capped_fraction);
        *sink.os << '\n';
        std::cerr << "# simulate " << a.test << " n=" << x << " done";
        if (seq && res.reliability_warning) std::cerr << " (warning: capped_fraction > 1%)";
        std::cerr << '\n';
    }
    return 0;
}

// ---- bench command ----

struct BenchArgs {
    std::vector<std::string> tests;
    std::string m_axis;
    std::uint32_t t = 0;
    std::uint32_t T = 0;
    double pn = 0.5, pa = 0.5;
    std::string pn_vec, pa_vec;
    std::string scoring = "gjs";
    std::uint32_t n = 0;
    std::uint32_t nmin = 2, kmax = 100000;
    double lambda = 0.0, lambda1 = 0.0, lambda2 = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    bool allow_capacity = false;
    std::string out;
};

int run_bench(const BenchArgs& a) {
    OutFile sink;
    sink.open(a.out);
    *sink.os << "test,M,t_or_T,median_ns,p90_ns,trials_timed,status\n";
    std::vector<double> ms = parse_axis(a.m_axis, "M");
    bool capacity_hit = false;
    for (const std::string& name : a.tests) {
        oht::TestKind kind = parse_test(name);
        const bool seq = oht::is_sequential(kind);
        for (double mv : ms) {
            auto m = static_cast<std::uint32_t>(mv + 0.5);
            oht::TestSpec spec;
            spec.kind = kind;
            spec.scoring = parse_scoring(a.scoring);
            spec.t = a.t;
            spec.T = a.T;
            spec.lambda = a.lambda;

            oht::TrialSetup setup;
            setup.M = m;
            setup.truth = truth_from_t(a.t);
            setup.p_n = make_dist(a.pn_vec, a.pn, "pn");
            setup.p_a = make_dist(a.pa_vec, a.pa, "pa");
            setup.trials = a.trials;
            setup.base_seed = a.seed;
            if (seq) {
                oht::SeqTestConfig cfg;
                cfg.lambda1 = a.lambda1 > 0 ? a.lambda1 : 1.0;
                cfg.lambda2 = a.lambda2 > 0 ? a.lambda2 : cfg.lambda1;
                cfg.n_min = a.nmin;
                cfg.k_max = a.kmax;
                setup.seq_cfg = cfg;
            } else {
                if (a.n == 0) throw CLI::ValidationError("bench: fixed-length tests need --n");
                setup.fixed_n = a.n;
            }
            std::uint32_t t_or_T = oht::knows_outlier_count(kind) ? a.t : a.T;
            try {
                auto st = oht::measure_runtime(spec, setup);
                *sink.os << name << ',' << m << ',' << t_or_T << ',' << st.median_ns_per_trial << ','
                         << st.p90_ns_per_trial << ',' << st.trials_timed << ",ok\n";
            } catch (const oht::capacity_error&) {
                capacity_hit = true;
                *sink.os << name << ',' << m << ',' << t_or_T << ",0,0,0,capacity\n";
            }
            std::cerr << "# bench " << name << " M=" << m << " done\n";
        }
    }
    if (capacity_hit && !a.allow_capacity) return 3;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        merge_config(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    CLI::App app{"Outlier hypothesis testing toolkit: low-complexity and exhaustive tests, "
                 "error exponents, and Monte Carlo reproduction sweeps"};
    app.require_subcommand(1);
    std::string config_dummy;

    ExponentArgs ea;
    auto* exp_cmd = app.add_subcommand("exponent", "Compute error exponents and theorem bounds (CSV to stdout)");
    exp_cmd->add_option("--kind", ea.kind,
                        "thm1|thm2|thm3|thm3_fr|thm3_fa|thm4|thm4_fr|thm4_fa|thm3_full|eta|gamma|omega|upsilon|renyi|"
                        "benefit_known|benefit_unknown")
        ->required();
    exp_cmd->add_option("--pn", ea.pn, "Nominal Bernoulli parameter");
    exp_cmd->add_option("--pa", ea.pa, "Anomalous Bernoulli parameter; list or start:stop:step sweeps it");
    exp_cmd->add_option("--pn-vec", ea.pn_vec, "Nominal distribution as comma-separated probabilities");
    exp_cmd->add_option("--pa-vec", ea.pa_vec, "Anomalous distribution as comma-separated probabilities");
    exp_cmd->add_option("--scoring", ea.scoring, "kl|gjs (default gjs)");
    exp_cmd->add_option("--lambda", ea.lambda, "Threshold for single-threshold kinds; list sweeps it");
    exp_cmd->add_option("--lambda1", ea.lambda1, "First threshold");
    exp_cmd->add_option("--lambda2", ea.lambda2, "Second threshold");
    exp_cmd->add_option("--grid-res", ea.grid_res, "Simplex lattice resolution (default 400)");
    exp_cmd->add_option("--refine", ea.refine, "Refinement rounds (default 3)");
    exp_cmd->add_option("--threads", ea.threads, "Worker threads");
    exp_cmd->add_option("--seed", ea.seed, "Accepted for interface uniformity (exponents are deterministic)");
    exp_cmd->add_option("--out", ea.out, "Write CSV to file instead of stdout");
    exp_cmd->add_option("--config", config_dummy, "JSON config file (flags override)");

    SimulateArgs sa;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo error estimation sweep (CSV)");
    sim_cmd->add_option("--test", sa.test, "fix-known|fix-unknown|li|zhou|seq-known|seq-unknown|diao|diao-u")
        ->required();
    sim_cmd->add_option("--M", sa.M, "Number of sequences")->required();
    sim_cmd->add_option("--t", sa.t, "True outlier count (0 = no outliers); also the count for known-count tests");
    sim_cmd->add_option("--T", sa.T, "Outlier-count upper bound for exhaustive unknown-count tests");
    sim_cmd->add_option("--pn", sa.pn, "Nominal Bernoulli parameter");
    sim_cmd->add_option("--pa", sa.pa, "Anomalous Bernoulli parameter");
    sim_cmd->add_option("--pn-vec", sa.pn_vec, "Nominal distribution, comma-separated");
    sim_cmd->add_option("--pa-vec", sa.pa_vec, "Anomalous distribution, comma-separated");
    sim_cmd->add_option("--scoring", sa.scoring, "kl|gjs");
    sim_cmd->add_option("--n", sa.n_axis, "Fixed length: single value, comma list, or start:stop:step");
    sim_cmd->add_option("--nmin", sa.nmin_axis, "Sequential minimum length: single value or sweep");
    sim_cmd->add_option("--kmax", sa.kmax, "Sequential hard cap (default 100000)");
    sim_cmd->add_option("--lambda", sa.lambda, "Threshold for fix-unknown / zhou");
    sim_cmd->add_option("--lambda1", sa.lambda1, "Sequential lower threshold");
    sim_cmd->add_option("--lambda2", sa.lambda2, "Sequential upper threshold");
    sim_cmd->add_option("--trials", sa.trials, "Monte Carlo trials per sweep point")->required();
    sim_cmd->add_option("--seed", sa.seed, "Base seed (default 0)");
    sim_cmd->add_option("--threads", sa.threads, "Worker threads");
    sim_cmd->add_option("--out", sa.out, "Write CSV to file instead of stdout");
    sim_cmd->add_option("--config", config_dummy, "JSON config file (flags override)");

    BenchArgs ba;
    auto* bench_cmd = app.add_subcommand("bench", "Decision-runtime benchmark (CSV)");
    bench_cmd->add_option("--test", ba.tests, "One or more test names")->required()->delimiter(',');
    bench_cmd->add_option("--M", ba.m_axis, "Number of sequences: single value or sweep")->required();
    bench_cmd->add_option("--t", ba.t, "True outlier count / known-count parameter");
    bench_cmd->add_option("--T", ba.T, "Outlier-count upper bound");
    bench_cmd->add_option("--pn", ba.pn, "Nominal Bernoulli parameter");
    bench_cmd->add_option("--pa", ba.pa, "Anomalous Bernoulli parameter");
    bench_cmd->add_option("--pn-vec", ba.pn_vec, "Nominal distribution, comma-separated");
    bench_cmd->add_option("--pa-vec", ba.pa_vec, "Anomalous distribution, comma-separated");
    bench_cmd->add_option("--scoring", ba.scoring, "kl|gjs");
    bench_cmd->add_option("--n", ba.n, "Fixed length for fixed-length tests");
    bench_cmd->add_option("--nmin", ba.nmin, "Sequential minimum length");
    bench_cmd->add_option("--kmax", ba.kmax, "Sequential hard cap");
    bench_cmd->add_option("--lambda", ba.lambda, "Threshold for fix-unknown / zhou");
    bench_cmd->add_option("--lambda1", ba.lambda1, "Sequential lower threshold");
    bench_cmd->add_option("--lambda2", ba.lambda2, "Sequential upper threshold");
    bench_cmd->add_option("--trials", ba.trials, "Timed trials per row")->required();
    bench_cmd->add_option("--seed", ba.seed, "Base seed");
    bench_cmd->add_flag("--allow-capacity", ba.allow_capacity, "Capacity rows do not fail the run");
    bench_cmd->add_option("--out", ba.out, "Write CSV to file instead of stdout");
    bench_cmd->add_option("--config", config_dummy, "JSON config file (flags override)");

    try {
        std::vector<const char*> cargs;
        cargs.push_back("oht");
        for (const auto& s : args) cargs.push_back(s.c_str());
        app.parse(static_cast<int>(cargs.size()), const_cast<char**>(cargs.data()));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (exp_cmd->parsed()) return run_exponent(ea);
        if (sim_cmd->parsed()) return run_simulate(sa);
        if (bench_cmd->parsed()) return run_bench(ba);
    } catch (const oht::capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return 3;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
