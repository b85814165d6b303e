#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "oldroyd/config.hpp"
#include "oldroyd/csv.hpp"
#include "oldroyd/diagnostics.hpp"
#include "oldroyd/hypotheses.hpp"
#include "oldroyd/initial.hpp"
#include "oldroyd/simulation.hpp"
#include "oldroyd/snapshot.hpp"

namespace oldroyd {

namespace exit_code {
inline constexpr int pass = 0;
inline constexpr int usage = 1;
inline constexpr int verdict_failure = 2;
inline constexpr int blow_up = 3;
} // namespace exit_code

namespace detail {

inline std::optional<SimulationConfig> load_or_report(const std::string& path, std::ostream& err) {
    auto parsed = load_config(path);
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors) err << path << ": " << e << '\n';
        return std::nullopt;
    }
    return std::move(parsed.config);
}

inline RunOptions options_for(const SimulationConfig& cfg) {
    RunOptions o;
    o.t_end = cfg.run.t_end;
    o.sample_interval = cfg.run.snapshot_interval;
    o.decomposition = cfg.diagnostics.enable_decomposition;
    o.r_split = cfg.diagnostics.r_split;
    return o;
}

inline void write_text(const std::filesystem::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << s;
    if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
}

inline std::string verdict_line(const char* name, const Verdict& v) {
    return std::string(name) + ": " + (v.pass ? "pass" : "FAIL") + " (max violation " + fmt17(v.max_violation) + ")";
}

struct DecompositionVerdicts {
    Verdict superposition;
    DecayVerdict h_decay;
    Verdict psi_bound;

    bool pass() const { return superposition.pass && h_decay.monotone.pass && psi_bound.pass; }
};

inline DecompositionVerdicts decomposition_verdicts(const RunResult& r, const SimulationConfig& cfg) {
    DecompositionVerdicts d;
    d.superposition = check_superposition(r.decomposition);
    d.h_decay = check_H_decay(r.decomposition, cfg.params.a);
    d.psi_bound = check_psi_lp_bound(r.decomposition, cfg.model.p_exp, mu_tilde_sup(cfg.model, cfg.params));
    return d;
}

inline std::string decomposition_report(const DecompositionVerdicts& d) {
    std::ostringstream os;
    os << verdict_line("superposition", d.superposition) << '\n';
    os << verdict_line("H decay", d.h_decay.monotone) << '\n';
    os << "H exp(-a t) envelope: " << (d.h_decay.envelope_ok ? "ok" : "WARNING") << " (max relative deviation "
       << fmt17(d.h_decay.envelope_error) << ")\n";
    os << verdict_line("psi L^p bound", d.psi_bound) << '\n';
    return os.str();
}

} // namespace detail

/// Run a configuration and write ledger.csv, tail.csv, snapshots/, run_summary.txt
/// (and decomposition.csv when enabled) into `out_dir`.
inline int cmd_run(const std::string& config_path, const std::string& out_dir, std::optional<double> t_end,
                   std::ostream& out, std::ostream& err) {
    auto cfg = detail::load_or_report(config_path, err);
    if (!cfg) return exit_code::usage;
    if (t_end) {
        if (!(*t_end >= 0.0) || !std::isfinite(*t_end)) {
            err << "--t-end must be finite and >= 0\n";
            return exit_code::usage;
        }
        cfg->run.t_end = *t_end;
    }

    namespace fs = std::filesystem;
    const fs::path dir(out_dir);
    fs::create_directories(dir / "snapshots");

    const State init = build_initial(*cfg);
    const RunResult res = run(init, cfg->model, cfg->params, cfg->run.ctrl, detail::options_for(*cfg));

    {
        std::ofstream f(dir / "ledger.csv", std::ios::binary | std::ios::trunc);
        write_ledger_csv(f, res.ledger, cfg->run.ledger_interval);
    }
    {
        std::vector<TailRow> rows;
        for (const auto& s : res.samples) {
            const auto tails = tail_profile(s.state.tau, cfg->diagnostics.tail_thresholds);
            for (std::size_t i = 0; i < tails.size(); ++i) rows.push_back({s.state.t, cfg->diagnostics.tail_thresholds[i], tails[i]});
        }
        std::ofstream f(dir / "tail.csv", std::ios::binary | std::ios::trunc);
        write_tail_csv(f, rows);
    }
    for (std::size_t i = 0; i < res.samples.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "snap_%05zu.bin", i);
        write_snapshot((dir / "snapshots" / name).string(), res.samples[i].state);
    }

    const double e0 = res.ledger.initial_energy();
    const Verdict ineq = check_energy_inequality(res.ledger, cfg->params, interpolation_constant(), 1e-6 * e0);
    const Verdict young = check_young_majorant(res.ledger, 1e-8);
    const bool monotone_expected = cfg->lambda == 0.0 && cfg->model.variant == SystemVariant::S2;
    const Verdict mono = check_energy_monotone(res.ledger, 1e-8 * e0);
    bool pass = ineq.pass && young.pass && (!monotone_expected || mono.pass);

    std::ostringstream sum;
    sum << describe(*cfg);
    sum << "status: " << to_string(res.status);
    if (!res.message.empty()) sum << " (" << res.message << ")";
    sum << "\naccepted steps: " << res.accepted << ", rejected: " << res.rejected << '\n';
    sum << "t_final = " << fmt17(res.final_state.t) << '\n';
    sum << "|v|_2 = " << fmt17(norm_L2(res.final_state.v)) << ", |tau|_2 = " << fmt17(norm_L2(res.final_state.tau))
        << '\n';
    sum << "initial energy = " << fmt17(e0) << ", final energy = "
        << fmt17(res.ledger.empty() ? 0.0 : res.ledger.rows.back().total()) << '\n';
    sum << detail::verdict_line("energy inequality", ineq) << '\n';
    sum << detail::verdict_line("young majorant", young) << '\n';
    sum << detail::verdict_line("energy nonincreasing", mono) << (monotone_expected ? "" : " [informational]") << '\n';

    if (cfg->diagnostics.enable_decomposition && !res.decomposition.empty()) {
        const auto d = detail::decomposition_verdicts(res, *cfg);
        pass = pass && d.pass();
        sum << detail::decomposition_report(d);
        std::ofstream f(dir / "decomposition.csv", std::ios::binary | std::ios::trunc);
        write_decomposition_csv(f, res.decomposition);
    }
    sum << "verdict: " << (res.status != RunStatus::completed ? "blow-up" : pass ? "pass" : "FAIL") << '\n';
    detail::write_text(dir / "run_summary.txt", sum.str());
    out << sum.str();

    if (res.status != RunStatus::completed) return exit_code::blow_up;
    return pass ? exit_code::pass : exit_code::verdict_failure;
}

/// Sampling verification of growth, monotonicity, coercivity and, where a
/// closed form exists, the potential of the configured f.
inline int cmd_verify_hypotheses(const std::string& config_path, std::size_t samples, double radius,
                                 std::ostream& out, std::ostream& err) {
    auto cfg = detail::load_or_report(config_path, err);
    if (!cfg) return exit_code::usage;
    if (samples < 1 || !(radius > 0.0) || !std::isfinite(radius)) {
        err << "--samples must be >= 1 and --radius positive\n";
        return exit_code::usage;
    }
    const auto& m = cfg->model;
    out.precision(17);
    out << "f_kind = " << to_string(m.f_kind) << ", p = " << m.p_exp << ", samples = " << samples
        << ", radius = " << radius << '\n';

    std::size_t total = 0;
    auto show = [&](const char* what, const ViolationLog& log) {
        out << what << " violations: " << log.count << '\n';
        for (const auto& e : log.examples) out << "  " << e << '\n';
        total += log.count;
    };

    const auto g = verify_growth(m, samples, radius);
    out << "growth: c = " << g.c_fit << ", c_tilde = " << g.c_tilde_fit << '\n';
    show("growth", g.violations);
    const auto mono = verify_monotonicity(m, samples, radius);
    out << "monotonicity: nu_fit = " << mono.nu_fit << " over " << mono.pairs << " pairs\n";
    show("monotonicity", mono.violations);
    const auto co = verify_coercivity(m, samples, radius);
    out << "coercivity: nu_fit = " << co.nu_fit << '\n';
    show("coercivity", co.violations);
    if (has_potential(m)) {
        const auto pot = verify_potential(m, samples, radius);
        out << "potential: max gradient error = " << pot.max_gradient_error << ", C1 = " << pot.c1_fit
            << ", C2 = " << pot.c2_fit << '\n';
        show("potential", pot.violations);
    } else {
        out << "potential: no closed form for " << to_string(m.f_kind) << ", skipped\n";
    }
    out << "total violations: " << total << '\n';
    return total == 0 ? exit_code::pass : exit_code::verdict_failure;
}

struct ConvergenceReport {
    std::vector<int> levels;
    std::vector<double> dv;    // |v(N_{i+1}) - v(N_i)|_2 on the coarse modes
    std::vector<double> dtau;
    bool pass = false;
};

inline std::optional<std::vector<int>> parse_levels(const std::string& text) {
    std::vector<int> out;
    for (auto item : detail::split_list(text, ',')) {
        const auto x = detail::to_int(item);
        if (!x || *x < 4 || *x % 2 != 0 || *x > 4096) return std::nullopt;
        out.push_back(static_cast<int>(*x));
    }
    return out;
}

inline bool strictly_decreasing(const std::vector<double>& d) {
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (!(d[i] < d[i - 1])) return false;
    }
    return true;
}

/// Run the same configuration at each grid size (in parallel) and compare
/// consecutive levels on the coarser mode set.
inline ConvergenceReport converge(const SimulationConfig& base, const std::vector<int>& levels) {
    std::vector<std::future<RunResult>> jobs;
    for (int n : levels) {
        SimulationConfig cfg = base;
        cfg.n = n;
        jobs.push_back(std::async(std::launch::async, [cfg] {
            return run(build_initial(cfg), cfg.model, cfg.params, cfg.run.ctrl, RunOptions{cfg.run.t_end, 0.0, false, 1.0, false, {}});
        }));
    }
    std::vector<RunResult> results;
    for (auto& j : jobs) results.push_back(j.get());

    ConvergenceReport rep;
    rep.levels = levels;
    bool completed = true;
    for (const auto& r : results) completed = completed && r.status == RunStatus::completed;
    for (std::size_t i = 0; i + 1 < results.size(); ++i) {
        const GridSpec coarse = results[i].final_state.grid();
        const auto& fine = results[i + 1].final_state;
        rep.dv.push_back(norm_L2(restrict_to(fine.v, coarse) - results[i].final_state.v));
        rep.dtau.push_back(norm_L2(restrict_to(fine.tau, coarse) - results[i].final_state.tau));
    }
    auto all_zero = [](const std::vector<double>& d) {
        return std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; });
    };
    rep.pass = completed && (strictly_decreasing(rep.dv) || all_zero(rep.dv)) &&
               (strictly_decreasing(rep.dtau) || all_zero(rep.dtau));
    return rep;
}

inline int cmd_converge(const std::string& config_path, const std::string& levels_text, std::ostream& out,
                        std::ostream& err) {
    const auto levels = parse_levels(levels_text);
    if (!levels || levels->size() < 2) {
        err << "--levels needs at least two even grid sizes >= 4, e.g. 8,16,32\n";
        return exit_code::usage;
    }
    if (!std::is_sorted(levels->begin(), levels->end()) ||
        std::adjacent_find(levels->begin(), levels->end()) != levels->end()) {
        err << "--levels must be strictly increasing\n";
        return exit_code::usage;
    }
    auto cfg = detail::load_or_report(config_path, err);
    if (!cfg) return exit_code::usage;
    if (cfg->initial.stress == StressKind::scaled_identity_mode) {
        const int kmax = std::max(std::abs(cfg->initial.mode_kx), std::abs(cfg->initial.mode_ky));
        if (kmax > (levels->front() - 1) / 3) {
            err << "--levels: the stress mode is not retained on the coarsest grid\n";
            return exit_code::usage;
        }
    }

    const auto rep = converge(*cfg, *levels);
    out << "levels,dv,dtau\n";
    for (std::size_t i = 0; i < rep.dv.size(); ++i) {
        out << rep.levels[i] << "-" << rep.levels[i + 1] << ',' << fmt17(rep.dv[i]) << ',' << fmt17(rep.dtau[i])
            << '\n';
    }
    out << "verdict: " << (rep.pass ? "pass" : "FAIL") << '\n';
    return rep.pass ? exit_code::pass : exit_code::verdict_failure;
}

/// Run with the decomposition carried along and write decomposition.csv.
inline int cmd_decompose(const std::string& config_path, std::optional<double> r_split, const std::string& out_dir,
                         std::ostream& out, std::ostream& err) {
    auto cfg = detail::load_or_report(config_path, err);
    if (!cfg) return exit_code::usage;
    if (r_split) {
        if (!(*r_split > 0.0)) {
            err << "--R-split must be positive\n";
            return exit_code::usage;
        }
        cfg->diagnostics.r_split = *r_split;
    }
    cfg->diagnostics.enable_decomposition = true;

    std::filesystem::create_directories(out_dir);
    const RunResult res = run(build_initial(*cfg), cfg->model, cfg->params, cfg->run.ctrl, detail::options_for(*cfg));
    {
        std::ofstream f(std::filesystem::path(out_dir) / "decomposition.csv", std::ios::binary | std::ios::trunc);
        write_decomposition_csv(f, res.decomposition);
    }
    const auto d = detail::decomposition_verdicts(res, *cfg);
    out << "R_split = " << fmt17(cfg->diagnostics.r_split) << '\n' << detail::decomposition_report(d);
    if (res.status != RunStatus::completed) {
        out << "status: " << to_string(res.status) << " (" << res.message << ")\n";
        return exit_code::blow_up;
    }
    out << "verdict: " << (d.pass() ? "pass" : "FAIL") << '\n';
    return d.pass() ? exit_code::pass : exit_code::verdict_failure;
}

} // namespace oldroyd
