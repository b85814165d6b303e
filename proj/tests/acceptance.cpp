// One line per acceptance criterion; exit status is the number of failures.
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "oracle/quadrature_oracle.hpp"
#include "support.hpp"

using namespace oldroyd;
using testing_support::config_path;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

SimulationConfig must_load(const std::string& name) {
    auto r = load_config(config_path(name));
    if (!r.ok()) throw std::runtime_error(name + ": " + r.errors.front());
    return *r.config;
}

RunResult run_config(const SimulationConfig& c) {
    return run(build_initial(c), c.model, c.params, c.run.ctrl,
               RunOptions{c.run.t_end, c.run.snapshot_interval, c.diagnostics.enable_decomposition,
                          c.diagnostics.r_split, false, {}});
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

Outcome rhs_oracle() {
    const PhysicalParams q = PhysicalParams::make(2.0, 0.5, 1.0, 0.5);
    double worst = 0.0;
    std::size_t cases = 0;
    for (int n : {4, 8}) {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const State s = testing_support::random_state(GridSpec(n), 1000 + seed * 7 + static_cast<std::uint64_t>(n));
            for (auto v : {SystemVariant::S, SystemVariant::S1, SystemVariant::S2}) {
                const auto m = testing_support::model_of(seed % 2 ? FKind::power_additive : FKind::power_quadratic, v,
                                                         2.5 + 0.5 * static_cast<double>(seed % 3), 1.5);
                worst = std::max(worst, oracle::compare_momentum(s, m, momentum_rhs(s, m, q)).relative());
                worst = std::max(worst, oracle::compare_stress(s, m, q, stress_rhs(s, m, q)).relative());
                ++cases;
            }
        }
    }
    return {worst <= 1e-10, std::to_string(cases) + " cases, max relative deviation " + sci(worst)};
}

Outcome energy_inequality() {
    const auto c = must_load("tg_s2.ini");
    const auto r = run_config(c);
    if (r.status != RunStatus::completed) return {false, "run did not complete: " + r.message};
    const double e0 = r.ledger.initial_energy();
    const auto ineq = check_energy_inequality(r.ledger, c.params, interpolation_constant(), 1e-6 * e0);
    const auto mono = check_energy_monotone(r.ledger, 1e-8 * e0);
    double budget = 0.0;
    for (const auto& row : r.ledger.rows) budget = std::max(budget, std::abs(row.budget_residual));
    return {ineq.pass && mono.pass, std::to_string(r.ledger.rows.size()) + " steps, inequality violation " +
                                        sci(ineq.max_violation) + ", monotone violation " + sci(mono.max_violation) +
                                        ", budget residual " + sci(budget)};
}

Outcome young_majorant() {
    const auto c = must_load("tg_s1.ini");
    const auto r = run_config(c);
    if (r.status != RunStatus::completed) return {false, "run did not complete: " + r.message};
    const auto lit = check_young_majorant(r.ledger, 1e-8, YoungForm::g_work);
    const auto net = check_young_majorant(r.ledger, 1e-8, YoungForm::net_work);
    return {lit.pass && net.pass, std::to_string(r.ledger.rows.size()) + " rows, violation " + sci(lit.max_violation) +
                                      " (net form " + sci(net.max_violation) + ")"};
}

Outcome gamma_and_admissibility() {
    RngStream rng(2024, 0);
    std::size_t bad = 0, accepted = 0;
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double we = 0.05 + 10.0 * rng.uniform();
        const double theta = 0.01 + 0.98 * rng.uniform();
        const double nu = 0.01 + 5.0 * rng.uniform();
        const double lambda = 1.2 * rng.uniform();
        const auto adm = check_admissibility(lambda, theta, nu);
        const double s = 2.0 * nu * (1.0 - theta);
        const bool expect = lambda <= 1.0 && (s > 1.0 || lambda < std::sqrt(s));
        if (adm.accepted != expect) ++bad;
        if (!adm.accepted) continue;
        ++accepted;
        const auto p = PhysicalParams::make(we, theta, nu, lambda);
        const double closed = PhysicalParams::gamma_closed_form(lambda, theta, nu);
        const double d = std::abs(PhysicalParams::gamma_from_definition(p) - closed);
        worst = std::max(worst, d);
        if (d > 1e-12 || !(p.gamma >= 0.0 && p.gamma < 1.0)) ++bad;
    }
    return {bad == 0, std::to_string(accepted) + " admissible of 10000, " + std::to_string(bad) +
                          " disagreements, max gamma deviation " + sci(worst)};
}

Outcome relaxation() {
    const auto c = must_load("relaxation.ini");
    const auto r = run_config(c);
    if (r.status != RunStatus::completed || r.decomposition.empty()) return {false, "run did not complete"};
    const State init = build_initial(c);
    const double decay = std::exp(-c.params.a * r.final_state.t);
    const double tau_err = std::abs(norm_L2(r.final_state.tau) - decay * norm_L2(init.tau)) / (decay * norm_L2(init.tau));
    const auto& first = r.decomposition.front();
    const auto& last = r.decomposition.back();
    const double h_err = std::abs(last.norm_H_2 - decay * first.norm_H_2) / std::max(decay * first.norm_H_2, 1e-300);
    const bool ok = tau_err <= 1e-6 && h_err <= 1e-6 && std::abs(r.final_state.t - 1.0) < 1e-14;
    return {ok, "tau envelope error " + sci(tau_err) + ", H envelope error " + sci(h_err)};
}

Outcome decomposition() {
    const auto c = must_load("tg_s1.ini");
    const auto r = run_config(c);
    if (r.status != RunStatus::completed || r.decomposition.size() < 2) return {false, "run did not complete"};
    const auto sup = check_superposition(r.decomposition);
    const auto h = check_H_decay(r.decomposition, c.params.a);
    const auto psi = check_psi_lp_bound(r.decomposition, c.model.p_exp, mu_tilde_sup(c.model, c.params));
    return {sup.pass && h.monotone.pass && h.envelope_ok && psi.pass,
            std::to_string(r.decomposition.size()) + " samples, superposition " + sci(sup.max_violation) +
                ", H envelope " + sci(h.envelope_error) + ", psi bound " + sci(psi.max_violation)};
}

Outcome hypotheses() {
    std::ostringstream os;
    bool ok = true;
    for (auto kind : {FKind::power_additive, FKind::power_quadratic}) {
        const auto m = testing_support::model_of(kind, SystemVariant::S, 3.0, 2.0);
        const auto g = verify_growth(m, 10000, 10.0);
        const auto mono = verify_monotonicity(m, 10000, 10.0);
        const auto co = verify_coercivity(m, 10000, 10.0);
        const auto pot = verify_potential(m, 10000, 10.0);
        const std::size_t v = g.violations.count + mono.violations.count + co.violations.count + pot.violations.count;
        ok = ok && v == 0 && pot.max_gradient_error <= 1e-6;
        os << to_string(kind) << ": " << v << " violations, potential gradient error " << sci(pot.max_gradient_error)
           << "; ";
    }
    const auto planted = must_load("nonmonotone_table.ini");
    const auto caught = verify_monotonicity(planted.model, 10000, 10.0);
    ok = ok && caught.violations.count > 0;
    os << "planted table flagged " << caught.violations.count << " times";
    return {ok, os.str()};
}

Outcome convergence() {
    const auto c = must_load("tg_s2.ini");
    const auto rep = converge(c, {8, 16, 32, 64});
    std::ostringstream os;
    os << "dv";
    for (double d : rep.dv) os << ' ' << sci(d);
    os << ", dtau";
    for (double d : rep.dtau) os << ' ' << sci(d);
    return {rep.pass && strictly_decreasing(rep.dv) && strictly_decreasing(rep.dtau), os.str()};
}

Outcome robustness() {
    RngStream rng(77, 3);
    std::size_t threw = 0;
    for (int i = 0; i < 10000; ++i) {
        std::string s(static_cast<std::size_t>(rng.uniform() * 512), '\0');
        for (char& ch : s) ch = static_cast<char>(static_cast<int>(rng.uniform() * 256.0));
        try {
            const auto r = parse_config(s);
            if (!r.ok() && r.errors.empty()) ++threw;
        } catch (...) {
            ++threw;
        }
    }
    std::size_t mismatched = 0;
    for (int n : {4, 8, 16, 32}) {
        State s = testing_support::random_state(GridSpec(n), static_cast<std::uint64_t>(n) + 5);
        s.t = 0.7;
        const auto bytes = encode_snapshot(s);
        const State back = decode_snapshot(bytes);
        if (!(back == s) || encode_snapshot(back) != bytes) ++mismatched;
    }
    const auto c = must_load("tg_s1.ini");
    auto dump = [&] {
        const auto r = run_config(c);
        std::ostringstream os;
        write_ledger_csv(os, r.ledger, 1);
        write_decomposition_csv(os, r.decomposition);
        for (const auto& smp : r.samples) {
            const auto b = encode_snapshot(smp.state);
            os.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
        }
        return os.str();
    };
    const bool same = dump() == dump();
    return {threw == 0 && mismatched == 0 && same,
            std::to_string(threw) + " parser failures on 10000 random inputs, " + std::to_string(mismatched) +
                " snapshot mismatches, reruns " + (same ? "identical" : "DIFFER")};
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"right-hand side matches quadrature oracle", rhs_oracle},
        {"energy inequality along Taylor-Green run", energy_inequality},
        {"Young majorant along rotational run", young_majorant},
        {"gamma and admissibility on random parameters", gamma_and_admissibility},
        {"pure relaxation envelope", relaxation},
        {"stress decomposition", decomposition},
        {"constitutive hypotheses", hypotheses},
        {"spatial convergence", convergence},
        {"parser, snapshot and determinism", robustness},
    };
    int failures = 0;
    int index = 1;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << "criterion " << index++ << ": " << (o.pass ? "pass" : "FAIL") << "  " << name << "  (" << o.detail
                  << ")" << std::endl;
        failures += !o.pass;
    }
    return failures;
}
