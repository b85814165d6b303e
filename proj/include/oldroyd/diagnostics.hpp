#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oldroyd/galerkin.hpp"

namespace oldroyd {

/// Energy terms of a single state. Terms carrying 1/b are zero when b = 0.
struct EnergyTerms {
    double kinetic = 0.0;        // 1/2 |v|^2
    double stress_energy = 0.0;  // 1/(2b) |tau|^2
    double dissipation_p = 0.0;  // nu |D|_p^p
    double dissipation_2 = 0.0;  // nu |D|_2^2
    double relax = 0.0;          // (a/b) |tau|^2
    double coupling = 0.0;       // -(tau, D)
    double g_work = 0.0;         // (1/b) (g(D), tau)
    double f_work = 0.0;         // (f(D), D)
    double d_p_pow = 0.0;        // |D|_p^p
    double tau2 = 0.0;           // |tau|^2

    double total() const noexcept { return kinetic + stress_energy; }
};

/// Time integrals over a step of the quantities entering the energy estimate.
/// Integrated alongside the state they are accurate to integrator tolerance.
struct StepIntegrals {
    double loss = 0.0;     // f_work + relax - coupling - g_work
    double d_p_pow = 0.0;  // |D|_p^p
    double tau2 = 0.0;     // |tau|^2

    void axpy(double s, const StepIntegrals& o) {
        loss += s * o.loss;
        d_p_pow += s * o.d_p_pow;
        tau2 += s * o.tau2;
    }
    StepIntegrals& operator*=(double s) {
        loss *= s;
        d_p_pow *= s;
        tau2 *= s;
        return *this;
    }
    friend StepIntegrals operator-(StepIntegrals a, const StepIntegrals& b) {
        a.axpy(-1.0, b);
        return a;
    }
};

struct LedgerRow {
    double t = 0.0;
    double dt = 0.0;
    double kinetic = 0.0;
    double stress_energy = 0.0;
    double dissipation_p = 0.0;
    double dissipation_2 = 0.0;
    double relax = 0.0;
    double coupling = 0.0;
    double g_work = 0.0;
    double budget_residual = 0.0;
    double f_work = 0.0;
    double majorant = 0.0;  // gamma (nu |D|_2^2 + (a/b) |tau|^2)
    double d_p_pow = 0.0;
    double tau2 = 0.0;
    StepIntegrals step;  // integrals over the step ending at t

    double total() const noexcept { return kinetic + stress_energy; }
};

/// Row 0 describes the initial state; every later row one accepted step.
struct EnergyLedger {
    std::vector<LedgerRow> rows;

    bool empty() const noexcept { return rows.empty(); }
    double initial_energy() const noexcept { return rows.empty() ? 0.0 : rows.front().total(); }
};

inline EnergyTerms energy_terms(const State& s, const ConstitutiveModel& model, const PhysicalParams& params) {
    const GridSpec& grid = s.grid();
    const SpectralTensorField D = sym_grad(s.v);
    const auto Dp = to_physical(D);
    const auto Tp = to_physical(s.tau);

    EnergyTerms e;
    e.kinetic = 0.5 * inner_product_L2(s.v, s.v);
    e.tau2 = inner_product_L2(s.tau, s.tau);
    const double d2 = inner_product_L2(D, D);
    e.d_p_pow = lp_norm_pow(Dp, model.p_exp);
    e.dissipation_p = params.nu_mono * e.d_p_pow;
    e.dissipation_2 = params.nu_mono * d2;
    e.coupling = -inner_product_L2(s.tau, D);

    std::vector<double> fw(grid.point_count()), gw(grid.point_count());
    for (std::size_t i = 0; i < grid.point_count(); ++i) {
        const Mat2 d = sym_at(Dp, i);
        fw[i] = contract(f_of_D(d, model), d);
        gw[i] = contract(g_of_D(d, model, params), sym_at(Tp, i));
    }
    e.f_work = integrate(grid, fw);
    if (params.b != 0.0) {
        e.stress_energy = e.tau2 / (2.0 * params.b);
        e.relax = params.a / params.b * e.tau2;
        e.g_work = integrate(grid, gw) / params.b;
    }
    return e;
}

/// Instantaneous integrands of StepIntegrals from precomputed kinematics.
inline StepIntegrals energy_rates(const Kinematics& kin, const SpectralTensorField& tau, const ConstitutiveModel& model,
                                  const PhysicalParams& params) {
    const GridSpec& grid = tau.grid();
    const bool stress = params.b != 0.0;
    const auto tp = to_physical(tau);
    StepIntegrals r;
    for (std::size_t i = 0; i < grid.point_count(); ++i) {
        const Mat2 d = sym_at(kin.D, i);
        const Mat2 t = sym_at(tp, i);
        const double d2 = d.frob2();
        r.d_p_pow += std::pow(d2, 0.5 * model.p_exp);
        r.tau2 += t.frob2();
        r.loss += contract(f_of_D(d, model), d);
        if (stress) {
            r.loss += params.a / params.b * t.frob2() + contract(t, d) - contract(g_of_D(d, model, params), t) / params.b;
        }
    }
    r *= grid.cell_area();
    return r;
}

/// Ledger row for `after`. With E = kinetic + stress energy the budget residual is
///   (E_after - E_before + integral of the loss rate) / dt.
/// `step` holds the co-integrated step integrals; without it they are
/// approximated by the trapezoidal rule, which leaves an O(dt^2) residual.
inline LedgerRow ledger_row(const LedgerRow* before, const State& after, const ConstitutiveModel& model,
                            const PhysicalParams& params, std::optional<StepIntegrals> step = std::nullopt) {
    const EnergyTerms e = energy_terms(after, model, params);
    LedgerRow r;
    r.t = after.t;
    r.kinetic = e.kinetic;
    r.stress_energy = e.stress_energy;
    r.dissipation_p = e.dissipation_p;
    r.dissipation_2 = e.dissipation_2;
    r.relax = e.relax;
    r.coupling = e.coupling;
    r.g_work = e.g_work;
    r.f_work = e.f_work;
    r.d_p_pow = e.d_p_pow;
    r.tau2 = e.tau2;
    r.majorant = params.gamma * (e.dissipation_2 + e.relax);
    if (before) {
        r.dt = r.t - before->t;
        if (step) {
            r.step = *step;
        } else {
            auto loss = [](const LedgerRow& x) { return x.f_work + x.relax - x.coupling - x.g_work; };
            r.step.loss = 0.5 * r.dt * (loss(*before) + loss(r));
            r.step.d_p_pow = 0.5 * r.dt * (before->d_p_pow + r.d_p_pow);
            r.step.tau2 = 0.5 * r.dt * (before->tau2 + r.tau2);
        }
        if (r.dt > 0.0) r.budget_residual = (r.total() - before->total() + r.step.loss) / r.dt;
    }
    return r;
}

inline LedgerRow ledger_row(const State& before, const State& after, const ConstitutiveModel& model,
                            const PhysicalParams& params) {
    const LedgerRow b = ledger_row(nullptr, before, model, params);
    return ledger_row(&b, after, model, params);
}

struct Verdict {
    bool pass = true;
    double max_violation = 0.0;  // largest positive excess over the bound; 0 when none
    std::size_t worst_row = 0;
    std::string detail;
};

namespace detail {

inline void record(Verdict& v, double excess, std::size_t row) {
    if (excess > v.max_violation) {
        v.max_violation = excess;
        v.worst_row = row;
    }
}

} // namespace detail

/// Integrated interpolation constant: |A|^2 <= 1 + |A|^p pointwise for p >= 2,
/// so |D|_2^2 <= |Omega| + |D|_p^p with |Omega| = 4 pi^2.
inline double interpolation_constant() { return GridSpec::domain_measure(); }

/// Stepwise energy inequality
///   dE/dt + (1-gamma) (nu |D|_p^p + (a/b)|tau|^2) <= gamma nu C + tol,
/// with dE/dt the difference quotient between consecutive rows and the
/// dissipation terms replaced by their step integrals divided by dt.
inline Verdict check_energy_inequality(const EnergyLedger& ledger, const PhysicalParams& params, double interp_const,
                                       double tol) {
    if (!(params.gamma < 1.0)) {
        throw std::invalid_argument("check_energy_inequality: requires gamma < 1, got " + std::to_string(params.gamma));
    }
    Verdict v;
    const double c_run = params.gamma * params.nu_mono * interp_const;
    const double damp = 1.0 - params.gamma;
    const double relax_rate = params.b != 0.0 ? params.a / params.b : 0.0;
    for (std::size_t i = 1; i < ledger.rows.size(); ++i) {
        const LedgerRow& a = ledger.rows[i - 1];
        const LedgerRow& b = ledger.rows[i];
        if (!(b.dt > 0.0)) continue;
        const double dEdt = (b.total() - a.total()) / b.dt;
        const double diss = damp * (params.nu_mono * b.step.d_p_pow + relax_rate * b.step.tau2) / b.dt;
        detail::record(v, dEdt + diss - c_run - tol, i);
    }
    v.pass = v.max_violation == 0.0;
    if (!v.pass) v.detail = "energy inequality exceeded by " + std::to_string(v.max_violation) + " at row " +
                            std::to_string(v.worst_row);
    return v;
}

/// Total energy nonincreasing between consecutive rows, up to `slack`.
inline Verdict check_energy_monotone(const EnergyLedger& ledger, double slack) {
    Verdict v;
    for (std::size_t i = 1; i < ledger.rows.size(); ++i) {
        detail::record(v, ledger.rows[i].total() - ledger.rows[i - 1].total() - slack, i);
    }
    v.pass = v.max_violation == 0.0;
    if (!v.pass) v.detail = "energy increased by " + std::to_string(v.max_violation) + " beyond slack at row " +
                            std::to_string(v.worst_row);
    return v;
}

enum class YoungForm {
    net_work,  // |g_work + coupling|, the combination the energy estimate bounds
    g_work,    // |g_work| alone
};

/// Stepwise Young bound  |work| <= gamma (nu |D|_2^2 + (a/b)|tau|^2) + slack.
/// The net work equals (1/(1-theta)) (tau, (mu - 1) D) and is bounded for all
/// admissible parameters; g_work alone is bounded only when lambda <= 1 - theta.
inline Verdict check_young_majorant(const EnergyLedger& ledger, double slack, YoungForm form = YoungForm::net_work) {
    Verdict v;
    for (std::size_t i = 0; i < ledger.rows.size(); ++i) {
        const LedgerRow& r = ledger.rows[i];
        const double w = form == YoungForm::net_work ? r.g_work + r.coupling : r.g_work;
        detail::record(v, std::abs(w) - r.majorant - slack, i);
    }
    v.pass = v.max_violation == 0.0;
    if (!v.pass) v.detail = "work term exceeds gamma majorant by " + std::to_string(v.max_violation) + " at row " +
                            std::to_string(v.worst_row);
    return v;
}

/// tail(M) = integral of |tau|^2 over {|tau| >= M} by grid quadrature.
inline std::vector<double> tail_profile(const SpectralTensorField& tau, const std::vector<double>& thresholds) {
    if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
        throw std::invalid_argument("tail_profile: thresholds must be sorted ascending");
    }
    const auto tp = to_physical(tau);
    std::vector<double> mags(tp.grid.point_count());
    for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = pointwise_norm2(tp, i);
    std::vector<double> out;
    out.reserve(thresholds.size());
    for (double M : thresholds) {
        double s = 0.0;
        for (double m2 : mags) {
            if (std::sqrt(m2) >= M) s += m2;
        }
        out.push_back(s * tp.grid.cell_area());
    }
    return out;
}

struct StressSplit {
    SpectralTensorField psi;
    SpectralTensorField H;
};

/// psi(0) = tau0 on {|tau0| < R}, H(0) = tau0 elsewhere, split pointwise on the
/// grid and transformed back; means are removed from both parts.
inline StressSplit split_initial_stress(const SpectralTensorField& tau0, double r_split) {
    if (!(r_split > 0.0)) throw std::invalid_argument("split_initial_stress: R must be positive");
    const auto tp = to_physical(tau0);
    GridValues<SymTensorKind> psi(tp.grid), H(tp.grid);
    for (std::size_t i = 0; i < tp.grid.point_count(); ++i) {
        auto& dst = std::sqrt(pointwise_norm2(tp, i)) < r_split ? psi : H;
        for (std::size_t c = 0; c < 3; ++c) dst.comp[c][i] = tp.comp[c][i];
    }
    StressSplit out{to_spectral(psi), to_spectral(H)};
    enforce_hermitian(out.psi);
    enforce_hermitian(out.H);
    zero_mean(out.psi);
    zero_mean(out.H);
    return out;
}

struct DecompositionSample {
    double t = 0.0;
    double norm_tau = 0.0;                // |tau|_2
    double norm_psi_p = 0.0;              // |psi|_p
    double norm_H_2 = 0.0;                // |H|_2
    double superposition_residual = 0.0;  // |psi + H - tau|_2
    double d_integral = 0.0;              // int_0^t |D|_p^p ds
};

inline DecompositionSample decomposition_sample(const State& s, const SpectralTensorField& psi,
                                                const SpectralTensorField& H, double p_exp, double d_integral) {
    DecompositionSample d;
    d.t = s.t;
    d.norm_tau = norm_L2(s.tau);
    d.norm_psi_p = lp_norm(psi, p_exp);
    d.norm_H_2 = norm_L2(H);
    d.superposition_residual = norm_L2(psi + H - s.tau);
    d.d_integral = d_integral;
    return d;
}

/// |psi + H - tau|_2 <= rel |tau|_2 at every sample (absolute floor 1e-14 for tau = 0).
inline Verdict check_superposition(const std::vector<DecompositionSample>& series, double rel = 1e-6) {
    Verdict v;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        detail::record(v, s.superposition_residual - rel * s.norm_tau - 1e-14, i);
    }
    v.pass = v.max_violation == 0.0;
    if (!v.pass) v.detail = "superposition residual exceeds bound by " + std::to_string(v.max_violation);
    return v;
}

struct DecayVerdict {
    Verdict monotone;
    bool envelope_ok = true;
    double envelope_error = 0.0;  // max relative deviation from exp(-a t) |H(0)|
};

/// |H(t)|_2 <= |H(0)|_2 (1 + 1e-8). The envelope exp(-a t)|H(0)|_2 is checked
/// to 1e-4 relative; a miss there is only a warning.
inline DecayVerdict check_H_decay(const std::vector<DecompositionSample>& series, double a) {
    DecayVerdict out;
    if (series.empty()) return out;
    const double h0 = series.front().norm_H_2;
    const double t0 = series.front().t;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        detail::record(out.monotone, s.norm_H_2 - h0 * (1.0 + 1e-8), i);
        if (h0 > 0.0) {
            const double env = std::exp(-a * (s.t - t0)) * h0;
            out.envelope_error = std::max(out.envelope_error, std::abs(s.norm_H_2 - env) / env);
        } else {
            out.envelope_error = std::max(out.envelope_error, s.norm_H_2);
        }
    }
    out.monotone.pass = out.monotone.max_violation == 0.0;
    if (!out.monotone.pass) out.monotone.detail = "|H(t)| grew above |H(0)| by " +
                                                  std::to_string(out.monotone.max_violation);
    out.envelope_ok = out.envelope_error <= 1e-4;
    return out;
}

/// |psi(t)|_p <= |psi(0)|_p + sup|mu~| t^(1-1/p) (int_0^t |D|_p^p)^(1/p), with
/// slack `rel` relative to the right-hand side.
inline Verdict check_psi_lp_bound(const std::vector<DecompositionSample>& series, double p_exp, double mu_sup,
                                  double rel = 1e-6) {
    Verdict v;
    if (series.empty()) return v;
    const double psi0 = series.front().norm_psi_p;
    const double t0 = series.front().t;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const double t = s.t - t0;
        const double growth = t > 0.0 ? mu_sup * std::pow(t, 1.0 - 1.0 / p_exp) *
                                            std::pow(std::max(s.d_integral, 0.0), 1.0 / p_exp)
                                      : 0.0;
        const double bound = psi0 + growth;
        detail::record(v, s.norm_psi_p - bound * (1.0 + rel) - 1e-14, i);
    }
    v.pass = v.max_violation == 0.0;
    if (!v.pass) v.detail = "psi L^p bound exceeded by " + std::to_string(v.max_violation);
    return v;
}

} // namespace oldroyd
