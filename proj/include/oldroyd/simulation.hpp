#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "oldroyd/diagnostics.hpp"
#include "oldroyd/galerkin.hpp"
#include "oldroyd/integrator.hpp"

namespace oldroyd {

/// Integrator state: the Galerkin unknowns, the accumulated energy loss, and
/// optionally the two parts of the stress decomposition on the same time grid.
struct Unknowns {
    SpectralVectorField v;
    SpectralTensorField tau;
    SpectralTensorField psi;
    SpectralTensorField H;
    bool has_split = false;
    StepIntegrals acc;

    void axpy(double s, const Unknowns& o) {
        acc.axpy(s, o.acc);
        v.axpy(s, o.v);
        tau.axpy(s, o.tau);
        if (has_split) {
            psi.axpy(s, o.psi);
            H.axpy(s, o.H);
        }
    }
    Unknowns& operator*=(double s) {
        acc *= s;
        v *= s;
        tau *= s;
        if (has_split) {
            psi *= s;
            H *= s;
        }
        return *this;
    }
};

class OldroydSystem {
public:
    OldroydSystem(ConstitutiveModel model, PhysicalParams params, bool freeze_velocity = false)
        : model_(std::move(model)), params_(params), freeze_(freeze_velocity) {}

    Unknowns rhs(const Unknowns& y) const {
        const Kinematics kin(y.v);
        Unknowns out;
        out.has_split = y.has_split;
        out.v = freeze_ ? SpectralVectorField(y.v.grid()) : momentum_rhs(kin, y.tau, model_);
        out.tau = stress_rhs(kin, y.tau, model_, params_);
        out.acc = energy_rates(kin, y.tau, model_, params_);
        if (y.has_split) {
            out.psi = transported_rhs(kin, y.psi, model_, params_, true);
            out.H = transported_rhs(kin, y.H, model_, params_, false);
        }
        return out;
    }

    void project(Unknowns& y) const {
        if (!freeze_) {
            y.v = leray_project(y.v);
            enforce_hermitian(y.v);
        }
        auto fix = [](SpectralTensorField& t) {
            enforce_hermitian(t);
            zero_mean(t);
        };
        fix(y.tau);
        if (y.has_split) {
            fix(y.psi);
            fix(y.H);
        }
    }

    /// RMS of err / (atol + rtol max(|y0|, |y1|)) over the coefficients of v and
    /// tau. The decomposition parts do not steer the step size, so a run with and
    /// without them takes the same steps.
    double error_norm(const Unknowns& y0, const Unknowns& y1, const Unknowns& err, double rtol, double atol) const {
        double s = 0.0;
        std::size_t n = 0;
        auto acc = [&](const auto& a, const auto& b, const auto& e) {
            const auto& da = a.data();
            const auto& db = b.data();
            const auto& de = e.data();
            for (std::size_t i = 0; i < de.size(); ++i) {
                const double sc = atol + rtol * std::max(std::abs(da[i]), std::abs(db[i]));
                const double r = std::abs(de[i]) / sc;
                s += r * r;
            }
            n += de.size();
        };
        acc(y0.v, y1.v, err.v);
        acc(y0.tau, y1.tau, err.tau);
        return n ? std::sqrt(s / static_cast<double>(n)) : 0.0;
    }

    const ConstitutiveModel& model() const noexcept { return model_; }
    const PhysicalParams& params() const noexcept { return params_; }

private:
    ConstitutiveModel model_;
    PhysicalParams params_;
    bool freeze_;
};

struct StepResult {
    State state;
    double dt_used = 0.0;
    int rejected = 0;
    LedgerRow row;
};

/// One adaptive step from `s`, starting from ctrl.dt_init.
inline StepResult step(const State& s, const ConstitutiveModel& model, const PhysicalParams& params,
                       const StepControl& ctrl) {
    const OldroydSystem sys(model, params);
    DormandPrince<Unknowns, OldroydSystem> rk(sys, ctrl);
    Unknowns y{s.v, s.tau, {}, {}, false, {}};
    const auto out = rk.step(y, s.t, std::numeric_limits<double>::infinity());
    StepResult r;
    r.state = State{std::move(y.v), std::move(y.tau), s.t + out.dt_used};
    r.dt_used = out.dt_used;
    r.rejected = out.rejected;
    const LedgerRow before = ledger_row(nullptr, s, model, params);
    r.row = ledger_row(&before, r.state, model, params, y.acc);
    return r;
}

enum class RunStatus { completed, step_failure, blow_up };

inline const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::completed: return "completed";
        case RunStatus::step_failure: return "step_failure";
        case RunStatus::blow_up: return "blow_up";
    }
    return "?";
}

struct RunOptions {
    double t_end = 1.0;
    double sample_interval = 0.0;  // 0: sample only the initial and final states
    bool decomposition = false;
    double r_split = 1.0;
    bool freeze_velocity = false;
    std::function<void(const State&, const LedgerRow&)> on_step;
};

struct Sample {
    State state;
    SpectralTensorField psi;
    SpectralTensorField H;
};

struct RunResult {
    RunStatus status = RunStatus::completed;
    std::string message;
    State final_state;
    EnergyLedger ledger;
    std::vector<Sample> samples;
    std::vector<DecompositionSample> decomposition;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

/// Integrate from `initial` to opts.t_end. Steps are shortened to land on
/// sample times. Failures stop the run and keep everything recorded so far.
inline RunResult run(const State& initial, const ConstitutiveModel& model, const PhysicalParams& params,
                     const StepControl& ctrl, const RunOptions& opts) {
    RunResult res;
    res.final_state = initial;
    if (opts.t_end == initial.t) return res;
    if (!(opts.t_end > initial.t)) throw std::invalid_argument("run: t_end must not precede the initial time");
    ctrl.validate();

    const OldroydSystem sys(model, params, opts.freeze_velocity);
    DormandPrince<Unknowns, OldroydSystem> rk(sys, ctrl);

    Unknowns y{initial.v, initial.tau, {}, {}, opts.decomposition, {}};
    if (opts.decomposition) {
        auto split = split_initial_stress(initial.tau, opts.r_split);
        y.psi = std::move(split.psi);
        y.H = std::move(split.H);
    }

    double t = initial.t;
    double d_integral = 0.0;
    auto record_sample = [&]() {
        const State s{y.v, y.tau, t};
        if (opts.decomposition) res.decomposition.push_back(decomposition_sample(s, y.psi, y.H, model.p_exp, d_integral));
        res.samples.push_back(Sample{s, y.psi, y.H});
    };

    res.ledger.rows.push_back(ledger_row(nullptr, initial, model, params));
    record_sample();

    double next_sample = opts.sample_interval > 0.0 ? initial.t + opts.sample_interval : opts.t_end;
    std::size_t sample_index = 1;
    try {
        while (t < opts.t_end) {
            const double target = std::min(next_sample, opts.t_end);
            const StepIntegrals acc_before = y.acc;
            const auto out = rk.step(y, t, target);
            res.rejected += static_cast<std::size_t>(out.rejected);
            ++res.accepted;
            t = (out.dt_used == target - t) ? target : t + out.dt_used;

            const State s{y.v, y.tau, t};
            const LedgerRow row = ledger_row(&res.ledger.rows.back(), s, model, params, y.acc - acc_before);
            if (!std::isfinite(row.total()) || row.total() > ctrl.blowup_threshold) {
                res.status = RunStatus::blow_up;
                res.message = "energy " + std::to_string(row.total()) + " exceeded the blow-up threshold at t = " +
                              std::to_string(t);
                return res;
            }
            d_integral += row.step.d_p_pow;
            res.ledger.rows.push_back(row);
            res.final_state = s;
            if (opts.on_step) opts.on_step(s, row);

            if (t >= target) {
                record_sample();
                if (opts.sample_interval > 0.0) {
                    ++sample_index;
                    next_sample = initial.t + static_cast<double>(sample_index) * opts.sample_interval;
                    // guard against a sample time within rounding of t_end
                    if (next_sample > opts.t_end - 1e-12 * std::max(1.0, std::abs(opts.t_end))) next_sample = opts.t_end;
                }
            }
        }
    } catch (const StepFailure& e) {
        res.status = RunStatus::step_failure;
        res.message = e.what();
    } catch (const BlowUp& e) {
        res.status = RunStatus::blow_up;
        res.message = e.what();
    }
    return res;
}

} // namespace oldroyd
