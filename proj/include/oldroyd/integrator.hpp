#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace oldroyd {

struct StepControl {
    double dt_init = 1e-3;
    double dt_min = 1e-12;
    double dt_max = 0.1;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double blowup_threshold = 1e12;

    void validate() const {
        if (!(dt_min > 0.0 && dt_min <= dt_init && dt_init <= dt_max)) {
            throw std::invalid_argument("step control: require 0 < dt_min <= dt_init <= dt_max");
        }
        if (!(rel_tol > 0.0 && abs_tol > 0.0)) throw std::invalid_argument("step control: tolerances must be positive");
        if (!(blowup_threshold > 0.0)) throw std::invalid_argument("step control: blowup_threshold must be positive");
    }
};

/// The step size would fall below dt_min.
class StepFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dormand-Prince 5(4) with first-same-as-last reuse and the PI step-size
/// controller of Hairer & Wanner (beta = 0.04).
///
/// `System` provides
///   Y    rhs(const Y&) const;
///   void project(Y&) const;
///   double error_norm(const Y& y0, const Y& y1, const Y& err, double rtol, double atol) const;
/// and `Y` provides `void axpy(double, const Y&)`.
template <class Y, class System>
class DormandPrince {
public:
    struct Outcome {
        double dt_used = 0.0;
        double error = 0.0;
        int rejected = 0;
    };

    DormandPrince(const System& system, StepControl ctrl) : sys_(system), ctrl_(ctrl), dt_next_(ctrl.dt_init) {
        ctrl_.validate();
    }

    double proposed_dt() const noexcept { return dt_next_; }

    /// Drop the cached first stage; required after `y` is modified externally.
    void reset() { k1_.reset(); }

    /// Advance y by one accepted step, never past `t_limit - t`.
    Outcome step(Y& y, double t, double t_limit) {
        static constexpr double c_a21 = 1.0 / 5.0;
        static constexpr std::array<double, 2> c_a3{3.0 / 40.0, 9.0 / 40.0};
        static constexpr std::array<double, 3> c_a4{44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0};
        static constexpr std::array<double, 4> c_a5{19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0,
                                                    -212.0 / 729.0};
        static constexpr std::array<double, 5> c_a6{9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
                                                    -5103.0 / 18656.0};
        static constexpr std::array<double, 6> c_b{35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0,
                                                   -2187.0 / 6784.0, 11.0 / 84.0};
        static constexpr std::array<double, 7> c_e{71.0 / 57600.0,   0.0,          -71.0 / 16695.0, 71.0 / 1920.0,
                                                   -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0};

        const double remaining = t_limit - t;
        if (!(remaining > 0.0)) throw std::invalid_argument("integrator: target time must exceed current time");

        if (!k1_) k1_ = sys_.rhs(y);
        Outcome out;
        for (;;) {
            double dt = std::min(dt_next_, ctrl_.dt_max);
            bool clipped = false;
            if (dt >= remaining * (1.0 - 1e-12)) {
                dt = remaining;
                clipped = true;
            }

            auto stage = [&](auto const& coeffs, auto const&... ks) {
                Y s = y;
                std::size_t i = 0;
                ((s.axpy(dt * coeffs[i++], ks)), ...);
                sys_.project(s);
                return s;
            };

            const Y& k1 = *k1_;
            Y y2 = y;
            y2.axpy(dt * c_a21, k1);
            sys_.project(y2);
            const Y k2 = sys_.rhs(y2);
            const Y k3 = sys_.rhs(stage(c_a3, k1, k2));
            const Y k4 = sys_.rhs(stage(c_a4, k1, k2, k3));
            const Y k5 = sys_.rhs(stage(c_a5, k1, k2, k3, k4));
            const Y k6 = sys_.rhs(stage(c_a6, k1, k2, k3, k4, k5));
            Y y_new = y;
            y_new.axpy(dt * c_b[0], k1);
            y_new.axpy(dt * c_b[2], k3);
            y_new.axpy(dt * c_b[3], k4);
            y_new.axpy(dt * c_b[4], k5);
            y_new.axpy(dt * c_b[5], k6);
            sys_.project(y_new);
            Y k7 = sys_.rhs(y_new);

            Y err = k1;
            err *= dt * c_e[0];
            err.axpy(dt * c_e[2], k3);
            err.axpy(dt * c_e[3], k4);
            err.axpy(dt * c_e[4], k5);
            err.axpy(dt * c_e[5], k6);
            err.axpy(dt * c_e[6], k7);
            const double e = sys_.error_norm(y, y_new, err, ctrl_.rel_tol, ctrl_.abs_tol);

            if (std::isfinite(e) && e <= 1.0) {
                const double expo = 0.2 - 0.75 * beta_;
                double fac = 0.9 * std::pow(std::max(e, 1e-10), -expo) * std::pow(err_old_, beta_);
                fac = std::clamp(fac, 0.2, 5.0);
                const double proposal = dt * fac;
                dt_next_ = clipped ? std::max(proposal, dt_next_) : proposal;
                dt_next_ = std::min(dt_next_, ctrl_.dt_max);
                err_old_ = std::max(e, 1e-4);
                y = std::move(y_new);
                k1_ = std::move(k7);
                out.dt_used = dt;
                out.error = e;
                return out;
            }

            ++out.rejected;
            const double shrink = std::isfinite(e) ? std::max(0.2, 0.9 * std::pow(e, -0.2)) : 0.2;
            dt_next_ = dt * std::min(shrink, 1.0);
            if (dt_next_ < ctrl_.dt_min) {
                throw StepFailure("step size " + std::to_string(dt_next_) + " fell below dt_min at t = " +
                                  std::to_string(t));
            }
        }
    }

private:
    static constexpr double beta_ = 0.04;

    const System& sys_;
    StepControl ctrl_;
    double dt_next_;
    double err_old_ = 1e-4;
    std::optional<Y> k1_;
};

} // namespace oldroyd
