#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oldroyd {

/// Dense 2x2 matrix used for pointwise constitutive evaluation.
struct Mat2 {
    double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;

    static Mat2 symmetric(double a11, double a12, double a22) { return {a11, a12, a12, a22}; }

    double frob2() const noexcept { return xx * xx + xy * xy + yx * yx + yy * yy; }
    double frob() const noexcept { return std::sqrt(frob2()); }

    friend Mat2 operator+(const Mat2& a, const Mat2& b) { return {a.xx + b.xx, a.xy + b.xy, a.yx + b.yx, a.yy + b.yy}; }
    friend Mat2 operator-(const Mat2& a, const Mat2& b) { return {a.xx - b.xx, a.xy - b.xy, a.yx - b.yx, a.yy - b.yy}; }
    friend Mat2 operator*(double s, const Mat2& a) { return {s * a.xx, s * a.xy, s * a.yx, s * a.yy}; }
    friend Mat2 operator-(const Mat2& a) { return {-a.xx, -a.xy, -a.yx, -a.yy}; }
    friend bool operator==(const Mat2&, const Mat2&) = default;

    double& operator[](std::size_t i) { return i == 0 ? xx : i == 1 ? xy : i == 2 ? yx : yy; }
    double operator[](std::size_t i) const { return i == 0 ? xx : i == 1 ? xy : i == 2 ? yx : yy; }
};

/// A:B
inline double contract(const Mat2& a, const Mat2& b) noexcept {
    return a.xx * b.xx + a.xy * b.xy + a.yx * b.yx + a.yy * b.yy;
}

inline Mat2 matmul(const Mat2& a, const Mat2& b) noexcept {
    return {a.xx * b.xx + a.xy * b.yx, a.xx * b.xy + a.xy * b.yy, a.yx * b.xx + a.yy * b.yx,
            a.yx * b.xy + a.yy * b.yy};
}

inline Mat2 transpose(const Mat2& a) noexcept { return {a.xx, a.yx, a.xy, a.yy}; }

enum class FKind { power_additive, power_quadratic, linear, tabulated };
enum class SystemVariant { S, S1, S2 };

inline const char* to_string(FKind k) {
    switch (k) {
        case FKind::power_additive: return "power_additive";
        case FKind::power_quadratic: return "power_quadratic";
        case FKind::linear: return "linear";
        case FKind::tabulated: return "tabulated";
    }
    return "?";
}

inline const char* to_string(SystemVariant v) {
    switch (v) {
        case SystemVariant::S: return "S";
        case SystemVariant::S1: return "S1";
        case SystemVariant::S2: return "S2";
    }
    return "?";
}

/// The viscous law f and the stress-source selection of the system.
///
///   power_additive   f(A) = (1 + |A|)^(p-2) A
///   power_quadratic  f(A) = (1 + |A|^2)^((p-2)/2) A
///   linear           f(A) = 2 nu0 A
///   tabulated        f(A) = phi(|A|) A / |A|, phi piecewise linear through `table`
struct ConstitutiveModel {
    FKind f_kind = FKind::power_quadratic;
    double p_exp = 3.0;
    double r_exp = 2.0;
    SystemVariant variant = SystemVariant::S;
    double nu0 = 0.5;
    std::vector<std::pair<double, double>> table;

    bool has_rotation() const noexcept { return variant == SystemVariant::S; }
};

/// Dimensionless parameters. a, b and gamma are derived on construction.
struct PhysicalParams {
    double weissenberg = 1.0;
    double theta = 0.5;
    double nu_mono = 1.0;
    double lambda = 0.0;
    double a = 1.0;
    double b = 1.0;
    double gamma = 0.0;

    static PhysicalParams make(double weissenberg, double theta, double nu_mono, double lambda) {
        if (!(weissenberg > 0.0)) throw std::invalid_argument("weissenberg number must be positive");
        if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0,1)");
        if (!(nu_mono > 0.0)) throw std::invalid_argument("nu must be positive");
        PhysicalParams p;
        p.weissenberg = weissenberg;
        p.theta = theta;
        p.nu_mono = nu_mono;
        p.lambda = lambda;
        p.a = 1.0 / weissenberg;
        p.b = 2.0 * (1.0 - theta) / weissenberg;
        // with We = infinity a = b = 0 and only the closed form is defined
        p.gamma = p.a > 0.0 ? gamma_from_definition(p) : gamma_closed_form(lambda, theta, nu_mono);
        return p;
    }

    /// gamma = lambda / (2 (1 - theta)) * sqrt(b / (a nu))
    static double gamma_from_definition(const PhysicalParams& p) {
        return p.lambda / (2.0 * (1.0 - p.theta)) * std::sqrt(p.b / (p.a * p.nu_mono));
    }

    /// gamma = lambda / sqrt(2 nu (1 - theta)), using b / a = 2 (1 - theta).
    static double gamma_closed_form(double lambda, double theta, double nu) {
        return lambda / std::sqrt(2.0 * nu * (1.0 - theta));
    }
};

enum class AdmissibilityCase { large_nu, small_nu };

struct Admissibility {
    bool accepted = false;
    AdmissibilityCase which = AdmissibilityCase::large_nu;
    std::string reason;
};

/// Existence-theory admissibility of (lambda, theta, nu):
///   case i  : 2 nu (1 - theta) > 1, any lambda in [0, 1];
///   case ii : otherwise lambda must satisfy lambda < sqrt(2 nu (1 - theta)).
inline Admissibility check_admissibility(double lambda, double theta, double nu) {
    Admissibility out;
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        out.reason = "lambda must lie in [0,1]";
        return out;
    }
    const double s = 2.0 * nu * (1.0 - theta);
    if (s > 1.0) {
        out.accepted = true;
        out.which = AdmissibilityCase::large_nu;
        return out;
    }
    out.which = AdmissibilityCase::small_nu;
    if (lambda < std::sqrt(s)) {
        out.accepted = true;
    } else {
        out.reason = "lambda must satisfy lambda < sqrt(2*nu*(1-theta)) when 2*nu*(1-theta) <= 1 (admissibility case ii)";
    }
    return out;
}

/// mu(|D|^2) = 1 - lambda + lambda (1 + |D|^2)^((r-2)/2)
inline double mu(double d2, double lambda, double r_exp) {
    if (!(d2 >= 0.0)) throw std::domain_error("mu: |D|^2 must be non-negative");
    return 1.0 - lambda + lambda * std::pow(1.0 + d2, 0.5 * (r_exp - 2.0));
}

/// mu~(|D|^2) = b / (1 - theta) (mu - theta); S2 uses the constant b.
inline double mu_tilde(double d2, const ConstitutiveModel& model, const PhysicalParams& params) {
    if (model.variant == SystemVariant::S2) return params.b;
    return params.b / (1.0 - params.theta) * (mu(d2, params.lambda, model.r_exp) - params.theta);
}

/// sup over |D| of |mu~|, using mu in [1 - lambda, 1].
inline double mu_tilde_sup(const ConstitutiveModel& model, const PhysicalParams& params) {
    if (model.variant == SystemVariant::S2) return std::abs(params.b);
    const double lo = 1.0 - params.lambda - params.theta;
    const double hi = 1.0 - params.theta;
    return std::abs(params.b) / (1.0 - params.theta) * std::max(std::abs(lo), std::abs(hi));
}

/// g(D) = mu~(|D|^2) D. For S2 this is b D.
inline Mat2 g_of_D(const Mat2& D, const ConstitutiveModel& model, const PhysicalParams& params) {
    return mu_tilde(D.frob2(), model, params) * D;
}

namespace detail {

inline double table_phi(const std::vector<std::pair<double, double>>& t, double s) {
    if (t.size() < 2) throw std::invalid_argument("tabulated f needs at least two nodes");
    std::size_t i = 1;
    while (i + 1 < t.size() && s > t[i].first) ++i;
    const auto [s0, f0] = t[i - 1];
    const auto [s1, f1] = t[i];
    return f0 + (f1 - f0) * (s - s0) / (s1 - s0);
}

} // namespace detail

/// Scalar multiplier m(|A|) with f(A) = m(|A|) A.
inline double f_scale(double norm, const ConstitutiveModel& model) {
    switch (model.f_kind) {
        case FKind::power_additive: return std::pow(1.0 + norm, model.p_exp - 2.0);
        case FKind::power_quadratic: return std::pow(1.0 + norm * norm, 0.5 * (model.p_exp - 2.0));
        case FKind::linear: return 2.0 * model.nu0;
        case FKind::tabulated: {
            if (norm > 0.0) return detail::table_phi(model.table, norm) / norm;
            const auto& t = model.table;
            return (t[1].second - t[0].second) / (t[1].first - t[0].first);
        }
    }
    return 0.0;
}

inline Mat2 f_of_D(const Mat2& A, const ConstitutiveModel& model) { return f_scale(A.frob(), model) * A; }

/// Closed-form potential U with dU/dA_ij = f_ij(A) and U(0) = 0.
inline double potential(const Mat2& A, const ConstitutiveModel& model) {
    const double s = A.frob();
    const double p = model.p_exp;
    switch (model.f_kind) {
        case FKind::power_quadratic: return (std::pow(1.0 + s * s, 0.5 * p) - 1.0) / p;
        case FKind::power_additive:
            // integral_0^s (1 + t)^(p-2) t dt
            return (std::pow(1.0 + s, p) - 1.0) / p - (std::pow(1.0 + s, p - 1.0) - 1.0) / (p - 1.0);
        case FKind::linear: return model.nu0 * s * s;
        case FKind::tabulated: break;
    }
    throw std::invalid_argument(std::string("no closed-form potential for f kind ") + to_string(model.f_kind));
}

inline bool has_potential(const ConstitutiveModel& model) { return model.f_kind != FKind::tabulated; }

} // namespace oldroyd
