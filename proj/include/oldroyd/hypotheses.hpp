#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "oldroyd/constitutive.hpp"
#include "oldroyd/rng.hpp"

namespace oldroyd {

/// Violations found by a verifier; only the first few are described.
struct ViolationLog {
    std::size_t count = 0;
    std::vector<std::string> examples;

    void add(const std::string& what) {
        ++count;
        if (examples.size() < 8) examples.push_back(what);
    }
    bool empty() const noexcept { return count == 0; }
};

struct GrowthReport {
    double c_fit = 0.0;
    double c_tilde_fit = 0.0;
    std::size_t samples = 0;
    ViolationLog violations;
};

struct MonotonicityReport {
    double nu_fit = std::numeric_limits<double>::infinity();
    std::size_t pairs = 0;
    std::size_t skipped = 0;
    ViolationLog violations;
};

struct CoercivityReport {
    double nu_fit = std::numeric_limits<double>::infinity();
    std::size_t samples = 0;
    std::size_t skipped = 0;
    ViolationLog violations;
};

struct PotentialReport {
    double max_gradient_error = 0.0;  // relative, finite differences vs f
    double c1_fit = std::numeric_limits<double>::infinity();
    double c2_fit = 0.0;
    std::size_t samples = 0;
    ViolationLog violations;
};

namespace detail {

inline std::string describe(const Mat2& a) {
    std::ostringstream os;
    os.precision(6);
    os << "[[" << a.xx << ", " << a.xy << "], [" << a.yx << ", " << a.yy << "]]";
    return os.str();
}

} // namespace detail

/// Random symmetric matrices: direction uniform on the Frobenius unit sphere,
/// magnitude log-uniform on [min_norm, radius].
inline std::vector<Mat2> sample_symmetric(std::size_t count, double radius, std::uint64_t seed,
                                          double min_norm = 1e-3) {
    RngStream rng(seed, 0x5a3d);
    std::vector<Mat2> out;
    out.reserve(count);
    const double lo = std::log(min_norm);
    const double hi = std::log(std::max(radius, min_norm));
    for (std::size_t i = 0; i < count; ++i) {
        // (a11, a22, sqrt(2) a12) is an isometry onto R^3 with the Frobenius norm.
        double g[3];
        double n2 = 0.0;
        do {
            n2 = 0.0;
            for (double& x : g) {
                x = rng.normal();
                n2 += x * x;
            }
        } while (n2 < 1e-24);
        const double n = std::sqrt(n2);
        const double mag = std::exp(lo + (hi - lo) * rng.uniform());
        out.push_back(Mat2::symmetric(mag * g[0] / n, mag * g[2] / (n * std::sqrt(2.0)), mag * g[1] / n));
    }
    return out;
}

/// Growth |f(A)| <= c~ + c |A|^(p-1) with f(0) = 0.
///
/// c~ = 0 is kept when the small-|A| ratio |f|/|A|^(p-1) does not exceed the
/// large-|A| one; otherwise c~ = sup_{|A|<=1} |f| and c = sup_{|A|>1} |f|/|A|^(p-1).
/// Samples in the outer tenth (log magnitude) of the range must satisfy the bound
/// fitted on the inner nine tenths, which flags growth faster than |A|^(p-1).
inline GrowthReport verify_growth(const ConstitutiveModel& model, std::span<const Mat2> samples) {
    GrowthReport rep;
    rep.samples = samples.size();
    const double q = model.p_exp - 1.0;

    const Mat2 f0 = f_of_D(Mat2{}, model);
    if (f0.frob() != 0.0) rep.violations.add("f(0) != 0: |f(0)| = " + std::to_string(f0.frob()));

    std::vector<std::pair<double, double>> pts;  // (|A|, |f(A)|)
    for (const Mat2& A : samples) {
        const double s = A.frob();
        const double fs = f_of_D(A, model).frob();
        if (!std::isfinite(fs)) {
            rep.violations.add("non-finite f at " + detail::describe(A));
            continue;
        }
        if (s == 0.0) {
            if (fs != 0.0) rep.violations.add("f(0) != 0");
            continue;
        }
        pts.emplace_back(s, fs);
    }
    if (pts.empty()) return rep;

    std::sort(pts.begin(), pts.end());
    const double log_lo = std::log(pts.front().first);
    const double log_hi = std::log(pts.back().first);
    const double split = std::exp(log_lo + 0.9 * (log_hi - log_lo));

    auto fit = [&](bool inner_only, double& c, double& ct) {
        double small = 0.0, large = 0.0, fmax_small = 0.0;
        bool any_large = false;
        for (auto [s, fs] : pts) {
            if (inner_only && s > split) continue;
            const double ratio = fs / std::pow(s, q);
            if (s <= 1.0) {
                small = std::max(small, ratio);
                fmax_small = std::max(fmax_small, fs);
            } else {
                large = std::max(large, ratio);
                any_large = true;
            }
        }
        if (!any_large || small <= large) {
            ct = 0.0;
            c = std::max(small, large);
        } else {
            ct = fmax_small;
            c = large;
        }
    };

    fit(false, rep.c_fit, rep.c_tilde_fit);

    if (pts.size() >= 10 && log_hi > log_lo) {
        double c_in = 0.0, ct_in = 0.0;
        fit(true, c_in, ct_in);
        for (auto [s, fs] : pts) {
            if (s <= split) continue;
            const double bound = ct_in + c_in * std::pow(s, q);
            if (fs > bound * (1.0 + 1e-12)) {
                std::ostringstream os;
                os << "growth exceeds |A|^(p-1) extrapolation at |A| = " << s << ": |f| = " << fs
                   << " > " << bound;
                rep.violations.add(os.str());
            }
        }
    }
    return rep;
}

inline GrowthReport verify_growth(const ConstitutiveModel& model, std::size_t sample_count, double radius,
                                  std::uint64_t seed = 1) {
    if (sample_count < 1) throw std::invalid_argument("verify_growth: sample_count must be >= 1");
    const auto s = sample_symmetric(sample_count, radius, seed);
    return verify_growth(model, s);
}

/// Strong monotonicity (f(A)-f(B)):(A-B) >= nu (|A-B|^2 + |A-B|^p). Reports the
/// infimum ratio over pairs; any pair with a non-positive ratio is a violation.
inline MonotonicityReport verify_monotonicity(const ConstitutiveModel& model, std::span<const Mat2> a,
                                              std::span<const Mat2> b) {
    if (model.p_exp < 2.0) throw std::invalid_argument("verify_monotonicity: requires p >= 2");
    MonotonicityReport rep;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        const Mat2 d = a[i] - b[i];
        const double dn = d.frob();
        if (dn == 0.0) {
            ++rep.skipped;
            continue;
        }
        ++rep.pairs;
        const double num = contract(f_of_D(a[i], model) - f_of_D(b[i], model), d);
        const double den = dn * dn + std::pow(dn, model.p_exp);
        const double ratio = num / den;
        if (!std::isfinite(ratio) || ratio <= 0.0) {
            rep.violations.add("(f(A)-f(B)):(A-B) = " + std::to_string(num) + " for A = " + detail::describe(a[i]) +
                               ", B = " + detail::describe(b[i]));
        }
        rep.nu_fit = std::min(rep.nu_fit, ratio);
    }
    if (rep.pairs == 0) rep.nu_fit = 0.0;
    return rep;
}

inline MonotonicityReport verify_monotonicity(const ConstitutiveModel& model, std::size_t sample_count,
                                              double radius, std::uint64_t seed = 2) {
    const auto a = sample_symmetric(sample_count, radius, seed);
    const auto b = sample_symmetric(sample_count, radius, seed + 0x9e37);
    return verify_monotonicity(model, a, b);
}

/// Coercivity f(A):A >= nu |A|^p; reports inf f(A):A / |A|^p over |A| > 0.
inline CoercivityReport verify_coercivity(const ConstitutiveModel& model, std::span<const Mat2> samples) {
    CoercivityReport rep;
    for (const Mat2& A : samples) {
        const double s = A.frob();
        if (s == 0.0) {
            ++rep.skipped;
            continue;
        }
        ++rep.samples;
        const double ratio = contract(f_of_D(A, model), A) / std::pow(s, model.p_exp);
        if (!std::isfinite(ratio) || ratio <= 0.0) {
            rep.violations.add("f(A):A/|A|^p = " + std::to_string(ratio) + " at A = " + detail::describe(A));
        }
        rep.nu_fit = std::min(rep.nu_fit, ratio);
    }
    if (rep.samples == 0) rep.nu_fit = 0.0;
    return rep;
}

inline CoercivityReport verify_coercivity(const ConstitutiveModel& model, std::size_t sample_count, double radius,
                                          std::uint64_t seed = 3) {
    const auto s = sample_symmetric(sample_count, radius, seed);
    return verify_coercivity(model, s);
}

/// Checks the potential U of f: central differences of U reproduce f to 1e-6
/// relative, and the Hessian (central differences of f) satisfies
///   xi:H:xi >= C1 (1+|eta|)^(p-2) |xi|^2,   |H_ijkl| <= C2 (1+|eta|)^(p-2).
inline PotentialReport verify_potential(const ConstitutiveModel& model, std::size_t sample_count, double radius = 10.0,
                                        std::uint64_t seed = 4) {
    if (!has_potential(model)) {
        throw std::invalid_argument(std::string("verify_potential: unsupported f kind ") + to_string(model.f_kind));
    }
    PotentialReport rep;
    if (potential(Mat2{}, model) != 0.0) rep.violations.add("U(0) != 0");
    if (f_of_D(Mat2{}, model).frob() != 0.0) rep.violations.add("grad U(0) != 0");

    const auto etas = sample_symmetric(sample_count, radius, seed);
    const auto xis = sample_symmetric(sample_count, 1.0, seed + 17, 1.0);
    for (std::size_t n = 0; n < etas.size(); ++n) {
        const Mat2& eta = etas[n];
        const double scale = std::max(1.0, eta.frob());
        const Mat2 f = f_of_D(eta, model);

        // dU/d eta_ij by central differences.
        const double hu = 1e-5 * scale;
        Mat2 grad;
        for (std::size_t i = 0; i < 4; ++i) {
            Mat2 ep = eta, em = eta;
            ep[i] += hu;
            em[i] -= hu;
            grad[i] = (potential(ep, model) - potential(em, model)) / (2.0 * hu);
        }
        const double err = (grad - f).frob() / std::max(f.frob(), 1e-300);
        rep.max_gradient_error = std::max(rep.max_gradient_error, err);
        if (!(err <= 1e-6)) {
            rep.violations.add("finite-difference gradient of U differs from f by " + std::to_string(err) +
                               " (relative) at " + detail::describe(eta));
        }

        // H_{ij,kl} = d f_ij / d eta_kl.
        const double hf = 1e-6 * scale;
        double H[4][4];
        for (std::size_t l = 0; l < 4; ++l) {
            Mat2 ep = eta, em = eta;
            ep[l] += hf;
            em[l] -= hf;
            const Mat2 df = f_of_D(ep, model) - f_of_D(em, model);
            for (std::size_t i = 0; i < 4; ++i) H[i][l] = df[i] / (2.0 * hf);
        }
        const double weight = std::pow(1.0 + eta.frob(), model.p_exp - 2.0);
        const Mat2& xi = xis[n];
        double quad = 0.0, hmax = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t l = 0; l < 4; ++l) {
                quad += xi[i] * H[i][l] * xi[l];
                hmax = std::max(hmax, std::abs(H[i][l]));
            }
        }
        const double c1 = quad / (weight * xi.frob2());
        const double c2 = hmax / weight;
        if (!std::isfinite(c1) || c1 <= 0.0) {
            rep.violations.add("Hessian quadratic form not positive at " + detail::describe(eta));
        }
        rep.c1_fit = std::min(rep.c1_fit, c1);
        rep.c2_fit = std::max(rep.c2_fit, c2);
        ++rep.samples;
    }
    return rep;
}

} // namespace oldroyd
