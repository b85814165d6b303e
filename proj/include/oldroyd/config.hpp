#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "oldroyd/constitutive.hpp"
#include "oldroyd/grid.hpp"
#include "oldroyd/integrator.hpp"

namespace oldroyd {

enum class VelocityKind { zero, taylor_green, random_smooth };
enum class StressKind { zero, random_smooth, scaled_identity_mode };

struct RandomSpec {
    std::uint64_t seed = 1;
    double slope = 3.0;  // amplitude decays like (1 + |k|^2)^(-slope/2)
    double amplitude = 1.0;
};

struct SimulationConfig {
    int n = 0;
    ConstitutiveModel model;
    double weissenberg = 1.0;
    double theta = 0.5;
    double nu = 1.0;
    double lambda = 0.0;
    PhysicalParams params;
    Admissibility admissibility;

    struct Run {
        double t_end = 0.0;
        StepControl ctrl;
        double snapshot_interval = 0.0;
        double ledger_interval = 0.0;
    } run;

    struct Initial {
        VelocityKind velocity = VelocityKind::zero;
        RandomSpec velocity_random{1, 3.0, 1.0};
        StressKind stress = StressKind::zero;
        RandomSpec stress_random{2, 3.0, 1.0};
        int mode_kx = 1;
        int mode_ky = 0;
    } initial;

    struct Diagnostics {
        std::vector<double> tail_thresholds{0.0, 0.05, 0.1, 0.2, 0.5, 1.0};
        double r_split = 1.0;
        bool enable_decomposition = false;
    } diagnostics;

    GridSpec grid() const { return GridSpec(n); }
};

struct ParseResult {
    std::optional<SimulationConfig> config;
    std::vector<std::string> errors;

    bool ok() const noexcept { return config.has_value(); }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double x = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
    if (std::isnan(x)) return std::nullopt;
    return x;
}

inline std::optional<std::int64_t> to_int(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    std::int64_t x = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
    return x;
}

inline std::vector<std::string_view> split_list(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto pos = s.find(sep, start);
        const auto end = pos == std::string_view::npos ? s.size() : pos;
        out.push_back(trim(s.substr(start, end - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

/// Keys accepted per section.
inline const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"grid", {"n"}},
        {"model", {"f_kind", "p", "variant", "nu0", "f_table", "p_3d_check"}},
        {"physical", {"we", "theta", "nu", "lambda", "r"}},
        {"run",
         {"t_end", "dt_init", "dt_min", "dt_max", "rel_tol", "abs_tol", "blowup_threshold", "snapshot_interval",
          "ledger_interval"}},
        {"initial",
         {"velocity", "velocity_seed", "velocity_slope", "velocity_amplitude", "stress", "stress_seed", "stress_slope",
          "stress_amplitude", "stress_mode_kx", "stress_mode_ky"}},
        {"diagnostics", {"tail_thresholds", "r_split", "enable_decomposition"}},
    };
    return s;
}

struct Entry {
    std::string value;
    int line = 0;
};

class Reader {
public:
    Reader(std::map<std::string, Entry> entries, std::vector<std::string>& errors)
        : entries_(std::move(entries)), errors_(errors) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    void error(const std::string& key, const std::string& msg) { errors_.push_back(label(key) + ": " + msg); }

    std::optional<std::string> text(const std::string& key, bool required) {
        const auto it = entries_.find(key);
        if (it == entries_.end()) {
            if (required) errors_.push_back(label(key) + ": missing required key");
            return std::nullopt;
        }
        return it->second.value;
    }

    std::optional<double> number(const std::string& key, bool required) {
        const auto s = text(key, required);
        if (!s) return std::nullopt;
        auto x = to_double(*s);
        if (!x) error(key, "expected a number, got '" + *s + "'");
        return x;
    }

    std::optional<std::int64_t> integer(const std::string& key, bool required) {
        const auto s = text(key, required);
        if (!s) return std::nullopt;
        auto x = to_int(*s);
        if (!x) error(key, "expected an integer, got '" + *s + "'");
        return x;
    }

    std::optional<bool> flag(const std::string& key) {
        const auto s = text(key, false);
        if (!s) return std::nullopt;
        if (*s == "true" || *s == "1" || *s == "yes") return true;
        if (*s == "false" || *s == "0" || *s == "no") return false;
        error(key, "expected true or false, got '" + *s + "'");
        return std::nullopt;
    }

private:
    static std::string label(const std::string& key) {
        const auto dot = key.find('.');
        return "[" + key.substr(0, dot) + "] " + key.substr(dot + 1);
    }

    std::map<std::string, Entry> entries_;
    std::vector<std::string>& errors_;
};

} // namespace detail

/// Parse and validate an INI-style configuration. Never throws on bad input;
/// every problem is reported in `errors`.
inline ParseResult parse_config(std::string_view text) {
    ParseResult res;
    auto& errors = res.errors;
    std::map<std::string, detail::Entry> entries;
    std::string section;
    bool skip_section = false;
    int line_no = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no);

        if (line.front() == '[') {
            section.clear();
            skip_section = true;
            if (line.back() != ']' || line.size() < 3) {
                errors.push_back(where + ": malformed section header");
                continue;
            }
            section = std::string(detail::trim(line.substr(1, line.size() - 2)));
            skip_section = !detail::schema().count(section);
            if (skip_section) errors.push_back(where + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            errors.push_back(where + ": expected 'key = value'");
            continue;
        }
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string value(detail::trim(line.substr(eq + 1)));
        if (skip_section) continue;  // reported with the header
        if (section.empty()) {
            errors.push_back(where + ": key '" + key + "' outside of any section");
            continue;
        }
        if (!detail::schema().at(section).count(key)) {
            errors.push_back(where + ": unknown key '" + key + "' in [" + section + "]");
            continue;
        }
        const std::string full = section + "." + key;
        if (entries.count(full)) {
            errors.push_back(where + ": duplicate key '" + key + "' in [" + section + "]");
            continue;
        }
        entries[full] = {value, line_no};
    }

    detail::Reader rd(std::move(entries), errors);
    SimulationConfig cfg;

    // [grid]
    if (auto n = rd.integer("grid.n", true)) {
        if (*n < 4 || *n % 2 != 0) rd.error("grid.n", "must be an even integer >= 4");
        else if (*n > 4096) rd.error("grid.n", "must not exceed 4096");
        else cfg.n = static_cast<int>(*n);
    }

    // [model]
    if (auto k = rd.text("model.f_kind", true)) {
        if (*k == "power_additive") cfg.model.f_kind = FKind::power_additive;
        else if (*k == "power_quadratic") cfg.model.f_kind = FKind::power_quadratic;
        else if (*k == "linear") cfg.model.f_kind = FKind::linear;
        else if (*k == "tabulated") cfg.model.f_kind = FKind::tabulated;
        else rd.error("model.f_kind", "must be one of power_additive, power_quadratic, linear, tabulated");
    }
    const bool power = cfg.model.f_kind == FKind::power_additive || cfg.model.f_kind == FKind::power_quadratic;
    if (auto p = rd.number("model.p", true)) {
        cfg.model.p_exp = *p;
        if (!std::isfinite(*p)) rd.error("model.p", "must be finite");
        else if (power && !(*p > 2.0)) rd.error("model.p", "must satisfy p > 2 for power laws in two dimensions");
        else if (!power && !(*p >= 2.0)) rd.error("model.p", "must satisfy p >= 2");
    }
    if (auto check = rd.flag("model.p_3d_check"); check && *check && !(cfg.model.p_exp >= 2.5)) {
        rd.error("model.p_3d_check", "p must be >= 5/2 for the three-dimensional theory");
    }
    if (auto v = rd.text("model.variant", true)) {
        if (*v == "S") cfg.model.variant = SystemVariant::S;
        else if (*v == "S1") cfg.model.variant = SystemVariant::S1;
        else if (*v == "S2") cfg.model.variant = SystemVariant::S2;
        else rd.error("model.variant", "must be one of S, S1, S2");
    }
    if (auto nu0 = rd.number("model.nu0", false)) {
        if (!(*nu0 > 0.0) || !std::isfinite(*nu0)) rd.error("model.nu0", "must be positive and finite");
        else cfg.model.nu0 = *nu0;
    }
    if (auto tab = rd.text("model.f_table", cfg.model.f_kind == FKind::tabulated)) {
        if (cfg.model.f_kind != FKind::tabulated) {
            rd.error("model.f_table", "only allowed with f_kind = tabulated");
        } else {
            bool good = true;
            for (auto item : detail::split_list(*tab, ',')) {
                const auto colon = item.find(':');
                const auto s = colon == std::string_view::npos ? std::nullopt : detail::to_double(item.substr(0, colon));
                const auto f = colon == std::string_view::npos ? std::nullopt : detail::to_double(item.substr(colon + 1));
                if (!s || !f || !std::isfinite(*s) || !std::isfinite(*f)) {
                    rd.error("model.f_table", "entries must be 's:phi' pairs of finite numbers");
                    good = false;
                    break;
                }
                cfg.model.table.emplace_back(*s, *f);
            }
            if (good) {
                const auto& t = cfg.model.table;
                if (t.size() < 2) rd.error("model.f_table", "needs at least two nodes");
                else if (t.front().first != 0.0 || t.front().second != 0.0) rd.error("model.f_table", "must start at 0:0 so that f(0) = 0");
                else {
                    for (std::size_t i = 1; i < t.size(); ++i) {
                        if (!(t[i].first > t[i - 1].first)) {
                            rd.error("model.f_table", "node magnitudes must be strictly increasing");
                            break;
                        }
                    }
                }
            }
        }
    }

    // [physical]
    const auto we = rd.number("physical.we", true);
    const auto theta = rd.number("physical.theta", true);
    const auto nu = rd.number("physical.nu", true);
    const auto lambda = rd.number("physical.lambda", true);
    const auto r = rd.number("physical.r", true);
    if (we && !(*we > 0.0 && std::isfinite(*we))) rd.error("physical.we", "Weissenberg number must be positive and finite");
    if (theta && !(*theta > 0.0 && *theta < 1.0)) rd.error("physical.theta", "theta must lie in (0,1)");
    if (nu && !(*nu > 0.0 && std::isfinite(*nu))) rd.error("physical.nu", "nu must be positive and finite");
    if (lambda && !(*lambda >= 0.0 && *lambda <= 1.0)) rd.error("physical.lambda", "lambda must lie in [0,1]");
    if (r && !(*r >= 1.0 && *r <= 2.0)) rd.error("physical.r", "r must lie in [1,2]");
    if (r) cfg.model.r_exp = *r;

    const bool physical_ok = we && theta && nu && lambda && *we > 0.0 && std::isfinite(*we) && *theta > 0.0 && *theta < 1.0 && *nu > 0.0 &&
                             std::isfinite(*nu) && *lambda >= 0.0 && *lambda <= 1.0;
    if (physical_ok) {
        cfg.weissenberg = *we;
        cfg.theta = *theta;
        cfg.nu = *nu;
        cfg.lambda = *lambda;
        cfg.admissibility = check_admissibility(*lambda, *theta, *nu);
        if (!cfg.admissibility.accepted) {
            rd.error("physical.lambda", cfg.admissibility.reason);
        } else {
            cfg.params = PhysicalParams::make(*we, *theta, *nu, *lambda);
            if (!(cfg.params.gamma < 1.0)) {
                rd.error("physical.lambda", "gamma = " + std::to_string(cfg.params.gamma) + " must be < 1");
            }
        }
    }

    // [run]
    if (auto t = rd.number("run.t_end", true)) {
        if (!(*t >= 0.0) || !std::isfinite(*t)) rd.error("run.t_end", "must be finite and >= 0");
        else cfg.run.t_end = *t;
    }
    auto positive = [&](const char* key, double& dst) {
        if (auto x = rd.number(key, false)) {
            if (!(*x > 0.0) || !std::isfinite(*x)) rd.error(key, "must be positive and finite");
            else dst = *x;
        }
    };
    auto nonneg = [&](const char* key, double& dst) {
        if (auto x = rd.number(key, false)) {
            if (!(*x >= 0.0) || !std::isfinite(*x)) rd.error(key, "must be finite and >= 0");
            else dst = *x;
        }
    };
    StepControl& c = cfg.run.ctrl;
    positive("run.dt_init", c.dt_init);
    positive("run.dt_min", c.dt_min);
    positive("run.dt_max", c.dt_max);
    positive("run.rel_tol", c.rel_tol);
    positive("run.abs_tol", c.abs_tol);
    positive("run.blowup_threshold", c.blowup_threshold);
    if (!(c.dt_min <= c.dt_init && c.dt_init <= c.dt_max)) {
        rd.error("run.dt_init", "must satisfy dt_min <= dt_init <= dt_max");
    }
    nonneg("run.snapshot_interval", cfg.run.snapshot_interval);
    nonneg("run.ledger_interval", cfg.run.ledger_interval);

    // [initial]
    if (auto v = rd.text("initial.velocity", false)) {
        if (*v == "zero") cfg.initial.velocity = VelocityKind::zero;
        else if (*v == "taylor_green") cfg.initial.velocity = VelocityKind::taylor_green;
        else if (*v == "random_smooth") cfg.initial.velocity = VelocityKind::random_smooth;
        else rd.error("initial.velocity", "must be one of zero, taylor_green, random_smooth");
    }
    if (auto s = rd.text("initial.stress", false)) {
        if (*s == "zero") cfg.initial.stress = StressKind::zero;
        else if (*s == "random_smooth") cfg.initial.stress = StressKind::random_smooth;
        else if (*s == "scaled_identity_mode") cfg.initial.stress = StressKind::scaled_identity_mode;
        else rd.error("initial.stress", "must be one of zero, random_smooth, scaled_identity_mode");
    }
    auto random_spec = [&](const std::string& prefix, RandomSpec& dst) {
        if (auto s = rd.integer(prefix + "_seed", false)) {
            if (*s < 0) rd.error(prefix + "_seed", "must be >= 0");
            else dst.seed = static_cast<std::uint64_t>(*s);
        }
        if (auto s = rd.number(prefix + "_slope", false)) {
            if (!(*s >= 0.0) || !std::isfinite(*s)) rd.error(prefix + "_slope", "must be finite and >= 0");
            else dst.slope = *s;
        }
        if (auto a = rd.number(prefix + "_amplitude", false)) {
            if (!std::isfinite(*a)) rd.error(prefix + "_amplitude", "must be finite");
            else dst.amplitude = *a;
        }
    };
    random_spec("initial.velocity", cfg.initial.velocity_random);
    random_spec("initial.stress", cfg.initial.stress_random);
    auto kx = rd.integer("initial.stress_mode_kx", false);
    auto ky = rd.integer("initial.stress_mode_ky", false);
    if (kx) cfg.initial.mode_kx = static_cast<int>(std::clamp<std::int64_t>(*kx, -100000, 100000));
    if (ky) cfg.initial.mode_ky = static_cast<int>(std::clamp<std::int64_t>(*ky, -100000, 100000));
    if (cfg.initial.stress == StressKind::scaled_identity_mode) {
        const int K = cfg.n >= 4 ? (cfg.n - 1) / 3 : 0;
        if (cfg.initial.mode_kx == 0 && cfg.initial.mode_ky == 0) {
            rd.error("initial.stress_mode_kx", "the stress mode must not be the mean mode");
        } else if (cfg.n >= 4 && (std::abs(cfg.initial.mode_kx) > K || std::abs(cfg.initial.mode_ky) > K)) {
            rd.error("initial.stress_mode_kx", "the stress mode lies outside the retained modes |k| <= " +
                                                   std::to_string(K));
        }
    }

    // [diagnostics]
    if (auto t = rd.text("diagnostics.tail_thresholds", false)) {
        std::vector<double> th;
        bool good = true;
        for (auto item : detail::split_list(*t, ',')) {
            const auto x = detail::to_double(item);
            if (!x || !(*x >= 0.0) || !std::isfinite(*x)) {
                rd.error("diagnostics.tail_thresholds", "entries must be finite numbers >= 0");
                good = false;
                break;
            }
            th.push_back(*x);
        }
        if (good && !std::is_sorted(th.begin(), th.end())) {
            rd.error("diagnostics.tail_thresholds", "must be sorted ascending");
        } else if (good) {
            cfg.diagnostics.tail_thresholds = th;
        }
    }
    positive("diagnostics.r_split", cfg.diagnostics.r_split);
    if (auto f = rd.flag("diagnostics.enable_decomposition")) cfg.diagnostics.enable_decomposition = *f;

    if (errors.empty()) res.config = std::move(cfg);
    return res;
}

inline ParseResult load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ParseResult r;
        r.errors.push_back("cannot open config file '" + path + "'");
        return r;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

/// Human-readable summary of the validated parameters.
inline std::string describe(const SimulationConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "grid n = " << cfg.n << " (cutoff " << (cfg.n - 1) / 3 << ")\n";
    os << "f_kind = " << to_string(cfg.model.f_kind) << ", p = " << cfg.model.p_exp
       << ", variant = " << to_string(cfg.model.variant) << "\n";
    os << "We = " << cfg.weissenberg << ", theta = " << cfg.theta << ", nu = " << cfg.nu << ", lambda = " << cfg.lambda
       << ", r = " << cfg.model.r_exp << "\n";
    os << "a = " << cfg.params.a << ", b = " << cfg.params.b << ", gamma = " << cfg.params.gamma << "\n";
    os << "admissibility case "
       << (cfg.admissibility.which == AdmissibilityCase::large_nu ? "i (2*nu*(1-theta) > 1)"
                                                                  : "ii (lambda < sqrt(2*nu*(1-theta)))")
       << "\n";
    return os.str();
}

} // namespace oldroyd
