#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "oldroyd/oldroyd.hpp"

namespace testing_support {

using namespace oldroyd;

/// Admissible random state: divergence-free velocity and symmetric stress.
inline State random_state(const GridSpec& grid, std::uint64_t seed, double v_amp = 1.0, double tau_amp = 1.0,
                          double slope = 1.0) {
    State s{leray_project(random_smooth<VectorKind>(grid, {seed, slope, v_amp}, 11)),
            random_smooth<SymTensorKind>(grid, {seed, slope, tau_amp}, 12), 0.0};
    zero_mean(s.tau);
    return s;
}

inline ConstitutiveModel model_of(FKind kind, SystemVariant variant, double p = 3.0, double r = 1.5) {
    ConstitutiveModel m;
    m.f_kind = kind;
    m.variant = variant;
    m.p_exp = p;
    m.r_exp = r;
    return m;
}

inline std::string config_path(const std::string& name) {
    return std::string(OLDROYD_SOURCE_DIR) + "/configs/" + name;
}

/// Fresh empty directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto p = std::filesystem::path(OLDROYD_BINARY_DIR) / "scratch" / name;
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace testing_support
