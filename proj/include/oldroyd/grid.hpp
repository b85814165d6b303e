#pragma once

#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace oldroyd {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Collocation grid on the torus [0, 2pi)^2 together with the retained
/// (dealiased) square of wavevectors |k1|, |k2| <= cutoff.
///
/// The cutoff satisfies 3 * cutoff < points, so every quadratic product of
/// retained modes is computed alias-free on the retained square.
class GridSpec {
public:
    GridSpec() = default;

    explicit GridSpec(int points_per_axis) : n_(points_per_axis) {
        if (points_per_axis < 4 || points_per_axis % 2 != 0) {
            throw std::invalid_argument("grid: points per axis must be an even integer >= 4, got " +
                                        std::to_string(points_per_axis));
        }
        cutoff_ = (points_per_axis - 1) / 3;
    }

    int points() const noexcept { return n_; }
    int cutoff() const noexcept { return cutoff_; }
    /// Side length of the retained wavevector square, 2K + 1.
    int width() const noexcept { return 2 * cutoff_ + 1; }
    std::size_t mode_count() const noexcept { return static_cast<std::size_t>(width()) * width(); }
    std::size_t point_count() const noexcept { return static_cast<std::size_t>(n_) * n_; }

    /// Row-major index of (k1, k2) in the retained square; k1 selects the row.
    std::size_t mode_index(int k1, int k2) const noexcept {
        return static_cast<std::size_t>(k1 + cutoff_) * width() + static_cast<std::size_t>(k2 + cutoff_);
    }

    bool retains(int k1, int k2) const noexcept {
        return k1 >= -cutoff_ && k1 <= cutoff_ && k2 >= -cutoff_ && k2 <= cutoff_;
    }

    /// Quadrature weight of one collocation point, (2pi/N)^2.
    double cell_area() const noexcept {
        const double h = two_pi / n_;
        return h * h;
    }

    static constexpr double domain_measure() noexcept { return two_pi * two_pi; }

    double coordinate(int i) const noexcept { return two_pi * i / n_; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    int n_ = 0;
    int cutoff_ = 0;
};

/// Visit every retained wavevector in row-major order: fn(k1, k2, index).
template <class Fn>
void for_each_mode(const GridSpec& grid, Fn&& fn) {
    const int K = grid.cutoff();
    std::size_t idx = 0;
    for (int k1 = -K; k1 <= K; ++k1) {
        for (int k2 = -K; k2 <= K; ++k2, ++idx) {
            fn(k1, k2, idx);
        }
    }
}

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
    if (!(a == b)) {
        throw std::invalid_argument(std::string(what) + ": grid mismatch (" + std::to_string(a.points()) +
                                    " vs " + std::to_string(b.points()) + ")");
    }
}

} // namespace oldroyd
