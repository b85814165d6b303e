#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/crc.hpp>

#include "oldroyd/galerkin.hpp"

namespace oldroyd {

/// Snapshot layout, all little-endian:
///   "OLDB" | u32 version | u32 N_g | u32 K | f64 t
///   v:   2 planes (v1, v2)
///   tau: 4 planes (11, 12, 21, 22)
///   each plane (2K+1)^2 (re, im) f64 pairs, row-major in (k1, k2)
///   u32 CRC-32 of every preceding byte
inline constexpr std::uint32_t snapshot_version = 1;
inline constexpr std::size_t snapshot_header_bytes = 4 + 4 + 4 + 4 + 8;

class SnapshotError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::size_t snapshot_size(const GridSpec& grid) {
    return snapshot_header_bytes + 6 * grid.mode_count() * 2 * 8 + 4;
}

namespace detail {

inline void put_u32(std::vector<unsigned char>& out, std::uint32_t x) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(x >> (8 * i)));
}

inline void put_f64(std::vector<unsigned char>& out, double d) {
    const auto x = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(x >> (8 * i)));
}

inline std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t x = 0;
    for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return x;
}

inline double get_f64(const unsigned char* p) {
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return std::bit_cast<double>(x);
}

inline std::uint32_t crc32(const unsigned char* data, std::size_t n) {
    boost::crc_32_type crc;
    crc.process_bytes(data, n);
    return crc.checksum();
}

} // namespace detail

inline std::vector<unsigned char> encode_snapshot(const State& s) {
    const GridSpec& grid = s.grid();
    std::vector<unsigned char> out;
    out.reserve(snapshot_size(grid));
    for (char c : {'O', 'L', 'D', 'B'}) out.push_back(static_cast<unsigned char>(c));
    detail::put_u32(out, snapshot_version);
    detail::put_u32(out, static_cast<std::uint32_t>(grid.points()));
    detail::put_u32(out, static_cast<std::uint32_t>(grid.cutoff()));
    detail::put_f64(out, s.t);
    auto plane = [&](std::span<const complex> p) {
        for (const complex& z : p) {
            detail::put_f64(out, z.real());
            detail::put_f64(out, z.imag());
        }
    };
    plane(s.v.component(0));
    plane(s.v.component(1));
    plane(s.tau.component(sym::xx));
    plane(s.tau.component(sym::xy));
    plane(s.tau.component(sym::xy));
    plane(s.tau.component(sym::yy));
    detail::put_u32(out, detail::crc32(out.data(), out.size()));
    return out;
}

inline State decode_snapshot(const std::vector<unsigned char>& bytes) {
    if (bytes.size() < snapshot_header_bytes + 4) throw SnapshotError("snapshot truncated: header incomplete");
    if (std::memcmp(bytes.data(), "OLDB", 4) != 0) throw SnapshotError("snapshot magic mismatch: expected OLDB");
    const std::uint32_t version = detail::get_u32(bytes.data() + 4);
    if (version != snapshot_version) {
        throw SnapshotError("snapshot version mismatch: file has " + std::to_string(version) + ", expected " +
                            std::to_string(snapshot_version));
    }
    const std::uint32_t n = detail::get_u32(bytes.data() + 8);
    const std::uint32_t k = detail::get_u32(bytes.data() + 12);
    if (n < 4 || n % 2 != 0 || n > 65536) throw SnapshotError("snapshot grid size " + std::to_string(n) + " is invalid");
    const GridSpec grid(static_cast<int>(n));
    if (static_cast<int>(k) != grid.cutoff()) throw SnapshotError("snapshot cutoff does not match its grid size");
    const std::size_t expected = snapshot_size(grid);
    if (bytes.size() < expected) throw SnapshotError("snapshot truncated: expected " + std::to_string(expected) +
                                                     " bytes, found " + std::to_string(bytes.size()));
    if (bytes.size() > expected) throw SnapshotError("snapshot has trailing bytes");
    const std::uint32_t stored = detail::get_u32(bytes.data() + expected - 4);
    if (stored != detail::crc32(bytes.data(), expected - 4)) throw SnapshotError("snapshot CRC mismatch");

    State s{SpectralVectorField(grid), SpectralTensorField(grid), detail::get_f64(bytes.data() + 16)};
    const unsigned char* p = bytes.data() + snapshot_header_bytes;
    auto plane = [&](std::span<complex> dst) {
        for (complex& z : dst) {
            z = {detail::get_f64(p), detail::get_f64(p + 8)};
            p += 16;
        }
    };
    plane(s.v.component(0));
    plane(s.v.component(1));
    plane(s.tau.component(sym::xx));
    plane(s.tau.component(sym::xy));
    std::vector<complex> yx(grid.mode_count());
    plane(yx);
    plane(s.tau.component(sym::yy));
    const auto xy = s.tau.component(sym::xy);
    if (std::memcmp(xy.data(), yx.data(), yx.size() * sizeof(complex)) != 0) {
        throw SnapshotError("snapshot tensor is not symmetric");
    }
    return s;
}

inline void write_snapshot(const std::string& path, const State& s) {
    const auto bytes = encode_snapshot(s);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw SnapshotError("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw SnapshotError("write to '" + path + "' failed");
}

inline State read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SnapshotError("cannot open '" + path + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_snapshot(bytes);
}

} // namespace oldroyd
