#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "se3h/fields/packing.hpp"
#include "se3h/fields/spherical_field.hpp"

namespace se3h {

static_assert(std::endian::native == std::endian::little, "SHV I/O assumes a little-endian host");

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace shv_flags {
inline constexpr std::uint32_t even_only = 1u;
inline constexpr std::uint32_t real_packed = 2u;
inline constexpr std::uint32_t wigner_full = 4u;
}  // namespace shv_flags

struct ShvHeader {
    std::array<std::uint32_t, 3> dims{};
    double voxel_size = 1.0;
    std::uint32_t L = 0;
    std::uint32_t flags = 0;

    static constexpr std::size_t bytes = 32;

    GridSpec grid() const { return {{int(dims[0]), int(dims[1]), int(dims[2])}, voxel_size}; }
    std::size_t channel_count() const {
        if (flags & shv_flags::wigner_full) return wigner_channel_count(int(L));
        if (flags & shv_flags::real_packed) return PackedField::packed_channel_count(int(L));
        return sh_channel_count(int(L), (flags & shv_flags::even_only) ? Parity::even_only : Parity::all);
    }
    std::size_t payload_bytes() const {
        return channel_count() * std::size_t(dims[0]) * dims[1] * dims[2] * 2 * sizeof(double);
    }
};

using ShvRecord = std::variant<SphericalField, PackedField, WignerField>;

namespace detail {

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T take(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw IoError("SHV: truncated header");
    return v;
}

inline void write_header(std::ostream& os, const GridSpec& g, int L, std::uint32_t flags) {
    os.write("SHV1", 4);
    for (int d : g.dims) put(os, std::uint32_t(d));
    put(os, g.voxel_size);
    put(os, std::uint32_t(L));
    put(os, flags);
}

inline void write_payload(std::ostream& os, const Buffer<cplx>& data) {
    // std::complex<double> is layout-compatible with double[2]
    os.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size() * sizeof(cplx)));
    if (!os) throw IoError("SHV: write failed");
}

inline void read_payload(std::istream& is, Buffer<cplx>& data) {
    is.read(reinterpret_cast<char*>(data.data()), std::streamsize(data.size() * sizeof(cplx)));
    if (!is) throw IoError("SHV: truncated payload");
}

}  // namespace detail

inline void write_shv(std::ostream& os, const SphericalField& f) {
    detail::write_header(os, f.grid(), f.L(), f.parity() == Parity::even_only ? shv_flags::even_only : 0u);
    detail::write_payload(os, f.data());
}

inline void write_shv(std::ostream& os, const PackedField& p) {
    detail::write_header(os, p.grid, p.L, shv_flags::even_only | shv_flags::real_packed);
    detail::write_payload(os, p.data);
}

inline void write_shv(std::ostream& os, const WignerField& f) {
    detail::write_header(os, f.grid(), f.L(), shv_flags::wigner_full);
    detail::write_payload(os, f.data());
}

// Scalar volumes are stored as L = 0 fields.
inline void write_shv(std::ostream& os, const Volume<double>& v) {
    SphericalField f(v.grid, 0, Parity::all, true);
    for (std::size_t i = 0; i < v.data.size(); ++i) f.data()[i] = v.data[i];
    write_shv(os, f);
}

template <class T>
void write_shv_file(const std::string& path, const T& value) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    write_shv(os, value);
}

// Returns false on clean end of stream.
inline bool read_shv_header(std::istream& is, ShvHeader& h) {
    char magic[4];
    is.read(magic, 4);
    if (is.gcount() == 0 && is.eof()) return false;
    if (is.gcount() != 4 || std::memcmp(magic, "SHV1", 4) != 0) throw IoError("SHV: bad magic");
    for (auto& d : h.dims) d = detail::take<std::uint32_t>(is);
    h.voxel_size = detail::take<double>(is);
    h.L = detail::take<std::uint32_t>(is);
    h.flags = detail::take<std::uint32_t>(is);
    if (h.dims[0] == 0 || h.dims[1] == 0 || h.dims[2] == 0 || !(h.voxel_size > 0)) throw IoError("SHV: bad header");
    return true;
}

inline ShvRecord read_shv_record(std::istream& is, const ShvHeader& h) {
    const GridSpec g = h.grid();
    if (h.flags & shv_flags::wigner_full) {
        WignerField f(g, int(h.L));
        detail::read_payload(is, f.data());
        return f;
    }
    if (h.flags & shv_flags::real_packed) {
        PackedField p{g, int(h.L), {}};
        p.data.resize(p.channels() * g.voxels());
        detail::read_payload(is, p.data);
        return p;
    }
    SphericalField f(g, int(h.L), (h.flags & shv_flags::even_only) ? Parity::even_only : Parity::all);
    detail::read_payload(is, f.data());
    return f;
}

inline std::vector<ShvRecord> read_shv_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    std::vector<ShvRecord> out;
    ShvHeader h;
    while (read_shv_header(is, h)) out.push_back(read_shv_record(is, h));
    if (out.empty()) throw IoError("SHV: empty file " + path);
    return out;
}

inline SphericalField read_spherical_field(const std::string& path) {
    auto recs = read_shv_file(path);
    if (auto* f = std::get_if<SphericalField>(&recs.front())) return std::move(*f);
    if (auto* p = std::get_if<PackedField>(&recs.front())) return unpack_real_even(*p);
    throw IoError("SHV: " + path + " holds a Wigner field");
}

inline Volume<double> read_scalar_volume(const std::string& path) {
    SphericalField f = read_spherical_field(path);
    if (f.L() != 0) throw IoError("SHV: " + path + " is not a scalar volume");
    Volume<double> v(f.grid());
    for (std::size_t i = 0; i < v.data.size(); ++i) v.data[i] = f.data()[i].real();
    return v;
}

}  // namespace se3h
