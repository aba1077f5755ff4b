#include "lutforge/lut3d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lutforge {

double range_lo(ValueRange r) { return r == ValueRange::Unit ? 0.0 : -1.0; }
double range_hi(ValueRange r) { return 1.0; }

Lut3D::Lut3D(int size, ValueRange range) : size_(size), range_(range) {
    if (size < 2) throw std::invalid_argument("Lut3D: size must be >= 2, got " + std::to_string(size));
    data_.assign(static_cast<std::size_t>(3) * size * size * size, 0.0);
}

Lut3D Lut3D::identity(int size, ValueRange range) {
    Lut3D lut(size, range);
    if (range == ValueRange::Unit) {
        const double scale = 1.0 / (size - 1);
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j)
                for (int k = 0; k < size; ++k) {
                    lut.at(0, i, j, k) = i * scale;
                    lut.at(1, i, j, k) = j * scale;
                    lut.at(2, i, j, k) = k * scale;
                }
    }
    // Signed identity is the all-zero table (identity enhancement).
    return lut;
}

void Lut3D::locate(double p, int& i0, double& frac) const {
    // A coordinate exactly on an interior lattice plane belongs to the lower
    // cell, so the cell origin is ceil(p)-1 clamped into [0, N-2].
    int lo = static_cast<int>(std::ceil(p)) - 1;
    lo = std::clamp(lo, 0, size_ - 2);
    i0 = lo;
    frac = p - lo;
}

namespace {
double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }
} // namespace

LookupGradient Lut3D::lookup_gradient(const Color& c) const {
    const double scale = size_ - 1;
    int i0, j0, k0;
    double fi, fj, fk;
    locate(clamp01(c.r) * scale, i0, fi);
    locate(clamp01(c.g) * scale, j0, fj);
    locate(clamp01(c.b) * scale, k0, fk);

    LookupGradient g{};
    g.cell = {i0, j0, k0};
    const double wi[2] = {1.0 - fi, fi};
    const double wj[2] = {1.0 - fj, fj};
    const double wk[2] = {1.0 - fk, fk};
    // d frac / d input component
    const double dwi[2] = {-scale, scale};

    double jac[3][3] = {};
    int corner = 0;
    for (int di = 0; di < 2; ++di)
        for (int dj = 0; dj < 2; ++dj)
            for (int dk = 0; dk < 2; ++dk, ++corner) {
                g.corners[corner] = {i0 + di, j0 + dj, k0 + dk};
                g.weights[corner] = wi[di] * wj[dj] * wk[dk];
                for (int ch = 0; ch < 3; ++ch) {
                    const double e = at(ch, i0 + di, j0 + dj, k0 + dk);
                    jac[ch][0] += e * dwi[di] * wj[dj] * wk[dk];
                    jac[ch][1] += e * wi[di] * dwi[dj] * wk[dk];
                    jac[ch][2] += e * wi[di] * wj[dj] * dwi[dk];
                }
            }
    for (int r = 0; r < 3; ++r)
        for (int col = 0; col < 3; ++col) g.jacobian[r][col] = jac[r][col];
    return g;
}

void Lut3D::clamp_entries() {
    const double lo = range_lo(range_), hi = range_hi(range_);
    for (double& v : data_) v = std::clamp(v, lo, hi);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

bool ends_with(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

void write_u32_le(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<char*>(b), 4);
}

std::uint32_t read_u32_le(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

} // namespace

void Lut3D::save(const std::string& path) const {
    if (ends_with(path, ".cube"))
        save_cube(path);
    else
        save_binary(path);
}

Lut3D Lut3D::load(const std::string& path) {
    if (ends_with(path, ".cube")) return load_cube(path);
    return load_binary(path);
}

void Lut3D::save_binary(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for write: " + path);
    os.write("LUT3", 4);
    write_u32_le(os, static_cast<std::uint32_t>(size_));
    const unsigned char tag = static_cast<unsigned char>(range_);
    os.write(reinterpret_cast<const char*>(&tag), 1);
    for (double v : data_) {
        float f = static_cast<float>(v);
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        write_u32_le(os, bits);
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

Lut3D Lut3D::load_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "LUT3", 4) != 0)
        throw std::runtime_error(path + ": bad magic at offset 0, expected LUT3");
    const std::uint32_t n = read_u32_le(is);
    unsigned char tag;
    is.read(reinterpret_cast<char*>(&tag), 1);
    if (!is || n < 2 || tag > 1)
        throw std::runtime_error(path + ": malformed header at offset 4");
    Lut3D lut(static_cast<int>(n), static_cast<ValueRange>(tag));
    for (std::size_t i = 0; i < lut.data_.size(); ++i) {
        const std::uint32_t bits = read_u32_le(is);
        if (!is)
            throw std::runtime_error(path + ": truncated data at entry " + std::to_string(i));
        float f;
        std::memcpy(&f, &bits, 4);
        lut.data_[i] = f;
    }
    const double lo = range_lo(lut.range_), hi = range_hi(lut.range_);
    for (std::size_t i = 0; i < lut.data_.size(); ++i)
        if (!(lut.data_[i] >= lo && lut.data_[i] <= hi))
            throw std::runtime_error(path + ": entry " + std::to_string(i) + " out of declared range");
    return lut;
}

void Lut3D::save_cube(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for write: " + path);
    if (range_ == ValueRange::Signed) os << "# RANGE -1 1\n";
    os << "LUT_3D_SIZE " << size_ << "\n";
    char buf[96];
    for (int i = 0; i < size_; ++i)
        for (int j = 0; j < size_; ++j)
            for (int k = 0; k < size_; ++k) {
                std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g\n", at(0, i, j, k), at(1, i, j, k),
                              at(2, i, j, k));
                os << buf;
            }
    if (!os) throw std::runtime_error("write failed: " + path);
}

Lut3D Lut3D::load_cube(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    ValueRange range = ValueRange::Unit;
    int n = 0;
    std::string line;
    int lineno = 0;
    std::vector<std::array<double, 3>> triples;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# RANGE -1 1", 0) == 0) range = ValueRange::Signed;
            continue;
        }
        std::istringstream ls(line);
        std::string first;
        ls >> first;
        if (first == "LUT_3D_SIZE") {
            if (!(ls >> n) || n < 2)
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad LUT_3D_SIZE");
            continue;
        }
        if (first == "TITLE" || first == "DOMAIN_MIN" || first == "DOMAIN_MAX" ||
            first == "LUT_1D_SIZE")
            continue;
        std::array<double, 3> t;
        std::istringstream ds(line);
        if (!(ds >> t[0] >> t[1] >> t[2]))
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'r g b' triple");
        triples.push_back(t);
    }
    if (n == 0) throw std::runtime_error(path + ": missing LUT_3D_SIZE header");
    const std::size_t expect = static_cast<std::size_t>(n) * n * n;
    if (triples.size() != expect)
        throw std::runtime_error(path + ": entry count " + std::to_string(triples.size()) +
                                 " does not match LUT_3D_SIZE " + std::to_string(n));
    Lut3D lut(n, range);
    std::size_t t = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k, ++t)
                for (int c = 0; c < 3; ++c) lut.at(c, i, j, k) = triples[t][c];
    const double lo = range_lo(range), hi = range_hi(range);
    for (double v : lut.data_)
        if (!(v >= lo && v <= hi)) throw std::runtime_error(path + ": entry out of declared range");
    return lut;
}

} // namespace lutforge
