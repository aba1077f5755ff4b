#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace lutforge {

struct Color {
    double r = 0.0, g = 0.0, b = 0.0;
};

// Declared entry range of a table: Unit = [0,1] color LUTs, Signed = [-1,1]
// curve-parameter LUTs.
enum class ValueRange : std::uint8_t { Unit = 0, Signed = 1 };

double range_lo(ValueRange r);
double range_hi(ValueRange r);

// Sparse derivative record of one trilinear lookup. The geometry (corner
// weights, cell origin) is shared by all three output channels.
struct LookupGradient {
    std::array<int, 3> cell;                  // lattice origin (i0,j0,k0)
    std::array<std::array<int, 3>, 8> corners; // absolute lattice coords
    std::array<double, 8> weights;             // trilinear weights, sum to 1
    std::array<std::array<double, 3>, 3> jacobian; // d out[c] / d in[axis]
};

// N x N x N x 3 lattice over the RGB cube. Entries are channel-major
// [c][i][j][k], stored as doubles; the lattice size is fixed at construction.
class Lut3D {
public:
    Lut3D(int size, ValueRange range);

    static Lut3D identity(int size, ValueRange range);

    int size() const { return size_; }
    ValueRange value_range() const { return range_; }

    double at(int c, int i, int j, int k) const { return data_[index(c, i, j, k)]; }
    double& at(int c, int i, int j, int k) { return data_[index(c, i, j, k)]; }

    const std::vector<double>& entries() const { return data_; }
    std::vector<double>& entries() { return data_; }

    std::size_t index(int c, int i, int j, int k) const {
        const std::size_t n = static_cast<std::size_t>(size_);
        return ((static_cast<std::size_t>(c) * n + i) * n + j) * n + k;
    }

    Color lookup(const Color& c) const;      // inline, see below
    LookupGradient lookup_gradient(const Color& c) const;

    // Clamp every entry into the declared range.
    void clamp_entries();

    void save(const std::string& path) const;        // format by extension
    static Lut3D load(const std::string& path);

    void save_binary(const std::string& path) const; // "LUT3" format
    static Lut3D load_binary(const std::string& path);
    void save_cube(const std::string& path) const;   // Adobe-style .cube
    static Lut3D load_cube(const std::string& path);

private:
    int size_;
    ValueRange range_;
    std::vector<double> data_;

    // Cell resolution with lower-cell tie-break on interior lattice planes.
    void locate(double p, int& i0, double& frac) const;
};

// Inlined: this runs once per pixel per curve step, so it is the hottest
// function in the whole pipeline.
inline Color Lut3D::lookup(const Color& c) const {
    const double scale = size_ - 1;
    auto cell = [&](double v) {
        if (v < 0.0) v = 0.0;
        if (v > 1.0) v = 1.0;
        const double p = v * scale;
        // interior lattice planes belong to the lower cell: origin = ceil(p)-1
        // == ceil(p)-1 without a libm call
        int lo = static_cast<int>(p);
        if (static_cast<double>(lo) == p) --lo;
        if (lo < 0) lo = 0;
        if (lo > size_ - 2) lo = size_ - 2;
        return std::pair<int, double>{lo, p - lo};
    };
    const auto [i0, fi] = cell(c.r);
    const auto [j0, fj] = cell(c.g);
    const auto [k0, fk] = cell(c.b);

    const double gi = 1.0 - fi, gj = 1.0 - fj, gk = 1.0 - fk;
    const double w00 = gi * gj, w01 = gi * fj, w10 = fi * gj, w11 = fi * fj;
    const std::size_t n = static_cast<std::size_t>(size_);
    const std::size_t n2 = n * n, n3 = n2 * n;
    const double* d =
        data_.data() + (static_cast<std::size_t>(i0) * n + j0) * n + k0;
    double out[3];
    for (int ch = 0; ch < 3; ++ch, d += n3) {
        const double lo = (w00 * d[0] + w01 * d[n]) + (w10 * d[n2] + w11 * d[n2 + n]);
        const double hi = (w00 * d[1] + w01 * d[n + 1]) + (w10 * d[n2 + 1] + w11 * d[n2 + n + 1]);
        out[ch] = gk * lo + fk * hi;
    }
    return {out[0], out[1], out[2]};
}

} // namespace lutforge
