#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace hslab {

constexpr double kPi = 3.14159265358979323846;

/// Discretization of the truncated half-space: periodic box [0,Lh)^{d-1}
/// horizontally, interval [0,Lz] vertically with the boundary plane at
/// x_d = 0.  The vertical axis has nz cells, hence nz+1 sample planes;
/// antisymmetric/symmetric extensions live on the doubled periodic
/// interval [-Lz, Lz) with 2*nz points.
struct Grid {
    int d = 2;        // spatial dimension, 2 or 3
    int nh = 16;      // points per horizontal axis (power of two)
    int nz = 16;      // vertical cells (power of two)
    double Lh = 2.0 * kPi;
    double Lz = 2.0 * kPi;

    void validate() const {
        auto pow2 = [](int n) { return n >= 4 && (n & (n - 1)) == 0; };
        if (d != 2 && d != 3) throw std::invalid_argument("Grid: d must be 2 or 3");
        if (!pow2(nh)) throw std::invalid_argument("Grid: nh must be a power of two >= 4");
        if (!pow2(nz)) throw std::invalid_argument("Grid: nz must be a power of two >= 4");
        if (Lh <= 0 || Lz <= 0) throw std::invalid_argument("Grid: Lh, Lz must be positive");
    }

    int nvert() const { return nz + 1; }       // sample planes on [0,Lz]
    int nzd() const { return 2 * nz; }         // doubled vertical points
    long nhoriz() const {
        long n = 1;
        for (int i = 0; i < d - 1; ++i) n *= nh;
        return n;
    }
    long size() const { return nhoriz() * nvert(); }
    long size_doubled() const { return nhoriz() * nzd(); }

    double hh() const { return Lh / nh; }
    double hz() const { return Lz / nz; }
    double zcoord(int iz) const { return iz * hz(); }
    double hcoord(int i) const { return i * hh(); }

    // signed integer frequency of horizontal index k in [0, nh)
    int hfreq(int k) const { return k <= nh / 2 ? k : k - nh; }
    // horizontal wavenumber of index k
    double hxi(int k) const { return 2.0 * kPi * hfreq(k) / Lh; }
    // signed integer frequency of doubled-vertical index m in [0, 2nz)
    int vfreq(int m) const { return m <= nz ? m : m - 2 * nz; }
    // vertical wavenumber of doubled-vertical index m (period 2 Lz)
    double vxi(int m) const { return kPi * vfreq(m) / Lz; }

    // decompose a flattened horizontal index into per-axis indices
    std::array<int, 2> hsplit(long ih) const {
        if (d == 2) return {static_cast<int>(ih), 0};
        return {static_cast<int>(ih / nh), static_cast<int>(ih % nh)};
    }

    bool operator==(const Grid& o) const {
        return d == o.d && nh == o.nh && nz == o.nz && Lh == o.Lh && Lz == o.Lz;
    }
};

}  // namespace hslab
