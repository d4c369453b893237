#pragma once

#include <Eigen/Dense>
#include <string>

#include "hslab/grid.hpp"

namespace hslab {

/// Behavior of the whole-space extension under x_d -> -x_d.
enum class Parity { Odd, Even, Raw };

enum class ExtendMode { Zero, Antisym, Sym };

inline ExtendMode extend_mode_of(Parity p) {
    switch (p) {
        case Parity::Odd: return ExtendMode::Antisym;
        case Parity::Even: return ExtendMode::Sym;
        default: return ExtendMode::Zero;
    }
}

inline const char* parity_name(Parity p) {
    switch (p) {
        case Parity::Odd: return "odd";
        case Parity::Even: return "even";
        default: return "raw";
    }
}

/// Scalar or vector field sampled on the half-space grid.  Layout is
/// row-major with horizontal axes first, so each vertical column
/// (fixed x_h) is contiguous: index = ih * nvert + iz.  For vector
/// fields, components are columns of `data`; component d-1 is the
/// vertical one.
struct Field {
    Grid grid;
    int ncomp = 1;
    Parity parity = Parity::Raw;
    Eigen::ArrayXXd data;  // size() rows x ncomp cols

    Field() = default;
    Field(const Grid& g, int nc, Parity p = Parity::Raw)
        : grid(g), ncomp(nc), parity(p), data(Eigen::ArrayXXd::Zero(g.size(), nc)) {}

    double& at(long ih, int iz, int c = 0) { return data(ih * grid.nvert() + iz, c); }
    double at(long ih, int iz, int c = 0) const { return data(ih * grid.nvert() + iz, c); }

    Field component(int c) const {
        Field out(grid, 1, parity);
        out.data.col(0) = data.col(c);
        return out;
    }
    // horizontal components as a (d-1)-vector field
    Field horizontal() const {
        Field out(grid, grid.d - 1, parity);
        out.data = data.leftCols(grid.d - 1);
        return out;
    }
    Field vertical() const { return component(grid.d - 1); }
};

/// Field on the full doubled vertical period [-Lz, Lz), stored on
/// [0, 2Lz) with the same horizontal layout; index = ih * nzd + iz.
struct DoubledField {
    Grid grid;
    int ncomp = 1;
    Eigen::ArrayXXd data;  // size_doubled() rows x ncomp cols

    DoubledField() = default;
    DoubledField(const Grid& g, int nc)
        : grid(g), ncomp(nc), data(Eigen::ArrayXXd::Zero(g.size_doubled(), nc)) {}
};

/// Function on the boundary hyperplane x_d = 0.
struct BoundaryField {
    Grid grid;
    int ncomp = 1;
    Eigen::ArrayXXd data;  // nhoriz() rows x ncomp cols

    BoundaryField() = default;
    BoundaryField(const Grid& g, int nc)
        : grid(g), ncomp(nc), data(Eigen::ArrayXXd::Zero(g.nhoriz(), nc)) {}
};

// --- extension / restriction / trace ---

DoubledField extend(const Field& f, ExtendMode mode, double boundary_tol = 1e-10,
                    bool* warned = nullptr);
Field restrict_field(const DoubledField& F);
BoundaryField trace(const Field& f);

// --- quadrature norms ---

// L^p norm over the half-space box: trapezoid vertically, rectangle
// horizontally; p = inf -> max |f|.  Vector fields use the pointwise
// Euclidean norm of the components.
double lp_norm(const Field& f, double p);
double lp_norm(const DoubledField& F, double p);  // rectangle rule throughout

// --- binary field files: <path>.f64 raw little-endian doubles plus
// <path>.hdr text sidecar; bit-exact round trip ---

void write_field(const Field& f, const std::string& path_base);
Field read_field(const std::string& path_base);

}  // namespace hslab
