#pragma once

#include <map>
#include <string>
#include <vector>

#include "hslab/ukai.hpp"

namespace hslab {

/// Data of the evolutionary Stokes system
///   d_t u - mu Lap u + grad Pi = f,  div u = g = div Q,  u|_{z=0} = 0,
/// sampled on a shared time grid.  Empty f/Q mean identically zero.
struct StokesInput {
    double mu = 1.0;
    Field u0;                   // d components
    std::vector<double> times;  // strictly increasing, times[0] == 0
    std::vector<Field> f;       // per sample, d components (or empty)
    std::vector<Field> Q;       // per sample, d components (or empty)

    void validate() const;
};

struct StokesSolution {
    double mu = 1.0;
    std::vector<double> times;
    std::vector<Field> u;        // d components per sample
    std::vector<Field> grad_pi;  // d components per sample
    std::string provenance;      // "formula" | "oracle"
    std::map<std::string, double> diagnostics;
};

struct ResidualReport {
    std::map<std::string, double> l2;
    std::map<std::string, double> linf;
};

/// Explicit solution formula.  Compatibility (g(0) = 0, d_t trace Q^d = 0)
/// is checked against compat_tol and violations are rejected.
StokesSolution solve_stokes(const StokesInput& in, double compat_tol = 1e-6);

/// Free evolution (f = g = 0) of the horizontal components expressed
/// through u0^h alone; requires div u0 = 0 and zero trace of u0^d.
std::vector<Field> free_horizontal(const Field& u0, const std::vector<double>& times, double mu,
                                   double pre_tol = 1e-8);

/// Momentum/divergence/trace/initial-data residuals of a solution.
ResidualReport residual(const StokesInput& in, const StokesSolution& sol);

/// Staggered-grid finite-difference reference path (g == 0 only):
/// Crank-Nicolson diffusion with incremental pressure projection,
/// stepped at dt internally and sampled on in.times.
StokesSolution oracle_solve(const StokesInput& in, double dt);

/// Convolutions int_0^{t_n} e^{(t_n - tau) Lap} src(tau) dtau at mu = 1,
/// exact for the piecewise-linear-in-time interpolant of src.
std::vector<Modes> heat_convolution(const std::vector<double>& times,
                                    const std::vector<Modes>& src);

/// Second-order time derivative of a sampled series (3-point stencils,
/// one-sided at the ends).
std::vector<Modes> dt_series(const std::vector<double>& times, const std::vector<Modes>& w);

}  // namespace hslab
