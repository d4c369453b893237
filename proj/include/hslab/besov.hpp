#pragma once

#include <string>

#include "hslab/spectral.hpp"

namespace hslab {

/// Index of the homogeneous Besov space: regularity s, integrability
/// p, summability r.  Infinite exponents are passed as INFINITY.
struct BesovIndex {
    double s = 0.0;
    double p = 2.0;
    double r = 2.0;
};

// --- Littlewood-Paley cutoffs ---
// chi is a fixed radial C^inf bump built from the exp(-1/x) mollifier:
// chi == 1 on [0, 1/2], chi == 0 on [1, inf), strictly decreasing in
// between; phi(rho) = chi(rho/2) - chi(rho), so the dyadic dilates of
// phi telescope to an exact partition of unity away from the origin.

double chi_profile(double rho);
double phi_profile(double rho);
// identifier of the concrete cutoff (hash of sampled profile values),
// recorded in reports for reproducibility
std::string profile_hash();

/// Dyadic band indices whose annuli cover every nonzero grid frequency.
struct BandRange {
    int k_min = 0;
    int k_max = 0;
};
BandRange band_range(const Grid& g);

/// Frequency block phi(2^{-k}|D|) m.  Out-of-range k yields the zero
/// field and sets *warned.  Pure Fourier input required.
Modes lp_block(const Modes& m, int k, bool* warned = nullptr);

struct BesovResult {
    double value = 0.0;
    double leakage = 0.0;  // L2 mass at uncovered frequencies (zero mode included)
    BandRange bands;
};

/// Homogeneous Besov norm ell^r_k of 2^{sk} ||block_k||_{L^p} on the
/// doubled periodic box; the zero mode carries no block and is
/// reported as leakage.
BesovResult besov_norm_report(const Modes& m, const BesovIndex& idx, bool* warned = nullptr);
double besov_norm(const Modes& m, const BesovIndex& idx);

/// Half-space norm via the canonical antisymmetric-extension
/// representative (an upper bound for the extension infimum).
double halfspace_besov_norm(const Field& f, const BesovIndex& idx);

/// Geometric time grid for the heat-semigroup characterization.
struct HeatCharOptions {
    double t_min = 1e-4;
    double t_max = 1e2;
    int per_decade = 64;
};

/// || t^{-s/2} ||e^{mu t Lap} m||_{L^p} ||_{L^r(dt/t)} for s < 0,
/// quadrature log-uniform in t (trapezoid in log t, exact dt/t
/// weight per cell).  Sets *warned when the integrand has not decayed
/// at t_max.
double heat_char_norm(const Modes& m, const BesovIndex& idx, double mu,
                      const HeatCharOptions& opt = {}, bool* warned = nullptr);

}  // namespace hslab
