#pragma once

#include <map>
#include <string>
#include <vector>

#include "hslab/spectral.hpp"

namespace hslab {

/// Verification record for one operator check.
struct OperatorReport {
    std::string op;
    std::string input_id;
    std::map<std::string, double> residuals;  // nonnegative, finite
    double trace_norm = 0.0;
};

// --- auxiliary velocity combinations ---
// V_h u = u^h + S u^d  and  V_d u = -S . u^h + u^d; horizontal-only
// multipliers, so the vertical structure of u is untouched.

Field apply_Vh(const Field& u, bool* warned = nullptr);  // (d-1)-vector
Field apply_Vd(const Field& u, bool* warned = nullptr);  // scalar

// --- half-space solution operators, exact per horizontal mode ---
// modes_U(f): the solution w of (d_z + |D_h|) w = |D_h| f, w|_{z=0} = 0;
// modes_P(f): the solution v of (d_z + |D_h|) v = f, v|_{z=0} = 0,
// equivalently the vertical antiderivative of (I - U) f.  Each Fourier
// profile e^{i q z} maps to
//   U: a/(a+iq) (e^{iqz} - e^{-az}),   P: (e^{iqz} - e^{-az})/(a+iq),
// with a = |xi_h|, which keeps the whole commutator algebra exact.

Modes modes_U(const Modes& f);
Modes modes_P(const Modes& f);
Field apply_U(const Field& f);
Field apply_P(const Field& f);

// harmonic extension of the trace as a Modes value (expo slot; the
// horizontal mean is constant-extended)
Modes modes_H_trace(const Modes& f);

// --- pressure-side compositions (literal multiplier chains) ---

// M h = -r (d_z + |D_h|) (-Delta)^{-1} h on a whole-space argument
Field apply_M(const Modes& h);
// G k = -r (R_d - R_h.S)(R_h . e_a(k^h) + R_d e_s(k^d)), k a d-vector
Field apply_G(const Field& k);
Modes inner_G(const Field& k);  // the shared chain R_h.e_a(k^h) + R_d e_s(k^d)
// N~ f = r{[1 + R_d^2 - R_d R_h.S] e_s(f^d) + R_d^2 S.e_a(f^h) + R_d R_h.e_a(f^h)}
Field apply_Ntilde(const Field& f);
// M~ f = r S [R_d - R_h.S](R_h.e_a(f^h) + R_d e_s(f^d)) + V_h f
Field apply_Mtilde(const Field& f, bool* warned = nullptr);

// --- commutator identity suite ---
// Relative L2 residuals of
//   (1) grad_h U = U grad_h        (2) d_z U = (I - U)|D_h|
//   (3) grad_h P = S U             (4) d_z P = I - U
//   (5) Lap P = d_z - |D_h|        (6) [P, d_z] = -H gamma
// on a seeded random band-limited field.
std::vector<OperatorReport> identity_suite(const Grid& g, unsigned seed);

// random real band-limited whole-space modes (shared test utility)
Modes random_modes(const Grid& g, int ncomp, unsigned seed, int band_div = 4);

double rel_l2(const Modes& residual, const Modes& reference);

}  // namespace hslab
