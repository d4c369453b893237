#pragma once

#include <functional>

#include "hslab/fft.hpp"
#include "hslab/field.hpp"

namespace hslab {

/// Spectral representation of a field on the vertically doubled box.
/// Three slots per horizontal mode:
///   coeff  - ordinary Fourier coefficients on the d-dim periodic box;
///   linear - coefficient of the linear term c(xi_h) * x_d;
///   expo   - coefficient of the boundary-layer profile
///            c(xi_h) * exp(-|xi_h| x_d).
/// The linear part appears in vertical antiderivatives at xi_h = 0;
/// the exponential part is produced by the half-space solution
/// operators (U, P, harmonic extension).  Vertical derivatives,
/// horizontal multipliers, |D_h|, S and the Laplacian act exactly on
/// all three slots; multipliers built from the full |D| refuse the
/// non-Fourier slots.  The expo slot must vanish on xi_h = 0 lines
/// (a constant profile belongs to the Fourier slot).
struct Modes {
    Grid grid;
    int ncomp = 1;
    Eigen::ArrayXX<Cplx> coeff;   // size_doubled() rows x ncomp
    Eigen::ArrayXX<Cplx> linear;  // nhoriz() rows x ncomp (zero when absent)
    Eigen::ArrayXX<Cplx> expo;    // nhoriz() rows x ncomp (zero when absent)

    Modes() = default;
    Modes(const Grid& g, int nc)
        : grid(g),
          ncomp(nc),
          coeff(Eigen::ArrayXX<Cplx>::Zero(g.size_doubled(), nc)),
          linear(Eigen::ArrayXX<Cplx>::Zero(g.nhoriz(), nc)),
          expo(Eigen::ArrayXX<Cplx>::Zero(g.nhoriz(), nc)) {}

    bool has_linear() const { return (linear != Cplx(0)).any(); }
    bool has_expo() const { return (expo != Cplx(0)).any(); }
    bool pure_fourier() const { return !has_linear() && !has_expo(); }

    Modes component(int c) const {
        Modes out(grid, 1);
        out.coeff.col(0) = coeff.col(c);
        out.linear.col(0) = linear.col(c);
        out.expo.col(0) = expo.col(c);
        return out;
    }

    Modes& operator+=(const Modes& o) {
        coeff += o.coeff;
        linear += o.linear;
        expo += o.expo;
        return *this;
    }
    Modes& operator-=(const Modes& o) {
        coeff -= o.coeff;
        linear -= o.linear;
        expo -= o.expo;
        return *this;
    }
    Modes& operator*=(double s) {
        coeff *= s;
        linear *= s;
        expo *= s;
        return *this;
    }
    friend Modes operator+(Modes a, const Modes& b) { return a += b; }
    friend Modes operator-(Modes a, const Modes& b) { return a -= b; }
    friend Modes operator*(double s, Modes a) { return a *= s; }
};

// --- transforms ---

Modes to_modes(const DoubledField& F);
Modes to_modes(const Field& f, ExtendMode mode);
// Extension chosen from the parity tag (Raw uses Sym; see module notes).
Modes to_modes(const Field& f);
DoubledField to_doubled(const Modes& m);
// restriction to the half grid; evaluates the linear part exactly
Field restrict_field(const Modes& m, Parity parity = Parity::Raw);

// --- diagonal multipliers on the doubled box ---

// symbol(xi_h..., xi_z) evaluated per mode; |xi| denotes the full norm.
using Symbol = std::function<Cplx(const double* xi_h, int dh, double xi_z)>;

Modes apply_symbol(const Modes& m, const Symbol& sym, bool allow_linear = false);

// named operators (all exact on the linear/expo slots where noted)
Modes op_dh(const Modes& m, int axis);           // horizontal derivative (all slots)
Modes op_dz(const Modes& m);                     // vertical derivative (all slots)
Modes op_abs_dh(const Modes& m, int power);      // |D_h|^{+-1} (all slots); inverse drops xi_h = 0
Modes op_abs_d(const Modes& m, int power);       // |D|^{+-1} (Fourier only)
Modes op_riesz(const Modes& m, int j);           // R_j = d_j |D|^{-1} (Fourier only)
Modes op_s(const Modes& m, int j);               // S_j = d_j |D_h|^{-1} (all slots)
Modes op_rh_dot_s(const Modes& m);               // R_h . S, scalar symbol -|xi_h|/|xi| (Fourier only)
Modes op_heat(const Modes& m, double mu, double t);  // Fourier only
Modes op_laplacian(const Modes& m);              // annihilates linear and expo slots
Modes op_laplacian_h(const Modes& m);            // all slots
Modes op_inv_neg_laplacian(const Modes& m);      // (-Delta)^{-1}, global zero mode dropped

// antiderivative from x_d = 0, exact termwise on the Fourier and expo
// slots; constant vertical modes go to the linear slot
Modes op_vintegral(const Modes& m);

// --- parity bookkeeping for the public multiplier surface ---

enum class MultiplierKind { AbsDh, InvAbsDh, AbsD, InvAbsD, Riesz, S, Heat };

struct MultiplierRequest {
    MultiplierKind kind;
    int axis = 0;     // for Riesz / S
    double mu = 1.0;  // for Heat
    double t = 0.0;
};

// field-level apply_multiplier: extends by parity, applies the exact
// discrete symbol, restricts, and retags parity (R_d and d_d flip
// Odd<->Even, horizontal operators and heat preserve it)
Field apply_multiplier(const Field& f, const MultiplierRequest& req, bool strict = false,
                       bool* warned = nullptr);

// --- horizontal-only spectral operators on half-space fields ---
// (exact for any vertical profile; no extension involved)

Field h_derivative(const Field& f, int axis);
Field h_abs(const Field& f, int power, bool* warned = nullptr);  // |D_h|^{+-1}
Field h_s(const Field& f, int j, bool* warned = nullptr);        // S_j
Field h_div(const Field& fh);                                    // divergence of a (d-1)-vector
// gradient (d-1 components) of a scalar
Field h_grad(const Field& f);

// vertical spectral derivative via the parity tag (Raw uses Sym)
Field v_derivative(const Field& f);

// --- harmonic extension ---

/// Mode-wise lift Hb with F_h(Hb)(xi_h, x_d) = exp(-|xi_h| x_d) F_h b.
/// The xi_h = 0 mode is constant-extended (flagged).  Vertical
/// derivatives of the stored profiles are exact.
struct HarmonicExtension {
    Grid grid;
    int ncomp = 1;
    Eigen::ArrayXX<Cplx> bhat;  // nhoriz() rows x ncomp
    bool mean_flagged = false;

    Field value() const;
    Field dz(int order = 1) const;
};

HarmonicExtension harmonic_extend(const BoundaryField& b);

}  // namespace hslab
