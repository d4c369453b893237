#include "hslab/ukai.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace hslab {

namespace {

constexpr Cplx kI{0.0, 1.0};

double abs_xi_h(const Grid& g, long ih) {
    auto idx = g.hsplit(ih);
    double s = 0;
    for (int a = 0; a < g.d - 1; ++a) {
        const double x = g.hxi(idx[a]);
        s += x * x;
    }
    return std::sqrt(s);
}

}  // namespace

Field apply_Vh(const Field& u, bool* warned) {
    const Grid& g = u.grid;
    if (u.ncomp != g.d) throw std::invalid_argument("apply_Vh: expects d components");
    Field out(g, g.d - 1, u.parity);
    for (int j = 0; j < g.d - 1; ++j)
        out.data.col(j) = u.data.col(j) + h_s(u.vertical(), j, warned).data.col(0);
    return out;
}

Field apply_Vd(const Field& u, bool* warned) {
    const Grid& g = u.grid;
    if (u.ncomp != g.d) throw std::invalid_argument("apply_Vd: expects d components");
    Field out(g, 1, u.parity);
    out.data.col(0) = u.data.col(g.d - 1);
    for (int j = 0; j < g.d - 1; ++j)
        out.data.col(0) -= h_s(u.component(j), j, warned).data.col(0);
    return out;
}

Modes modes_U(const Modes& f) {
    if (!f.pure_fourier()) throw std::invalid_argument("modes_U: pure Fourier input required");
    const Grid& g = f.grid;
    Modes out(g, f.ncomp);
    for (long ih = 0; ih < g.nhoriz(); ++ih) {
        const double a = abs_xi_h(g, ih);
        if (a == 0) continue;  // |D_h| f = 0 on this line
        for (int iz = 0; iz < g.nzd(); ++iz) {
            const Cplx fac = a / Cplx(a, g.vxi(iz));
            const long row = ih * g.nzd() + iz;
            for (int c = 0; c < f.ncomp; ++c) {
                const Cplx v = fac * f.coeff(row, c);
                out.coeff(row, c) = v;
                out.expo(ih, c) -= v;
            }
        }
    }
    return out;
}

Modes modes_P(const Modes& f) {
    if (!f.pure_fourier()) throw std::invalid_argument("modes_P: pure Fourier input required");
    const Grid& g = f.grid;
    Modes out(g, f.ncomp);
    for (long ih = 0; ih < g.nhoriz(); ++ih) {
        const double a = abs_xi_h(g, ih);
        for (int iz = 0; iz < g.nzd(); ++iz) {
            const double q = g.vxi(iz);
            const long row = ih * g.nzd() + iz;
            if (a == 0) {
                // plain vertical antiderivative on the mean line
                if (g.vfreq(iz) == 0) {
                    for (int c = 0; c < f.ncomp; ++c) out.linear(ih, c) += f.coeff(row, c);
                } else {
                    for (int c = 0; c < f.ncomp; ++c) {
                        const Cplx v = f.coeff(row, c) / (kI * q);
                        out.coeff(row, c) = v;
                        out.coeff(ih * g.nzd() + 0, c) -= v;
                    }
                }
                continue;
            }
            const Cplx fac = 1.0 / Cplx(a, q);
            for (int c = 0; c < f.ncomp; ++c) {
                const Cplx v = fac * f.coeff(row, c);
                out.coeff(row, c) = v;
                out.expo(ih, c) -= v;
            }
        }
    }
    return out;
}

Field apply_U(const Field& f) { return restrict_field(modes_U(to_modes(f)), Parity::Raw); }
Field apply_P(const Field& f) { return restrict_field(modes_P(to_modes(f)), Parity::Raw); }

Modes modes_H_trace(const Modes& f) {
    const Grid& g = f.grid;
    Modes out(g, f.ncomp);
    for (long ih = 0; ih < g.nhoriz(); ++ih) {
        const double a = abs_xi_h(g, ih);
        for (int c = 0; c < f.ncomp; ++c) {
            Cplx b(0);
            for (int iz = 0; iz < g.nzd(); ++iz) b += f.coeff(ih * g.nzd() + iz, c);
            if (f.has_expo()) b += f.expo(ih, c);
            if (a == 0) out.coeff(ih * g.nzd() + 0, c) = b;  // constant extension
            else out.expo(ih, c) = b;
        }
    }
    return out;
}

Field apply_M(const Modes& h) {
    Modes w = op_inv_neg_laplacian(h);
    Modes out = op_dz(w) + op_abs_dh(w, 1);
    out *= -1.0;
    return restrict_field(out, Parity::Raw);
}

Modes inner_G(const Field& k) {
    const Grid& g = k.grid;
    if (k.ncomp != g.d) throw std::invalid_argument("inner_G: expects d components");
    Modes inner(g, 1);
    for (int j = 0; j < g.d - 1; ++j)
        inner += op_riesz(to_modes(k.component(j), ExtendMode::Antisym), j);
    inner += op_riesz(to_modes(k.vertical(), ExtendMode::Sym), g.d - 1);
    return inner;
}

Field apply_G(const Field& k) {
    Modes inner = inner_G(k);
    Modes out = op_riesz(inner, k.grid.d - 1) - op_rh_dot_s(inner);
    out *= -1.0;
    return restrict_field(out, Parity::Raw);
}

Field apply_Ntilde(const Field& f) {
    const Grid& g = f.grid;
    if (f.ncomp != g.d) throw std::invalid_argument("apply_Ntilde: expects d components");
    const int dd = g.d - 1;
    Modes esd = to_modes(f.vertical(), ExtendMode::Sym);
    Modes acc = esd + op_riesz(op_riesz(esd, dd), dd) - op_riesz(op_rh_dot_s(esd), dd);
    Modes sh(g, 1), rh(g, 1);
    for (int j = 0; j < dd; ++j) {
        Modes ea = to_modes(f.component(j), ExtendMode::Antisym);
        sh += op_s(ea, j);
        rh += op_riesz(ea, j);
    }
    acc += op_riesz(op_riesz(sh, dd), dd);
    acc += op_riesz(rh, dd);
    return restrict_field(acc, Parity::Raw);
}

Field apply_Mtilde(const Field& f, bool* warned) {
    const Grid& g = f.grid;
    if (f.ncomp != g.d) throw std::invalid_argument("apply_Mtilde: expects d components");
    const int dd = g.d - 1;
    Modes inner(g, 1);
    for (int j = 0; j < dd; ++j)
        inner += op_riesz(to_modes(f.component(j), ExtendMode::Antisym), j);
    inner += op_riesz(to_modes(f.vertical(), ExtendMode::Sym), dd);
    Modes w = op_riesz(inner, dd) - op_rh_dot_s(inner);
    Field out(g, dd, Parity::Raw);
    for (int j = 0; j < dd; ++j)
        out.data.col(j) = restrict_field(op_s(w, j), Parity::Raw).data.col(0);
    // + V_h f
    for (int j = 0; j < dd; ++j)
        out.data.col(j) += f.data.col(j) + h_s(f.vertical(), j, warned).data.col(0);
    return out;
}

Modes random_modes(const Grid& g, int ncomp, unsigned seed, int band_div) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    DoubledField F(g, ncomp);
    for (long i = 0; i < F.data.rows(); ++i)
        for (int c = 0; c < ncomp; ++c) F.data(i, c) = gauss(rng);
    Modes m = to_modes(F);
    // band limit: keep |freq| <= n / band_div on every axis
    const int bh = g.nh / band_div, bz = g.nz / band_div;
    for (long ih = 0; ih < g.nhoriz(); ++ih) {
        auto idx = g.hsplit(ih);
        bool keep = true;
        for (int a = 0; a < g.d - 1; ++a)
            if (std::abs(g.hfreq(idx[a])) > bh) keep = false;
        for (int iz = 0; iz < g.nzd(); ++iz) {
            const bool k2 = keep && std::abs(g.vfreq(iz)) <= bz;
            if (!k2)
                for (int c = 0; c < ncomp; ++c) m.coeff(ih * g.nzd() + iz, c) = 0;
        }
    }
    return m;
}

double rel_l2(const Modes& residual, const Modes& reference) {
    Field r = restrict_field(residual, Parity::Raw);
    Field f = restrict_field(reference, Parity::Raw);
    const double den = lp_norm(f, 2.0);
    return den > 0 ? lp_norm(r, 2.0) / den : lp_norm(r, 2.0);
}

std::vector<OperatorReport> identity_suite(const Grid& g, unsigned seed) {
    Modes f = random_modes(g, 1, seed);
    Modes Uf = modes_U(f);
    Modes Pf = modes_P(f);
    Modes dzf = op_dz(f);
    Modes adf = op_abs_dh(f, 1);

    std::vector<OperatorReport> reports;
    auto push = [&](const std::string& name, const Modes& lhs, const Modes& rhs) {
        OperatorReport rep;
        rep.op = name;
        rep.input_id = "random_band_limited_seed_" + std::to_string(seed);
        Modes resid = lhs - rhs;
        rep.residuals["rel_l2"] = rel_l2(resid, f);
        rep.residuals["abs_linf"] =
            lp_norm(restrict_field(resid, Parity::Raw), std::numeric_limits<double>::infinity());
        BoundaryField tr = trace(restrict_field(lhs, Parity::Raw));
        rep.trace_norm = std::sqrt((tr.data * tr.data).sum() * std::pow(g.hh(), g.d - 1));
        reports.push_back(rep);
    };

    // (1) grad_h U = U grad_h
    push("grad_h_commutes_with_U", op_dh(Uf, 0), modes_U(op_dh(f, 0)));
    // (2) d_z U = (I - U) |D_h|
    push("dz_U_vs_I_minus_U_absdh", op_dz(Uf), adf - modes_U(adf));
    // (3) grad_h P = S U
    push("grad_h_P_vs_S_U", op_dh(Pf, 0), op_s(Uf, 0));
    // (4) d_z P = I - U
    push("dz_P_vs_I_minus_U", op_dz(Pf), f - Uf);
    // (5) Lap P = d_z - |D_h|
    push("lap_P_vs_dz_minus_absdh", op_laplacian(Pf), dzf - adf);
    // (6) [P, d_z] = -H gamma
    Modes Htr = modes_H_trace(f);
    Htr *= -1.0;
    push("P_dz_commutator_vs_minus_H_trace", modes_P(dzf) - op_dz(Pf), Htr);
    return reports;
}

}  // namespace hslab
