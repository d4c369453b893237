#include "hslab/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace hslab {

namespace {

constexpr Cplx kI{0.0, 1.0};

// fills xi_h (d-1 entries) for flattened horizontal index ih; returns |xi_h|^2
double horizontal_xi(const Grid& g, long ih, double* xi_h) {
    auto idx = g.hsplit(ih);
    double s = 0;
    for (int a = 0; a < g.d - 1; ++a) {
        xi_h[a] = g.hxi(idx[a]);
        s += xi_h[a] * xi_h[a];
    }
    return s;
}

bool is_h_nyquist(const Grid& g, long ih, int axis) {
    return g.hsplit(ih)[axis] == g.nh / 2;
}

}  // namespace

Modes to_modes(const DoubledField& F) {
    Modes m(F.grid, F.ncomp);
    for (int c = 0; c < F.ncomp; ++c) {
        ArrayXc a = F.data.col(c).cast<Cplx>();
        fft_doubled(F.grid, a, -1);
        m.coeff.col(c) = a / static_cast<double>(F.grid.size_doubled());
    }
    return m;
}

Modes to_modes(const Field& f, ExtendMode mode) { return to_modes(extend(f, mode)); }

Modes to_modes(const Field& f) {
    return to_modes(f, f.parity == Parity::Raw ? ExtendMode::Sym : extend_mode_of(f.parity));
}

DoubledField to_doubled(const Modes& m) {
    if (!m.pure_fourier())
        throw std::invalid_argument("to_doubled: linear/expo parts are not periodic");
    DoubledField F(m.grid, m.ncomp);
    for (int c = 0; c < m.ncomp; ++c) {
        ArrayXc a = m.coeff.col(c);
        fft_doubled(m.grid, a, +1);
        a *= static_cast<double>(m.grid.size_doubled());
        F.data.col(c) = a.real();
    }
    return F;
}

Field restrict_field(const Modes& m, Parity parity) {
    const Grid& g = m.grid;
    Field f(g, m.ncomp, parity);
    const int nv = g.nvert();
    for (int c = 0; c < m.ncomp; ++c) {
        ArrayXc a = m.coeff.col(c);
        fft_doubled(g, a, +1);
        a *= static_cast<double>(g.size_doubled());
        for (long ih = 0; ih < g.nhoriz(); ++ih)
            for (int iz = 0; iz < nv; ++iz)
                f.data(ih * nv + iz, c) = a(ih * g.nzd() + iz).real();
    }
    if (m.has_linear()) {
        for (int c = 0; c < m.ncomp; ++c) {
            ArrayXc lin = m.linear.col(c);
            fft_horizontal(g, lin, 1, +1);
            lin *= static_cast<double>(g.nhoriz());
            for (long ih = 0; ih < g.nhoriz(); ++ih)
                for (int iz = 0; iz < nv; ++iz)
                    f.data(ih * nv + iz, c) += lin(ih).real() * g.zcoord(iz);
        }
    }
    if (m.has_expo()) {
        double xi_h[2];
        for (int c = 0; c < m.ncomp; ++c) {
            for (int iz = 0; iz < nv; ++iz) {
                ArrayXc plane(g.nhoriz());
                for (long ih = 0; ih < g.nhoriz(); ++ih) {
                    const double ah = std::sqrt(horizontal_xi(g, ih, xi_h));
                    plane(ih) = m.expo(ih, c) * std::exp(-ah * g.zcoord(iz));
                }
                fft_horizontal(g, plane, 1, +1);
                plane *= static_cast<double>(g.nhoriz());
                for (long ih = 0; ih < g.nhoriz(); ++ih)
                    f.data(ih * nv + iz, c) += plane(ih).real();
            }
        }
    }
    return f;
}

Modes apply_symbol(const Modes& m, const Symbol& sym, bool allow_linear) {
    if (!allow_linear && !m.pure_fourier())
        throw std::invalid_argument("apply_symbol: operator undefined on linear/expo parts");
    Modes out(m.grid, m.ncomp);
    const Grid& g = m.grid;
    double xi_h[2];
    for (long ih = 0; ih < g.nhoriz(); ++ih) {
        horizontal_xi(g, ih, xi_h);
        for (int iz = 0; iz < g.nzd(); ++iz) {
            const Cplx s = sym(xi_h, g.d - 1, g.vxi(iz));
            const long row = ih * g.nzd() + iz;
            for (int c = 0; c < m.ncomp; ++c) out.coeff(row, c) = s * m.coeff(row, c);
        }
    }
    return out;
}

Modes op_dh(const Modes& m, int axis) {
    Modes out(m.grid, m.ncomp);
    const Grid& g = m.grid;
    double xi_h[2];
    for (long ih = 0; ih < g.nhoriz(); ++ih) {
        horizontal_xi(g, ih, xi_h);
        const Cplx s = is_h_nyquist(g, ih, axis) ? Cplx(0) : kI * xi_h[axis];
        for (int iz = 0; iz < g.nzd(); ++iz) {
            const long row = ih * g.nzd() + iz;
            for (int c = 0; c < m.ncomp; ++c) out.coeff(row, c) = s * m.coeff(row, c);
        }
        for (int c = 0; c < m.ncomp; ++c) {
            out.linear(ih, c) = s * m.linear(ih, c);
            out.expo(ih, c) = s * m.expo(ih, c);
        }
    }
    return out;
}

Modes op_dz(const Modes& m) {
    Modes out(m.grid, m.ncomp);
    const Grid& g = m.grid;
    for (long ih = 0; ih < g.nhoriz(); ++ih) {
        for (int iz = 0; iz < g.nzd(); ++iz) {
            const Cplx s = (g.vfreq(iz) == g.nz) ? Cplx(0) : kI * g.vxi(iz);
            const long row = ih * g.nzd() + iz;
            for (int c = 0; c < m.ncomp; ++c) out.coeff(row, c) = s * m.coeff(row, c);
        }
        // d/dx_d (c * x_d) = c: constant goes to the zero vertical mode
        double xi_h[2];
        const double ah = std::sqrt(horizontal_xi(g, ih, xi_h));
        for (int c = 0; c < m.ncomp; ++c) {
            out.coeff(ih * g.nzd() + 0, c) += m.linear(ih, c);
            out.expo(ih, c) = -ah * m.expo(ih, c);
        }
    }
    return out;
}

Modes op_abs_dh(const Modes& m, int power) {
    if (power != 1 && power != -1) throw std::invalid_argument("op_abs_dh: power must be +-1");
    Modes out(m.grid, m.ncomp);
    const Grid& g = m.grid;
    double xi_h[2];
    for (long ih = 0; ih < g.nhoriz(); ++ih) {
        const double ah = std::sqrt(horizontal_xi(g, ih, xi_h));
        Cplx s(0);
        if (ah > 0) s = (power == 1) ? ah : 1.0 / ah;
        for (int iz = 0; iz < g.nzd(); ++iz) {
            const long row = ih * g.nzd() + iz;
            for (int c = 0; c < m.ncomp; ++c) out.coeff(row, c) = s * m.coeff(row, c);
        }
        for (int c = 0; c < m.ncomp; ++c) {
            out.linear(ih, c) = s * m.linear(ih, c);
            out.expo(ih, c) = s * m.expo(ih, c);
        }
    }
    return out;
}

Modes op_abs_d(const Modes& m, int power) {
    if (power != 1 && power != -1) throw std::invalid_argument("op_abs_d: power must be +-1");
    return apply_symbol(m, [power](const double* xi_h, int dh, double xi_z) {
        double s = xi_z * xi_z;
        for (int a = 0; a < dh; ++a) s += xi_h[a] * xi_h[a];
        if (s == 0) return Cplx(0);
        const double r = std::sqrt(s);
        return Cplx(power == 1 ? r : 1.0 / r);
    });
}

Modes op_riesz(const Modes& m, int j) {
    const Grid& g = m.grid;
    if (j < 0 || j >= g.d) throw std::invalid_argument("op_riesz: bad axis");
    if (!m.pure_fourier()) throw std::invalid_argument("op_riesz: linear/expo parts unsupported");
    Modes out(g, m.ncomp);
    double xi_h[2];
    for (long ih = 0; ih < g.nhoriz(); ++ih) {
        const double ah2 = horizontal_xi(g, ih, xi_h);
        const bool nyq_h = j < g.d - 1 && is_h_nyquist(g, ih, j);
        for (int iz = 0; iz < g.nzd(); ++iz) {
            const double xz = g.vxi(iz);
            const double norm = std::sqrt(ah2 + xz * xz);
            Cplx s(0);
            if (norm > 0) {
                if (j < g.d - 1) s = nyq_h ? Cplx(0) : kI * xi_h[j] / norm;
                else s = (g.vfreq(iz) == g.nz) ? Cplx(0) : kI * xz / norm;
            }
            const long row = ih * g.nzd() + iz;
            for (int c = 0; c < m.ncomp; ++c) out.coeff(row, c) = s * m.coeff(row, c);
        }
    }
    return out;
}

Modes op_s(const Modes& m, int j) {
    const Grid& g = m.grid;
    if (j < 0 || j >= g.d - 1) throw std::invalid_argument("op_s: bad axis");
    Modes out(g, m.ncomp);
    double xi_h[2];
    for (long ih = 0; ih < g.nhoriz(); ++ih) {
        const double ah = std::sqrt(horizontal_xi(g, ih, xi_h));
        Cplx s(0);
        if (ah > 0 && !is_h_nyquist(g, ih, j)) s = kI * xi_h[j] / ah;
        for (int iz = 0; iz < g.nzd(); ++iz) {
            const long row = ih * g.nzd() + iz;
            for (int c = 0; c < m.ncomp; ++c) out.coeff(row, c) = s * m.coeff(row, c);
        }
        for (int c = 0; c < m.ncomp; ++c) {
            out.linear(ih, c) = s * m.linear(ih, c);
            out.expo(ih, c) = s * m.expo(ih, c);
        }
    }
    return out;
}

Modes op_rh_dot_s(const Modes& m) {
    return apply_symbol(m, [](const double* xi_h, int dh, double xi_z) {
        double ah2 = 0;
        for (int a = 0; a < dh; ++a) ah2 += xi_h[a] * xi_h[a];
        const double n2 = ah2 + xi_z * xi_z;
        if (n2 == 0 || ah2 == 0) return Cplx(0);
        return Cplx(-std::sqrt(ah2 / n2));
    });
}

Modes op_heat(const Modes& m, double mu, double t) {
    return apply_symbol(m, [mu, t](const double* xi_h, int dh, double xi_z) {
        double s = xi_z * xi_z;
        for (int a = 0; a < dh; ++a) s += xi_h[a] * xi_h[a];
        return Cplx(std::exp(-mu * t * s));
    });
}

Modes op_laplacian(const Modes& m) {
    // the linear and expo profiles are harmonic: they map to zero
    Modes out(m.grid, m.ncomp);
    const Grid& g = m.grid;
    double xi_h[2];
    for (long ih = 0; ih < g.nhoriz(); ++ih) {
        const double ah2 = horizontal_xi(g, ih, xi_h);
        for (int iz = 0; iz < g.nzd(); ++iz) {
            const double s = ah2 + g.vxi(iz) * g.vxi(iz);
            const long row = ih * g.nzd() + iz;
            for (int c = 0; c < m.ncomp; ++c) out.coeff(row, c) = -s * m.coeff(row, c);
        }
    }
    return out;
}

Modes op_laplacian_h(const Modes& m) {
    Modes out(m.grid, m.ncomp);
    const Grid& g = m.grid;
    double xi_h[2];
    for (long ih = 0; ih < g.nhoriz(); ++ih) {
        const double ah2 = horizontal_xi(g, ih, xi_h);
        for (int iz = 0; iz < g.nzd(); ++iz) {
            const long row = ih * g.nzd() + iz;
            for (int c = 0; c < m.ncomp; ++c) out.coeff(row, c) = -ah2 * m.coeff(row, c);
        }
        for (int c = 0; c < m.ncomp; ++c) {
            out.linear(ih, c) = -ah2 * m.linear(ih, c);
            out.expo(ih, c) = -ah2 * m.expo(ih, c);
        }
    }
    return out;
}

Modes op_inv_neg_laplacian(const Modes& m) {
    return apply_symbol(m, [](const double* xi_h, int dh, double xi_z) {
        double s = xi_z * xi_z;
        for (int a = 0; a < dh; ++a) s += xi_h[a] * xi_h[a];
        if (s == 0) return Cplx(0);
        return Cplx(1.0 / s);
    });
}

Modes op_vintegral(const Modes& m) {
    if (m.has_linear()) throw std::invalid_argument("op_vintegral: nested linear part");
    const Grid& g = m.grid;
    Modes out(g, m.ncomp);
    double xi_h[2];
    for (long ih = 0; ih < g.nhoriz(); ++ih) {
        const double ah = std::sqrt(horizontal_xi(g, ih, xi_h));
        for (int c = 0; c < m.ncomp; ++c) {
            Cplx at_zero(0);
            for (int iz = 0; iz < g.nzd(); ++iz) {
                const long row = ih * g.nzd() + iz;
                if (g.vfreq(iz) == 0) {
                    out.linear(ih, c) += m.coeff(row, c);
                    continue;
                }
                const Cplx v = m.coeff(row, c) / (kI * g.vxi(iz));
                out.coeff(row, c) = v;
                at_zero += v;
            }
            out.coeff(ih * g.nzd() + 0, c) -= at_zero;
            if (m.expo(ih, c) != Cplx(0)) {
                // int_0^z c e^{-a y} dy = c/a - (c/a) e^{-a z}
                const Cplx ca = m.expo(ih, c) / ah;
                out.coeff(ih * g.nzd() + 0, c) += ca;
                out.expo(ih, c) -= ca;
            }
        }
    }
    return out;
}

Field apply_multiplier(const Field& f, const MultiplierRequest& req, bool strict, bool* warned) {
    if (f.parity == Parity::Raw)
        throw std::invalid_argument("apply_multiplier: field must be parity-tagged");
    Modes m = to_modes(f);

    auto check_zero_mode = [&](bool horizontal_only) {
        double mass = 0;
        const Grid& g = f.grid;
        for (int c = 0; c < f.ncomp; ++c) {
            if (horizontal_only) {
                for (int iz = 0; iz < g.nzd(); ++iz) mass += std::abs(m.coeff(iz, c));
            } else {
                mass += std::abs(m.coeff(0, c));
            }
        }
        if (mass > 1e-13) {
            if (strict)
                throw std::runtime_error("apply_multiplier: nonzero annihilated mode (strict)");
            if (warned) *warned = true;
        }
    };

    Modes out;
    Parity par = f.parity;
    switch (req.kind) {
        case MultiplierKind::AbsDh: out = op_abs_dh(m, 1); break;
        case MultiplierKind::InvAbsDh:
            check_zero_mode(true);
            out = op_abs_dh(m, -1);
            break;
        case MultiplierKind::AbsD: out = op_abs_d(m, 1); break;
        case MultiplierKind::InvAbsD:
            check_zero_mode(false);
            out = op_abs_d(m, -1);
            break;
        case MultiplierKind::Riesz:
            out = op_riesz(m, req.axis);
            if (req.axis == f.grid.d - 1)
                par = (par == Parity::Odd) ? Parity::Even : Parity::Odd;
            break;
        case MultiplierKind::S:
            check_zero_mode(true);
            out = op_s(m, req.axis);
            break;
        case MultiplierKind::Heat: out = op_heat(m, req.mu, req.t); break;
    }
    return restrict_field(out, par);
}

// --- horizontal-only operators on half-space fields ---

namespace {

// apply a per-horizontal-mode complex factor on half-grid data
Field h_apply(const Field& f, const std::function<Cplx(const double*, int)>& sym,
              bool zero_mean_required = false, bool* warned = nullptr) {
    const Grid& g = f.grid;
    Field out(g, f.ncomp, f.parity);
    const int nv = g.nvert();
    double xi_h[2];
    for (int c = 0; c < f.ncomp; ++c) {
        ArrayXc a = f.data.col(c).cast<Cplx>();
        fft_horizontal(g, a, nv, -1);
        if (zero_mean_required && warned) {
            double mass = 0;
            for (int iz = 0; iz < nv; ++iz) mass += std::abs(a(iz));
            if (mass > 1e-13 * static_cast<double>(g.nhoriz())) *warned = true;
        }
        for (long ih = 0; ih < g.nhoriz(); ++ih) {
            horizontal_xi(g, ih, xi_h);
            const Cplx s = sym(xi_h, g.d - 1);
            for (int iz = 0; iz < nv; ++iz) a(ih * nv + iz) *= s;
        }
        fft_horizontal(g, a, nv, +1);
        out.data.col(c) = a.real();
    }
    return out;
}

}  // namespace

Field h_derivative(const Field& f, int axis) {
    // zero the Nyquist line to keep odd symbols real-consistent
    const Grid& g = f.grid;
    Field out(g, f.ncomp, f.parity);
    const int nv = g.nvert();
    for (int c = 0; c < f.ncomp; ++c) {
        ArrayXc a = f.data.col(c).cast<Cplx>();
        fft_horizontal(g, a, nv, -1);
        for (long ih = 0; ih < g.nhoriz(); ++ih) {
            auto idx = g.hsplit(ih);
            const Cplx s = (idx[axis] == g.nh / 2) ? Cplx(0) : kI * g.hxi(idx[axis]);
            for (int iz = 0; iz < nv; ++iz) a(ih * nv + iz) *= s;
        }
        fft_horizontal(g, a, nv, +1);
        out.data.col(c) = a.real();
    }
    return out;
}

Field h_abs(const Field& f, int power, bool* warned) {
    return h_apply(
        f,
        [power](const double* xi_h, int dh) {
            double s = 0;
            for (int a = 0; a < dh; ++a) s += xi_h[a] * xi_h[a];
            if (s == 0) return Cplx(0);
            const double r = std::sqrt(s);
            return Cplx(power == 1 ? r : 1.0 / r);
        },
        power == -1, warned);
}

Field h_s(const Field& f, int j, bool* warned) {
    const Grid& g = f.grid;
    Field out(g, f.ncomp, f.parity);
    const int nv = g.nvert();
    for (int c = 0; c < f.ncomp; ++c) {
        ArrayXc a = f.data.col(c).cast<Cplx>();
        fft_horizontal(g, a, nv, -1);
        if (warned) {
            double mass = 0;
            for (int iz = 0; iz < nv; ++iz) mass += std::abs(a(iz));
            if (mass > 1e-13 * static_cast<double>(g.nhoriz())) *warned = true;
        }
        double xi_h[2];
        for (long ih = 0; ih < g.nhoriz(); ++ih) {
            const double ah = std::sqrt(horizontal_xi(g, ih, xi_h));
            auto idx = g.hsplit(ih);
            Cplx s(0);
            if (ah > 0 && idx[j] != g.nh / 2) s = kI * xi_h[j] / ah;
            for (int iz = 0; iz < nv; ++iz) a(ih * nv + iz) *= s;
        }
        fft_horizontal(g, a, nv, +1);
        out.data.col(c) = a.real();
    }
    return out;
}

Field h_div(const Field& fh) {
    const Grid& g = fh.grid;
    if (fh.ncomp != g.d - 1) throw std::invalid_argument("h_div: expects d-1 components");
    Field out(g, 1, fh.parity);
    for (int a = 0; a < g.d - 1; ++a) out.data.col(0) += h_derivative(fh.component(a), a).data.col(0);
    return out;
}

Field h_grad(const Field& f) {
    const Grid& g = f.grid;
    if (f.ncomp != 1) throw std::invalid_argument("h_grad: scalar input expected");
    Field out(g, g.d - 1, f.parity);
    for (int a = 0; a < g.d - 1; ++a) out.data.col(a) = h_derivative(f, a).data.col(0);
    return out;
}

Field v_derivative(const Field& f) {
    Parity par = Parity::Raw;
    if (f.parity == Parity::Odd) par = Parity::Even;
    else if (f.parity == Parity::Even) par = Parity::Odd;
    return restrict_field(op_dz(to_modes(f)), par);
}

// --- harmonic extension ---

HarmonicExtension harmonic_extend(const BoundaryField& b) {
    HarmonicExtension H;
    H.grid = b.grid;
    H.ncomp = b.ncomp;
    H.bhat.resize(b.grid.nhoriz(), b.ncomp);
    for (int c = 0; c < b.ncomp; ++c) {
        ArrayXc a = b.data.col(c).cast<Cplx>();
        fft_horizontal(b.grid, a, 1, -1);
        a /= static_cast<double>(b.grid.nhoriz());
        H.bhat.col(c) = a;
        if (std::abs(a(0)) > 1e-13) H.mean_flagged = true;
    }
    return H;
}

namespace {

Field harmonic_eval(const HarmonicExtension& H, int order) {
    const Grid& g = H.grid;
    Field out(g, H.ncomp, Parity::Raw);
    const int nv = g.nvert();
    double xi_h[2];
    for (int c = 0; c < H.ncomp; ++c) {
        ArrayXc a(g.nhoriz() * nv);
        for (long ih = 0; ih < g.nhoriz(); ++ih) {
            const double ah = std::sqrt(horizontal_xi(g, ih, xi_h));
            const double fac = (order == 0) ? 1.0 : std::pow(-ah, order);
            for (int iz = 0; iz < nv; ++iz)
                a(ih * nv + iz) = H.bhat(ih, c) * fac * std::exp(-ah * g.zcoord(iz));
        }
        fft_horizontal(g, a, nv, +1);
        a *= static_cast<double>(g.nhoriz());
        out.data.col(c) = a.real();
    }
    return out;
}

}  // namespace

Field HarmonicExtension::value() const { return harmonic_eval(*this, 0); }
Field HarmonicExtension::dz(int order) const { return harmonic_eval(*this, order); }

}  // namespace hslab
