#include <cmath>
#include <stdexcept>
#include <vector>

#include "hslab/stokes.hpp"

namespace hslab {

namespace {

using ArrXXc = Eigen::ArrayXX<Cplx>;

// Thomas algorithm for a complex tridiagonal system with constant
// off-diagonals `off` and per-row diagonal `diag`.
void tridiag_solve(const Eigen::ArrayXd& diag, double off, ArrXXc& rhs) {
    const long n = diag.size();
    Eigen::ArrayXd d = diag;
    for (long k = 1; k < n; ++k) {
        const double m = off / d(k - 1);
        d(k) -= m * off;
        rhs.row(k) -= m * rhs.row(k - 1);
    }
    rhs.row(n - 1) /= d(n - 1);
    for (long k = n - 2; k >= 0; --k)
        rhs.row(k) = (rhs.row(k) - off * rhs.row(k + 1)) / d(k);
}

// horizontal Fourier transform of one component, layout ih*nplanes+iz
ArrayXc to_hfourier(const Grid& g, const Field& f, int c) {
    ArrayXc a(f.data.rows());
    for (long i = 0; i < a.size(); ++i) a(i) = Cplx(f.data(i, c), 0.0);
    fft_horizontal(g, a, g.nvert(), -1);
    return a;
}

bool all_zero(const std::vector<Field>& s) {
    for (const Field& f : s)
        if (f.data.abs().maxCoeff() != 0.0) return false;
    return true;
}

}  // namespace

StokesSolution oracle_solve(const StokesInput& in, double dt) {
    in.validate();
    if (!in.Q.empty() && !all_zero(in.Q))
        throw std::invalid_argument("oracle_solve: only g == 0 is supported");
    const Grid& g = in.u0.grid;
    const int dh = g.d - 1;
    const long nm = g.nhoriz();
    const int nz = g.nz;
    const double hh = g.hh(), hz = g.hz(), mu = in.mu;
    if (dt <= 0) throw std::invalid_argument("oracle_solve: dt must be positive");
    for (double t : in.times) {
        const double s = t / dt;
        if (std::abs(s - std::llround(s)) > 1e-6)
            throw std::invalid_argument("oracle_solve: sample times must be multiples of dt");
    }
    const long nsteps = std::llround(in.times.back() / dt);

    // modified wavenumbers of the staggered horizontal differences
    Eigen::ArrayXd m2(nm);
    Eigen::ArrayXXd gs(nm, dh);
    for (long ih = 0; ih < nm; ++ih) {
        auto idx = g.hsplit(ih);
        double s = 0;
        for (int j = 0; j < dh; ++j) {
            gs(ih, j) = 2.0 / hh * std::sin(g.hxi(idx[j]) * hh / 2.0);
            s += gs(ih, j) * gs(ih, j);
        }
        m2(ih) = s;
    }

    // state in horizontal Fourier space: horizontal velocities and the
    // pressure on cell centers (nz rows), vertical velocity on faces
    std::vector<ArrXXc> uh(dh, ArrXXc::Zero(nz, nm));
    ArrXXc w = ArrXXc::Zero(nz + 1, nm);
    ArrXXc p = ArrXXc::Zero(nz, nm);
    {
        std::vector<ArrayXc> u0h;
        for (int c = 0; c < g.d; ++c) u0h.push_back(to_hfourier(g, in.u0, c));
        for (long ih = 0; ih < nm; ++ih) {
            for (int k = 0; k < nz; ++k)
                for (int j = 0; j < dh; ++j)
                    uh[j](k, ih) = 0.5 * (u0h[j](ih * g.nvert() + k) +
                                          u0h[j](ih * g.nvert() + k + 1));
            for (int k = 0; k <= nz; ++k) w(k, ih) = u0h[dh](ih * g.nvert() + k);
        }
        w.row(0).setZero();
        w.row(nz).setZero();
    }

    // source samples in horizontal Fourier space (node planes)
    std::vector<std::vector<ArrayXc>> fm;
    if (!in.f.empty() && !all_zero(in.f)) {
        fm.resize(in.times.size());
        for (size_t i = 0; i < in.times.size(); ++i)
            for (int c = 0; c < g.d; ++c) fm[i].push_back(to_hfourier(g, in.f[i], c));
    }
    auto f_at = [&](double t, int c) -> ArrayXc {
        if (fm.empty()) return ArrayXc::Zero(g.size());
        size_t i = 0;
        while (i + 2 < in.times.size() && in.times[i + 1] < t) ++i;
        const double th = (t - in.times[i]) / (in.times[i + 1] - in.times[i]);
        return (1.0 - th) * fm[i][c] + th * fm[i + 1][c];
    };

    const double alpha = mu * dt / (2.0 * hz * hz);
    // Crank-Nicolson diagonals; the ghost-cell reflection at the walls
    // adds an extra alpha on the boundary rows of the center grid
    auto diag_center = [&](long ih) {
        Eigen::ArrayXd d = Eigen::ArrayXd::Constant(nz, 1.0 + mu * dt / 2.0 * m2(ih) + 2 * alpha);
        d(0) += alpha;
        d(nz - 1) += alpha;
        return d;
    };
    auto diag_face = [&](long ih) {
        return Eigen::ArrayXd::Constant(nz - 1, 1.0 + mu * dt / 2.0 * m2(ih) + 2 * alpha).eval();
    };

    StokesSolution sol;
    sol.mu = mu;
    sol.times = in.times;
    sol.provenance = "oracle";
    sol.u.resize(in.times.size());
    sol.grad_pi.resize(in.times.size());
    double div_max = 0;

    auto record = [&](size_t i) {
        Field u(g, g.d, Parity::Raw), gp(g, g.d, Parity::Raw);
        for (int c = 0; c < g.d; ++c) {
            ArrayXc a = ArrayXc::Zero(g.size()), b = ArrayXc::Zero(g.size());
            for (long ih = 0; ih < nm; ++ih) {
                const long base = ih * g.nvert();
                if (c < dh) {
                    for (int k = 1; k < nz; ++k)
                        a(base + k) = 0.5 * (uh[c](k - 1, ih) + uh[c](k, ih));
                    // pressure gradient at centers, averaged to nodes
                    auto gpc = [&](int k) { return Cplx(0.0, gs(ih, c)) * p(k, ih); };
                    for (int k = 1; k < nz; ++k) b(base + k) = 0.5 * (gpc(k - 1) + gpc(k));
                    b(base + 0) = 1.5 * gpc(0) - 0.5 * gpc(1);
                    b(base + nz) = 1.5 * gpc(nz - 1) - 0.5 * gpc(nz - 2);
                } else {
                    for (int k = 0; k <= nz; ++k) a(base + k) = w(k, ih);
                    auto gpf = [&](int k) { return (p(k, ih) - p(k - 1, ih)) / hz; };
                    for (int k = 1; k < nz; ++k) b(base + k) = gpf(k);
                    b(base + 0) = 2.0 * gpf(1) - gpf(2);
                    b(base + nz) = 2.0 * gpf(nz - 1) - gpf(nz - 2);
                }
            }
            fft_horizontal(g, a, g.nvert(), +1);
            fft_horizontal(g, b, g.nvert(), +1);
            for (long r = 0; r < g.size(); ++r) {
                u.data(r, c) = a(r).real();
                gp.data(r, c) = b(r).real();
            }
        }
        sol.u[i] = u;
        sol.grad_pi[i] = gp;
    };

    size_t next_sample = 0;
    if (std::llround(in.times[0] / dt) == 0) record(next_sample++);

    ArrXXc rhs_c(nz, nm), rhs_f(nz - 1, nm), div(nz, nm), phi(nz, nm);
    for (long step = 0; step < nsteps; ++step) {
        const double t = step * dt, tm = t + dt / 2.0;
        std::vector<ArrayXc> fmid;
        if (!fm.empty())
            for (int c = 0; c < g.d; ++c) fmid.push_back(f_at(tm, c));

        // horizontal components: explicit half, source, old pressure
        for (int j = 0; j < dh; ++j) {
            for (long ih = 0; ih < nm; ++ih) {
                const Cplx iD(0.0, gs(ih, j));
                const double dh2 = mu * dt / 2.0 * m2(ih);
                for (int k = 0; k < nz; ++k) {
                    const Cplx um = (k > 0) ? uh[j](k - 1, ih) : -uh[j](0, ih);
                    const Cplx up = (k < nz - 1) ? uh[j](k + 1, ih) : -uh[j](nz - 1, ih);
                    Cplx r = (1.0 - dh2 - 2 * alpha) * uh[j](k, ih) + alpha * (um + up);
                    r -= dt * iD * p(k, ih);
                    if (!fm.empty())
                        r += dt * 0.5 *
                             (fmid[j](ih * g.nvert() + k) + fmid[j](ih * g.nvert() + k + 1));
                    rhs_c(k, ih) = r;
                }
            }
            for (long ih = 0; ih < nm; ++ih) {
                ArrXXc col = rhs_c.col(ih);
                tridiag_solve(diag_center(ih), -alpha, col);
                uh[j].col(ih) = col;
            }
        }
        // vertical component on interior faces
        for (long ih = 0; ih < nm; ++ih) {
            const double dh2 = mu * dt / 2.0 * m2(ih);
            for (int k = 1; k < nz; ++k) {
                Cplx r = (1.0 - dh2 - 2 * alpha) * w(k, ih) +
                         alpha * (w(k - 1, ih) + w(k + 1, ih));
                r -= dt * (p(k, ih) - p(k - 1, ih)) / hz;
                if (!fm.empty()) r += dt * fmid[dh](ih * g.nvert() + k);
                rhs_f(k - 1, ih) = r;
            }
        }
        for (long ih = 0; ih < nm; ++ih) {
            ArrXXc col = rhs_f.col(ih);
            tridiag_solve(diag_face(ih), -alpha, col);
            for (int k = 1; k < nz; ++k) w(k, ih) = col(k - 1, 0);
        }

        // incremental pressure projection
        for (long ih = 0; ih < nm; ++ih)
            for (int k = 0; k < nz; ++k) {
                Cplx dvg = (w(k + 1, ih) - w(k, ih)) / hz;
                for (int j = 0; j < dh; ++j) dvg += Cplx(0.0, gs(ih, j)) * uh[j](k, ih);
                div(k, ih) = dvg;
            }
        for (long ih = 0; ih < nm; ++ih) {
            // Neumann Poisson (-m2 + D_zz) phi = div/dt on cell centers
            Eigen::ArrayXd d =
                Eigen::ArrayXd::Constant(nz, -m2(ih) - 2.0 / (hz * hz));
            d(0) += 1.0 / (hz * hz);
            d(nz - 1) += 1.0 / (hz * hz);
            ArrXXc col = div.col(ih) / dt;
            if (m2(ih) == 0.0) {
                // singular zero mode: pin the last cell; the discarded
                // equation holds by the discrete compatibility sum
                Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(nz, nz);
                for (int k = 0; k + 1 < nz; ++k) {
                    A(k, k) = d(k);
                    if (k > 0) A(k, k - 1) = 1.0 / (hz * hz);
                    A(k, k + 1) = 1.0 / (hz * hz);
                }
                A(nz - 1, nz - 1) = 1.0;
                col(nz - 1, 0) = 0.0;
                phi.col(ih) = A.partialPivLu().solve(col.matrix()).array();
            } else {
                tridiag_solve(d, 1.0 / (hz * hz), col);
                phi.col(ih) = col;
            }
        }
        for (long ih = 0; ih < nm; ++ih) {
            for (int j = 0; j < dh; ++j)
                for (int k = 0; k < nz; ++k)
                    uh[j](k, ih) -= dt * Cplx(0.0, gs(ih, j)) * phi(k, ih);
            for (int k = 1; k < nz; ++k)
                w(k, ih) -= dt * (phi(k, ih) - phi(k - 1, ih)) / hz;
            for (int k = 0; k < nz; ++k)
                p(k, ih) += phi(k, ih) - mu * dt / 2.0 * div(k, ih);
        }
        div_max = std::max(div_max, div.abs().maxCoeff());

        if (next_sample < in.times.size() &&
            std::llround(in.times[next_sample] / dt) == step + 1)
            record(next_sample++);
    }
    sol.diagnostics["pre_projection_div_linf_max"] = div_max;
    return sol;
}

}  // namespace hslab
