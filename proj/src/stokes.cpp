#include "hslab/stokes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// phi1(z) = (e^z - 1)/z,  phi2(z) = (e^z - 1 - z)/z^2, stable near 0
double phi1(double z) {
    if (std::abs(z) < 1e-4) return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
    return std::expm1(z) / z;
}
double phi2(double z) {
    if (std::abs(z) < 1e-4) return 0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0;
    return (std::expm1(z) - z) / (z * z);
}

double xi2_of(const Grid& g, long row) {
    const long ih = row / g.nzd();
    const int iz = static_cast<int>(row % g.nzd());
    auto idx = g.hsplit(ih);
    double s = g.vxi(iz) * g.vxi(iz);
    for (int a = 0; a < g.d - 1; ++a) s += g.hxi(idx[a]) * g.hxi(idx[a]);
    return s;
}

double trace_l2(const Field& f) {
    BoundaryField b = trace(f);
    return std::sqrt((b.data * b.data).sum() * std::pow(f.grid.hh(), f.grid.d - 1));
}

}  // namespace

void StokesInput::validate() const {
    u0.grid.validate();
    if (u0.ncomp != u0.grid.d) throw std::invalid_argument("StokesInput: u0 needs d components");
    if (times.empty() || times.front() != 0.0)
        throw std::invalid_argument("StokesInput: time grid must start at 0");
    for (size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1])
            throw std::invalid_argument("StokesInput: time grid must be strictly increasing");
    if (mu <= 0) throw std::invalid_argument("StokesInput: mu must be positive");
    for (const auto* series : {&f, &Q}) {
        if (series->empty()) continue;
        if (series->size() != times.size())
            throw std::invalid_argument("StokesInput: series length != time grid length");
        for (const Field& s : *series)
            if (!(s.grid == u0.grid) || s.ncomp != u0.grid.d)
                throw std::invalid_argument("StokesInput: inconsistent sample field");
    }
}

std::vector<Modes> dt_series(const std::vector<double>& times, const std::vector<Modes>& w) {
    const size_t n = times.size();
    std::vector<Modes> out(n, Modes(w[0].grid, w[0].ncomp));
    if (n == 1) return out;
    if (n == 2) {
        Modes d = w[1] - w[0];
        d *= 1.0 / (times[1] - times[0]);
        out[0] = d;
        out[1] = d;
        return out;
    }
    auto stencil3 = [&](size_t i0, size_t i1, size_t i2, double t) {
        // Lagrange derivative weights at t for nodes t0,t1,t2
        const double t0 = times[i0], t1 = times[i1], t2 = times[i2];
        const double w0 = (2 * t - t1 - t2) / ((t0 - t1) * (t0 - t2));
        const double w1 = (2 * t - t0 - t2) / ((t1 - t0) * (t1 - t2));
        const double w2 = (2 * t - t0 - t1) / ((t2 - t0) * (t2 - t1));
        Modes d = w[i0];
        d *= w0;
        Modes b = w[i1];
        b *= w1;
        d += b;
        Modes c = w[i2];
        c *= w2;
        d += c;
        return d;
    };
    out[0] = stencil3(0, 1, 2, times[0]);
    for (size_t i = 1; i + 1 < n; ++i) out[i] = stencil3(i - 1, i, i + 1, times[i]);
    out[n - 1] = stencil3(n - 3, n - 2, n - 1, times[n - 1]);
    return out;
}

std::vector<Modes> heat_convolution(const std::vector<double>& times,
                                    const std::vector<Modes>& src) {
    const Grid& g = src[0].grid;
    const int nc = src[0].ncomp;
    for (const Modes& s : src)
        if (!s.pure_fourier()) throw std::invalid_argument("heat_convolution: Fourier sources only");
    std::vector<Modes> J(times.size(), Modes(g, nc));
    for (size_t i = 0; i + 1 < times.size(); ++i) {
        const double dt = times[i + 1] - times[i];
        for (long row = 0; row < g.size_doubled(); ++row) {
            const double lam = xi2_of(g, row);
            const double z = -lam * dt;
            const double e = std::exp(z), p1 = phi1(z), p2 = phi2(z);
            for (int c = 0; c < nc; ++c)
                J[i + 1].coeff(row, c) = e * J[i].coeff(row, c) +
                                         dt * ((p1 - p2) * src[i].coeff(row, c) +
                                               p2 * src[i + 1].coeff(row, c));
        }
    }
    return J;
}

namespace {

// shared assembly of the formula path at mu = 1
struct FormulaParts {
    std::vector<Modes> g_m;    // div of the extended Q, pure Fourier
    std::vector<Modes> A;      // e_a(N~f + Gk), scalar
    std::vector<Modes> B;      // e_a(M~f + S Gk), (d-1)-vector
    std::vector<Modes> W;      // S.UQ^h + (I-U)Q^d - H gamma Q^d
    std::vector<Modes> Gk_m;   // Gk chain, kept on the doubled box
    std::vector<Modes> Nf_m;   // N~f chain, kept on the doubled box
    std::vector<Modes> eafh;   // e_a(f^h) per sample ((d-1)-vector)
    std::vector<Modes> esfd;   // e_s(f^d)
    bool has_f = false, has_Q = false;
};

FormulaParts build_parts(const StokesInput& in, const std::vector<double>& tau,
                         double compat_tol) {
    const Grid& g = in.u0.grid;
    const int dd = g.d - 1;
    const size_t n = tau.size();
    FormulaParts P;
    P.has_f = !in.f.empty();
    P.has_Q = !in.Q.empty();
    P.g_m.assign(n, Modes(g, 1));
    P.A.assign(n, Modes(g, 1));
    P.B.assign(n, Modes(g, dd));
    P.W.assign(n, Modes(g, 1));
    P.Gk_m.assign(n, Modes(g, 1));
    P.Nf_m.assign(n, Modes(g, 1));
    P.eafh.assign(n, Modes(g, dd));
    P.esfd.assign(n, Modes(g, 1));

    if (P.has_Q) {
        // extensions of Q: horizontal antisymmetric, vertical symmetric
        std::vector<std::vector<Modes>> Qm(n);
        for (size_t i = 0; i < n; ++i) {
            for (int j = 0; j < dd; ++j)
                Qm[i].push_back(to_modes(in.Q[i].component(j), ExtendMode::Antisym));
            Qm[i].push_back(to_modes(in.Q[i].vertical(), ExtendMode::Sym));
        }
        // g = div Q (exact on the extensions)
        for (size_t i = 0; i < n; ++i) {
            for (int j = 0; j < dd; ++j) P.g_m[i] += op_dh(Qm[i][j], j);
            P.g_m[i] += op_dz(Qm[i][dd]);
        }
        // compatibility: g(0) = 0 and d_t gamma Q^d = 0
        const double g0 = lp_norm(restrict_field(P.g_m[0], Parity::Raw), 2.0);
        double scale = 0;
        for (size_t i = 0; i < n; ++i)
            scale = std::max(scale, lp_norm(restrict_field(P.g_m[i], Parity::Raw), 2.0));
        if (scale > 0 && g0 > compat_tol * std::max(1.0, scale))
            throw std::runtime_error("solve_stokes: compatibility g(0) = 0 violated, |g(0)|_2 = " +
                                     std::to_string(g0));
        std::vector<Modes> Qd(n);
        for (size_t i = 0; i < n; ++i) Qd[i] = Qm[i][dd];
        std::vector<Modes> dQd = dt_series(tau, Qd);
        double tr = 0;
        for (size_t i = 0; i < n; ++i)
            tr = std::max(tr, trace_l2(restrict_field(dQd[i], Parity::Raw)));
        if (tr > compat_tol)
            throw std::runtime_error(
                "solve_stokes: compatibility d_t(gamma Q^d) = 0 violated, max = " +
                std::to_string(tr));
        // k = d_t Q - grad g (mu = 1 after rescaling), then the G chain
        std::vector<std::vector<Modes>> dQm(g.d, std::vector<Modes>(n, Modes(g, 1)));
        for (int c = 0; c < g.d; ++c) {
            std::vector<Modes> comp(n);
            for (size_t i = 0; i < n; ++i) comp[i] = Qm[i][c];
            dQm[c] = dt_series(tau, comp);
        }
        for (size_t i = 0; i < n; ++i) {
            Modes inner(g, 1);
            for (int j = 0; j < dd; ++j)
                inner += op_riesz(dQm[j][i] - op_dh(P.g_m[i], j), j);
            inner += op_riesz(dQm[dd][i] - op_dz(P.g_m[i]), dd);
            Modes gm = op_riesz(inner, dd) - op_rh_dot_s(inner);
            gm *= -1.0;
            P.Gk_m[i] = gm;
        }
        // W = S.U Q^h + (I-U) Q^d - H gamma Q^d
        for (size_t i = 0; i < n; ++i) {
            for (int j = 0; j < dd; ++j) P.W[i] += op_s(modes_U(Qm[i][j]), j);
            P.W[i] += Qm[i][dd] - modes_U(Qm[i][dd]) - modes_H_trace(Qm[i][dd]);
        }
    }

    for (size_t i = 0; i < n; ++i) {
        Modes Mf(g, dd);
        if (P.has_f) {
            for (int j = 0; j < dd; ++j) {
                Modes ea = to_modes(in.f[i].component(j), ExtendMode::Antisym);
                P.eafh[i].coeff.col(j) = ea.coeff.col(0);
            }
            P.esfd[i] = to_modes(in.f[i].vertical(), ExtendMode::Sym);
            // N~f = [1 + R_d^2 - R_d R_h.S] e_s(f^d) + R_d^2 S.e_a(f^h)
            //       + R_d R_h.e_a(f^h)
            Modes sdot(g, 1), rhdot(g, 1);
            for (int j = 0; j < dd; ++j) {
                sdot += op_s(P.eafh[i].component(j), j);
                rhdot += op_riesz(P.eafh[i].component(j), j);
            }
            P.Nf_m[i] = P.esfd[i] + op_riesz(op_riesz(P.esfd[i], dd), dd) -
                        op_riesz(op_rh_dot_s(P.esfd[i]), dd) +
                        op_riesz(op_riesz(sdot, dd), dd) + op_riesz(rhdot, dd);
            // M~f = S[R_d - R_h.S](R_h.e_a(f^h) + R_d e_s(f^d)) + V_h f
            Modes inner_f = rhdot + op_riesz(P.esfd[i], dd);
            Modes chain = op_riesz(inner_f, dd) - op_rh_dot_s(inner_f);
            for (int j = 0; j < dd; ++j) {
                Modes mj = op_s(chain, j) + P.eafh[i].component(j) + op_s(P.esfd[i], j);
                Mf.coeff.col(j) = mj.coeff.col(0);
            }
        }
        // the time-convolution sources are extended from the half-space
        // restriction of the interior chains, as in the solution formula
        Field asum = restrict_field(P.Nf_m[i] + P.Gk_m[i], Parity::Raw);
        P.A[i] = to_modes(asum, ExtendMode::Antisym);
        for (int j = 0; j < dd; ++j) {
            Field bj = restrict_field(Mf.component(j) + op_s(P.Gk_m[i], j), Parity::Raw);
            P.B[i].coeff.col(j) = to_modes(bj, ExtendMode::Antisym).coeff.col(0);
        }
    }
    return P;
}

}  // namespace

StokesSolution solve_stokes(const StokesInput& in, double compat_tol) {
    in.validate();
    const Grid& g = in.u0.grid;
    const int dd = g.d - 1;
    const size_t n = in.times.size();

    // internal viscosity rescaling: v(tau) := u(tau / mu) solves the
    // mu = 1 system with sources f/mu and the same Q samples on the
    // stretched grid tau_i = mu t_i; afterwards grad Pi picks up mu.
    std::vector<double> tau(n);
    for (size_t i = 0; i < n; ++i) tau[i] = in.mu * in.times[i];
    StokesInput scaled = in;
    scaled.mu = 1.0;
    scaled.times = tau;
    for (Field& s : scaled.f) s.data /= in.mu;

    FormulaParts P = build_parts(scaled, tau, compat_tol);

    std::vector<Modes> JA = heat_convolution(tau, P.A);
    std::vector<Modes> JB = heat_convolution(tau, P.B);
    std::vector<Modes> dW = dt_series(tau, P.W);

    Modes mVd0 = to_modes(apply_Vd(in.u0), ExtendMode::Antisym);
    std::vector<Modes> mVh0;
    for (int j = 0; j < dd; ++j)
        mVh0.push_back(to_modes(apply_Vh(in.u0).component(j), ExtendMode::Antisym));

    StokesSolution sol;
    sol.mu = in.mu;
    sol.times = in.times;
    sol.provenance = "formula";
    double div_max = 0, trace_max = 0;

    for (size_t i = 0; i < n; ++i) {
        const double t = tau[i];
        Modes E = op_heat(mVd0, 1.0, t) + JA[i];
        Modes Pg = modes_P(P.g_m[i]);
        Modes UE = modes_U(E);
        Modes ud_m = Pg + UE;

        Field u(g, g.d, Parity::Raw);
        std::vector<Modes> uh_m(dd, Modes(g, 1));
        for (int j = 0; j < dd; ++j) {
            Modes m = op_heat(mVh0[j], 1.0, t) - op_s(Pg, j) - op_s(UE, j);
            m += JB[i].component(j);
            uh_m[j] = m;
            u.data.col(j) = restrict_field(m, Parity::Raw).data.col(0);
        }
        u.data.col(dd) = restrict_field(ud_m, Parity::Raw).data.col(0);
        sol.u.push_back(u);

        // divergence / trace diagnostics at the modes level
        Modes divu = op_dz(ud_m);
        for (int j = 0; j < dd; ++j) divu += op_dh(uh_m[j], j);
        divu -= P.g_m[i];
        div_max = std::max(div_max, lp_norm(restrict_field(divu, Parity::Raw), 2.0));
        trace_max = std::max(trace_max, trace_l2(u));

        // pressure gradient
        Modes lapE = op_laplacian(E);
        Modes UlapE = modes_U(lapE);
        Field gp(g, g.d, Parity::Raw);
        Modes w1(g, 1);
        for (int j = 0; j < dd; ++j) w1 += op_s(P.eafh[i].component(j), j);
        w1 += P.esfd[i];
        Modes UGk = modes_U(P.Gk_m[i]);
        Modes UNf = modes_U(P.Nf_m[i]);
        for (int j = 0; j < dd; ++j) {
            Modes term = op_rh_dot_s(op_s(op_riesz(w1, dd), j) + op_riesz(w1, j));
            term += op_s(UGk - P.Gk_m[i], j);
            term += op_dh(P.g_m[i], j) - op_s(op_dz(P.g_m[i]), j);
            term += op_s(dW[i], j);
            term += op_s(UNf, j);
            Modes dE = op_dh(E, j);
            term += op_abs_dh(dE, 1) - op_dz(dE);
            term += op_s(UlapE, j);
            gp.data.col(j) = restrict_field(term, Parity::Raw).data.col(0);
        }
        {
            Modes term = op_dz(P.g_m[i]) - op_abs_dh(P.g_m[i], 1);
            term -= dW[i];
            term -= UNf + UGk;
            Modes aE = op_abs_dh(E, 1);
            term -= op_abs_dh(aE, 1) - op_dz(aE);
            term -= UlapE;
            gp.data.col(dd) = restrict_field(term, Parity::Raw).data.col(0);
            if (P.has_f) gp.data.col(dd) += scaled.f[i].data.col(g.d - 1);
        }
        gp.data *= in.mu;  // undo the viscosity rescaling
        sol.grad_pi.push_back(gp);
    }

    sol.diagnostics["div_residual_l2_max"] = div_max;
    sol.diagnostics["trace_l2_max"] = trace_max;
    Field e0 = sol.u[0];
    e0.data -= in.u0.data;
    sol.diagnostics["u0_error_linf"] = e0.data.abs().maxCoeff();
    return sol;
}

std::vector<Field> free_horizontal(const Field& u0, const std::vector<double>& times, double mu,
                                   double pre_tol) {
    const Grid& g = u0.grid;
    const int dd = g.d - 1;
    if (u0.ncomp != g.d) throw std::invalid_argument("free_horizontal: u0 needs d components");
    const double tr = trace_l2(u0.vertical());
    if (tr > pre_tol * std::max(1.0, lp_norm(u0, 2.0)))
        throw std::invalid_argument("free_horizontal: gamma u0^d != 0");

    std::vector<Modes> A;
    for (int j = 0; j < dd; ++j) A.push_back(to_modes(u0.component(j), ExtendMode::Antisym));
    // reconstruct u0^d from u0^h alone: div u0 = 0 and the zero trace
    // give u0^d(z) = -int_0^z div_h u0^h, then extend antisymmetrically
    Modes D(g, 1);
    {
        Modes divh(g, 1);
        for (int j = 0; j < dd; ++j) divh += op_dh(A[j], j);
        divh *= -1.0;
        Field drec = restrict_field(op_vintegral(divh), Parity::Raw);
        // precondition: div u0 = 0
        Field dcheck = drec;
        dcheck.data.col(0) -= u0.data.col(dd);
        if (dcheck.data.abs().maxCoeff() > pre_tol * std::max(1.0, u0.data.abs().maxCoeff()))
            throw std::invalid_argument("free_horizontal: div u0 != 0");
        D = to_modes(drec, ExtendMode::Antisym);
    }

    std::vector<Field> out;
    for (double t : times) {
        std::vector<Modes> EA;
        for (int j = 0; j < dd; ++j) EA.push_back(op_heat(A[j], mu, t));
        Modes ED = op_heat(D, mu, t);
        Modes SdotEA(g, 1);
        for (int j = 0; j < dd; ++j) SdotEA += op_s(EA[j], j);
        Modes USdotEA = modes_U(SdotEA);
        Modes UED = modes_U(ED);
        Field uh(g, dd, Parity::Raw);
        for (int j = 0; j < dd; ++j) {
            Modes m = EA[j] + op_s(USdotEA, j) + op_s(ED, j) - op_s(UED, j);
            uh.data.col(j) = restrict_field(m, Parity::Raw).data.col(0);
        }
        out.push_back(uh);
    }
    return out;
}

ResidualReport residual(const StokesInput& in, const StokesSolution& sol) {
    if (sol.u.size() < 3) throw std::invalid_argument("residual: need >= 3 time samples");
    const Grid& g = in.u0.grid;
    const size_t n = sol.times.size();

    std::vector<Modes> um(n, Modes(g, g.d));
    for (size_t i = 0; i < n; ++i)
        for (int c = 0; c < g.d; ++c)
            um[i].coeff.col(c) =
                to_modes(sol.u[i].component(c), ExtendMode::Antisym).coeff.col(0);
    std::vector<Modes> dtu = dt_series(sol.times, um);

    ResidualReport rep;
    double mom2 = 0, momi = 0, div2 = 0, divi = 0, tr2 = 0, tri = 0;
    for (size_t i = 0; i < n; ++i) {
        Field r(g, g.d, Parity::Raw);
        for (int c = 0; c < g.d; ++c) {
            Modes m = dtu[i].component(c) - in.mu * op_laplacian(um[i].component(c));
            r.data.col(c) = restrict_field(m, Parity::Raw).data.col(0);
        }
        r.data += sol.grad_pi[i].data;
        if (!in.f.empty()) r.data -= in.f[i].data;
        mom2 = std::max(mom2, lp_norm(r, 2.0));
        momi = std::max(momi, lp_norm(r, kInf));

        Modes divm(g, 1);
        for (int j = 0; j < g.d - 1; ++j) divm += op_dh(um[i].component(j), j);
        divm += op_dz(um[i].component(g.d - 1));
        Field divf = restrict_field(divm, Parity::Raw);
        if (!in.Q.empty()) {
            Modes gm(g, 1);
            for (int j = 0; j < g.d - 1; ++j)
                gm += op_dh(to_modes(in.Q[i].component(j), ExtendMode::Antisym), j);
            gm += op_dz(to_modes(in.Q[i].vertical(), ExtendMode::Sym));
            divf.data -= restrict_field(gm, Parity::Raw).data;
        }
        div2 = std::max(div2, lp_norm(divf, 2.0));
        divi = std::max(divi, lp_norm(divf, kInf));

        tr2 = std::max(tr2, trace_l2(sol.u[i]));
        BoundaryField b = trace(sol.u[i]);
        tri = std::max(tri, b.data.abs().maxCoeff());
    }
    Field e0 = sol.u[0];
    e0.data -= in.u0.data;
    rep.l2["momentum"] = mom2;
    rep.linf["momentum"] = momi;
    rep.l2["divergence"] = div2;
    rep.linf["divergence"] = divi;
    rep.l2["trace"] = tr2;
    rep.linf["trace"] = tri;
    rep.l2["initial"] = lp_norm(e0, 2.0);
    rep.linf["initial"] = lp_norm(e0, kInf);
    return rep;
}

}  // namespace hslab
