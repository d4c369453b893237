#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "hslab/stokes.hpp"

using namespace hslab;

namespace {

Grid grid2(int nh, int nz) {
    Grid g;
    g.d = 2;
    g.nh = nh;
    g.nz = nz;
    g.Lh = 1.0;
    g.Lz = 1.0;
    return g;
}

double rel_l2_field(const Field& a, const Field& b) {
    Field d = a;
    d.data -= b.data;
    const double nb = lp_norm(b, 2.0);
    return lp_norm(d, 2.0) / (nb > 0 ? nb : 1.0);
}

std::vector<double> uniform_times(double T, int n) {
    std::vector<double> t(n + 1);
    for (int i = 0; i <= n; ++i) t[i] = T * i / n;
    return t;
}

// Vertical profile coefficients phi(z) = sum_m c_m cos(m pi z / Lz),
// m = 1..10, lying in the null space of the wall constraints
//   phi = phi'' = phi'''' = phi'''''' = 0 at z = 0 and z = Lz.
// These make the even-parity outputs of the solver's interior chains
// vanish to high order at the walls, so the antisymmetric re-extension
// stays smooth and the spatial representation error is negligible.
Eigen::VectorXd profile_coeffs() {
    const int M = 10;
    Eigen::MatrixXd C(8, M);
    for (int m = 1; m <= M; ++m) {
        const double q = m * kPi, s = (m % 2 == 0) ? 1.0 : -1.0;
        const double q2 = q * q;
        C(0, m - 1) = 1.0;
        C(1, m - 1) = s;
        C(2, m - 1) = q2;
        C(3, m - 1) = q2 * s;
        C(4, m - 1) = q2 * q2;
        C(5, m - 1) = q2 * q2 * s;
        C(6, m - 1) = q2 * q2 * q2;
        C(7, m - 1) = q2 * q2 * q2 * s;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(C);
    Eigen::MatrixXd ker = lu.kernel();
    Eigen::VectorXd c = ker.col(0);
    return c / c.cwiseAbs().maxCoeff();
}

// Manufactured Stokes solution from the stream function
//   psi = a(t) phi(z) cos(xi x),  u = (d_z psi, -d_x psi),
// with the pressure chosen so that f^d == 0.
struct Manufactured {
    double xi = 2.0 * kPi;
    double mu = 1.0;
    Eigen::VectorXd c = profile_coeffs();

    static double a(double t) { return std::exp(-t) * std::sin(3.0 * t + 0.4); }
    static double da(double t) {
        return std::exp(-t) * (3.0 * std::cos(3.0 * t + 0.4) - std::sin(3.0 * t + 0.4));
    }

    double phi(double z, int deriv) const {
        double s = 0;
        for (int m = 1; m <= c.size(); ++m) {
            const double q = m * kPi;
            double v = 0;
            switch (deriv) {
                case 0: v = std::cos(q * z); break;
                case 1: v = -q * std::sin(q * z); break;
                case 2: v = -q * q * std::cos(q * z); break;
                case 3: v = q * q * q * std::sin(q * z); break;
            }
            s += c(m - 1) * v;
        }
        return s;
    }

    Field velocity(const Grid& g, double t) const {
        Field u(g, 2, Parity::Raw);
        const double at = a(t);
        for (long ih = 0; ih < g.nhoriz(); ++ih) {
            const double x = g.hcoord(g.hsplit(ih)[0]);
            for (int iz = 0; iz < g.nvert(); ++iz) {
                const double z = g.zcoord(iz);
                u.at(ih, iz, 0) = at * phi(z, 1) * std::cos(xi * x);
                u.at(ih, iz, 1) = at * xi * phi(z, 0) * std::sin(xi * x);
            }
        }
        return u;
    }

    Field force(const Grid& g, double t) const {
        Field f(g, 2, Parity::Raw);
        const double at = a(t), dat = da(t);
        for (long ih = 0; ih < g.nhoriz(); ++ih) {
            const double x = g.hcoord(g.hsplit(ih)[0]);
            for (int iz = 0; iz < g.nvert(); ++iz) {
                const double z = g.zcoord(iz);
                double v = 0;
                for (int m = 1; m <= c.size(); ++m) {
                    const double q = m * kPi, l = q * q + xi * xi;
                    v += -c(m - 1) * l / q * (dat + mu * at * l) * std::sin(q * z);
                }
                f.at(ih, iz, 0) = v * std::cos(xi * x);
            }
        }
        return f;
    }
};

// random divergence-free, zero-trace initial data from a stream
// function built out of the constrained vertical profile
Field stream_u0(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    Manufactured mm;
    Field u(g, 2, Parity::Raw);
    for (int kh = 1; kh <= 3; ++kh) {
        const double xi = 2.0 * kPi * kh / g.Lh, ac = amp(rng), as = amp(rng);
        for (long ih = 0; ih < g.nhoriz(); ++ih) {
            const double x = g.hcoord(g.hsplit(ih)[0]);
            const double hx = ac * std::cos(xi * x) + as * std::sin(xi * x);
            const double dhx = xi * (-ac * std::sin(xi * x) + as * std::cos(xi * x));
            for (int iz = 0; iz < g.nvert(); ++iz) {
                const double z = g.zcoord(iz);
                u.at(ih, iz, 0) += mm.phi(z, 1) * hx;
                u.at(ih, iz, 1) += -mm.phi(z, 0) * dhx;
            }
        }
    }
    return u;
}

}  // namespace

TEST_CASE("zero data gives identically zero solution") {
    StokesInput in;
    in.u0 = Field(grid2(16, 16), 2, Parity::Raw);
    in.times = {0.0, 0.1, 0.2};
    StokesSolution sol = solve_stokes(in);
    for (const Field& u : sol.u) CHECK(u.data.abs().maxCoeff() == 0.0);
    for (const Field& p : sol.grad_pi) CHECK(p.data.abs().maxCoeff() == 0.0);
    ResidualReport rep = residual(in, sol);
    CHECK(rep.l2.at("momentum") == 0.0);
    CHECK(rep.l2.at("divergence") == 0.0);
}

TEST_CASE("divergence and trace residuals vanish for g = 0") {
    Grid g = grid2(64, 64);
    StokesInput in;
    in.u0 = stream_u0(g, 7);
    in.times = uniform_times(0.4, 8);
    Manufactured mm;
    for (double t : in.times) in.f.push_back(mm.force(g, t));
    // make the forcing generic: add the manufactured field as a second
    // component so both f^h and f^d are active
    for (size_t i = 0; i < in.f.size(); ++i)
        in.f[i].data.col(1) += 0.5 * mm.velocity(g, in.times[i]).data.col(1);
    StokesSolution sol = solve_stokes(in);
    CHECK(sol.diagnostics.at("div_residual_l2_max") < 1e-9);
    CHECK(sol.diagnostics.at("trace_l2_max") < 1e-10);
    CHECK(sol.diagnostics.at("u0_error_linf") < 1e-6);
}

TEST_CASE("manufactured solution: second order in the time step") {
    Grid g = grid2(64, 64);
    Manufactured mm;
    const double T = 0.5;
    std::vector<double> errs;
    for (int n : {64, 128, 256}) {
        StokesInput in;
        in.mu = mm.mu;
        in.u0 = mm.velocity(g, 0.0);
        in.times = uniform_times(T, n);
        for (double t : in.times) in.f.push_back(mm.force(g, t));
        StokesSolution sol = solve_stokes(in);
        double err = 0;
        for (size_t i = 0; i < in.times.size(); ++i)
            err = std::max(err, rel_l2_field(sol.u[i], mm.velocity(g, in.times[i])));
        errs.push_back(err);
    }
    CHECK(errs[0] / errs[1] >= 3.5);
    CHECK(errs[1] / errs[2] >= 3.5);
    CHECK(errs[2] < 1e-4);
}

TEST_CASE("solution map is linear in the data") {
    Grid g = grid2(16, 16);
    Manufactured mm;
    StokesInput a, b, ab;
    a.u0 = stream_u0(g, 3);
    b.u0 = stream_u0(g, 4);
    ab.u0 = a.u0;
    ab.u0.data += b.u0.data;
    a.times = b.times = ab.times = uniform_times(0.2, 4);
    for (double t : a.times) {
        a.f.push_back(mm.force(g, t));
        Field fb = mm.force(g, t + 0.05);
        b.f.push_back(fb);
        Field fab = a.f.back();
        fab.data += fb.data;
        ab.f.push_back(fab);
    }
    StokesSolution sa = solve_stokes(a), sb = solve_stokes(b), sab = solve_stokes(ab);
    for (size_t i = 0; i < a.times.size(); ++i) {
        Field sum = sa.u[i];
        sum.data += sb.u[i].data;
        CHECK(rel_l2_field(sab.u[i], sum) < 1e-12);
        Field psum = sa.grad_pi[i];
        psum.data += sb.grad_pi[i].data;
        Field pd = sab.grad_pi[i];
        pd.data -= psum.data;
        CHECK(pd.data.abs().maxCoeff() <
              1e-12 * std::max(1.0, psum.data.abs().maxCoeff()));
    }
}

TEST_CASE("viscosity rescaling invariance") {
    Grid g = grid2(32, 32);
    Manufactured mm;
    const double mu = 0.7;
    StokesInput in;
    in.mu = mu;
    in.u0 = stream_u0(g, 11);
    in.times = uniform_times(0.3, 6);
    for (double t : in.times) in.f.push_back(mm.force(g, t));
    StokesSolution sol = solve_stokes(in);

    StokesInput ref;
    ref.mu = 1.0;
    ref.u0 = in.u0;
    for (double t : in.times) ref.times.push_back(mu * t);
    for (const Field& f : in.f) {
        ref.f.push_back(f);
        ref.f.back().data /= mu;
    }
    StokesSolution rsol = solve_stokes(ref);
    for (size_t i = 0; i < in.times.size(); ++i) {
        CHECK(rel_l2_field(sol.u[i], rsol.u[i]) < 1e-12);
        Field p = rsol.grad_pi[i];
        p.data *= mu;
        CHECK(rel_l2_field(sol.grad_pi[i], p) < 1e-12);
    }
}

TEST_CASE("pressure consistency for divergence forcing") {
    // grad_h Pi = -S Gk - S d_d Pi for data driven by Q alone
    Grid g = grid2(32, 32);
    Manufactured mm;
    StokesInput in;
    in.u0 = Field(g, 2, Parity::Raw);
    in.times = uniform_times(0.3, 12);
    for (double t : in.times) {
        // Q = b(t) * (odd profile, even profile), b(0) = 0
        const double b = std::sin(2.0 * t);
        Field Q(g, 2, Parity::Raw);
        for (long ih = 0; ih < g.nhoriz(); ++ih) {
            const double x = g.hcoord(g.hsplit(ih)[0]);
            for (int iz = 0; iz < g.nvert(); ++iz) {
                const double z = g.zcoord(iz);
                Q.at(ih, iz, 0) = b * mm.phi(z, 1) * std::cos(2.0 * kPi * x);
                Q.at(ih, iz, 1) = b * mm.phi(z, 0) * std::sin(4.0 * kPi * x);
            }
        }
        in.Q.push_back(Q);
    }
    StokesSolution sol = solve_stokes(in);

    // rebuild Gk with the library operators
    std::vector<Modes> Qh(in.times.size()), Qd(in.times.size()), gm(in.times.size());
    for (size_t i = 0; i < in.times.size(); ++i) {
        Qh[i] = to_modes(in.Q[i].component(0), ExtendMode::Antisym);
        Qd[i] = to_modes(in.Q[i].vertical(), ExtendMode::Sym);
        gm[i] = op_dh(Qh[i], 0) + op_dz(Qd[i]);
    }
    std::vector<Modes> dQh = dt_series(in.times, Qh), dQd = dt_series(in.times, Qd);
    double worst = 0;
    for (size_t i = 1; i < in.times.size(); ++i) {
        Modes inner = op_riesz(dQh[i] - op_dh(gm[i], 0), 0) +
                      op_riesz(dQd[i] - op_dz(gm[i]), 1);
        Modes gk = op_riesz(inner, 1) - op_rh_dot_s(inner);
        gk *= -1.0;
        Field sgk = restrict_field(op_s(gk, 0), Parity::Raw);
        Field sddp = h_s(sol.grad_pi[i].vertical(), 0);
        Field lhs = sol.grad_pi[i].component(0);
        Field rhs = sgk;
        rhs.data = -rhs.data - sddp.data;
        worst = std::max(worst, rel_l2_field(lhs, rhs));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("free evolution: horizontal-only formula matches the general branch") {
    // the vertical resolution sets the aliasing floor of the odd
    // re-extension inside the reconstruction, so use a taller grid
    // than the horizontal content requires
    Grid g = grid2(32, 64);
    Field u0 = stream_u0(g, 21);
    std::vector<double> times = {0.0, 0.05, 0.2, 0.5};
    std::vector<Field> uh = free_horizontal(u0, times, 0.8);

    StokesInput in;
    in.mu = 0.8;
    in.u0 = u0;
    in.times = times;
    StokesSolution sol = solve_stokes(in);
    for (size_t i = 0; i < times.size(); ++i) {
        Field ref = sol.u[i].horizontal();
        CHECK(rel_l2_field(uh[i], ref) < 1e-8);
    }
    // t = 0 returns the initial horizontal components
    CHECK(rel_l2_field(uh[0], u0.horizontal()) < 1e-10);
}

TEST_CASE("oracle: zero data and single-mode decay") {
    Grid g = grid2(64, 64);
    StokesInput in;
    in.u0 = Field(g, 2, Parity::Raw);
    in.times = {0.0, 0.1};
    StokesSolution z = oracle_solve(in, 1e-2);
    for (const Field& u : z.u) CHECK(u.data.abs().maxCoeff() == 0.0);

    // shear mode sin(q z): exact heat decay exp(-mu q^2 t)
    const double mu = 0.8, T = 0.2, q = 2.0 * kPi;
    for (long ih = 0; ih < g.nhoriz(); ++ih)
        for (int iz = 0; iz < g.nvert(); ++iz)
            in.u0.at(ih, iz, 0) = std::sin(q * g.zcoord(iz));
    in.mu = mu;
    in.times = {0.0, T};
    StokesSolution sol = oracle_solve(in, 1e-3);
    const double a0 = lp_norm(sol.u[0], 2.0), aT = lp_norm(sol.u[1], 2.0);
    CHECK(std::abs(aT / a0 - std::exp(-mu * q * q * T)) / std::exp(-mu * q * q * T) < 0.01);
}

// divergence-free initial data from a stream function whose vertical
// profile is the constrained profile on [0,1] extended by zero: the
// data is compactly supported in z, so the half-space problem is well
// approximated both by the periodized spectral representation and by
// a tall channel with a distant upper wall
Field bump_u0(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    Manufactured mm;
    Field u(g, 2, Parity::Raw);
    for (int kh = 1; kh <= 3; ++kh) {
        const double xi = 2.0 * kPi * kh / g.Lh, ac = amp(rng), as = amp(rng);
        for (long ih = 0; ih < g.nhoriz(); ++ih) {
            const double x = g.hcoord(g.hsplit(ih)[0]);
            const double hx = ac * std::cos(xi * x) + as * std::sin(xi * x);
            const double dhx = xi * (-ac * std::sin(xi * x) + as * std::cos(xi * x));
            for (int iz = 0; iz < g.nvert(); ++iz) {
                const double z = g.zcoord(iz);
                if (z >= 1.0) continue;
                u.at(ih, iz, 0) += mm.phi(z, 1) * hx;
                u.at(ih, iz, 1) += -mm.phi(z, 0) * dhx;
            }
        }
    }
    return u;
}

TEST_CASE("formula agrees with the oracle on free decay") {
    // Data supported in z < 1 on a box of height 4: the spectral
    // solver's vertical periodization images and the oracle's far
    // wall both sit several diffusion lengths away from the support,
    // so the two discretizations approximate the same half-space
    // evolution.
    Grid g = grid2(32, 128);
    g.Lh = 2.0;
    g.Lz = 4.0;
    Field u0 = bump_u0(g, 31);
    const double T = 0.25;
    StokesInput formula;
    formula.u0 = u0;
    formula.times = {0.0, T};
    StokesSolution fsol = solve_stokes(formula);

    StokesInput oin;
    oin.u0 = u0;
    oin.times = {0.0, T};
    StokesSolution osol = oracle_solve(oin, 1e-3);
    CHECK(rel_l2_field(fsol.u[1], osol.u[1]) < 0.04);
}
