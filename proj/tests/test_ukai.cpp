#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "hslab/ukai.hpp"

using namespace hslab;

namespace {

Grid small_grid(int d = 2, int n = 16) {
    Grid g;
    g.d = d;
    g.nh = n;
    g.nz = n;
    g.Lh = 2.0 * kPi;
    g.Lz = kPi;
    return g;
}

// exact solution of (d_z + a) w = a * sum_m c_m sin(m z), w(0) = 0,
// by the integrating factor:
//   int_0^z e^{-a(z-y)} sin(q y) dy = (q e^{-az} + a sin(qz) - q cos(qz)) / (a^2 + q^2)
double ode_oracle_U(double a, const std::vector<std::pair<int, double>>& profile, double z) {
    double w = 0;
    for (auto [q, c] : profile)
        w += c * a * (q * std::exp(-a * z) + a * std::sin(q * z) - q * std::cos(q * z)) /
             (a * a + q * q);
    return w;
}

double ode_oracle_P(double a, const std::vector<std::pair<int, double>>& profile, double z) {
    double w = 0;
    for (auto [q, c] : profile)
        w += c * (q * std::exp(-a * z) + a * std::sin(q * z) - q * std::cos(q * z)) /
             (a * a + q * q);
    return w;
}

}  // namespace

TEST_CASE("identity suite residuals are at roundoff") {
    for (int d : {2, 3}) {
        Grid g = small_grid(d, d == 2 ? 32 : 8);
        auto reports = identity_suite(g, 7u + d);
        REQUIRE(reports.size() == 6);
        for (const auto& rep : reports) {
            INFO(rep.op);
            CHECK(rep.residuals.at("rel_l2") < 1e-9);
            CHECK(std::isfinite(rep.residuals.at("abs_linf")));
        }
    }
}

TEST_CASE("U matches the integrating-factor ODE oracle") {
    Grid g = small_grid(2, 32);
    const int nv = g.nvert();
    const std::vector<std::pair<int, double>> profile{{2, 0.8}, {5, -0.3}};
    Field f(g, 1, Parity::Odd);
    for (long ih = 0; ih < g.nhoriz(); ++ih) {
        const double x = g.hcoord(g.hsplit(ih)[0]);
        for (int iz = 0; iz < nv; ++iz) {
            double phi = 0;
            for (auto [q, c] : profile) phi += c * std::sin(q * g.zcoord(iz));
            f.data(ih * nv + iz, 0) = std::sin(x) * phi;
        }
    }
    Field Uf = apply_U(f);
    Field Pf = apply_P(f);
    const double a = 1.0;  // |xi_h| of the single horizontal mode
    for (long ih = 0; ih < g.nhoriz(); ++ih) {
        const double x = g.hcoord(g.hsplit(ih)[0]);
        for (int iz = 0; iz < nv; ++iz) {
            const double z = g.zcoord(iz);
            CHECK(Uf.at(ih, iz) ==
                  doctest::Approx(std::sin(x) * ode_oracle_U(a, profile, z)).epsilon(1e-10).scale(1.0));
            CHECK(Pf.at(ih, iz) ==
                  doctest::Approx(std::sin(x) * ode_oracle_P(a, profile, z)).epsilon(1e-10).scale(1.0));
        }
    }
    // zero boundary trace
    BoundaryField tr = trace(Uf);
    CHECK(tr.data.abs().maxCoeff() < 1e-10);
    // residual of the defining equation (d_z + |D_h|) Uf = |D_h| f
    Modes mU = modes_U(to_modes(f));
    Modes resid = op_dz(mU) + op_abs_dh(mU, 1) - op_abs_dh(to_modes(f), 1);
    CHECK(rel_l2(resid, to_modes(f)) < 1e-8);
}

TEST_CASE("U annihilates horizontally constant input") {
    Grid g = small_grid();
    Field f(g, 1, Parity::Odd);
    for (long ih = 0; ih < g.nhoriz(); ++ih)
        for (int iz = 0; iz < g.nvert(); ++iz)
            f.data(ih * g.nvert() + iz, 0) = std::sin(2 * g.zcoord(iz));
    CHECK(apply_U(f).data.abs().maxCoeff() == 0.0);
}

TEST_CASE("V_h / V_d definitions and the mean-free degeneracy relation") {
    Grid g = small_grid();
    const int nv = g.nvert();
    Field u(g, 2, Parity::Odd);
    for (long ih = 0; ih < g.nhoriz(); ++ih) {
        const double x = g.hcoord(g.hsplit(ih)[0]);
        for (int iz = 0; iz < nv; ++iz) {
            const double z = g.zcoord(iz);
            u.data(ih * nv + iz, 0) = std::cos(2 * x) * std::sin(3 * z);
            u.data(ih * nv + iz, 1) = std::sin(2 * x) * std::sin(z);
        }
    }
    Field vh = apply_Vh(u);
    Field vd = apply_Vd(u);
    // u^h == 0 -> V_d u = u^d, V_h u = S u^d
    Field u2(g, 2, Parity::Odd);
    u2.data.col(1) = u.data.col(1);
    CHECK((apply_Vd(u2).data.col(0) - u2.data.col(1)).abs().maxCoeff() < 1e-12);
    CHECK((apply_Vh(u2).data.col(0) - h_s(u2.vertical(), 0).data.col(0)).abs().maxCoeff() < 1e-12);
    // u^d == 0 -> V_d u = -S.u^h, V_h u = u^h
    Field u3(g, 2, Parity::Odd);
    u3.data.col(0) = u.data.col(0);
    CHECK((apply_Vh(u3).data.col(0) - u3.data.col(0)).abs().maxCoeff() < 1e-12);
    CHECK((apply_Vd(u3).data.col(0) + h_s(u3.component(0), 0).data.col(0)).abs().maxCoeff() < 1e-12);
    // on horizontally mean-free data, V_d u = -S.(V_h u) identically,
    // and u^h is recovered from (V_h u, u^d) as V_h u - S u^d
    Field svh = h_s(vh.component(0), 0);
    CHECK((vd.data.col(0) + svh.data.col(0)).abs().maxCoeff() < 1e-12);
    Field rec = vh;
    rec.data.col(0) -= h_s(u.vertical(), 0).data.col(0);
    CHECK((rec.data.col(0) - u.data.col(0)).abs().maxCoeff() < 1e-12);
}

TEST_CASE("G equals M e_a(div .) and the M~ two-path identity") {
    for (int d : {2, 3}) {
        Grid g = small_grid(d, d == 2 ? 32 : 8);
        const int nv = g.nvert();
        // f^h odd, f^d even, band-limited: extensions are exact
        Field f(g, d, Parity::Raw);
        for (long ih = 0; ih < g.nhoriz(); ++ih) {
            auto idx = g.hsplit(ih);
            const double x = g.hcoord(idx[0]);
            const double y = d == 3 ? g.hcoord(idx[1]) : 0.0;
            for (int iz = 0; iz < nv; ++iz) {
                const double z = g.zcoord(iz);
                f.data(ih * nv + iz, 0) = std::sin(x + 2 * y) * std::sin(2 * z);
                if (d == 3) f.data(ih * nv + iz, 1) = std::cos(x - y) * std::sin(3 * z);
                f.data(ih * nv + iz, d - 1) = std::cos(x + y) * std::cos(z);
            }
        }
        // e_a(div f) = div_h e_a(f^h) + d_z e_s(f^d)
        Modes div_m(g, 1);
        for (int j = 0; j < d - 1; ++j)
            div_m += op_dh(to_modes(f.component(j), ExtendMode::Antisym), j);
        div_m += op_dz(to_modes(f.vertical(), ExtendMode::Sym));
        Field Gf = apply_G(f);
        Field Mdiv = apply_M(div_m);
        CHECK((Gf.data - Mdiv.data).abs().maxCoeff() /
                  std::max(1e-30, Gf.data.abs().maxCoeff()) < 1e-9);
        // M~ f = V_h f - S G f (two independent evaluation paths)
        Field mt = apply_Mtilde(f);
        Field vh = apply_Vh(f);
        for (int j = 0; j < d - 1; ++j) {
            Field sg = h_s(Gf, j);
            CHECK((mt.data.col(j) - (vh.data.col(j) - sg.data.col(0))).abs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("N~ single-component input matches the hand-composed chain") {
    Grid g = small_grid(2, 32);
    const int nv = g.nvert();
    Field f(g, 2, Parity::Raw);
    for (long ih = 0; ih < g.nhoriz(); ++ih) {
        const double x = g.hcoord(g.hsplit(ih)[0]);
        for (int iz = 0; iz < nv; ++iz)
            f.data(ih * nv + iz, 1) = std::cos(3 * x) * std::cos(2 * g.zcoord(iz));
    }
    Modes esd = to_modes(f.vertical(), ExtendMode::Sym);
    Modes chain = esd + op_riesz(op_riesz(esd, 1), 1) - op_riesz(op_rh_dot_s(esd), 1);
    Field expected = restrict_field(chain, Parity::Raw);
    Field got = apply_Ntilde(f);
    CHECK((got.data - expected.data).abs().maxCoeff() < 1e-11);
    // zero input maps to zero for all three compositions
    Field z(g, 2, Parity::Raw);
    CHECK(apply_G(z).data.abs().maxCoeff() == 0.0);
    CHECK(apply_Ntilde(z).data.abs().maxCoeff() == 0.0);
    CHECK(apply_Mtilde(z).data.abs().maxCoeff() == 0.0);
}

TEST_CASE("boundedness probe across resolutions") {
    for (int n : {32, 64, 128}) {
        Grid g = small_grid(2, n);
        Modes m = random_modes(g, 1, 99u, 4);
        Field f = restrict_field(m, Parity::Raw);
        Field Uf = restrict_field(modes_U(m), Parity::Raw);
        for (double p : {1.5, 2.0, 4.0}) {
            const double ratio = lp_norm(Uf, p) / lp_norm(f, p);
            INFO("n=" << n << " p=" << p << " ratio=" << ratio);
            CHECK(ratio < 10.0);
        }
        // G on a d-vector built from the same seed
        Modes mk = random_modes(g, 2, 101u, 4);
        Field k = restrict_field(mk, Parity::Raw);
        Field Gk = apply_G(k);
        for (double p : {1.5, 2.0, 4.0}) CHECK(lp_norm(Gk, p) / lp_norm(k, p) < 10.0);
    }
}
