#include "hslab/field.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace hslab {

DoubledField extend(const Field& f, ExtendMode mode, double boundary_tol, bool* warned) {
    const Grid& g = f.grid;
    DoubledField F(g, f.ncomp);
    const int nv = g.nvert();
    const int nzd = g.nzd();
    if (mode == ExtendMode::Antisym) {
        double bmax = 0, fmax = 0;
        for (int c = 0; c < f.ncomp; ++c) {
            fmax = std::max(fmax, f.data.col(c).abs().maxCoeff());
            for (long ih = 0; ih < g.nhoriz(); ++ih)
                bmax = std::max(bmax, std::abs(f.data(ih * nv + 0, c)));
        }
        if (warned && fmax > 0 && bmax > boundary_tol * fmax) *warned = true;
    }
    for (int c = 0; c < f.ncomp; ++c) {
        for (long ih = 0; ih < g.nhoriz(); ++ih) {
            const long src = ih * nv;
            const long dst = ih * nzd;
            for (int iz = 0; iz <= g.nz; ++iz) F.data(dst + iz, c) = f.data(src + iz, c);
            if (mode == ExtendMode::Antisym) {
                // the odd extension has no trace: wall planes carry the
                // principal value 0 regardless of the sampled values
                F.data(dst, c) = 0.0;
                F.data(dst + g.nz, c) = 0.0;
            }
            for (int iz = 1; iz < g.nz; ++iz) {
                double v = f.data(src + iz, c);
                switch (mode) {
                    case ExtendMode::Zero: v = 0; break;
                    case ExtendMode::Antisym: v = -v; break;
                    case ExtendMode::Sym: break;
                }
                F.data(dst + 2 * g.nz - iz, c) = v;
            }
        }
    }
    return F;
}

Field restrict_field(const DoubledField& F) {
    const Grid& g = F.grid;
    Field f(g, F.ncomp, Parity::Raw);
    const int nv = g.nvert();
    for (int c = 0; c < F.ncomp; ++c)
        for (long ih = 0; ih < g.nhoriz(); ++ih)
            for (int iz = 0; iz < nv; ++iz)
                f.data(ih * nv + iz, c) = F.data(ih * g.nzd() + iz, c);
    return f;
}

BoundaryField trace(const Field& f) {
    BoundaryField b(f.grid, f.ncomp);
    for (int c = 0; c < f.ncomp; ++c)
        for (long ih = 0; ih < f.grid.nhoriz(); ++ih)
            b.data(ih, c) = f.data(ih * f.grid.nvert() + 0, c);
    return b;
}

namespace {

double pointwise_sq(const Eigen::ArrayXXd& data, long row) {
    double s = 0;
    for (int c = 0; c < data.cols(); ++c) s += data(row, c) * data(row, c);
    return s;
}

}  // namespace

double lp_norm(const Field& f, double p) {
    const Grid& g = f.grid;
    if (std::isinf(p)) {
        double m = 0;
        for (long i = 0; i < g.size(); ++i) m = std::max(m, std::sqrt(pointwise_sq(f.data, i)));
        return m;
    }
    if (p < 1) throw std::invalid_argument("lp_norm: p must be >= 1");
    const double cell_h = std::pow(g.hh(), g.d - 1);
    double acc = 0;
    for (long ih = 0; ih < g.nhoriz(); ++ih) {
        for (int iz = 0; iz <= g.nz; ++iz) {
            const double wz = (iz == 0 || iz == g.nz) ? 0.5 * g.hz() : g.hz();
            acc += wz * cell_h * std::pow(pointwise_sq(f.data, ih * g.nvert() + iz), p / 2.0);
        }
    }
    return std::pow(acc, 1.0 / p);
}

double lp_norm(const DoubledField& F, double p) {
    const Grid& g = F.grid;
    if (std::isinf(p)) {
        double m = 0;
        for (long i = 0; i < g.size_doubled(); ++i)
            m = std::max(m, std::sqrt(pointwise_sq(F.data, i)));
        return m;
    }
    if (p < 1) throw std::invalid_argument("lp_norm: p must be >= 1");
    const double cell = std::pow(g.hh(), g.d - 1) * g.hz();
    double acc = 0;
    for (long i = 0; i < g.size_doubled(); ++i)
        acc += cell * std::pow(pointwise_sq(F.data, i), p / 2.0);
    return std::pow(acc, 1.0 / p);
}

void write_field(const Field& f, const std::string& path_base) {
    {
        std::ofstream hdr(path_base + ".hdr");
        hdr << "d:" << f.grid.d << "\n"
            << "n_h:" << f.grid.nh << "\n"
            << "n_z:" << f.grid.nz << "\n";
        char buf[64];
        snprintf(buf, sizeof buf, "%.17g", f.grid.Lh);
        hdr << "L_h:" << buf << "\n";
        snprintf(buf, sizeof buf, "%.17g", f.grid.Lz);
        hdr << "L_z:" << buf << "\n"
            << "parity:" << parity_name(f.parity) << "\n"
            << "n_components:" << f.ncomp << "\n";
    }
    std::ofstream bin(path_base + ".f64", std::ios::binary);
    // row-major samples, horizontal axes first, component-contiguous planes
    for (int c = 0; c < f.ncomp; ++c) {
        Eigen::ArrayXd col = f.data.col(c);
        bin.write(reinterpret_cast<const char*>(col.data()),
                  static_cast<std::streamsize>(col.size() * sizeof(double)));
    }
}

Field read_field(const std::string& path_base) {
    std::ifstream hdr(path_base + ".hdr");
    if (!hdr) throw std::runtime_error("read_field: missing header " + path_base + ".hdr");
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(hdr, line)) {
        auto pos = line.find(':');
        if (pos != std::string::npos) kv[line.substr(0, pos)] = line.substr(pos + 1);
    }
    Grid g;
    g.d = std::stoi(kv.at("d"));
    g.nh = std::stoi(kv.at("n_h"));
    g.nz = std::stoi(kv.at("n_z"));
    g.Lh = std::stod(kv.at("L_h"));
    g.Lz = std::stod(kv.at("L_z"));
    g.validate();
    Parity par = Parity::Raw;
    if (kv.at("parity") == "odd") par = Parity::Odd;
    else if (kv.at("parity") == "even") par = Parity::Even;
    Field f(g, std::stoi(kv.at("n_components")), par);
    std::ifstream bin(path_base + ".f64", std::ios::binary);
    if (!bin) throw std::runtime_error("read_field: missing data " + path_base + ".f64");
    for (int c = 0; c < f.ncomp; ++c) {
        Eigen::ArrayXd col(g.size());
        bin.read(reinterpret_cast<char*>(col.data()),
                 static_cast<std::streamsize>(col.size() * sizeof(double)));
        if (!bin) throw std::runtime_error("read_field: truncated data file");
        f.data.col(c) = col;
    }
    return f;
}

}  // namespace hslab
