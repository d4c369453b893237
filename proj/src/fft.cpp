#include "hslab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <tuple>
#include <vector>

namespace hslab {

namespace {

using PlanKey = std::tuple<std::vector<int>, int, int, int, int>;  // dims, howmany, stride, dist, sign

struct PlanCache {
    std::map<PlanKey, fftw_plan> plans;
    // FFTW plans are bound to buffers at creation unless we use the
    // new-array execute interface; we plan once per shape on a scratch
    // buffer and use fftw_execute_dft on live data.
    std::map<PlanKey, std::vector<Cplx>> scratch;

    fftw_plan get(const std::vector<int>& dims, int howmany, int stride, int dist, int sign) {
        PlanKey key{dims, howmany, stride, dist, sign};
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        long n = 1;
        for (int d : dims) n *= d;
        long total = (dist == 1) ? n * stride : static_cast<long>(howmany) * dist;
        // conservative size covering both layouts used below
        total = std::max(total, n * static_cast<long>(stride) + howmany);
        auto& buf = scratch[key];
        buf.resize(total);
        auto* raw = reinterpret_cast<fftw_complex*>(buf.data());
        fftw_plan p = fftw_plan_many_dft(
            static_cast<int>(dims.size()), dims.data(), howmany, raw, nullptr, stride,
            dist, raw, nullptr, stride, dist, sign, FFTW_ESTIMATE);
        plans[key] = p;
        return p;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void execute(fftw_plan p, Cplx* data) {
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data));
}

}  // namespace

void fft_doubled(const Grid& g, ArrayXc& a, int sign) {
    std::vector<int> dims;
    for (int i = 0; i < g.d - 1; ++i) dims.push_back(g.nh);
    dims.push_back(g.nzd());
    fftw_plan p = cache().get(dims, 1, 1, 0, sign);
    execute(p, a.data());
    if (sign == +1) a /= static_cast<double>(g.size_doubled());
}

void fft_horizontal(const Grid& g, ArrayXc& a, int nplanes, int sign) {
    std::vector<int> dims;
    for (int i = 0; i < g.d - 1; ++i) dims.push_back(g.nh);
    fftw_plan p = cache().get(dims, nplanes, nplanes, 1, sign);
    execute(p, a.data());
    if (sign == +1) a /= static_cast<double>(g.nhoriz());
}

}  // namespace hslab
