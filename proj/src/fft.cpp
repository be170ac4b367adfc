#include "stirlab/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace stirlab::fft {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex plan_mutex;

// Plans are created once per (dim, n) on aligned prototype buffers and then
// reused via the new-array interface. All executions go through fftw_malloc'd
// scratch so the alignment always matches the prototype.
const PlanPair& plans_for(const Grid& g) {
    static std::map<std::pair<int, int>, PlanPair> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(g.dim, g.n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    int dims[3] = {g.n, g.n, g.n};
    double* r = fftw_alloc_real(g.points());
    fftw_complex* c = fftw_alloc_complex(g.spectral_size());
    PlanPair p;
    p.fwd = fftw_plan_dft_r2c(g.dim, dims, r, c, FFTW_ESTIMATE);
    p.bwd = fftw_plan_dft_c2r(g.dim, dims, c, r, FFTW_ESTIMATE);
    fftw_free(r);
    fftw_free(c);
    return cache.emplace(key, p).first->second;
}

struct Scratch {
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    std::size_t real_cap = 0;
    std::size_t cplx_cap = 0;

    void ensure(std::size_t nreal, std::size_t ncplx) {
        if (nreal > real_cap) {
            fftw_free(real);
            real = fftw_alloc_real(nreal);
            real_cap = nreal;
        }
        if (ncplx > cplx_cap) {
            fftw_free(cplx);
            cplx = fftw_alloc_complex(ncplx);
            cplx_cap = ncplx;
        }
    }

    ~Scratch() {
        fftw_free(real);
        fftw_free(cplx);
    }
};

Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

}  // namespace

void forward(const Grid& g, const double* phys, std::complex<double>* spec) {
    const auto& p = plans_for(g);
    auto& s = scratch();
    const std::size_t np = g.points(), ns = g.spectral_size();
    s.ensure(np, ns);
    std::memcpy(s.real, phys, np * sizeof(double));
    fftw_execute_dft_r2c(p.fwd, s.real, s.cplx);
    const double scale = 1.0 / static_cast<double>(np);
    for (std::size_t i = 0; i < ns; ++i)
        spec[i] = std::complex<double>(s.cplx[i][0] * scale, s.cplx[i][1] * scale);
}

void backward(const Grid& g, const std::complex<double>* spec, double* phys) {
    const auto& p = plans_for(g);
    auto& s = scratch();
    const std::size_t np = g.points(), ns = g.spectral_size();
    s.ensure(np, ns);
    // c2r destroys its input, so run it on the scratch copy.
    std::memcpy(s.cplx, spec, ns * sizeof(fftw_complex));
    fftw_execute_dft_c2r(p.bwd, s.cplx, s.real);
    std::memcpy(phys, s.real, np * sizeof(double));
}

}  // namespace stirlab::fft
