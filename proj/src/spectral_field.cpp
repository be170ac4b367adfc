#include "stirlab/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "stirlab/fft.hpp"

namespace stirlab {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;

void require_same_grid(const SpectralField& a, const SpectralField& b) {
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument("SpectralField: grid mismatch");
}
}  // namespace

SpectralField SpectralField::from_physical(Grid g, std::span<const double> samples,
                                           std::string label) {
    if (samples.size() != g.points())
        throw std::invalid_argument("from_physical: sample count != n^d");
    SpectralField f(g, std::move(label));
    fft::forward(g, samples.data(), f.coeffs_.data());
    return f;
}

SpectralField SpectralField::from_function(
    Grid g, const std::function<double(double, double, double)>& fn, std::string label) {
    std::vector<double> phys(g.points());
    const double h = g.spacing();
    const int n = g.n;
    const int n3 = g.dim == 3 ? n : 1;
    std::size_t p = 0;
    for (int i3 = 0; i3 < n3; ++i3)
        for (int i2 = 0; i2 < n; ++i2)
            for (int i1 = 0; i1 < n; ++i1)
                phys[p++] = fn(i1 * h, i2 * h, i3 * h);
    return from_physical(g, phys, std::move(label));
}

SpectralField SpectralField::random_bandlimited(Grid g, unsigned long long seed, int kmax,
                                                std::string label) {
    // Generating in physical space keeps the conjugate symmetry exact.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> phys(g.points());
    for (auto& v : phys) v = gauss(rng);
    SpectralField f = from_physical(g, phys, std::move(label));
    const int kc = std::min(kmax, g.dealias_cutoff());
    auto c = f.coeffs();
    for (std::size_t s = 0; s < c.size(); ++s) {
        auto k = g.wavevector(s);
        if (std::abs(k[0]) > kc || std::abs(k[1]) > kc || std::abs(k[2]) > kc)
            c[s] = 0.0;
    }
    c[0] = 0.0;
    double nrm = l2_norm(f);
    if (nrm > 0) f *= 1.0 / nrm;
    return f;
}

std::vector<double> SpectralField::to_physical() const {
    std::vector<double> phys(grid_.points());
    fft::backward(grid_, coeffs_.data(), phys.data());
    return phys;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double a) {
    for (auto& c : coeffs_) c *= a;
    return *this;
}

SpectralField project_mean_zero(SpectralField f) {
    f.coeffs()[0] = 0.0;
    return f;
}

SpectralField laplacian(const SpectralField& f) {
    SpectralField out(f.grid(), f.label());
    auto c = f.coeffs();
    auto o = out.coeffs();
    const Grid& g = f.grid();
    for (std::size_t s = 0; s < c.size(); ++s)
        o[s] = -four_pi_sq * g.k_squared(s) * c[s];
    return out;
}

SpectralField inverse_laplacian(const SpectralField& f) {
    SpectralField out(f.grid(), f.label());
    auto c = f.coeffs();
    auto o = out.coeffs();
    const Grid& g = f.grid();
    for (std::size_t s = 1; s < c.size(); ++s) {
        double k2 = g.k_squared(s);
        o[s] = c[s] / (-four_pi_sq * k2);
    }
    o[0] = 0.0;
    return out;
}

VectorFieldOnGrid gradient(const SpectralField& f) {
    const Grid& g = f.grid();
    VectorFieldOnGrid v;
    v.comp.reserve(g.dim);
    for (int j = 0; j < g.dim; ++j) v.comp.emplace_back(g);
    auto c = f.coeffs();
    const int nyq = g.n / 2;
    for (std::size_t s = 0; s < c.size(); ++s) {
        auto k = g.wavevector(s);
        for (int j = 0; j < g.dim; ++j) {
            // Odd derivative is zeroed at the Nyquist mode, which keeps the
            // operator skew-adjoint on the grid.
            double kj = (std::abs(k[j]) == nyq) ? 0.0 : double(k[j]);
            v.comp[j].coeffs()[s] = cplx(0.0, two_pi * kj) * c[s];
        }
    }
    return v;
}

VectorFieldOnGrid inverse_gradient(const SpectralField& f) {
    return gradient(inverse_laplacian(f));
}

SpectralField dealias(SpectralField f) {
    const Grid& g = f.grid();
    auto c = f.coeffs();
    for (std::size_t s = 0; s < c.size(); ++s)
        if (!g.in_dealias_band(s)) c[s] = 0.0;
    return f;
}

double l2_norm(const SpectralField& f) {
    const Grid& g = f.grid();
    auto c = f.coeffs();
    double sum = 0.0;
    for (std::size_t s = 0; s < c.size(); ++s)
        sum += g.parseval_weight(s) * std::norm(c[s]);
    return std::sqrt(sum);
}

double h1_seminorm(const SpectralField& f) {
    const Grid& g = f.grid();
    auto c = f.coeffs();
    double sum = 0.0;
    for (std::size_t s = 0; s < c.size(); ++s)
        sum += g.parseval_weight(s) * four_pi_sq * g.k_squared(s) * std::norm(c[s]);
    return std::sqrt(sum);
}

double l1_norm(const SpectralField& f) {
    auto phys = f.to_physical();
    double sum = 0.0;
    for (double v : phys) sum += std::abs(v);
    return sum / static_cast<double>(phys.size());
}

double linf_norm(const SpectralField& f) {
    auto phys = f.to_physical();
    double m = 0.0;
    for (double v : phys) m = std::max(m, std::abs(v));
    return m;
}

double min_value(const SpectralField& f) {
    auto phys = f.to_physical();
    return *std::min_element(phys.begin(), phys.end());
}

double max_value(const SpectralField& f) {
    auto phys = f.to_physical();
    return *std::max_element(phys.begin(), phys.end());
}

double inner_product(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a, b);
    const Grid& g = a.grid();
    auto ca = a.coeffs();
    auto cb = b.coeffs();
    double sum = 0.0;
    for (std::size_t s = 0; s < ca.size(); ++s)
        sum += g.parseval_weight(s) * (ca[s].real() * cb[s].real() + ca[s].imag() * cb[s].imag());
    return sum;
}

double spectral_tail_fraction(const SpectralField& f, int band_lo) {
    const Grid& g = f.grid();
    if (band_lo <= 0) band_lo = (2 * g.dealias_cutoff() + 2) / 3;
    auto c = f.coeffs();
    double total = 0.0, tail = 0.0;
    for (std::size_t s = 1; s < c.size(); ++s) {
        auto k = g.wavevector(s);
        double e = g.parseval_weight(s) * std::norm(c[s]);
        total += e;
        int kinf = std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])});
        if (kinf >= band_lo) tail += e;
    }
    return total > 0.0 ? tail / total : 0.0;
}

double divergence_linf(const VectorFieldOnGrid& v) {
    const Grid& g = v.grid();
    SpectralField div(g);
    auto o = div.coeffs();
    const int nyq = g.n / 2;
    for (int j = 0; j < v.dim(); ++j) {
        auto c = v.comp[j].coeffs();
        for (std::size_t s = 0; s < c.size(); ++s) {
            auto k = g.wavevector(s);
            double kj = (std::abs(k[j]) == nyq) ? 0.0 : double(k[j]);
            o[s] += cplx(0.0, two_pi * kj) * c[s];
        }
    }
    return linf_norm(div);
}

}  // namespace stirlab
