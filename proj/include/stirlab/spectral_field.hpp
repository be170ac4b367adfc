#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stirlab/grid.hpp"

namespace stirlab {

using cplx = std::complex<double>;

/// A real scalar field on the torus stored as Fourier coefficients
/// (conjugate-symmetric half-complex layout).
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(Grid g, std::string label = {})
        : grid_(g), label_(std::move(label)), coeffs_(g.spectral_size()) {}

    static SpectralField from_physical(Grid g, std::span<const double> samples,
                                       std::string label = {});
    /// Sample f(x) at the collocation points and transform. f receives
    /// x in [0,1)^d (third entry 0 in 2D).
    static SpectralField from_function(Grid g,
                                       const std::function<double(double, double, double)>& f,
                                       std::string label = {});
    /// Random mean-zero field, band-limited to |k_j| <= kmax, unit L2 norm.
    static SpectralField random_bandlimited(Grid g, unsigned long long seed, int kmax,
                                            std::string label = {});

    std::vector<double> to_physical() const;

    const Grid& grid() const { return grid_; }
    const std::string& label() const { return label_; }
    void set_label(std::string l) { label_ = std::move(l); }

    std::span<const cplx> coeffs() const { return coeffs_; }
    std::span<cplx> coeffs() { return coeffs_; }
    std::vector<cplx>& raw() { return coeffs_; }
    const std::vector<cplx>& raw() const { return coeffs_; }

    double mean() const { return coeffs_.empty() ? 0.0 : coeffs_[0].real(); }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double a);
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double a, SpectralField f) { return f *= a; }

private:
    Grid grid_{};
    std::string label_;
    std::vector<cplx> coeffs_;
};

/// d spectral components of a vector field sampled on a common grid.
struct VectorFieldOnGrid {
    std::vector<SpectralField> comp;

    const Grid& grid() const { return comp.at(0).grid(); }
    int dim() const { return static_cast<int>(comp.size()); }
};

SpectralField project_mean_zero(SpectralField f);
SpectralField laplacian(const SpectralField& f);
/// Solve laplacian(phi) = f with phi mean-zero (the k=0 mode of f is dropped).
SpectralField inverse_laplacian(const SpectralField& f);
VectorFieldOnGrid gradient(const SpectralField& f);
/// grad(laplacian^{-1} f); the k=0 mode of f is dropped.
VectorFieldOnGrid inverse_gradient(const SpectralField& f);
SpectralField dealias(SpectralField f);

double l2_norm(const SpectralField& f);             // Parseval
double h1_seminorm(const SpectralField& f);         // ||grad f||_2, Parseval
double l1_norm(const SpectralField& f);             // collocation quadrature
double linf_norm(const SpectralField& f);           // collocation max
double min_value(const SpectralField& f);
double max_value(const SpectralField& f);
double inner_product(const SpectralField& a, const SpectralField& b);  // L2

/// Fraction of the fluctuation energy (k != 0) carried by modes with
/// max_j |k_j| >= band_lo. band_lo <= 0 selects the top third of the
/// dealiased band, i.e. band_lo = ceil(2*kcut/3).
double spectral_tail_fraction(const SpectralField& f, int band_lo = 0);

/// Max-norm of div(v) over the grid, computed spectrally.
double divergence_linf(const VectorFieldOnGrid& v);

}  // namespace stirlab
