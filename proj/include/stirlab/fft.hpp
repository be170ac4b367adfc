#pragma once

#include <complex>

#include "stirlab/grid.hpp"

namespace stirlab::fft {

/// Physical -> Fourier coefficients (includes the 1/n^d normalization, so
/// the k=0 coefficient is the grid mean). Thread-safe; plans are cached
/// per (dim, n) under a lock and executed on thread-local scratch.
void forward(const Grid& g, const double* phys, std::complex<double>* spec);

/// Fourier coefficients -> physical samples. The input is left untouched.
void backward(const Grid& g, const std::complex<double>* spec, double* phys);

}  // namespace stirlab::fft
