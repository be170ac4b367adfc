#pragma once

#include <array>

#include "stirlab/flows.hpp"
#include "stirlab/spectral_field.hpp"

namespace stirlab {

struct CellProblemResult {
    double D_e = 1.0;
    double residual = 0.0;   // relative residual of the corrector equation
    int iterations = 0;
    bool converged = false;
    SpectralField corrector;
};

/// Solves the corrector problem Lap(chi) - u.grad(chi) = u.e on the torus
/// and returns D_e = int |e + grad chi|^2 dx = 1 + ||grad chi||^2.
///
/// The Lap^{-1}-preconditioned system (I - K) chi = Lap^{-1}(u.e) with
/// K = Lap^{-1}(u.grad .) has K exactly skew-adjoint in the H^1 inner
/// product on the dealiased band, so CG runs on the SPD normal equations
/// (I - K^2) chi = (I + K) Lap^{-1}(u.e).
CellProblemResult cell_problem_D_e(const VelocityField& u, std::array<double, 3> e, Grid g,
                                   double tol = 1e-8, int max_iter = 200000);

}  // namespace stirlab
