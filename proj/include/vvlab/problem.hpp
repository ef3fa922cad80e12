#pragma once

#include <vector>

#include "vvlab/spectral.hpp"

namespace vvlab {

/// One Fourier component of the top-wall perturbation f(x).
struct FourierCoeff {
    int n = 1;
    double cos_coeff = 0.0;
    double sin_coeff = 0.0;
};

/// Boundary data of the strip problem: u(x,1) = alpha + delta f(x).
struct ProblemSpec {
    double alpha = 1.0;
    double delta = 0.0;
    std::vector<FourierCoeff> f;

    double f_at(double x) const;
    double wall_at(double x) const { return alpha + delta * f_at(x); }
    std::vector<double> wall_samples(int nx) const;
    std::vector<double> f_samples(int nx) const;
    int max_mode() const;
};

/// Constants of the selected shear Euler flow u_e(y) = A y + B.
struct BatchelorConstants {
    double A = 0.0;
    double B = 0.0;  // identically zero in this setting
};

/// A = sqrt((1/2pi) int (alpha + delta f)^2 dx), B = 0. Rejects wall data
/// that is nonpositive anywhere (the stream-coordinate map degenerates).
BatchelorConstants batchelor_constant(double alpha, double delta, const std::vector<FourierCoeff>& f,
                                      int nx_quad = 256);

}  // namespace vvlab
