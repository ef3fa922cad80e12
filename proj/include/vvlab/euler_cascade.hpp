#pragma once

#include "vvlab/spectral.hpp"

namespace vvlab {

// Order-by-order linearized Euler solves around the Couette flow (A y, 0).
// Each velocity term is recovered from a harmonic Dirichlet problem for v;
// u follows from incompressibility, the pressure from an explicit formula.

/// Solve Delta v = 0 on the strip with periodic x and Dirichlet traces
/// v(x,1)=top, v(x,0)=bottom (given as mode coefficient vectors). Both
/// traces must have zero x-mean.
StripField solve_harmonic_dirichlet(GridPtr gy, int nx, const std::vector<cplx>& top_modes,
                                    const std::vector<cplx>& bottom_modes);

/// u with du/dx = -dv/dy per mode (mode 0 set to zero). Rejects if the
/// x-mean of dv/dy is not negligible.
StripField u_from_v(const StripField& v);

/// max over y of |int v dx_e^(1) d_y u_e^(1) dx|; vanishes for the shear
/// selection u_e'' = 0.
double check_shear_selection(const StripField& v1, const StripField& u1);

/// phi(y) = -int_0^y [A y' dx v(0,y') - g(0,y')] dy' entering the pressure.
std::vector<double> pressure_phi(const StripField& v, const StripField* g_e, double A);

/// p = phi(y) - A y u - A int_0^x v + int_0^x f_e, gauged so p(0,1)=0.
/// f_e/g_e may be null (homogeneous orders).
StripField pressure_from_field(const StripField& u, const StripField& v, const StripField* f_e, const StripField* g_e,
                               double A);

/// Far-field correction: u + phi(y) with phi'' = -(Delta u)(y) (x-mean),
/// phi(1)=A_k, phi(0)=Ahat_k. Rejects if Delta u depends on x. Returns the
/// phi profile used.
std::vector<double> correct_with_phi(StripField& u, double A_k, double Ahat_k);

/// Interior residual max |D2 v_n - n^2 v_n| (discrete harmonicity).
double harmonic_residual(const StripField& v);

/// max |du/dx + dv/dy| over the grid (spectral x, FD y).
double divergence_residual(const StripField& u, const StripField& v);

}  // namespace vvlab
