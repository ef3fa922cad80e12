#pragma once

#include "vvlab/spectral.hpp"

namespace vvlab {

// The epsilon^{2/3} layer at the flat wall: per-mode two-point BVPs for
//   A i n eta u + A v - u'' = f,  v' = -i n u,
//   u(0)=0, u'(eta_max)=0, v(eta_max)=0,
// an explicit double integral for the zero mode, pressure by tail
// integration.

struct ZeroModeSolution {
    std::vector<double> u0;
    double Ahat = 0.0;
};

/// u0(eta) = int_0^eta int_etabar^inf f0, Ahat = u0(inf). f0 must decay.
ZeroModeSolution zero_mode_solve(const Grid1D& ge, std::span<const double> f0);

struct LowerModeSolution {
    std::vector<cplx> u;
    std::vector<cplx> v;
};

/// Coupled banded solve of the per-mode system (n != 0, A > 0).
LowerModeSolution nonzero_mode_solve(int n, const Grid1D& ge, std::span<const cplx> f, double A);

/// Add the wall-lift terms to the rhs: f + A dx(w) (eta kappa - K) - w kappa''
/// with w(x) the wall value to homogenize and kappa the lower bump. The
/// physical layer is recovered afterwards by subtracting w kappa(eta).
LayerField homogenize_lower(const std::vector<cplx>& wall_modes, const LayerField& rhs, double A);

/// v(x,eta) = int_eta^max dx(u); decay-pinned continuity partner.
LayerField v_hat_from_continuity(const LayerField& u_layer);

/// p = -int_eta^max g + A int_0^x v_wall; wall trace must have zero x-mean.
LayerField lower_pressure(const LayerField& g_layer, const std::vector<cplx>& v_wall_modes, double A);

/// Full lower-layer solve: homogenized rhs -> layer u (zero wall data
/// before un-lifting). Used by the expansion pipeline.
LayerField solve_lower_layer(const LayerField& rhs_homogenized, double A);

}  // namespace vvlab
