#include "vvlab/euler_cascade.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vvlab {

StripField solve_harmonic_dirichlet(GridPtr gy, int nx, const std::vector<cplx>& top_modes,
                                    const std::vector<cplx>& bottom_modes) {
    double scale = 1e-12;
    for (const auto& c : top_modes) scale = std::max(scale, std::abs(c));
    for (const auto& c : bottom_modes) scale = std::max(scale, std::abs(c));
    if (std::abs(top_modes[0]) > 1e-10 * (1.0 + scale) || std::abs(bottom_modes[0]) > 1e-10 * (1.0 + scale))
        throw std::invalid_argument("solve_harmonic_dirichlet: traces must have zero x-mean");

    StripField v(gy, nx, "v_e");
    std::vector<cplx> zero(gy->size(), cplx{0.0, 0.0});
    for (int b = 0; b < nx; ++b) {
        int n = wavenumber(b, nx);
        auto prof = solve_mode_helmholtz(n, *gy, zero, bottom_modes[b], top_modes[b]);
        auto m = v.mode(b);
        std::copy(prof.values.begin(), prof.values.end(), m.begin());
    }
    // mode 0 solves w''=0 with zero traces, identically zero
    auto m0 = v.mode(0);
    std::fill(m0.begin(), m0.end(), cplx{0.0, 0.0});
    return v;
}

StripField u_from_v(const StripField& v) {
    const Grid1D& g = v.grid();
    int nx = v.nx(), nn = g.size();
    auto m0 = v.mode(0);
    double mean0 = 0.0;
    for (const auto& c : m0) mean0 = std::max(mean0, std::abs(c));
    if (mean0 > 1e-10 * (1.0 + v.max_abs()))
        throw std::invalid_argument("u_from_v: x-mean of v must vanish (antiderivative not periodic)");

    StripField u(v.grid_ptr(), nx, "u_e", v.eps3);
    for (int b = 1; b < nx; ++b) {
        int n = wavenumber(b, nx);
        auto mv = v.mode(b);
        auto dv = apply_d1(g, std::span<const cplx>(mv.data(), mv.size()));
        auto mu = u.mode(b);
        if (b == nx / 2) {
            std::fill(mu.begin(), mu.end(), cplx{0.0, 0.0});
            continue;
        }
        cplx inv_ik = 1.0 / cplx{0.0, static_cast<double>(n)};
        for (int j = 0; j < nn; ++j) mu[j] = -dv[j] * inv_ik;
    }
    return u;
}

double check_shear_selection(const StripField& v1, const StripField& u1) {
    StripField uy = ddy(u1);
    int nn = v1.nn();
    double defect = 0.0;
    for (int j = 0; j < nn; ++j) {
        auto vr = v1.physical_row(j);
        auto ur = uy.physical_row(j);
        std::vector<double> prod(vr.size());
        for (size_t i = 0; i < vr.size(); ++i) prod[i] = vr[i] * ur[i];
        defect = std::max(defect, std::abs(quad_x(prod)));
    }
    return defect;
}

namespace {

// real samples at x=0 of a mode field, one value per y node
std::vector<double> column_at_x0(const StripField& f) {
    int nn = f.nn();
    std::vector<double> col(nn, 0.0);
    for (int j = 0; j < nn; ++j) {
        cplx s = 0.0;
        for (int b = 0; b < f.nx(); ++b) s += f.at(b, j);
        col[j] = s.real();
    }
    return col;
}

}  // namespace

std::vector<double> pressure_phi(const StripField& v, const StripField* g_e, double A) {
    const Grid1D& gy = v.grid();
    StripField vx = ddx(v);
    auto vx0 = column_at_x0(vx);
    std::vector<double> g0(gy.size(), 0.0);
    if (g_e && !g_e->empty()) g0 = column_at_x0(*g_e);
    std::vector<cplx> integrand(gy.size());
    for (int j = 0; j < gy.size(); ++j) integrand[j] = A * gy.nodes[j] * vx0[j] - g0[j];
    auto I = cumtrapz_from_left(gy, std::span<const cplx>(integrand.data(), integrand.size()));
    std::vector<double> phi(gy.size());
    for (int j = 0; j < gy.size(); ++j) phi[j] = -I[j].real();
    return phi;
}

StripField pressure_from_field(const StripField& u, const StripField& v, const StripField* f_e, const StripField* g_e,
                               double A) {
    const Grid1D& gy = u.grid();
    int nx = u.nx(), nn = gy.size();

    StripField pv = v;  // P[v]
    periodic_antiderivative_inplace(pv);

    StripField p(u.grid_ptr(), nx, "p_e", u.eps3);
    for (int b = 0; b < nx; ++b) {
        auto mu = u.mode(b);
        auto mpv = pv.mode(b);
        auto mp = p.mode(b);
        for (int j = 0; j < nn; ++j) mp[j] = -A * gy.nodes[j] * mu[j] - A * mpv[j];
    }
    if (f_e && !f_e->empty()) {
        StripField pf = *f_e;
        periodic_antiderivative_inplace(pf);
        for (int b = 0; b < nx; ++b) {
            auto mp = p.mode(b);
            auto mf = pf.mode(b);
            for (int j = 0; j < nn; ++j) mp[j] += mf[j];
        }
    }
    auto phi = pressure_phi(v, g_e, A);
    auto m0 = p.mode(0);
    for (int j = 0; j < nn; ++j) m0[j] += phi[j];
    // gauge p(0,1) = 0
    cplx p01 = 0.0;
    for (int b = 0; b < nx; ++b) p01 += p.at(b, nn - 1);
    for (int j = 0; j < nn; ++j) m0[j] -= p01.real();
    return p;
}

std::vector<double> correct_with_phi(StripField& u, double A_k, double Ahat_k) {
    const Grid1D& gy = u.grid();
    int nx = u.nx(), nn = gy.size();

    // Delta u per mode; verify it carries no x-dependence
    std::vector<double> lap0(nn, 0.0);
    double xdep = 0.0;
    for (int b = 0; b < nx; ++b) {
        int n = wavenumber(b, nx);
        auto mu = u.mode(b);
        auto d2 = apply_d2(gy, std::span<const cplx>(mu.data(), mu.size()));
        for (int j = 1; j < nn - 1; ++j) {
            cplx lap = d2[j] - static_cast<double>(n) * n * mu[j];
            if (b == 0)
                lap0[j] = lap.real();
            else
                xdep = std::max(xdep, std::abs(lap));
        }
    }
    if (xdep > 1e-6 * (1.0 + u.max_abs()))
        throw std::invalid_argument("correct_with_phi: Delta u depends on x");

    // phi'' = -lap0, phi(0)=Ahat_k, phi(1)=A_k by double integration
    std::vector<cplx> w(nn);
    for (int j = 0; j < nn; ++j) w[j] = -lap0[j];
    auto w1 = cumtrapz_from_left(gy, std::span<const cplx>(w.data(), w.size()));
    auto w2 = cumtrapz_from_left(gy, std::span<const cplx>(w1.data(), w1.size()));
    double slope = A_k - Ahat_k - w2[nn - 1].real();
    std::vector<double> phi(nn);
    for (int j = 0; j < nn; ++j) phi[j] = Ahat_k + slope * gy.nodes[j] + w2[j].real();

    auto m0 = u.mode(0);
    for (int j = 0; j < nn; ++j) m0[j] += phi[j];
    return phi;
}

double harmonic_residual(const StripField& v) {
    const Grid1D& gy = v.grid();
    int nn = gy.size();
    double r = 0.0;
    for (int b = 0; b < v.nx(); ++b) {
        int n = wavenumber(b, v.nx());
        auto mv = v.mode(b);
        auto d2 = apply_d2(gy, std::span<const cplx>(mv.data(), mv.size()));
        for (int j = 1; j < nn - 1; ++j) r = std::max(r, std::abs(d2[j] - static_cast<double>(n) * n * mv[j]));
    }
    return r;
}

double divergence_residual(const StripField& u, const StripField& v) {
    StripField ux = ddx(u);
    StripField vy = ddy(v);
    double r = 0.0;
    for (int b = 0; b < u.nx(); ++b) {
        auto mx = ux.mode(b);
        auto my = vy.mode(b);
        for (int j = 0; j < u.nn(); ++j) r = std::max(r, std::abs(mx[j] + my[j]));
    }
    return r;
}

}  // namespace vvlab
