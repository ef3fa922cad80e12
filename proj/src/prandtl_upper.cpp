#include "vvlab/prandtl_upper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vvlab {

// ---------------------------------------------------------------------------
// von Mises march: implicit Euler in x, lagged-coefficient linearization of
// (U^2)_psipsi = d2[Uc U] with Uc the current slice, periodic orbit found by
// repeating periods until the period map is stationary.

namespace {

std::vector<double> vm_step(const Grid1D& gp, const std::vector<double>& U, const std::vector<double>& Uc, double dx,
                            double wall, double A) {
    int m = gp.size();
    double h2 = gp.h() * gp.h();
    std::vector<cplx> lo(m, 0.0), di(m, 0.0), up(m, 0.0), r(m, 0.0);
    di[0] = 1.0;
    r[0] = A;  // far field pinned
    di[m - 1] = 1.0;
    r[m - 1] = wall;
    for (int k = 1; k < m - 1; ++k) {
        // 2(U+ - U)/dx = d2[Uc*U+] + d2[Uc*U] - d2[Uc*Uc]
        lo[k] = -Uc[k - 1] / h2;
        di[k] = 2.0 / dx + 2.0 * Uc[k] / h2;
        up[k] = -Uc[k + 1] / h2;
        double d2_ucu = (Uc[k + 1] * U[k + 1] - 2.0 * Uc[k] * U[k] + Uc[k - 1] * U[k - 1]) / h2;
        double d2_ucuc = (Uc[k + 1] * Uc[k + 1] - 2.0 * Uc[k] * Uc[k] + Uc[k - 1] * Uc[k - 1]) / h2;
        r[k] = 2.0 / dx * U[k] + d2_ucu - d2_ucuc;
    }
    auto sol = solve_tridiag(std::move(lo), std::move(di), std::move(up), std::move(r));
    std::vector<double> out(m);
    for (int k = 0; k < m; ++k) out[k] = sol[k].real();
    return out;
}

}  // namespace

VonMisesSolution solve_von_mises(const ProblemSpec& spec, double A, const VonMisesParams& p) {
    if (spec.delta > p.delta_max) throw std::invalid_argument("solve_von_mises: delta exceeds delta_max");
    if (!(A > 0.0)) throw std::invalid_argument("solve_von_mises: A must be positive");

    VonMisesSolution out;
    out.spec = spec;
    out.A = A;
    auto gp = std::make_shared<Grid1D>(Grid1D::half_line_upper(-p.psi_min_factor * A, p.n_psi));
    out.psi_grid = gp;
    int m = gp->size();

    int nm = p.n_x_march;
    int nx_store = 256;
    while (nx_store > nm) nx_store /= 2;
    if (nm % nx_store != 0) throw std::invalid_argument("solve_von_mises: n_x_march must be a multiple of 256");
    int stride = nm / nx_store;
    out.nx = nx_store;
    out.U.assign(static_cast<size_t>(nx_store) * m, A);

    double dx = two_pi / nm;
    std::vector<double> U(m);
    for (int k = 0; k < m; ++k) U[k] = A + (spec.wall_at(0.0) - A) * std::exp(gp->nodes[k] / std::sqrt(A));

    bool store = false;
    for (int period = 0; period < p.max_periods && !store; ++period) {
        std::vector<double> start = U;
        for (int i = 0; i < nm; ++i) {
            double xn = dx * (i + 1);
            std::vector<double> Un = vm_step(*gp, U, U, dx, spec.wall_at(xn), A);
            Un = vm_step(*gp, U, Un, dx, spec.wall_at(xn), A);
            U = std::move(Un);
        }
        double defect = 0.0;
        for (int k = 0; k < m; ++k) defect = std::max(defect, std::abs(U[k] - start[k]));
        out.defect_history.push_back(defect);
        if (defect < p.tol || period == p.max_periods - 1) {
            out.converged = defect < p.tol;
            store = true;
        }
    }

    // Final pass over one period: store the restricted columns (column i is
    // x = 2pi i / nx_store; the loop state currently sits at x = 0) and the
    // centered-in-x PDE residual at march resolution.
    {
        std::vector<double> prev = U;  // U(x=0 - dx) equals U(2pi - dx) by periodicity; recomputed below
        std::vector<double> Ucur = U;
        for (int k = 0; k < m; ++k) out.U[k] = Ucur[k];  // column 0
        double res = 0.0;
        std::vector<double> Um1;  // U at step i-1
        std::vector<double> hist0 = Ucur;
        for (int i = 0; i < nm; ++i) {
            double xn = dx * (i + 1);
            std::vector<double> Un = vm_step(*gp, Ucur, Ucur, dx, spec.wall_at(xn), A);
            Un = vm_step(*gp, Ucur, Un, dx, spec.wall_at(xn), A);
            if (!Um1.empty()) {
                double h2 = gp->h() * gp->h();
                for (int k = 1; k < m - 1; ++k) {
                    double ux = (Un[k] - Um1[k]) / (2.0 * dx);
                    double u2pp = (Ucur[k + 1] * Ucur[k + 1] - 2.0 * Ucur[k] * Ucur[k] + Ucur[k - 1] * Ucur[k - 1]) / h2;
                    res = std::max(res, std::abs(2.0 * ux - u2pp));
                }
            }
            Um1 = std::move(Ucur);
            Ucur = std::move(Un);
            if ((i + 1) % stride == 0 && (i + 1) < nm) {
                int col = (i + 1) / stride;
                for (int k = 0; k < m; ++k) out.U[static_cast<size_t>(col) * m + k] = Ucur[k];
            }
        }
        out.march_residual = res;
        double defect = 0.0;
        for (int k = 0; k < m; ++k) defect = std::max(defect, std::abs(Ucur[k] - hist0[k]));
        out.defect_history.push_back(defect);
    }
    return out;
}

double VonMisesSolution::batchelor_wood_defect() const {
    int m = psi_grid->size();
    std::vector<double> I(m, 0.0);
    std::vector<double> row(nx);
    for (int k = 0; k < m; ++k) {
        for (int i = 0; i < nx; ++i) row[i] = at(i, k) * at(i, k);
        I[k] = quad_x(row);
    }
    auto dI = apply_d1(*psi_grid, std::span<const double>(I.data(), I.size()));
    double d = 0.0;
    for (double v : dI) d = std::max(d, std::abs(v));
    return d;
}

double VonMisesSolution::periodicity_defect() const {
    return defect_history.empty() ? 0.0 : defect_history.back();
}

LayerField invert_von_mises(const VonMisesSolution& vm, GridPtr zeta_grid, int nx) {
    if (vm.nx % nx != 0) throw std::invalid_argument("invert_von_mises: nx must divide stored columns");
    int stride = vm.nx / nx;
    const Grid1D& gp = *vm.psi_grid;
    int m = gp.size();

    LayerField u(zeta_grid, nx, "u_p0", 0);
    int nz = zeta_grid->size();
    std::vector<std::vector<double>> rows(nz, std::vector<double>(nx));

    std::vector<double> zeta_of_psi(m), Ucol(m);
    for (int i = 0; i < nx; ++i) {
        int col = i * stride;
        for (int k = 0; k < m; ++k) Ucol[k] = vm.at(col, k);
        if (*std::min_element(Ucol.begin(), Ucol.end()) <= 0.0)
            throw std::runtime_error("invert_von_mises: U must stay positive");
        // zeta(psi) = int_0^psi dpsi'/U ; wall node (psi=0) is the last index
        zeta_of_psi[m - 1] = 0.0;
        for (int k = m - 2; k >= 0; --k) {
            double dpsi = gp.nodes[k + 1] - gp.nodes[k];
            zeta_of_psi[k] = zeta_of_psi[k + 1] - dpsi * 0.5 * (1.0 / Ucol[k] + 1.0 / Ucol[k + 1]);
        }
        // monotone linear interpolation of U onto the zeta grid
        for (int j = 0; j < nz; ++j) {
            double zt = zeta_grid->nodes[j];
            double val;
            if (zt <= zeta_of_psi[0]) {
                val = vm.A;
            } else if (zt >= 0.0) {
                val = Ucol[m - 1];
            } else {
                auto it = std::lower_bound(zeta_of_psi.begin(), zeta_of_psi.end(), zt);
                int k1 = static_cast<int>(it - zeta_of_psi.begin());
                int k0 = k1 - 1;
                double t = (zt - zeta_of_psi[k0]) / (zeta_of_psi[k1] - zeta_of_psi[k0]);
                val = (1.0 - t) * Ucol[k0] + t * Ucol[k1];
            }
            rows[j][i] = val - vm.A;
        }
    }
    for (int j = 0; j < nz; ++j) u.set_physical_row(j, rows[j]);
    u.far_field = 0.0;
    return u;
}

// ---------------------------------------------------------------------------
// Boundary lift bump kappa(z) = (z+1)^4 (6z+1) on [-1,0]

double Homogenizer::kappa(double z) {
    if (z <= -1.0 || z > 0.0) return 0.0;
    double t = z + 1.0;
    return t * t * t * t * (6.0 * z + 1.0);
}

double Homogenizer::dkappa(double z) {
    if (z <= -1.0 || z > 0.0) return 0.0;
    double t = z + 1.0;
    return 4.0 * t * t * t * (6.0 * z + 1.0) + 6.0 * t * t * t * t;
}

double Homogenizer::d2kappa(double z) {
    if (z <= -1.0 || z > 0.0) return 0.0;
    double t = z + 1.0;
    return 12.0 * t * t * (6.0 * z + 1.0) + 48.0 * t * t * t;
}

double Homogenizer::kappa_antideriv(double z) {
    if (z > 0.0 || z <= -1.0) return 0.0;
    double t = z + 1.0;
    auto F = [](double s) { return s * s * s * s * s * (s - 5.0 / 6.0); };
    return F(t) - F(1.0);
}

// ---------------------------------------------------------------------------
// Layer utilities

namespace {

bool far_is_left(const Grid1D& g) { return g.kind == GridKind::HalfLineUpperZeta; }

double far_tail_max(const LayerField& f, double frac) {
    const Grid1D& g = f.grid();
    int n = g.size();
    int w = std::max(2, static_cast<int>(n * frac));
    double m = 0.0;
    for (int b = 0; b < f.nx(); ++b) {
        auto mo = f.mode(b);
        for (int k = 0; k < w; ++k) {
            int idx = far_is_left(g) ? k : n - 1 - k;
            m = std::max(m, std::abs(mo[idx]));
        }
    }
    return m;
}

}  // namespace

double weighted_tail(const LayerField& f) {
    const Grid1D& g = f.grid();
    double m = 0.0;
    for (int b = 0; b < f.nx(); ++b) {
        auto mo = f.mode(b);
        for (int k = 0; k < g.size(); ++k) {
            double c = g.nodes[k];
            m = std::max(m, c * c * std::abs(mo[k]));
        }
    }
    return m;
}

LayerField v_from_continuity(const LayerField& u_layer) {
    const Grid1D& g = u_layer.grid();
    if (far_tail_max(u_layer, 0.05) > 1e-6 * (1.0 + u_layer.max_abs()))
        throw std::invalid_argument("v_from_continuity: u-layer does not decay at the far end");
    LayerField v(u_layer.grid_ptr(), u_layer.nx(), "v_" + u_layer.name, u_layer.eps3 + 3);
    for (int b = 0; b < u_layer.nx(); ++b) {
        int n = wavenumber(b, u_layer.nx());
        cplx ik = (b == u_layer.nx() / 2) ? cplx{0.0, 0.0} : cplx{0.0, static_cast<double>(n)};
        auto mu = u_layer.mode(b);
        std::vector<cplx> integ;
        if (far_is_left(g))
            integ = cumtrapz_from_left(g, std::span<const cplx>(mu.data(), mu.size()));
        else
            integ = cumtrapz_from_right(g, std::span<const cplx>(mu.data(), mu.size()));
        auto mv = v.mode(b);
        for (int k = 0; k < g.size(); ++k) mv[k] = -ik * integ[k];
    }
    v.far_field = 0.0;
    return v;
}

double extract_far_constant(LayerField& u_layer, double plateau_tol) {
    const Grid1D& g = u_layer.grid();
    int n = g.size();
    int w = std::max(3, n / 10);
    auto m0 = u_layer.mode(0);
    double lo = 1e300, hi = -1e300, mean = 0.0;
    for (int k = 0; k < w; ++k) {
        int idx = far_is_left(g) ? k : n - 1 - k;
        double v = m0[idx].real();
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        mean += v;
    }
    mean /= w;
    double scale = 1.0 + u_layer.max_abs();
    if (hi - lo > plateau_tol * scale)
        throw std::runtime_error("extract_far_constant: no plateau at the far end (grid too short)");
    for (int k = 0; k < n; ++k) m0[k] -= mean;
    u_layer.far_field = 0.0;
    return mean;
}

LayerField upper_pressure(const LayerField& g_layer) {
    const Grid1D& g = g_layer.grid();
    if (far_tail_max(g_layer, 0.05) > 1e-6 * (1.0 + g_layer.max_abs()))
        throw std::invalid_argument("upper_pressure: g does not decay at the far end");
    LayerField p(g_layer.grid_ptr(), g_layer.nx(), "p_layer", g_layer.eps3);
    for (int b = 0; b < g_layer.nx(); ++b) {
        auto mg = g_layer.mode(b);
        auto integ = far_is_left(g) ? cumtrapz_from_left(g, std::span<const cplx>(mg.data(), mg.size()))
                                    : cumtrapz_from_right(g, std::span<const cplx>(mg.data(), mg.size()));
        auto mp = p.mode(b);
        std::copy(integ.begin(), integ.end(), mp.begin());
    }
    p.far_field = 0.0;
    return p;
}

// ---------------------------------------------------------------------------
// Linearized upper-layer solve

LayerField apply_upper_linear_operator(const UpperLinearBackground& bg, const LayerField& u) {
    const Grid1D& g = u.grid();
    int nx = u.nx(), nn = g.size();
    LayerField ux = ddx(u);
    LayerField uz = u, uzz = u;
    LayerField u0x = ddx(*bg.u0);
    LayerField u0z = *bg.u0;
    for (int b = 0; b < nx; ++b) {
        auto span_of = [](std::span<cplx> m) { return std::span<const cplx>(m.data(), m.size()); };
        auto mz = uz.mode(b);
        auto d1 = apply_d1(g, span_of(mz));
        std::copy(d1.begin(), d1.end(), mz.begin());
        auto mzz = uzz.mode(b);
        auto d2 = apply_d2(g, span_of(mzz));
        std::copy(d2.begin(), d2.end(), mzz.begin());
        auto m0z = u0z.mode(b);
        auto d0 = apply_d1(g, span_of(m0z));
        std::copy(d0.begin(), d0.end(), m0z.begin());
    }
    // v[u] = -int_0^zeta du/dx (wall-pinned)
    LayerField vu(u.grid_ptr(), nx);
    for (int b = 0; b < nx; ++b) {
        auto mx = ux.mode(b);
        auto integ = cumtrapz_from_right(g, std::span<const cplx>(mx.data(), mx.size()));
        auto mv = vu.mode(b);
        for (int k = 0; k < nn; ++k) mv[k] = -integ[k];
    }

    LayerField out(u.grid_ptr(), nx, "L[u]", u.eps3);
    std::vector<double> row(nx);
    for (int k = 0; k < nn; ++k) {
        auto u0r = bg.u0->physical_row(k);
        auto du0x = u0x.physical_row(k);
        auto du0z = u0z.physical_row(k);
        auto vbr = bg.vbar->physical_row(k);
        auto uxr = ux.physical_row(k);
        auto uzr = uz.physical_row(k);
        auto uzzr = uzz.physical_row(k);
        auto ur = u.physical_row(k);
        auto vur = vu.physical_row(k);
        for (int i = 0; i < nx; ++i)
            row[i] = (bg.A + u0r[i]) * uxr[i] + ur[i] * du0x[i] + vbr[i] * uzr[i] + vur[i] * du0z[i] - uzzr[i];
        out.set_physical_row(k, row);
    }
    return out;
}

UpperLinearResult solve_upper_linear_bl(const UpperLinearBackground& bg, const LayerField& rhs, double tol,
                                        int max_iter) {
    const Grid1D& g = rhs.grid();
    int nx = rhs.nx(), nn = g.size();
    double h2 = g.h() * g.h();

    // precompute background rows
    LayerField u0x = ddx(*bg.u0);
    LayerField u0z = *bg.u0;
    for (int b = 0; b < nx; ++b) {
        auto m = u0z.mode(b);
        auto d = apply_d1(g, std::span<const cplx>(m.data(), m.size()));
        std::copy(d.begin(), d.end(), m.begin());
    }
    std::vector<std::vector<double>> u0r(nn), u0xr(nn), u0zr(nn), vbr(nn);
    for (int k = 0; k < nn; ++k) {
        u0r[k] = bg.u0->physical_row(k);
        u0xr[k] = u0x.physical_row(k);
        u0zr[k] = u0z.physical_row(k);
        vbr[k] = bg.vbar->physical_row(k);
    }

    UpperLinearResult res;
    res.u = LayerField(rhs.grid_ptr(), nx, "upper_linear", rhs.eps3);
    LayerField& u = res.u;

    double prev_defect = 1e300;
    int grow = 0;
    for (int it = 0; it < max_iter; ++it) {
        // N[u] in x space
        LayerField ux = ddx(u);
        LayerField uz = u;
        for (int b = 0; b < nx; ++b) {
            auto m = uz.mode(b);
            auto d = apply_d1(g, std::span<const cplx>(m.data(), m.size()));
            std::copy(d.begin(), d.end(), m.begin());
        }
        LayerField vu(u.grid_ptr(), nx);
        for (int b = 0; b < nx; ++b) {
            auto mx = ux.mode(b);
            auto integ = cumtrapz_from_right(g, std::span<const cplx>(mx.data(), mx.size()));
            auto mv = vu.mode(b);
            for (int k = 0; k < nn; ++k) mv[k] = -integ[k];
        }
        LayerField rhs_eff(rhs.grid_ptr(), nx);
        std::vector<double> row(nx);
        for (int k = 0; k < nn; ++k) {
            auto uxr = ux.physical_row(k);
            auto uzr = uz.physical_row(k);
            auto ur = u.physical_row(k);
            auto vur = vu.physical_row(k);
            auto fr = rhs.physical_row(k);
            for (int i = 0; i < nx; ++i)
                row[i] = fr[i] - (u0r[k][i] * uxr[i] + ur[i] * u0xr[k][i] + vbr[k][i] * uzr[i] + vur[i] * u0zr[k][i]);
            rhs_eff.set_physical_row(k, row);
        }
        // per-mode solve of A dx u - dzeta^2 u = rhs_eff
        LayerField u_new(rhs.grid_ptr(), nx, "upper_linear", rhs.eps3);
        for (int b = 0; b < nx; ++b) {
            int n = wavenumber(b, nx);
            cplx ikA = (b == nx / 2) ? cplx{0.0, 0.0} : cplx{0.0, bg.A * n};
            std::vector<cplx> lo(nn, 0.0), di(nn, 0.0), up(nn, 0.0), r(nn, 0.0);
            auto mr = rhs_eff.mode(b);
            // far end (index 0): ghost Neumann du/dzeta = 0
            di[0] = ikA + 2.0 / h2;
            up[0] = -2.0 / h2;
            r[0] = mr[0];
            for (int k = 1; k < nn - 1; ++k) {
                lo[k] = -1.0 / h2;
                di[k] = ikA + 2.0 / h2;
                up[k] = -1.0 / h2;
                r[k] = mr[k];
            }
            di[nn - 1] = 1.0;  // wall Dirichlet 0
            r[nn - 1] = 0.0;
            auto sol = solve_tridiag(std::move(lo), std::move(di), std::move(up), std::move(r));
            auto mu = u_new.mode(b);
            std::copy(sol.begin(), sol.end(), mu.begin());
        }
        double defect = 0.0;
        for (int b = 0; b < nx; ++b) {
            auto a = u.mode(b);
            auto bnew = u_new.mode(b);
            for (int k = 0; k < nn; ++k) defect = std::max(defect, std::abs(a[k] - bnew[k]));
        }
        u = std::move(u_new);
        res.defect_history.push_back(defect);
        res.iterations = it + 1;
        if (defect < tol) {
            res.converged = true;
            break;
        }
        if (defect > prev_defect * 1.001) {
            if (++grow >= 3) throw std::runtime_error("solve_upper_linear_bl: fixed point diverges");
        } else {
            grow = 0;
        }
        prev_defect = defect;
    }
    if (!res.converged) throw std::runtime_error("solve_upper_linear_bl: fixed point stagnated");
    return res;
}

}  // namespace vvlab
