#include "vvlab/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace vvlab {

double ProblemSpec::f_at(double x) const {
    double s = 0.0;
    for (const auto& c : f) s += c.cos_coeff * std::cos(c.n * x) + c.sin_coeff * std::sin(c.n * x);
    return s;
}

std::vector<double> ProblemSpec::f_samples(int nx) const {
    std::vector<double> r(nx);
    for (int i = 0; i < nx; ++i) r[i] = f_at(two_pi * i / nx);
    return r;
}

std::vector<double> ProblemSpec::wall_samples(int nx) const {
    std::vector<double> r(nx);
    for (int i = 0; i < nx; ++i) r[i] = wall_at(two_pi * i / nx);
    return r;
}

int ProblemSpec::max_mode() const {
    int m = 0;
    for (const auto& c : f)
        if (c.n > m) m = c.n;
    return m;
}

BatchelorConstants batchelor_constant(double alpha, double delta, const std::vector<FourierCoeff>& f, int nx_quad) {
    if (!(alpha > 0.0)) throw std::invalid_argument("batchelor_constant: alpha must be positive");
    if (delta < 0.0) throw std::invalid_argument("batchelor_constant: delta must be nonnegative");
    ProblemSpec s;
    s.alpha = alpha;
    s.delta = delta;
    s.f = f;
    auto wall = s.wall_samples(nx_quad);
    double mean_sq = 0.0;
    for (double w : wall) {
        if (!(w > 0.0)) throw std::invalid_argument("batchelor_constant: wall data alpha + delta f must stay positive");
        mean_sq += w * w;
    }
    mean_sq /= nx_quad;
    return {std::sqrt(mean_sq), 0.0};
}

}  // namespace vvlab
