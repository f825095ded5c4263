#include "mellin/pide.hpp"

#include "mellin/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace mellin {

namespace {

constexpr int kQuadratureOrder = 32;

void golub_welsch(const Eigen::VectorXd& diag,
                  const Eigen::VectorXd& off,
                  double mu0,
                  std::vector<double>& nodes,
                  std::vector<double>& weights) {
    const Eigen::Index n = diag.size();
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        j(i, i) = diag(i);
        if (i + 1 < n) j(i, i + 1) = j(i + 1, i) = off(i);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    nodes.resize(static_cast<std::size_t>(n));
    weights.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        nodes[i] = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        weights[i] = mu0 * v * v;
    }
}

// Linear interpolation along a sorted axis, extrapolating from the end cells.
double interp(const std::vector<double>& axis, const std::vector<double>& values, double x) {
    const std::size_t n = axis.size();
    std::size_t i;
    if (x <= axis.front()) {
        i = 0;
    } else if (x >= axis.back()) {
        i = n - 2;
    } else {
        i = static_cast<std::size_t>(std::upper_bound(axis.begin(), axis.end(), x) - axis.begin()) - 1;
    }
    const double t = (x - axis[i]) / (axis[i + 1] - axis[i]);
    return values[i] + t * (values[i + 1] - values[i]);
}

struct JumpNodes {
    std::vector<double> y;
    std::vector<double> p;
    double intensity = 0.0;
};

JumpNodes jump_nodes(const JumpSpec& spec) {
    JumpNodes out;
    if (const auto* m = std::get_if<MertonJumps>(&spec)) {
        if (m->intensity == 0.0) return out;
        std::vector<double> z;
        gauss_hermite_probabilists(kQuadratureOrder, z, out.p);
        out.y.resize(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) out.y[i] = m->mean + m->stddev * z[i];
        out.intensity = m->intensity;
    } else if (const auto* k = std::get_if<KouJumps>(&spec)) {
        if (k->intensity == 0.0) return out;
        std::vector<double> x, w;
        gauss_laguerre(kQuadratureOrder, x, w);
        for (std::size_t i = 0; i < x.size(); ++i) {
            out.y.push_back(x[i] / k->up_rate);
            out.p.push_back(k->up_prob * w[i]);
            out.y.push_back(-x[i] / k->down_rate);
            out.p.push_back((1.0 - k->up_prob) * w[i]);
        }
        out.intensity = k->intensity;
    }
    return out;
}

}  // namespace

void gauss_hermite_probabilists(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd off(std::max(order - 1, 0));
    for (int k = 1; k < order; ++k) off(k - 1) = std::sqrt(double(k));
    golub_welsch(diag, off, 1.0, nodes, weights);
}

void gauss_laguerre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    Eigen::VectorXd diag(order);
    Eigen::VectorXd off(std::max(order - 1, 0));
    for (int k = 0; k < order; ++k) diag(k) = 2.0 * k + 1.0;
    for (int k = 1; k < order; ++k) off(k - 1) = double(k);
    golub_welsch(diag, off, 1.0, nodes, weights);
}

std::size_t PriceGrid::size() const noexcept {
    std::size_t s = 1;
    for (const auto& a : axes) s *= a.size();
    return s;
}

double PriceGrid::at(int layer, std::span<const std::size_t> index) const {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < axes.size(); ++d) flat = flat * axes[d].size() + index[d];
    return values[static_cast<std::size_t>(layer)][flat];
}

std::vector<double> uniform_axis(double lo, double hi, double h) {
    if (!(h > 0.0) || !(hi > lo)) fail(ErrorCode::InvalidArgument, "uniform_axis: need h > 0 and hi > lo");
    const auto count = static_cast<std::size_t>(std::llround((hi - lo) / h)) + 1;
    std::vector<double> axis(count);
    for (std::size_t i = 0; i < count; ++i) axis[i] = lo + h * double(i);
    return axis;
}

PriceGrid sample_grid(std::vector<std::vector<double>> axes,
                      double t,
                      double dt,
                      const std::function<double(std::span<const double>, double)>& v) {
    PriceGrid g;
    g.axes = std::move(axes);
    g.t = t;
    g.dt = dt;
    const std::size_t n = g.axes.size();
    if (n == 0 || n > 2) fail(ErrorCode::UnsupportedDimension, "PIDE grids support 1 or 2 assets");
    const std::size_t total = g.size();
    std::vector<double> s(n);
    for (int layer = 0; layer < 3; ++layer) {
        const double time = t + (layer - 1) * dt;
        auto& out = g.values[static_cast<std::size_t>(layer)];
        out.resize(total);
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::size_t rest = flat;
            for (std::size_t d = n; d-- > 0;) {
                s[d] = g.axes[d][rest % g.axes[d].size()];
                rest /= g.axes[d].size();
            }
            out[flat] = v(s, time);
        }
    }
    return g;
}

double ResidualField::max_abs() const {
    double m = 0.0;
    for (double r : residual) m = std::max(m, std::abs(r));
    return m;
}

namespace {

// True when the four spacings around a[i] agree to rounding.
bool uniform_run(const std::vector<double>& a, std::size_t i) {
    const double h = a[i + 1] - a[i];
    for (std::size_t k = i - 1; k <= i + 1; ++k) {
        if (std::abs((a[k + 1] - a[k]) - h) > 1e-9 * h) return false;
    }
    return true;
}

}  // namespace

ResidualField pide_residual(const OptionSpec& spec, const LevyModel& model, const PriceGrid& grid) {
    const std::size_t n = grid.dimension();
    if (n == 0 || n > 2) fail(ErrorCode::UnsupportedDimension, "pide_residual supports 1 or 2 assets");
    if (model.dimension() != n) fail(ErrorCode::InvalidArgument, "pide_residual: model dimension mismatch");
    if (!(grid.dt > 0.0)) fail(ErrorCode::InvalidArgument, "pide_residual: dt must be > 0");
    for (std::size_t d = 0; d < n; ++d) {
        const auto& a = grid.axes[d];
        if (a.size() < 3) fail(ErrorCode::InvalidArgument, "pide_residual: each axis needs >= 3 nodes");
        for (std::size_t i = 1; i + 1 < a.size(); ++i) {
            const double h = std::max(a[i] - a[i - 1], a[i + 1] - a[i]);
            if (!(a[i] > 0.0) || !(a[i] > a[i - 1])) {
                fail(ErrorCode::InvalidArgument, "pide_residual: axes must be positive and increasing");
            }
            if (h > a[i] / 10.0) {
                fail(ErrorCode::InvalidArgument, "pide_residual: grid too coarse (h > S/10 at S = " +
                                                     std::to_string(a[i]) + ")");
            }
        }
    }
    for (const auto& layer : grid.values) {
        if (layer.size() != grid.size()) fail(ErrorCode::InvalidArgument, "pide_residual: value layer size mismatch");
    }

    const double r = spec.rate;
    const auto& tri = model.triplet();
    const Eigen::MatrixXd& cov = model.covariance();
    std::vector<double> drift(n);
    std::vector<JumpNodes> jumps(n);
    for (std::size_t i = 0; i < n; ++i) {
        const JumpSpec js = i < tri.jumps.size() ? tri.jumps[i] : JumpSpec{NoJumps{}};
        drift[i] = r + tri.drift[i] + 0.5 * cov(i, i) + jump_compensator(js);
        jumps[i] = jump_nodes(js);
    }

    ResidualField out;
    std::array<std::size_t, 2> idx{};
    std::array<std::size_t, 2> lo{1, 1};
    std::array<std::size_t, 2> hi{grid.axes[0].size() - 1, n > 1 ? grid.axes[1].size() - 1 : 2};
    std::vector<double> line;
    for (idx[0] = lo[0]; idx[0] < hi[0]; ++idx[0]) {
        for (idx[1] = (n > 1 ? lo[1] : 0); idx[1] < (n > 1 ? hi[1] : 1); ++idx[1]) {
            const std::span<const std::size_t> at(idx.data(), n);
            auto value = [&](std::size_t d, int shift, int layer = 1) {
                auto j = idx;
                j[d] = static_cast<std::size_t>(static_cast<long>(j[d]) + shift);
                return grid.at(layer, std::span<const std::size_t>(j.data(), n));
            };
            std::vector<double> s(n);
            for (std::size_t d = 0; d < n; ++d) s[d] = grid.axes[d][idx[d]];
            const double v = grid.at(1, at);

            double res = (grid.at(2, at) - grid.at(0, at)) / (2.0 * grid.dt) - r * v;
            std::vector<double> first(n);
            std::array<bool, 2> wide{};
            for (std::size_t d = 0; d < n; ++d) {
                const auto& a = grid.axes[d];
                const std::size_t i = idx[d];
                const double hm = a[i] - a[i - 1];
                const double hp = a[i + 1] - a[i];
                const double vm = value(d, -1), vp = value(d, +1);
                double second = 0.0;
                wide[d] = i >= 2 && i + 2 < a.size() && uniform_run(a, i);
                if (wide[d]) {
                    // Five-point fourth-order stencils on uniform stretches.
                    const double vmm = value(d, -2), vpp = value(d, +2);
                    first[d] = (vmm - 8.0 * vm + 8.0 * vp - vpp) / (12.0 * hp);
                    second = (-vmm + 16.0 * vm - 30.0 * v + 16.0 * vp - vpp) / (12.0 * hp * hp);
                } else {
                    // Non-uniform three-point formulas (second order on uniform grids).
                    first[d] = (hm * hm * vp - hp * hp * vm + (hp * hp - hm * hm) * v) / (hm * hp * (hm + hp));
                    second = 2.0 * (hm * vp + hp * vm - (hm + hp) * v) / (hm * hp * (hm + hp));
                }
                res += drift[d] * s[d] * first[d] + 0.5 * cov(d, d) * s[d] * s[d] * second;
            }
            if (n == 2) {
                auto corner = [&](int a, int b) {
                    std::array<std::size_t, 2> j{static_cast<std::size_t>(long(idx[0]) + a),
                                                 static_cast<std::size_t>(long(idx[1]) + b)};
                    return grid.at(1, j);
                };
                double cross = 0.0;
                if (wide[0] && wide[1]) {
                    // tensor product of the fourth-order first-derivative stencils
                    constexpr std::array<int, 4> off{-2, -1, 1, 2};
                    constexpr std::array<double, 4> c{1.0, -8.0, 8.0, -1.0};
                    for (std::size_t p = 0; p < 4; ++p) {
                        for (std::size_t q = 0; q < 4; ++q) cross += c[p] * c[q] * corner(off[p], off[q]);
                    }
                    const double h0 = grid.axes[0][idx[0] + 1] - grid.axes[0][idx[0]];
                    const double h1 = grid.axes[1][idx[1] + 1] - grid.axes[1][idx[1]];
                    cross /= 144.0 * h0 * h1;
                } else {
                    const double h0 = grid.axes[0][idx[0] + 1] - grid.axes[0][idx[0] - 1];
                    const double h1 = grid.axes[1][idx[1] + 1] - grid.axes[1][idx[1] - 1];
                    cross = (corner(1, 1) - corner(1, -1) - corner(-1, 1) + corner(-1, -1)) / (h0 * h1);
                }
                res += cov(0, 1) * s[0] * s[1] * cross;
            }
            for (std::size_t d = 0; d < n; ++d) {
                const auto& jn = jumps[d];
                if (jn.intensity == 0.0) continue;
                const auto& a = grid.axes[d];
                line.resize(a.size());
                for (std::size_t m = 0; m < a.size(); ++m) {
                    auto j = idx;
                    j[d] = m;
                    line[m] = grid.at(1, std::span<const std::size_t>(j.data(), n));
                }
                double e = 0.0;
                for (std::size_t q = 0; q < jn.y.size(); ++q) {
                    const double ey = std::exp(jn.y[q]);
                    e += jn.p[q] * (interp(a, line, s[d] * ey) - v - (ey - 1.0) * s[d] * first[d]);
                }
                res += jn.intensity * e;
            }
            out.points.push_back(std::move(s));
            out.residual.push_back(res);
        }
    }
    return out;
}

}  // namespace mellin
