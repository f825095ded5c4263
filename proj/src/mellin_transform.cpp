#include "mellin/mellin_transform.hpp"

#include "mellin/error.hpp"
#include "mellin/summation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

namespace mellin {

namespace {

constexpr double kFirstWidth = 8.0;
constexpr double kLastWidth = 16384.0;

struct Axis {
    double abscissa;
    double step;
    int first;  // first node index integrated
    int count;  // nodes integrated
    int nodes;

    double node(int i) const { return -0.5 * step * nodes + step * (i + 0.5); }
};

std::vector<Axis> make_axes(const ContourSpec& c) {
    const std::size_t n = c.abscissa.size();
    std::vector<Axis> axes(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double h = 2.0 * c.half_width[j] / c.nodes[j];
        axes[j] = Axis{c.abscissa[j], h, 0, c.nodes[j], c.nodes[j]};
    }
    if (c.exploit_symmetry) {
        axes.back().first = c.nodes.back() / 2;
        axes.back().count = c.nodes.back() / 2;
    }
    return axes;
}

bool equal_steps(const ContourSpec& c) {
    const double h0 = 2.0 * c.half_width[0] / c.nodes[0];
    for (std::size_t j = 1; j < c.nodes.size(); ++j) {
        const double h = 2.0 * c.half_width[j] / c.nodes[j];
        if (std::abs(h - h0) > 1e-12 * h0) return false;
    }
    return true;
}

std::vector<cplx> convolve(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    // Split real/imaginary parts: keeps the inner loop free of the
    // NaN-recovery path of std::complex multiplication.
    const std::size_t na = a.size(), nb = b.size();
    std::vector<double> br(nb), bi(nb), outr(na + nb - 1, 0.0), outi(na + nb - 1, 0.0);
    for (std::size_t k = 0; k < nb; ++k) {
        br[k] = b[k].real();
        bi[k] = b[k].imag();
    }
    for (std::size_t i = 0; i < na; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        if (ar == 0.0 && ai == 0.0) continue;
        double* or_ = outr.data() + i;
        double* oi = outi.data() + i;
        for (std::size_t k = 0; k < nb; ++k) {
            or_[k] += ar * br[k] - ai * bi[k];
            oi[k] += ar * bi[k] + ai * br[k];
        }
    }
    std::vector<cplx> out(na + nb - 1);
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = {outr[m], outi[m]};
    return out;
}

// Full (unfolded) lattice sum for a factorized transform at one point.
cplx factorized_sum(const MellinFunction& f, const ContourSpec& c, std::span<const double> x) {
    const std::size_t n = c.nodes.size();
    const SumFactorization& fac = *f.factorization;
    const double h = 2.0 * c.half_width[0] / c.nodes[0];
    double a_sum = 0.0;
    int total_nodes = 0;
    for (std::size_t j = 0; j < n; ++j) {
        a_sum += c.abscissa[j];
        total_nodes += c.nodes[j];
    }
    CompensatedSum<cplx> total;
    for (double sign : {1.0, -1.0}) {
        std::vector<cplx> conv;
        for (std::size_t j = 0; j < n; ++j) {
            const double lx = std::log(x[j]);
            std::vector<cplx> factor(static_cast<std::size_t>(c.nodes[j]));
            for (int i = 0; i < c.nodes[j]; ++i) {
                const double b = -0.5 * h * c.nodes[j] + h * (i + 0.5);
                const cplx w(c.abscissa[j], b);
                const cplx lv = fac.log_factor(j, w) - w * lx + sign * fac.tilt * b;
                factor[static_cast<std::size_t>(i)] = lv.real() < -745.0 ? cplx{} : std::exp(lv);
            }
            conv = j == 0 ? std::move(factor) : convolve(conv, factor);
        }
        for (std::size_t m = 0; m < conv.size(); ++m) {
            const double b = h * (double(m) + 0.5 * double(n)) - 0.5 * h * total_nodes;
            if ((sign > 0.0) != (b >= 0.0) || conv[m] == cplx{}) continue;
            const cplx z(a_sum, b);
            total += conv[m] * std::exp(fac.log_coupling(z) - sign * fac.tilt * b);
        }
    }
    return total.value();
}

}  // namespace

void validate_contour(const ContourSpec& contour, std::span<const Strip> strip) {
    const std::size_t n = strip.size();
    if (n == 0 || n > kMaxDimension) {
        fail(ErrorCode::UnsupportedDimension,
             "inverse Mellin transform supports 1 to 3 dimensions, got " + std::to_string(n));
    }
    if (contour.abscissa.size() != n || contour.half_width.size() != n || contour.nodes.size() != n) {
        fail(ErrorCode::InvalidArgument, "contour specification has the wrong dimension");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!strip[j].contains(contour.abscissa[j])) {
            fail(ErrorCode::StripViolation,
                 "contour abscissa " + std::to_string(contour.abscissa[j]) + " in dimension " +
                     std::to_string(j) + " lies outside the fundamental strip (" +
                     std::to_string(strip[j].lo) + ", " + std::to_string(strip[j].hi) + ")");
        }
        if (!(contour.half_width[j] > 0.0) || !std::isfinite(contour.half_width[j])) {
            fail(ErrorCode::InvalidArgument, "contour half-width must be > 0");
        }
        if (contour.nodes[j] < 16 || contour.nodes[j] % 2 != 0) {
            fail(ErrorCode::InvalidArgument, "contour node counts must be even and >= 16");
        }
    }
    if (contour.threads < 1) {
        fail(ErrorCode::InvalidArgument, "thread count must be >= 1");
    }
}

std::vector<double> choose_truncation(const MellinFunction& f,
                                      std::span<const double> abscissa,
                                      double tol) {
    const std::size_t n = f.dimension();
    if (abscissa.size() != n) {
        fail(ErrorCode::InvalidArgument, "choose_truncation: abscissa has the wrong dimension");
    }
    if (!(tol > 0.0 && tol < 1.0)) {
        fail(ErrorCode::InvalidArgument, "choose_truncation: tol must lie in (0, 1)");
    }
    std::vector<cplx> w(abscissa.begin(), abscissa.end());
    const double centre = std::abs(f(w));
    if (!(centre > 0.0) || !std::isfinite(centre)) {
        fail(ErrorCode::NonDecaying, "choose_truncation: transform vanishes or is not finite on the real axis");
    }
    std::vector<double> widths(n);
    for (std::size_t j = 0; j < n; ++j) {
        double width = kFirstWidth;
        for (;; width *= 2.0) {
            if (width > kLastWidth) {
                fail(ErrorCode::NonDecaying,
                     "no decay detected up to |Im w| = 16384 in dimension " + std::to_string(j) +
                         " (mis-specified strip or zero time to maturity?)");
            }
            double mag = 0.0;
            for (double sign : {1.0, -1.0}) {
                std::vector<cplx> probe = w;
                probe[j] += cplx(0.0, sign * width);
                mag = std::max(mag, std::abs(f(probe)));
            }
            if (mag < tol * centre) break;
        }
        widths[j] = width;
    }
    return widths;
}

ContourSpec resolve_contour(const MellinFunction& f, ContourSpec contour) {
    const std::size_t n = f.dimension();
    if (n == 0 || n > kMaxDimension) {
        fail(ErrorCode::UnsupportedDimension,
             "inverse Mellin transform supports 1 to 3 dimensions, got " + std::to_string(n));
    }
    if (contour.abscissa.size() == 1 && n > 1) {
        contour.abscissa.assign(n, contour.abscissa[0]);
    }
    if (contour.abscissa.size() != n) {
        fail(ErrorCode::InvalidArgument, "contour abscissa has the wrong dimension");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!f.strip[j].contains(contour.abscissa[j])) {
            fail(ErrorCode::StripViolation,
                 "contour abscissa " + std::to_string(contour.abscissa[j]) +
                     " lies outside the fundamental strip in dimension " + std::to_string(j));
        }
    }
    if (contour.half_width.empty()) {
        contour.half_width = choose_truncation(f, contour.abscissa, contour.truncation_tol);
    } else if (contour.half_width.size() == 1 && n > 1) {
        contour.half_width.assign(n, contour.half_width[0]);
    }
    if (contour.nodes.empty()) {
        if (!(contour.step > 0.0)) {
            fail(ErrorCode::InvalidArgument, "contour step must be > 0");
        }
        contour.nodes.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const int half = static_cast<int>(std::ceil(contour.half_width[j] / contour.step - 1e-9));
            contour.nodes[j] = std::max(16, 2 * half);
        }
    } else if (contour.nodes.size() == 1 && n > 1) {
        contour.nodes.assign(n, contour.nodes[0]);
    }
    validate_contour(contour, f.strip);
    return contour;
}

std::vector<InversionResult> inverse_mellin(const MellinFunction& f,
                                            const ContourSpec& spec,
                                            const std::vector<std::vector<double>>& points) {
    const ContourSpec contour = resolve_contour(f, spec);
    const std::size_t n = f.dimension();
    for (const auto& x : points) {
        if (x.size() != n) {
            fail(ErrorCode::InvalidArgument, "inverse_mellin: evaluation point has the wrong dimension");
        }
        for (double xj : x) {
            if (!(xj > 0.0) || !std::isfinite(xj)) {
                fail(ErrorCode::InvalidArgument, "inverse_mellin: evaluation point must be positive");
            }
        }
    }
    const std::size_t npts = points.size();
    if (f.factorization && !f.factorization->log_cross && n > 1 && equal_steps(contour)) {
        double scale = 1.0;
        for (std::size_t j = 0; j < n; ++j) scale *= (2.0 * contour.half_width[j] / contour.nodes[j]) / (2.0 * std::numbers::pi);
        std::vector<InversionResult> results(npts);
        auto work = [&](std::size_t begin, std::size_t end) {
            for (std::size_t p = begin; p < end; ++p) {
                const cplx sum = factorized_sum(f, contour, points[p]) * scale;
                InversionResult& res = results[p];
                res.value = sum.real();
                res.diagnostics.nodes = contour.nodes;
                res.diagnostics.half_width = contour.half_width;
                res.diagnostics.imaginary_residue = std::abs(sum.imag());
                res.diagnostics.accuracy_warning =
                    res.diagnostics.imaginary_residue > 1e-8 * (1.0 + std::abs(res.value));
            }
        };
        const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(contour.threads), npts);
        if (threads <= 1) {
            work(0, npts);
        } else {
            std::vector<std::thread> pool;
            const std::size_t chunk = (npts + threads - 1) / threads;
            for (std::size_t t = 0; t < threads; ++t) {
                const std::size_t b = t * chunk, e = std::min(npts, b + chunk);
                if (b < e) pool.emplace_back(work, b, e);
            }
            for (auto& th : pool) th.join();
        }
        return results;
    }
    const auto axes = make_axes(contour);

    // x_j^{-w_j} per point, dimension and node.
    std::vector<std::vector<std::vector<cplx>>> powers(npts, std::vector<std::vector<cplx>>(n));
    for (std::size_t p = 0; p < npts; ++p) {
        for (std::size_t j = 0; j < n; ++j) {
            const double lx = std::log(points[p][j]);
            auto& row = powers[p][j];
            row.resize(static_cast<std::size_t>(axes[j].nodes));
            for (int i = axes[j].first; i < axes[j].first + axes[j].count; ++i) {
                const cplx w(axes[j].abscissa, axes[j].node(i));
                row[static_cast<std::size_t>(i)] = std::exp(-w * lx);
            }
        }
    }

    // With a factorization the separable parts are tabulated per node and,
    // for equal steps, the coupling per hyperplane sum_j i_j.
    const SumFactorization* fac = f.factorization ? &*f.factorization : nullptr;
    std::vector<std::vector<cplx>> log_axis(n);
    std::vector<cplx> log_plane;
    const bool plane_table = fac && equal_steps(contour);
    cplx plane_base{};
    if (fac) {
        for (std::size_t j = 0; j < n; ++j) {
            log_axis[j].resize(static_cast<std::size_t>(axes[j].nodes));
            for (int i = axes[j].first; i < axes[j].first + axes[j].count; ++i) {
                log_axis[j][static_cast<std::size_t>(i)] = fac->log_factor(j, cplx(axes[j].abscissa, axes[j].node(i)));
            }
        }
        if (plane_table) {
            int total = 0;
            double a_sum = 0.0;
            for (const auto& a : axes) {
                total += a.nodes;
                a_sum += a.abscissa;
            }
            const double h = axes[0].step;
            plane_base = cplx(a_sum, 0.5 * h * (double(n) - total));
            log_plane.resize(static_cast<std::size_t>(total));
            for (int k = 0; k < total; ++k) log_plane[static_cast<std::size_t>(k)] = fac->log_coupling(plane_base + cplx(0.0, h * k));
        }
    }
    auto value_at = [&](std::span<const cplx> w, const int* idx) {
        if (!fac) return f(w);
        cplx lv{};
        int k = 0;
        cplx z{};
        for (std::size_t j = 0; j < n; ++j) {
            lv += log_axis[j][static_cast<std::size_t>(idx[j])];
            k += idx[j];
            z += w[j];
        }
        lv += plane_table ? log_plane[static_cast<std::size_t>(k)] : fac->log_coupling(z);
        if (fac->log_cross) lv += fac->log_cross(w);
        return lv.real() < -745.0 ? cplx{} : std::exp(lv);
    };

    const Axis& outer = axes[0];
    // Partial sums per outer node, reduced in fixed order afterwards so the
    // result does not depend on the thread count.
    std::vector<std::vector<cplx>> row_sums(npts, std::vector<cplx>(static_cast<std::size_t>(outer.count)));

    auto work = [&](int row_begin, int row_end) {
        std::vector<cplx> w(n);
        std::vector<cplx> acc(npts);
        int idx[3] = {0, 0, 0};
        for (int r = row_begin; r < row_end; ++r) {
            const int i0 = outer.first + r;
            idx[0] = i0;
            w[0] = cplx(outer.abscissa, outer.node(i0));
            std::fill(acc.begin(), acc.end(), cplx{});
            if (n == 1) {
                const cplx value = value_at(w, idx);
                for (std::size_t p = 0; p < npts; ++p) acc[p] = value * powers[p][0][i0];
            } else if (n == 2) {
                for (int i1 = axes[1].first; i1 < axes[1].first + axes[1].count; ++i1) {
                    idx[1] = i1;
                    w[1] = cplx(axes[1].abscissa, axes[1].node(i1));
                    const cplx value = value_at(w, idx);
                    for (std::size_t p = 0; p < npts; ++p) acc[p] += value * powers[p][1][i1];
                }
                for (std::size_t p = 0; p < npts; ++p) acc[p] *= powers[p][0][i0];
            } else {
                for (int i1 = axes[1].first; i1 < axes[1].first + axes[1].count; ++i1) {
                    idx[1] = i1;
                    w[1] = cplx(axes[1].abscissa, axes[1].node(i1));
                    for (int i2 = axes[2].first; i2 < axes[2].first + axes[2].count; ++i2) {
                        idx[2] = i2;
                        w[2] = cplx(axes[2].abscissa, axes[2].node(i2));
                        const cplx value = value_at(w, idx);
                        for (std::size_t p = 0; p < npts; ++p) {
                            acc[p] += value * powers[p][1][i1] * powers[p][2][i2];
                        }
                    }
                }
                for (std::size_t p = 0; p < npts; ++p) acc[p] *= powers[p][0][i0];
            }
            for (std::size_t p = 0; p < npts; ++p) row_sums[p][static_cast<std::size_t>(r)] = acc[p];
        }
    };

    const int threads = std::min(contour.threads, outer.count);
    if (threads <= 1) {
        work(0, outer.count);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (outer.count + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int b = t * chunk;
            const int e = std::min(outer.count, b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }

    double scale = 1.0;
    for (const auto& a : axes) scale *= a.step / (2.0 * std::numbers::pi);

    std::vector<InversionResult> results(npts);
    for (std::size_t p = 0; p < npts; ++p) {
        CompensatedSum<cplx> total;
        for (const cplx& v : row_sums[p]) total += v;
        const cplx sum = total.value() * scale;
        InversionResult& res = results[p];
        res.diagnostics.nodes = contour.nodes;
        res.diagnostics.half_width = contour.half_width;
        if (contour.exploit_symmetry) {
            res.value = 2.0 * sum.real();
            res.diagnostics.imaginary_residue = 0.0;
        } else {
            res.value = sum.real();
            res.diagnostics.imaginary_residue = std::abs(sum.imag());
            res.diagnostics.accuracy_warning =
                res.diagnostics.imaginary_residue > 1e-8 * (1.0 + std::abs(res.value));
        }
    }
    return results;
}

InversionResult inverse_mellin(const MellinFunction& f,
                               const ContourSpec& contour,
                               std::span<const double> x) {
    std::vector<std::vector<double>> points{std::vector<double>(x.begin(), x.end())};
    return inverse_mellin(f, contour, points).front();
}

}  // namespace mellin
