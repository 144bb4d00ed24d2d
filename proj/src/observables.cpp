#include "gpimc/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gpimc {

Histogram::Histogram(int bins, double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (bins < 1) throw std::invalid_argument("histogram: need at least one bin");
    if (!(hi > lo)) throw std::invalid_argument("histogram: hi must exceed lo");
    counts.assign(static_cast<std::size_t>(bins), 0.0);
}

void Histogram::add(double x) {
    n_total += 1.0;
    if (x < lo || x >= hi) return;
    int i = static_cast<int>((x - lo) / bin_width());
    i = std::clamp(i, 0, bins() - 1);
    counts[static_cast<std::size_t>(i)] += 1.0;
    n_in += 1.0;
}

void Histogram::add(std::span<const double> xs) {
    for (double x : xs) add(x);
}

void Histogram::merge(const Histogram& other) {
    if (other.bins() != bins() || other.lo != lo || other.hi != hi)
        throw std::invalid_argument("histogram: merge needs identical binning");
    for (int i = 0; i < bins(); ++i) counts[static_cast<std::size_t>(i)] += other.counts[i];
    n_in += other.n_in;
    n_total += other.n_total;
}

std::vector<double> Histogram::density() const {
    std::vector<double> d(counts.size(), 0.0);
    if (n_in <= 0.0) return d;
    const double norm = 1.0 / (n_in * bin_width());
    for (std::size_t i = 0; i < counts.size(); ++i) d[i] = counts[i] * norm;
    return d;
}

double Histogram::density_error(int i) const {
    if (n_in <= 0.0) return 0.0;
    return std::sqrt(counts[static_cast<std::size_t>(i)]) / (n_in * bin_width());
}

Histogram make_histogram(std::span<const double> xs, int bins, double lo, double hi) {
    Histogram h(bins, lo, hi);
    h.add(xs);
    return h;
}

PooledHistogram pool_histograms(std::span<const Histogram> members) {
    if (members.empty()) throw std::invalid_argument("pool_histograms: no members");
    PooledHistogram out;
    out.pooled = members[0];
    for (std::size_t m = 1; m < members.size(); ++m) out.pooled.merge(members[m]);
    out.ensemble_err.assign(out.pooled.counts.size(), 0.0);
    const std::size_t n = members.size();
    if (n < 2) return out;
    std::vector<std::vector<double>> dens;
    dens.reserve(n);
    for (const Histogram& h : members) dens.push_back(h.density());
    for (std::size_t i = 0; i < out.ensemble_err.size(); ++i) {
        double mean = 0.0;
        for (const auto& d : dens) mean += d[i];
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (const auto& d : dens) ss += (d[i] - mean) * (d[i] - mean);
        out.ensemble_err[i] = std::sqrt(ss / (static_cast<double>(n - 1) * static_cast<double>(n)));
    }
    return out;
}

// --- paths -----------------------------------------------------------------

PathObservables ho_observables(const Configuration& config, const PhysicsModel& model,
                               const QuadratureGrid& grid) {
    if (model.kind != ModelKind::HarmonicOscillator)
        throw std::invalid_argument("ho_observables: needs a particle model");
    if (config.components() != 1)
        throw std::invalid_argument("ho_observables: configuration kind mismatch");
    NodeCache cache(grid, 1);
    cache.build(config);
    PathObservables out;
    out.q_sq_avg = cache.mean_square_value(0);
    out.potential_avg = 0.5 * model.mass * model.omega * model.omega * out.q_sq_avg;
    return out;
}

std::vector<double> sample_path(const Configuration& config, int n_samples) {
    if (config.domain().dims != 1)
        throw std::invalid_argument("sample_path: needs a 1D configuration");
    std::vector<double> out(static_cast<std::size_t>(n_samples));
    const double T = config.domain().extents[0];
    for (int j = 0; j < n_samples; ++j) {
        Point x{};
        x[0] = (j + 0.5) * T / n_samples;
        out[static_cast<std::size_t>(j)] = config.evaluate(0, x);
    }
    return out;
}

Histogram coordinate_histogram(std::span<const Configuration* const> ensemble,
                               int n_samples_per_path, int bins, double range) {
    Histogram h(bins, -range, range);
    for (const Configuration* cfg : ensemble) h.add(sample_path(*cfg, n_samples_per_path));
    return h;
}

// --- gauge fields ------------------------------------------------------------

Su2 Su2::operator*(const Su2& o) const {
    // (a0 + i a.s)(b0 + i b.s) = a0 b0 - a.b + i (a0 b + b0 a - a x b).s
    return Su2{
        a0 * o.a0 - a1 * o.a1 - a2 * o.a2 - a3 * o.a3,
        a0 * o.a1 + o.a0 * a1 - (a2 * o.a3 - a3 * o.a2),
        a0 * o.a2 + o.a0 * a2 - (a3 * o.a1 - a1 * o.a3),
        a0 * o.a3 + o.a0 * a3 - (a1 * o.a2 - a2 * o.a1),
    };
}

Su2 su2_segment(double v1, double v2, double v3) {
    const double theta = std::sqrt(v1 * v1 + v2 * v2 + v3 * v3);
    if (theta == 0.0) return Su2{};
    // sin(theta/2)/theta is finite and smooth; no series needed at this scale
    const double s = std::sin(0.5 * theta) / theta;
    return Su2{std::cos(0.5 * theta), s * v1, s * v2, s * v3};
}

LoopValue wilson_loop(const Configuration& config, const PhysicsModel& model, const Point& corner,
                      int axis_t, int axis_r, double t_extent, double r_extent,
                      double segment_length) {
    if (model.kind == ModelKind::HarmonicOscillator)
        throw std::invalid_argument("wilson_loop: needs a gauge model");
    if (model.components() != config.components())
        throw std::invalid_argument("wilson_loop: model/configuration kind mismatch");
    const PeriodicDomain& dom = config.domain();
    const int dims = dom.dims;
    if (axis_t < 0 || axis_t >= dims || axis_r < 0 || axis_r >= dims || axis_t == axis_r)
        throw std::invalid_argument("wilson_loop: bad plane axes");
    if (!(t_extent > 0.0) || !(r_extent > 0.0) || t_extent >= dom.extents[axis_t] ||
        r_extent >= dom.extents[axis_r])
        throw std::invalid_argument("wilson_loop: rectangle must fit inside the box");
    if (!(segment_length > 0.0)) throw std::invalid_argument("wilson_loop: segment length");

    struct Leg {
        int axis;
        double length;
        double sign;
    };
    const Leg legs[4] = {{axis_t, t_extent, 1.0},
                         {axis_r, r_extent, 1.0},
                         {axis_t, t_extent, -1.0},
                         {axis_r, r_extent, -1.0}};

    const double g = model.coupling;
    const bool su2 = model.kind == ModelKind::GaugeSU2;
    double phi = 0.0;
    Su2 acc;
    Point pos = corner;
    for (const Leg& leg : legs) {
        const int nseg = std::max(1, static_cast<int>(std::ceil(leg.length / segment_length - 1e-12)));
        const double step = leg.sign * leg.length / nseg;
        for (int s = 0; s < nseg; ++s) {
            Point mid = pos;
            mid[leg.axis] += (s + 0.5) * step;
            if (su2) {
                const double v1 = g * step * config.evaluate(0 * dims + leg.axis, mid);
                const double v2 = g * step * config.evaluate(1 * dims + leg.axis, mid);
                const double v3 = g * step * config.evaluate(2 * dims + leg.axis, mid);
                acc = su2_segment(v1, v2, v3) * acc;  // path ordering
            } else {
                phi += g * step * config.evaluate(leg.axis, mid);
            }
        }
        pos[leg.axis] += leg.sign * leg.length;
    }
    if (su2) return LoopValue{acc.half_trace(), 0.0};
    return LoopValue{std::cos(phi), std::sin(phi)};
}

LoopMeans measure_wilson_loops(const Configuration& config, const PhysicsModel& model,
                               const LoopPlan& plan, Xoshiro256pp& rng) {
    const PeriodicDomain& dom = config.domain();
    LoopMeans out;
    out.t_extents = plan.t_extents;
    out.r_extents = plan.r_extents;
    const std::size_t nt = plan.t_extents.size();
    const std::size_t nr = plan.r_extents.size();
    out.re.assign(nt * nr, 0.0);
    out.im.assign(nt * nr, 0.0);
    for (std::size_t it = 0; it < nt; ++it) {
        for (std::size_t ir = 0; ir < nr; ++ir) {
            double sum_re = 0.0, sum_im = 0.0;
            for (int rep = 0; rep < plan.loops_per_pair; ++rep) {
                Point corner{};
                for (int d = 0; d < dom.dims; ++d)
                    corner[d] = rng.uniform_range(0.0, dom.extents[d]);
                const int axis_r = static_cast<int>(rng.uniform_int(3));
                const LoopValue w =
                    wilson_loop(config, model, corner, dom.time_axis(), axis_r,
                                plan.t_extents[it], plan.r_extents[ir], plan.segment_length);
                sum_re += w.re;
                sum_im += w.im;
            }
            out.re[it * nr + ir] = sum_re / plan.loops_per_pair;
            out.im[it * nr + ir] = sum_im / plan.loops_per_pair;
        }
    }
    return out;
}

PotentialResult static_potential(std::span<const LoopMeans> per_path, double t_step) {
    if (per_path.empty()) throw std::invalid_argument("static_potential: no paths");
    const LoopMeans& ref = per_path[0];
    const int nt = static_cast<int>(ref.t_extents.size());
    const int nr = static_cast<int>(ref.r_extents.size());

    // largest T with a partner at T + t
    int it1 = -1, it2 = -1;
    for (int i = nt - 1; i >= 0 && it1 < 0; --i) {
        for (int j = 0; j < nt; ++j) {
            const double want = ref.t_extents[i] + t_step;
            if (std::abs(ref.t_extents[j] - want) <= 1e-9 * std::max(1.0, want)) {
                it1 = i;
                it2 = j;
                break;
            }
        }
    }
    if (it1 < 0)
        throw std::invalid_argument("static_potential: no T pair separated by the time step");

    PotentialResult out;
    out.t_base = ref.t_extents[it1];
    out.t_step = t_step;
    const int n = static_cast<int>(per_path.size());
    for (int ir = 0; ir < nr; ++ir) {
        double s1 = 0.0, s2 = 0.0;
        for (const LoopMeans& p : per_path) {
            s1 += p.at(it1, ir);
            s2 += p.at(it2, ir);
        }
        const double w1 = s1 / n, w2 = s2 / n;
        bool ok = w1 > 0.0 && w2 > 0.0;
        std::vector<double> loo;
        if (ok && n >= 2) {
            loo.reserve(static_cast<std::size_t>(n));
            for (const LoopMeans& p : per_path) {
                const double l1 = (s1 - p.at(it1, ir)) / (n - 1);
                const double l2 = (s2 - p.at(it2, ir)) / (n - 1);
                if (l1 <= 0.0 || l2 <= 0.0) {
                    ok = false;
                    break;
                }
                loo.push_back(std::log(l1 / l2) / t_step);
            }
        }
        if (!ok) {
            out.excluded_r.push_back(ref.r_extents[static_cast<std::size_t>(ir)]);
            continue;
        }
        PotentialPoint pt;
        pt.r = ref.r_extents[static_cast<std::size_t>(ir)];
        pt.v = std::log(w1 / w2) / t_step;
        if (n >= 2) {
            const double lm = mean(loo);
            double ss = 0.0;
            for (double l : loo) ss += (l - lm) * (l - lm);
            pt.err = std::sqrt(ss * (n - 1) / static_cast<double>(n));
        }
        out.points.push_back(pt);
    }
    return out;
}

PotentialFit fit_potential(std::span<const PotentialPoint> points, FitKind kind) {
    if (points.size() < 3)
        throw std::invalid_argument("fit_potential: need at least three points");
    bool weighted = true;
    for (const auto& p : points) weighted = weighted && p.err > 0.0;

    double a00 = 0.0, a01 = 0.0, a11 = 0.0, b0 = 0.0, b1 = 0.0;
    for (const auto& p : points) {
        const double f0 = kind == FitKind::Coulomb ? -1.0 / p.r : p.r;
        const double w = weighted ? 1.0 / (p.err * p.err) : 1.0;
        a00 += w * f0 * f0;
        a01 += w * f0;
        a11 += w;
        b0 += w * f0 * p.v;
        b1 += w * p.v;
    }
    const double det = a00 * a11 - a01 * a01;
    if (!(std::abs(det) > 1e-14 * std::max(1.0, a00 * a11)))
        throw std::invalid_argument("fit_potential: singular normal equations");

    PotentialFit fit;
    fit.kind = kind;
    fit.n_points = static_cast<int>(points.size());
    fit.p0 = (a11 * b0 - a01 * b1) / det;
    fit.p1 = (a00 * b1 - a01 * b0) / det;
    double c00 = a11 / det, c11 = a00 / det, c01 = -a01 / det;
    for (const auto& p : points) {
        const double f0 = kind == FitKind::Coulomb ? -1.0 / p.r : p.r;
        const double w = weighted ? 1.0 / (p.err * p.err) : 1.0;
        const double resid = p.v - fit.p0 * f0 - fit.p1;
        fit.chi2 += w * resid * resid;
    }
    if (!weighted && points.size() > 2) {
        // unweighted: scale the covariance by the residual variance
        const double s2 = fit.chi2 / (static_cast<double>(points.size()) - 2.0);
        c00 *= s2;
        c11 *= s2;
        c01 *= s2;
    }
    fit.p0_err = std::sqrt(c00);
    fit.p1_err = std::sqrt(c11);
    fit.cov01 = c01;
    return fit;
}

Histogram field_value_histogram(const NodeCache& cache, int bins, double range) {
    Histogram h(bins, -range, range);
    const long n = cache.grid().total_nodes();
    for (long node = 0; node < n; ++node)
        for (int c = 0; c < cache.components(); ++c) h.add(cache.value(node, c));
    return h;
}

Histogram coefficient_histogram(const Configuration& config, int bins, double range) {
    Histogram h(bins, -range, range);
    for (int c = 0; c < config.components(); ++c)
        for (int i = 0; i < config.terms_per_component(); ++i) h.add(config.coefficient(c, i));
    return h;
}

}  // namespace gpimc
