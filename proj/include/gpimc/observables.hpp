#pragma once

// Measurements on sampled configurations: ground-state observables and
// coordinate histograms for paths; Wilson loops, static potentials, and
// field-value histograms for gauge fields.

#include <optional>
#include <span>
#include <vector>

#include "gpimc/action.hpp"
#include "gpimc/basis.hpp"
#include "gpimc/rng.hpp"
#include "gpimc/sampler.hpp"
#include "gpimc/stats.hpp"

namespace gpimc {

// Fixed-range histogram. Samples outside [lo, hi) are counted in n_total but
// not binned; density() normalizes by the in-range count so it integrates to
// one over the covered range.
struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> counts;
    double n_in = 0.0;
    double n_total = 0.0;

    Histogram() = default;
    Histogram(int bins, double lo_, double hi_);

    int bins() const { return static_cast<int>(counts.size()); }
    double bin_width() const { return (hi - lo) / bins(); }
    double bin_center(int i) const { return lo + (i + 0.5) * bin_width(); }

    void add(double x);
    void add(std::span<const double> xs);
    void merge(const Histogram& other);  // requires identical binning

    std::vector<double> density() const;
    double density_error(int i) const;  // Poisson error of one density bin
};

Histogram make_histogram(std::span<const double> xs, int bins, double lo, double hi);

// Histogram pooled over ensemble members. Samples inside one member are
// correlated (values of one smooth path or field), so the member-to-member
// scatter, not the pooled count, sets the sampling error of a density bin.
struct PooledHistogram {
    Histogram pooled;
    std::vector<double> ensemble_err;  // stderr of per-member densities; zero for < 2 members
};

PooledHistogram pool_histograms(std::span<const Histogram> members);

// --- paths -----------------------------------------------------------------

struct PathObservables {
    double potential_avg = 0.0;  // (m w^2 / 2) <q^2>_tau
    double q_sq_avg = 0.0;       // <q^2>_tau
};

PathObservables ho_observables(const Configuration& config, const PhysicsModel& model,
                               const QuadratureGrid& grid);

// q(tau) at n uniformly spaced times
std::vector<double> sample_path(const Configuration& config, int n_samples);

// pooled distribution of q over the ensemble, n_samples_per_path values each
Histogram coordinate_histogram(std::span<const Configuration* const> ensemble,
                               int n_samples_per_path, int bins, double range);

// --- gauge fields ------------------------------------------------------------

struct LoopValue {
    double re = 0.0;  // cos(phi) for U(1), (1/2) Re tr for SU(2)
    double im = 0.0;  // sin(phi) for U(1), zero for SU(2)
};

// SU(2) element as real quaternion a0 + i a.sigma
struct Su2 {
    double a0 = 1.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;

    double det() const { return a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3; }
    double half_trace() const { return a0; }
    Su2 operator*(const Su2& o) const;
};

// exp(i v.sigma / ...): exact group element for segment vector v = (v1,v2,v3),
// exp(i |v| n.sigma / 2) with n = v/|v|
Su2 su2_segment(double v1, double v2, double v3);

// Rectangular T x R loop in the (axis_t, axis_r) plane with corner at
// `corner`, sides split into segments of length <= segment_length, the line
// integral of A taken at segment midpoints. Extents must fit inside the box.
LoopValue wilson_loop(const Configuration& config, const PhysicsModel& model, const Point& corner,
                      int axis_t, int axis_r, double t_extent, double r_extent,
                      double segment_length);

// Per-path Wilson loop averages over the plan's (T, R) matrix.
struct LoopMeans {
    std::vector<double> t_extents;
    std::vector<double> r_extents;
    std::vector<double> re;  // [it * nR + ir]
    std::vector<double> im;

    double& at(int it, int ir) { return re[static_cast<std::size_t>(it) * r_extents.size() + ir]; }
    double at(int it, int ir) const { return re[static_cast<std::size_t>(it) * r_extents.size() + ir]; }
};

// plan.loops_per_pair loops per (T, R): random corner, random spatial axis,
// time side along the last axis. Draws come from the given stream in a fixed
// order, so measurements are reproducible.
LoopMeans measure_wilson_loops(const Configuration& config, const PhysicsModel& model,
                               const LoopPlan& plan, Xoshiro256pp& rng);

struct PotentialPoint {
    double r = 0.0;
    double v = 0.0;
    double err = 0.0;
};

struct PotentialResult {
    double t_base = 0.0;      // T used in the ratio W(T,R)/W(T+t,R)
    double t_step = 0.0;      // t
    std::vector<PotentialPoint> points;
    std::vector<double> excluded_r;  // R values dropped for non-positive loop means
};

// V(R) = (1/t) ln[ <W(T,R)> / <W(T+t,R)> ], errors by jackknife over paths.
// R entries whose averages (or any leave-one-out average) are non-positive are
// excluded and reported.
PotentialResult static_potential(std::span<const LoopMeans> per_path, double t_step);

enum class FitKind { Coulomb, Linear };

// Weighted least squares of V(R) on two basis functions:
//   Coulomb: V = p0 * (-1/R) + p1      Linear: V = p0 * R + p1
// Weights are 1/err^2 when every point has err > 0, otherwise the fit is
// unweighted and parameter errors are scaled by the residual variance.
struct PotentialFit {
    FitKind kind = FitKind::Coulomb;
    double p0 = 0.0, p1 = 0.0;
    double p0_err = 0.0, p1_err = 0.0;
    double cov01 = 0.0;
    double chi2 = 0.0;
    int n_points = 0;
};

PotentialFit fit_potential(std::span<const PotentialPoint> points, FitKind kind);

// pooled histogram of cached field values over all components of one chain
Histogram field_value_histogram(const NodeCache& cache, int bins, double range);
// pooled histogram of all coefficients
Histogram coefficient_histogram(const Configuration& config, int bins, double range);

}  // namespace gpimc
