#pragma once

// Euclidean actions evaluated by midpoint quadrature on the torus.
//
// The sampler's hot path is the accept/reject energy difference for a change
// of one Gaussian coefficient. A NodeCache keeps field values and gradients of
// every component at every quadrature node, so the difference reduces to a sum
// over the nodes inside the modified term's truncation radius; the Lagrangian
// difference at each node is evaluated from the cached old state and the
// explicitly bumped new state through the same field-strength code used for
// full recomputation.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gpimc/basis.hpp"
#include "gpimc/geometry.hpp"

namespace gpimc {

enum class ModelKind { HarmonicOscillator, GaugeU1, GaugeSU2 };

struct PhysicsModel {
    ModelKind kind = ModelKind::HarmonicOscillator;
    double mass = 1.0;
    double omega = 1.0;
    double coupling = 0.0;  // gauge self-interaction g; unused for HO and U(1)

    // field components: HO 1, U(1) 4 (directions), SU(2) 12 (3 colors x 4)
    int components() const;
    int colors() const;  // 1 for HO/U(1), 3 for SU(2)
    void validate() const;

    bool operator==(const PhysicsModel&) const = default;
};

enum class QuadratureProfile { Fine, Coarse };

// node spacing must satisfy h <= max_fraction(profile) * xi_min
double quadrature_max_fraction(QuadratureProfile profile);

struct QuadratureSpec {
    std::array<int, kMaxDims> nodes_per_axis{};
};

// nodes_per_axis = ceil(extent / (fraction * xi_min)) per axis
QuadratureSpec make_quadrature_spec(const PeriodicDomain& domain, double min_width,
                                    QuadratureProfile profile);

// Uniform midpoint grid on the torus: node k on axis d sits at (k+1/2)*h_d.
class QuadratureGrid {
public:
    QuadratureGrid() = default;
    QuadratureGrid(const PeriodicDomain& domain, const QuadratureSpec& spec);

    const PeriodicDomain& domain() const { return domain_; }
    const QuadratureSpec& spec() const { return spec_; }
    int dims() const { return domain_.dims; }
    int nodes(int axis) const { return spec_.nodes_per_axis[axis]; }
    double spacing(int axis) const { return h_[axis]; }
    double extent(int axis) const { return domain_.extents[axis]; }
    double node_weight() const { return weight_; }  // product of spacings
    long total_nodes() const { return n_nodes_; }
    long stride(int axis) const { return stride_[axis]; }
    double max_spacing() const;

    // throws when h > fraction * min_width on some axis
    void require_spacing(double min_width, QuadratureProfile profile) const;

private:
    PeriodicDomain domain_;
    QuadratureSpec spec_;
    Point h_{};
    double weight_ = 1.0;
    long n_nodes_ = 0;
    std::array<long, kMaxDims> stride_{};
};

namespace detail {

// Per-axis slice of the nodes within a term's truncation radius: wrapped node
// index, signed displacement to the center, its square, and the axis factor of
// the separable Gaussian.
struct AxisSupport {
    std::vector<int> idx;
    std::vector<double> d;
    std::vector<double> d2;
    std::vector<double> e;
    void clear() { idx.clear(); d.clear(); d2.clear(); e.clear(); }
};

void axis_support(const QuadratureGrid& g, int axis, double center, double radius, double inv_w2,
                  AxisSupport& out);

// Visit all grid nodes with |node - center| <= radius (minimal image).
// f(flat_node_index, gaussian_value, signed_displacement[4]).
template <class F>
void for_support_nodes(const QuadratureGrid& g, const Point& center, double radius, double inv_w2,
                       F&& f) {
    thread_local AxisSupport ax[kMaxDims];
    const int dims = g.dims();
    for (int d = 0; d < dims; ++d) {
        axis_support(g, d, center[d], radius, inv_w2, ax[d]);
        if (ax[d].idx.empty()) return;
    }
    double disp[kMaxDims] = {0, 0, 0, 0};
    if (dims == 1) {
        const auto& a = ax[0];
        for (std::size_t i = 0; i < a.idx.size(); ++i) {
            disp[0] = a.d[i];
            f(static_cast<long>(a.idx[i]), a.e[i], disp);
        }
        return;
    }
    const double r2 = radius * radius;
    const auto &a0 = ax[0], &a1 = ax[1], &a2 = ax[2], &a3 = ax[3];
    for (std::size_t i0 = 0; i0 < a0.idx.size(); ++i0) {
        const double s0 = a0.d2[i0];
        const double e0 = a0.e[i0];
        const long b0 = a0.idx[i0] * g.stride(0);
        disp[0] = a0.d[i0];
        for (std::size_t i1 = 0; i1 < a1.idx.size(); ++i1) {
            const double s1 = s0 + a1.d2[i1];
            if (s1 > r2) continue;
            const double e1 = e0 * a1.e[i1];
            const long b1 = b0 + a1.idx[i1] * g.stride(1);
            disp[1] = a1.d[i1];
            for (std::size_t i2 = 0; i2 < a2.idx.size(); ++i2) {
                const double s2 = s1 + a2.d2[i2];
                if (s2 > r2) continue;
                const double e2 = e1 * a2.e[i2];
                const long b2 = b1 + a2.idx[i2] * g.stride(2);
                disp[2] = a2.d[i2];
                for (std::size_t i3 = 0; i3 < a3.idx.size(); ++i3) {
                    if (s2 + a3.d2[i3] > r2) continue;
                    disp[3] = a3.d[i3];
                    f(b2 + a3.idx[i3], e2 * a3.e[i3], disp);
                }
            }
        }
    }
}

}  // namespace detail

// Field values and gradients of all components at the quadrature nodes.
// Layout is node-major so the Lagrangian at one node reads a contiguous block.
class NodeCache {
public:
    NodeCache() = default;
    NodeCache(QuadratureGrid grid, int n_components);

    const QuadratureGrid& grid() const { return grid_; }
    int components() const { return ncomp_; }

    // full scatter over all terms; overwrites previous content
    void build(const Configuration& config);

    double action_total(const PhysicsModel& model) const;

    // Energy difference for coefficient bump delta of one term; does not
    // modify the cache. Matches build-from-scratch recomputation because the
    // bumped node set and Gaussian factors come from the same axis-support
    // tables the scatter uses.
    double action_delta(const Configuration& config, const PhysicsModel& model, int component,
                        int term, double delta) const;

    // incorporate an accepted bump into the cached values/gradients
    void apply_delta(const Configuration& config, int component, int term, double delta);

    double value(long node, int component) const {
        return val_[static_cast<std::size_t>(node) * ncomp_ + component];
    }
    // mean of field^2 over the domain (quadrature measure)
    double mean_square_value(int component) const;

private:
    double node_density(const PhysicsModel& model, long node) const;

    QuadratureGrid grid_;
    int ncomp_ = 0;
    int dims_ = 0;
    std::vector<double> val_;   // [node * ncomp + comp]
    std::vector<double> grad_;  // [(node * ncomp + comp) * dims + axis]
};

// Convenience forms that build a throwaway cache. action_delta here is the
// contract used by tests; the sampler calls the NodeCache methods directly.
double action_total(const Configuration& config, const PhysicsModel& model,
                    const QuadratureGrid& grid);
double action_delta(const Configuration& config, const PhysicsModel& model,
                    const QuadratureGrid& grid, int component, int term, double delta);

// S / T for paths, S / (T * X^3) for gauge fields
double lagrangian_density_average(const Configuration& config, const PhysicsModel& model,
                                  const QuadratureGrid& grid);

}  // namespace gpimc
