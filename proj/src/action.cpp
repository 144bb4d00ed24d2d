#include "gpimc/action.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace gpimc {

int PhysicsModel::components() const {
    switch (kind) {
        case ModelKind::HarmonicOscillator: return 1;
        case ModelKind::GaugeU1: return 4;
        case ModelKind::GaugeSU2: return 12;
    }
    return 0;
}

int PhysicsModel::colors() const { return kind == ModelKind::GaugeSU2 ? 3 : 1; }

void PhysicsModel::validate() const {
    if (kind == ModelKind::HarmonicOscillator) {
        if (!(mass > 0.0)) throw std::invalid_argument("model: mass must be positive");
        if (!(omega > 0.0)) throw std::invalid_argument("model: omega must be positive");
    } else {
        // g = 0 for SU(2) degenerates to three decoupled U(1) copies; allowed
        // so the limit can be tested.
        if (!(coupling >= 0.0) || !std::isfinite(coupling))
            throw std::invalid_argument("model: coupling must be finite and non-negative");
    }
}

double quadrature_max_fraction(QuadratureProfile profile) {
    return profile == QuadratureProfile::Fine ? 0.25 : 0.5;
}

QuadratureSpec make_quadrature_spec(const PeriodicDomain& domain, double min_width,
                                    QuadratureProfile profile) {
    if (!(min_width > 0.0)) throw std::invalid_argument("quadrature: min_width must be positive");
    const double target = quadrature_max_fraction(profile) * min_width;
    QuadratureSpec spec;
    for (int d = 0; d < domain.dims; ++d) {
        spec.nodes_per_axis[d] =
            std::max(1, static_cast<int>(std::ceil(domain.extents[d] / target - 1e-12)));
    }
    return spec;
}

QuadratureGrid::QuadratureGrid(const PeriodicDomain& domain, const QuadratureSpec& spec)
    : domain_(domain), spec_(spec) {
    n_nodes_ = 1;
    for (int d = 0; d < domain_.dims; ++d) {
        if (spec_.nodes_per_axis[d] < 1)
            throw std::invalid_argument("quadrature: node counts must be positive");
        h_[d] = domain_.extents[d] / spec_.nodes_per_axis[d];
        weight_ *= h_[d];
        n_nodes_ *= spec_.nodes_per_axis[d];
    }
    long s = 1;
    for (int d = domain_.dims - 1; d >= 0; --d) {
        stride_[d] = s;
        s *= spec_.nodes_per_axis[d];
    }
}

double QuadratureGrid::max_spacing() const {
    double m = 0.0;
    for (int d = 0; d < domain_.dims; ++d) m = std::max(m, h_[d]);
    return m;
}

void QuadratureGrid::require_spacing(double min_width, QuadratureProfile profile) const {
    const double bound = quadrature_max_fraction(profile) * min_width;
    for (int d = 0; d < domain_.dims; ++d) {
        if (h_[d] > bound * (1.0 + 1e-12))
            throw std::invalid_argument("quadrature: node spacing exceeds width fraction bound");
    }
}

namespace detail {

void axis_support(const QuadratureGrid& g, int axis, double center, double radius, double inv_w2,
                  AxisSupport& out) {
    out.clear();
    const int n = g.nodes(axis);
    const double h = g.spacing(axis);
    const double extent = g.extent(axis);
    const double r2 = radius * radius;
    if (2.0 * radius >= extent) {
        // support wraps all the way around; use minimal images of every node
        for (int k = 0; k < n; ++k) {
            const double d = minimal_image((k + 0.5) * h - center, extent);
            const double d2 = d * d;
            if (d2 > r2) continue;
            out.idx.push_back(k);
            out.d.push_back(d);
            out.d2.push_back(d2);
            out.e.push_back(std::exp(-d2 * inv_w2));
        }
        return;
    }
    // 2r < extent: unwrapped displacements of the covered index window are
    // already minimal images, and no node appears twice.
    const int k0 = static_cast<int>(std::floor((center - radius) / h - 0.5));
    const int k1 = static_cast<int>(std::ceil((center + radius) / h - 0.5));
    for (int k = k0; k <= k1; ++k) {
        const double d = (k + 0.5) * h - center;
        const double d2 = d * d;
        if (d2 > r2) continue;
        int kk = k % n;
        if (kk < 0) kk += n;
        out.idx.push_back(kk);
        out.d.push_back(d);
        out.d2.push_back(d2);
        out.e.push_back(std::exp(-d2 * inv_w2));
    }
}

// Field-strength entry F^a_{mu nu} = d_mu A^a_nu - d_nu A^a_mu
//                                    + g eps_{abc} A^b_mu A^c_nu.
// V holds component values at one node, G the gradients
// ([component * dims + derivative_axis]); component = color * dims + dir.
inline double fs_entry(const double* V, const double* G, int dims, int a, int mu, int nu, double g,
                       int ncolor) {
    double e = G[(a * dims + nu) * dims + mu] - G[(a * dims + mu) * dims + nu];
    if (ncolor == 3 && g != 0.0) {
        const int b = (a + 1) % 3;
        const int c = (a + 2) % 3;
        e += g * (V[b * dims + mu] * V[c * dims + nu] - V[c * dims + mu] * V[b * dims + nu]);
    }
    return e;
}

}  // namespace detail

NodeCache::NodeCache(QuadratureGrid grid, int n_components)
    : grid_(std::move(grid)), ncomp_(n_components), dims_(grid_.dims()) {
    val_.assign(static_cast<std::size_t>(grid_.total_nodes()) * ncomp_, 0.0);
    grad_.assign(static_cast<std::size_t>(grid_.total_nodes()) * ncomp_ * dims_, 0.0);
}

void NodeCache::build(const Configuration& config) {
    if (config.components() != ncomp_)
        throw std::invalid_argument("NodeCache: component count mismatch");
    std::fill(val_.begin(), val_.end(), 0.0);
    std::fill(grad_.begin(), grad_.end(), 0.0);
    for (int comp = 0; comp < ncomp_; ++comp) {
        for (int i = 0; i < config.terms_per_component(); ++i) {
            const double c = config.coefficient(comp, i);
            const double inv_w2 = config.inv_width_sq(comp, i);
            detail::for_support_nodes(
                grid_, config.center(comp, i), config.support_radius(comp, i), inv_w2,
                [&](long node, double gval, const double* dx) {
                    val_[static_cast<std::size_t>(node) * ncomp_ + comp] += c * gval;
                    double* gr = &grad_[(static_cast<std::size_t>(node) * ncomp_ + comp) * dims_];
                    const double common = c * gval * (-2.0 * inv_w2);
                    for (int d = 0; d < dims_; ++d) gr[d] += common * dx[d];
                });
        }
    }
}

double NodeCache::node_density(const PhysicsModel& model, long node) const {
    const double* V = &val_[static_cast<std::size_t>(node) * ncomp_];
    const double* G = &grad_[static_cast<std::size_t>(node) * ncomp_ * dims_];
    if (model.kind == ModelKind::HarmonicOscillator) {
        const double v = V[0];
        const double qdot = G[0];
        return 0.5 * model.mass * (qdot * qdot + model.omega * model.omega * v * v);
    }
    const int ncolor = model.colors();
    const double g = model.kind == ModelKind::GaugeSU2 ? model.coupling : 0.0;
    double density = 0.0;
    for (int a = 0; a < ncolor; ++a) {
        for (int mu = 0; mu < dims_; ++mu) {
            for (int nu = mu + 1; nu < dims_; ++nu) {
                const double e = detail::fs_entry(V, G, dims_, a, mu, nu, g, ncolor);
                density += 0.5 * e * e;
            }
        }
    }
    return density;
}

double NodeCache::action_total(const PhysicsModel& model) const {
    if (model.components() != ncomp_)
        throw std::invalid_argument("action_total: model/configuration kind mismatch");
    double sum = 0.0;
    const long n = grid_.total_nodes();
    for (long node = 0; node < n; ++node) sum += node_density(model, node);
    return sum * grid_.node_weight();
}

double NodeCache::action_delta(const Configuration& config, const PhysicsModel& model,
                               int component, int term, double delta) const {
    if (model.components() != ncomp_)
        throw std::invalid_argument("action_delta: model/configuration kind mismatch");
    if (component < 0 || component >= ncomp_) throw std::out_of_range("action_delta: component");
    if (term < 0 || term >= config.terms_per_component())
        throw std::out_of_range("action_delta: term");
    const double inv_w2 = config.inv_width_sq(component, term);
    double dsum = 0.0;

    if (model.kind == ModelKind::HarmonicOscillator) {
        const double m = model.mass;
        const double w2 = model.omega * model.omega;
        detail::for_support_nodes(
            grid_, config.center(component, term), config.support_radius(component, term), inv_w2,
            [&](long node, double gval, const double* dx) {
                const double v = val_[static_cast<std::size_t>(node)];
                const double qd = grad_[static_cast<std::size_t>(node)];
                const double dv = delta * gval;
                const double dqd = delta * gval * (-2.0 * inv_w2) * dx[0];
                dsum += 0.5 * m *
                        ((qd + dqd) * (qd + dqd) - qd * qd + w2 * ((v + dv) * (v + dv) - v * v));
            });
        return dsum * grid_.node_weight();
    }

    const int ncolor = model.colors();
    const double g = model.kind == ModelKind::GaugeSU2 ? model.coupling : 0.0;
    const int rho = component % dims_;
    detail::for_support_nodes(
        grid_, config.center(component, term), config.support_radius(component, term), inv_w2,
        [&](long node, double gval, const double* dx) {
            const double* V = &val_[static_cast<std::size_t>(node) * ncomp_];
            const double* G = &grad_[static_cast<std::size_t>(node) * ncomp_ * dims_];
            // bumped copies of the node state
            double Vn[12];
            double Gn[48];
            std::memcpy(Vn, V, sizeof(double) * ncomp_);
            std::memcpy(Gn, G, sizeof(double) * ncomp_ * dims_);
            Vn[component] += delta * gval;
            const double common = delta * gval * (-2.0 * inv_w2);
            for (int d = 0; d < dims_; ++d) Gn[component * dims_ + d] += common * dx[d];
            // only field-strength entries whose index pair contains rho can
            // change; the rest are identical in old and new states
            double dL = 0.0;
            for (int a = 0; a < ncolor; ++a) {
                for (int nu = 0; nu < dims_; ++nu) {
                    if (nu == rho) continue;
                    const double eo = detail::fs_entry(V, G, dims_, a, rho, nu, g, ncolor);
                    const double en = detail::fs_entry(Vn, Gn, dims_, a, rho, nu, g, ncolor);
                    dL += 0.5 * (en * en - eo * eo);
                }
            }
            dsum += dL;
        });
    return dsum * grid_.node_weight();
}

void NodeCache::apply_delta(const Configuration& config, int component, int term, double delta) {
    const double inv_w2 = config.inv_width_sq(component, term);
    detail::for_support_nodes(
        grid_, config.center(component, term), config.support_radius(component, term), inv_w2,
        [&](long node, double gval, const double* dx) {
            val_[static_cast<std::size_t>(node) * ncomp_ + component] += delta * gval;
            double* gr = &grad_[(static_cast<std::size_t>(node) * ncomp_ + component) * dims_];
            const double common = delta * gval * (-2.0 * inv_w2);
            for (int d = 0; d < dims_; ++d) gr[d] += common * dx[d];
        });
}

double NodeCache::mean_square_value(int component) const {
    double sum = 0.0;
    const long n = grid_.total_nodes();
    for (long node = 0; node < n; ++node) {
        const double v = val_[static_cast<std::size_t>(node) * ncomp_ + component];
        sum += v * v;
    }
    return sum * grid_.node_weight() / grid_.domain().volume();
}

double action_total(const Configuration& config, const PhysicsModel& model,
                    const QuadratureGrid& grid) {
    if (model.components() != config.components())
        throw std::invalid_argument("action_total: model/configuration kind mismatch");
    NodeCache cache(grid, config.components());
    cache.build(config);
    return cache.action_total(model);
}

double action_delta(const Configuration& config, const PhysicsModel& model,
                    const QuadratureGrid& grid, int component, int term, double delta) {
    if (model.components() != config.components())
        throw std::invalid_argument("action_delta: model/configuration kind mismatch");
    NodeCache cache(grid, config.components());
    cache.build(config);
    return cache.action_delta(config, model, component, term, delta);
}

double lagrangian_density_average(const Configuration& config, const PhysicsModel& model,
                                  const QuadratureGrid& grid) {
    const double s = action_total(config, model, grid);
    const double denom = model.kind == ModelKind::HarmonicOscillator
                             ? grid.domain().extents[0]
                             : grid.domain().volume();
    return s / denom;
}

}  // namespace gpimc
