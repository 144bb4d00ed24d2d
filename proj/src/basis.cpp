#include "gpimc/basis.hpp"

#include <algorithm>
#include <cmath>

namespace gpimc {

Configuration::Configuration(PeriodicDomain domain, int n_components, double truncation_epsilon)
    : domain_(domain), epsilon_(truncation_epsilon) {
    if (n_components < 1) throw std::invalid_argument("Configuration: need at least one component");
    if (!(truncation_epsilon > 0.0 && truncation_epsilon < 1.0))
        throw std::domain_error("Configuration: truncation epsilon must be in (0,1)");
    comps_.resize(static_cast<std::size_t>(n_components));
}

void Configuration::add_term(int component, const GaussianTerm& term) {
    if (frozen_) throw std::logic_error("Configuration: add_term after freeze");
    if (component < 0 || component >= components())
        throw std::out_of_range("Configuration: component index");
    if (!(term.width > 0.0)) throw std::invalid_argument("Configuration: width must be positive");
    Component& c = comps_[component];
    c.coeff.push_back(term.coefficient);
    c.center.push_back(wrap_point(term.center, domain_));
    c.width.push_back(term.width);
    c.inv_w2.push_back(1.0 / (term.width * term.width));
    c.radius.push_back(truncation_radius(term.width, epsilon_));
}

void Configuration::freeze() {
    if (frozen_) return;
    terms_per_component_ = static_cast<int>(comps_[0].coeff.size());
    if (terms_per_component_ == 0) throw std::logic_error("Configuration: no terms");
    for (auto& c : comps_) {
        if (static_cast<int>(c.coeff.size()) != terms_per_component_)
            throw std::logic_error("Configuration: components must have equal term counts");
        c.max_radius = *std::max_element(c.radius.begin(), c.radius.end());
        int total_cells = 1;
        for (int d = 0; d < domain_.dims; ++d) {
            int n = std::max(1, static_cast<int>(std::floor(domain_.extents[d] / c.max_radius)));
            n = std::min(n, 64);  // cap cell count; bins are an acceleration only
            c.n_cells[d] = n;
            c.cell_size[d] = domain_.extents[d] / n;
            total_cells *= n;
        }
        c.cells.assign(static_cast<std::size_t>(total_cells), {});
        for (int i = 0; i < terms_per_component_; ++i) c.cells[cell_of(c, c.center[i])].push_back(i);
    }
    frozen_ = true;
}

int Configuration::cell_of(const Component& c, const Point& x) const {
    int idx = 0;
    for (int d = 0; d < domain_.dims; ++d) {
        int k = static_cast<int>(x[d] / c.cell_size[d]);
        k = std::clamp(k, 0, c.n_cells[d] - 1);
        idx = idx * c.n_cells[d] + k;
    }
    return idx;
}

void Configuration::gather_candidate_cells(const Component& c, const Point& x,
                                           std::vector<int>& out) const {
    // Cells within +-1 of x's cell per axis cover every term with
    // |x - center| <= max_radius <= cell size. Wrapped neighbor indices can
    // coincide when an axis has fewer than three cells; deduplicate.
    out.clear();
    std::array<std::array<int, 3>, kMaxDims> neigh{};
    std::array<int, kMaxDims> n_neigh{};
    for (int d = 0; d < domain_.dims; ++d) {
        int k = static_cast<int>(x[d] / c.cell_size[d]);
        k = std::clamp(k, 0, c.n_cells[d] - 1);
        int cnt = 0;
        for (int off = -1; off <= 1; ++off) {
            int kk = (k + off + c.n_cells[d]) % c.n_cells[d];
            bool seen = false;
            for (int j = 0; j < cnt; ++j) seen = seen || (neigh[d][j] == kk);
            if (!seen) neigh[d][cnt++] = kk;
        }
        n_neigh[d] = cnt;
    }
    std::array<int, kMaxDims> it{};
    for (;;) {
        int idx = 0;
        for (int d = 0; d < domain_.dims; ++d) idx = idx * c.n_cells[d] + neigh[d][it[d]];
        out.push_back(idx);
        int d = domain_.dims - 1;
        while (d >= 0 && ++it[d] == n_neigh[d]) it[d--] = 0;
        if (d < 0) break;
    }
}

double Configuration::evaluate(int component, const Point& x) const {
    const Component& c = comps_[component];
    const Point xw = wrap_point(x, domain_);
    gather_candidate_cells(c, xw, cell_scratch_);
    double sum = 0.0;
    for (int cell : cell_scratch_) {
        for (int i : c.cells[cell]) {
            double d2 = 0.0;
            for (int d = 0; d < domain_.dims; ++d) {
                const double dd = minimal_image(xw[d] - c.center[i][d], domain_.extents[d]);
                d2 += dd * dd;
            }
            if (d2 <= c.radius[i] * c.radius[i]) sum += c.coeff[i] * std::exp(-d2 * c.inv_w2[i]);
        }
    }
    return sum;
}

Point Configuration::evaluate_gradient(int component, const Point& x) const {
    const Component& c = comps_[component];
    const Point xw = wrap_point(x, domain_);
    gather_candidate_cells(c, xw, cell_scratch_);
    Point grad{};
    for (int cell : cell_scratch_) {
        for (int i : c.cells[cell]) {
            Point disp{};
            double d2 = 0.0;
            for (int d = 0; d < domain_.dims; ++d) {
                disp[d] = minimal_image(xw[d] - c.center[i][d], domain_.extents[d]);
                d2 += disp[d] * disp[d];
            }
            if (d2 > c.radius[i] * c.radius[i]) continue;
            const double common = c.coeff[i] * std::exp(-d2 * c.inv_w2[i]) * (-2.0 * c.inv_w2[i]);
            for (int d = 0; d < domain_.dims; ++d) grad[d] += common * disp[d];
        }
    }
    return grad;
}

double Configuration::min_width() const {
    double w = comps_[0].width[0];
    for (const auto& c : comps_)
        for (double wi : c.width) w = std::min(w, wi);
    return w;
}

double Configuration::max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& c : comps_)
        for (double ci : c.coeff) m = std::max(m, std::abs(ci));
    return m;
}

}  // namespace gpimc
