#pragma once

// Field configurations: each component is a finite sum of periodic Gaussian
// bumps q(x) = sum_i c_i exp(-|x - x_i|^2 / xi_i^2) with minimal-image
// distances. Centers and widths are frozen after construction; Metropolis
// updates touch coefficients only.

#include <vector>

#include "gpimc/geometry.hpp"

namespace gpimc {

struct GaussianTerm {
    double coefficient = 0.0;
    Point center{};
    double width = 1.0;
};

class Configuration {
public:
    Configuration(PeriodicDomain domain, int n_components, double truncation_epsilon);

    // Build phase: add terms, then freeze(). freeze() checks every component
    // carries the same term count and builds the spatial bins.
    void add_term(int component, const GaussianTerm& term);
    void freeze();
    bool frozen() const { return frozen_; }

    const PeriodicDomain& domain() const { return domain_; }
    int components() const { return static_cast<int>(comps_.size()); }
    int terms_per_component() const { return terms_per_component_; }
    double truncation_epsilon() const { return epsilon_; }

    double coefficient(int component, int i) const { return comps_[component].coeff[i]; }
    void set_coefficient(int component, int i, double value) { comps_[component].coeff[i] = value; }
    const Point& center(int component, int i) const { return comps_[component].center[i]; }
    double width(int component, int i) const { return comps_[component].width[i]; }
    double inv_width_sq(int component, int i) const { return comps_[component].inv_w2[i]; }
    double support_radius(int component, int i) const { return comps_[component].radius[i]; }

    double min_width() const;
    double max_abs_coefficient() const;

    // Field value / gradient of one component at x (any image of x; the value
    // is exactly periodic). Terms farther than their truncation radius are
    // skipped.
    double evaluate(int component, const Point& x) const;
    Point evaluate_gradient(int component, const Point& x) const;

private:
    struct Component {
        std::vector<double> coeff;
        std::vector<Point> center;
        std::vector<double> width;
        std::vector<double> inv_w2;
        std::vector<double> radius;
        // cell -> indices of terms whose center lies in the cell
        std::vector<std::vector<int>> cells;
        std::array<int, kMaxDims> n_cells{};
        Point cell_size{};
        double max_radius = 0.0;
    };

    int cell_of(const Component& c, const Point& x) const;
    void gather_candidate_cells(const Component& c, const Point& x, std::vector<int>& out) const;

    PeriodicDomain domain_;
    double epsilon_;
    int terms_per_component_ = 0;
    bool frozen_ = false;
    std::vector<Component> comps_;
    mutable std::vector<int> cell_scratch_;
};

}  // namespace gpimc
