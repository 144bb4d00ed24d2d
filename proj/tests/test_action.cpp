#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "gpimc/action.hpp"
#include "gpimc/oracle.hpp"
#include "gpimc/rng.hpp"

using namespace gpimc;

namespace {

PhysicsModel ho_model() {
    PhysicsModel m;
    m.kind = ModelKind::HarmonicOscillator;
    return m;
}

PhysicsModel u1_model() {
    PhysicsModel m;
    m.kind = ModelKind::GaugeU1;
    return m;
}

PhysicsModel su2_model(double g) {
    PhysicsModel m;
    m.kind = ModelKind::GaugeSU2;
    m.coupling = g;
    return m;
}

QuadratureGrid line_grid(double time_extent, double min_width) {
    PeriodicDomain dom = PeriodicDomain::line(time_extent);
    return QuadratureGrid(dom, make_quadrature_spec(dom, min_width, QuadratureProfile::Fine));
}

Configuration ho_config(const PeriodicDomain& dom, std::span<const GaussianTerm> terms) {
    Configuration cfg(dom, 1, 1e-12);
    for (const GaussianTerm& t : terms) cfg.add_term(0, t);
    cfg.freeze();
    return cfg;
}

// n random terms per component on a small 4D box; same draw for every caller
// with the same seed, so paired U(1)/SU(2) configurations can share terms.
std::vector<GaussianTerm> random_box_terms(int n, double space, double time, std::uint64_t seed) {
    Xoshiro256pp rng(seed);
    std::vector<GaussianTerm> terms(n);
    for (GaussianTerm& t : terms) {
        t.coefficient = rng.uniform_range(-1.3, 1.3);
        t.center = Point{rng.uniform() * space, rng.uniform() * space, rng.uniform() * space,
                         rng.uniform() * time};
        t.width = 1.0;
    }
    return terms;
}

struct GaugePair {
    Configuration u1;
    Configuration su2;
    QuadratureGrid grid;
};

// u1 carries the color-0 terms; su2 colors 0..2 carry independent draws, so
// the epsilon_abc A^b A^c commutator terms are active
GaugePair paired_gauge_configs(std::uint64_t seed) {
    const double space = 4.0, time = 6.0;
    PeriodicDomain box = PeriodicDomain::box4(space, time);
    QuadratureGrid grid(box, make_quadrature_spec(box, 1.0, QuadratureProfile::Coarse));
    Configuration u1(box, 4, 1e-10);
    Configuration su2(box, 12, 1e-10);
    for (int a = 0; a < 3; ++a)
        for (int mu = 0; mu < 4; ++mu)
            for (const GaussianTerm& t : random_box_terms(5, space, time, seed + 16 * a + mu)) {
                if (a == 0) u1.add_term(mu, t);
                su2.add_term(a * 4 + mu, t);
            }
    u1.freeze();
    su2.freeze();
    return {std::move(u1), std::move(su2), std::move(grid)};
}

// abelian configuration holding just color a of the paired su2 draw
Configuration u1_of_color(std::uint64_t seed, int a) {
    const double space = 4.0, time = 6.0;
    Configuration cfg(PeriodicDomain::box4(space, time), 4, 1e-10);
    for (int mu = 0; mu < 4; ++mu)
        for (const GaussianTerm& t : random_box_terms(5, space, time, seed + 16 * a + mu))
            cfg.add_term(mu, t);
    cfg.freeze();
    return cfg;
}

}  // namespace

TEST_CASE("zero configuration has zero action for every model") {
    PeriodicDomain line = PeriodicDomain::line(20.0);
    Configuration q(line, 1, 1e-12);
    GaussianTerm t;
    t.center = Point{10.0, 0, 0, 0};
    q.add_term(0, t);
    q.freeze();
    QuadratureGrid grid = line_grid(20.0, 1.0);
    CHECK(action_total(q, ho_model(), grid) == 0.0);

    PeriodicDomain box = PeriodicDomain::box4(4.0, 4.0);
    QuadratureGrid bgrid(box, make_quadrature_spec(box, 1.0, QuadratureProfile::Coarse));
    Configuration a4(box, 4, 1e-10), a12(box, 12, 1e-10);
    for (int c = 0; c < 4; ++c) a4.add_term(c, GaussianTerm{0.0, Point{1, 1, 1, 1}, 1.0});
    for (int c = 0; c < 12; ++c) a12.add_term(c, GaussianTerm{0.0, Point{1, 1, 1, 1}, 1.0});
    a4.freeze();
    a12.freeze();
    CHECK(action_total(a4, u1_model(), bgrid) == 0.0);
    CHECK(action_total(a12, su2_model(3.5), bgrid) == 0.0);
}

TEST_CASE("isolated single Gaussian matches the closed form") {
    // S = c^2 sqrt(pi)/(2 sqrt(2)) * m * (1/xi + w^2 xi) on a period much
    // larger than the width
    GaussianTerm t{1.0, Point{10.0, 0, 0, 0}, 1.0};
    Configuration cfg = ho_config(PeriodicDomain::line(20.0), {&t, 1});
    QuadratureGrid grid = line_grid(20.0, 1.0);
    const double s = action_total(cfg, ho_model(), grid);
    CHECK(s == doctest::Approx(1.2533141373155003).epsilon(1e-9));
    CHECK(s == doctest::Approx(analytic_single_gaussian_action(1.0, 1.0, 1.0, 1.0)).epsilon(1e-9));

    Xoshiro256pp rng(29);
    for (int it = 0; it < 20; ++it) {
        double c = rng.uniform_range(-3.0, 3.0);
        double xi = rng.uniform_range(0.2, 1.0);
        GaussianTerm r{c, Point{rng.uniform() * 20.0, 0, 0, 0}, xi};
        Configuration one = ho_config(PeriodicDomain::line(20.0), {&r, 1});
        QuadratureGrid g = line_grid(20.0, xi);
        double expect = analytic_single_gaussian_action(c, xi, 1.0, 1.0);
        CHECK(action_total(one, ho_model(), g) ==
              doctest::Approx(expect).epsilon(1e-6));
    }
}

TEST_CASE("su2 at g=0 decouples into three u1 copies") {
    GaugePair p = paired_gauge_configs(31);
    double sum = 0.0;
    for (int a = 0; a < 3; ++a) {
        double s_a = action_total(u1_of_color(31, a), u1_model(), p.grid);
        CHECK(s_a > 0.0);
        sum += s_a;
    }
    CHECK(action_total(p.su2, su2_model(0.0), p.grid) == doctest::Approx(sum).epsilon(1e-10));
}

TEST_CASE("coupling changes the su2 action away from the quadratic value") {
    GaugePair p = paired_gauge_configs(33);
    double s_free = action_total(p.su2, su2_model(0.0), p.grid);
    double s_int = action_total(p.su2, su2_model(3.5), p.grid);
    CHECK(s_int != doctest::Approx(s_free).epsilon(1e-6));
    CHECK(s_int >= 0.0);
}

TEST_CASE("quadratic scaling for ho and u1, broken for coupled su2") {
    const double lambda = 1.7;
    SUBCASE("ho") {
        Xoshiro256pp rng(37);
        std::vector<GaussianTerm> terms(6);
        for (GaussianTerm& t : terms) {
            t.coefficient = rng.uniform_range(-2.0, 2.0);
            t.center = Point{rng.uniform() * 20.0, 0, 0, 0};
            t.width = rng.uniform_range(0.4, 1.0);
        }
        Configuration base = ho_config(PeriodicDomain::line(20.0), terms);
        for (GaussianTerm& t : terms) t.coefficient *= lambda;
        Configuration scaled = ho_config(PeriodicDomain::line(20.0), terms);
        QuadratureGrid grid = line_grid(20.0, 0.4);
        double s = action_total(base, ho_model(), grid);
        CHECK(action_total(scaled, ho_model(), grid) ==
              doctest::Approx(lambda * lambda * s).epsilon(1e-10));
    }
    SUBCASE("u1 and su2") {
        GaugePair p = paired_gauge_configs(41);
        GaugePair q = paired_gauge_configs(41);
        for (int c = 0; c < 4; ++c)
            for (int i = 0; i < q.u1.terms_per_component(); ++i)
                q.u1.set_coefficient(c, i, lambda * p.u1.coefficient(c, i));
        for (int c = 0; c < 12; ++c)
            for (int i = 0; i < q.su2.terms_per_component(); ++i)
                q.su2.set_coefficient(c, i, lambda * p.su2.coefficient(c, i));
        double s1 = action_total(p.u1, u1_model(), p.grid);
        CHECK(action_total(q.u1, u1_model(), p.grid) ==
              doctest::Approx(lambda * lambda * s1).epsilon(1e-10));
        double s2 = action_total(p.su2, su2_model(3.5), p.grid);
        double s2_scaled = action_total(q.su2, su2_model(3.5), p.grid);
        CHECK(std::abs(s2_scaled - lambda * lambda * s2) > 1e-6 * s2);
    }
}

TEST_CASE("global sign flip preserves ho and u1 actions") {
    GaugePair p = paired_gauge_configs(43);
    GaugePair n = paired_gauge_configs(43);
    for (int c = 0; c < 4; ++c)
        for (int i = 0; i < n.u1.terms_per_component(); ++i)
            n.u1.set_coefficient(c, i, -p.u1.coefficient(c, i));
    CHECK(action_total(n.u1, u1_model(), p.grid) ==
          doctest::Approx(action_total(p.u1, u1_model(), p.grid)).epsilon(1e-12));
}

TEST_CASE("quadrature doubling moves the action by less than 0.1%") {
    Xoshiro256pp rng(47);
    std::vector<GaussianTerm> terms(10);
    for (GaussianTerm& t : terms) {
        t.coefficient = rng.uniform_range(-2.0, 2.0);
        t.center = Point{rng.uniform() * 20.0, 0, 0, 0};
        t.width = rng.uniform_range(0.3, 1.0);
    }
    Configuration cfg = ho_config(PeriodicDomain::line(20.0), terms);
    PeriodicDomain line = PeriodicDomain::line(20.0);
    QuadratureSpec spec = make_quadrature_spec(line, 0.3, QuadratureProfile::Fine);
    QuadratureSpec dbl = spec;
    dbl.nodes_per_axis[0] *= 2;
    double s = action_total(cfg, ho_model(), QuadratureGrid(line, spec));
    double s2 = action_total(cfg, ho_model(), QuadratureGrid(line, dbl));
    CHECK(std::abs(s2 - s) <= 1e-3 * std::abs(s));

    // the quartic commutator term halves the effective width, so the fine
    // profile (h <= xi/4) is where sub-0.1% accuracy is claimed; the coarse
    // profile is qualitative by design
    GaugePair p = paired_gauge_configs(53);
    QuadratureSpec bspec = make_quadrature_spec(p.grid.domain(), 1.0, QuadratureProfile::Fine);
    QuadratureSpec bdbl = bspec;
    for (int d = 0; d < 4; ++d) bdbl.nodes_per_axis[d] *= 2;
    double b = action_total(p.su2, su2_model(3.5), QuadratureGrid(p.grid.domain(), bspec));
    double b2 = action_total(p.su2, su2_model(3.5), QuadratureGrid(p.grid.domain(), bdbl));
    CHECK(std::abs(b2 - b) <= 1e-3 * std::abs(b));
}

TEST_CASE("incremental delta equals full recomputation") {
    SUBCASE("ho") {
        Xoshiro256pp rng(59);
        std::vector<GaussianTerm> terms(12);
        for (GaussianTerm& t : terms) {
            t.coefficient = rng.uniform_range(-2.0, 2.0);
            t.center = Point{rng.uniform() * 20.0, 0, 0, 0};
            t.width = rng.uniform_range(0.25, 1.0);
        }
        Configuration cfg = ho_config(PeriodicDomain::line(20.0), terms);
        QuadratureGrid grid = line_grid(20.0, 0.25);
        for (int it = 0; it < 50; ++it) {
            int i = static_cast<int>(rng.uniform_int(12));
            double delta = rng.uniform_range(-1.0, 1.0);
            double before = action_total(cfg, ho_model(), grid);
            double d_incr = action_delta(cfg, ho_model(), grid, 0, i, delta);
            cfg.set_coefficient(0, i, cfg.coefficient(0, i) + delta);
            double after = action_total(cfg, ho_model(), grid);
            CHECK(std::abs(d_incr - (after - before)) <= 1e-8 * (1.0 + std::abs(before)));
        }
        CHECK(action_delta(cfg, ho_model(), grid, 0, 3, 0.0) == 0.0);
    }
    SUBCASE("gauge") {
        GaugePair p = paired_gauge_configs(61);
        Xoshiro256pp rng(63);
        for (int it = 0; it < 15; ++it) {
            int comp = static_cast<int>(rng.uniform_int(12));
            int i = static_cast<int>(rng.uniform_int(p.su2.terms_per_component()));
            double delta = rng.uniform_range(-0.8, 0.8);
            double before = action_total(p.su2, su2_model(3.5), p.grid);
            double d_incr = action_delta(p.su2, su2_model(3.5), p.grid, comp, i, delta);
            p.su2.set_coefficient(comp, i, p.su2.coefficient(comp, i) + delta);
            double after = action_total(p.su2, su2_model(3.5), p.grid);
            CHECK(std::abs(d_incr - (after - before)) <= 1e-8 * (1.0 + std::abs(before)));
        }
    }
}

TEST_CASE("u1 sign flip of a lone term costs nothing") {
    // S is quadratic in the lone coefficient, so c -> -c crosses the
    // symmetric point c = 0 and lands at the same action
    PeriodicDomain box = PeriodicDomain::box4(4.0, 4.0);
    QuadratureGrid grid(box, make_quadrature_spec(box, 1.0, QuadratureProfile::Coarse));
    Configuration cfg(box, 4, 1e-10);
    for (int mu = 0; mu < 4; ++mu)
        cfg.add_term(mu, GaussianTerm{0.0, Point{1.0 + mu, 2.0, 1.5, 0.5}, 1.0});
    cfg.freeze();
    cfg.set_coefficient(1, 0, 0.9);
    double before = action_total(cfg, u1_model(), grid);
    CHECK(before > 0.0);
    double flip = action_delta(cfg, u1_model(), grid, 1, 0, -1.8);
    CHECK(std::abs(flip) <= 1e-10 * (1.0 + before));
    cfg.set_coefficient(1, 0, -0.9);
    CHECK(action_total(cfg, u1_model(), grid) == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("node cache apply_delta keeps values and gradients exact") {
    GaugePair p = paired_gauge_configs(67);
    NodeCache cache(p.grid, 12);
    cache.build(p.su2);
    Xoshiro256pp rng(69);
    PhysicsModel model = su2_model(3.5);
    double s = cache.action_total(model);
    for (int it = 0; it < 25; ++it) {
        int comp = static_cast<int>(rng.uniform_int(12));
        int i = static_cast<int>(rng.uniform_int(p.su2.terms_per_component()));
        double delta = rng.uniform_range(-0.5, 0.5);
        s += cache.action_delta(p.su2, model, comp, i, delta);
        cache.apply_delta(p.su2, comp, i, delta);
        p.su2.set_coefficient(comp, i, p.su2.coefficient(comp, i) + delta);
    }
    NodeCache fresh(p.grid, 12);
    fresh.build(p.su2);
    CHECK(s == doctest::Approx(fresh.action_total(model)).epsilon(1e-9));
}

TEST_CASE("quadrature spec and spacing guards") {
    PeriodicDomain line = PeriodicDomain::line(20.0);
    QuadratureSpec spec = make_quadrature_spec(line, 0.2, QuadratureProfile::Fine);
    CHECK(spec.nodes_per_axis[0] == 400);  // 20 / (0.2/4)
    QuadratureGrid grid(line, spec);
    CHECK(grid.spacing(0) == doctest::Approx(0.05));
    CHECK(grid.node_weight() == doctest::Approx(0.05));
    CHECK_NOTHROW(grid.require_spacing(0.2, QuadratureProfile::Fine));
    CHECK_THROWS_AS(grid.require_spacing(0.1, QuadratureProfile::Fine), std::invalid_argument);

    QuadratureSpec coarse = make_quadrature_spec(line, 0.2, QuadratureProfile::Coarse);
    CHECK(coarse.nodes_per_axis[0] == 200);
}

TEST_CASE("model kind mismatch is rejected") {
    GaussianTerm t{1.0, Point{10.0, 0, 0, 0}, 1.0};
    Configuration cfg = ho_config(PeriodicDomain::line(20.0), {&t, 1});
    QuadratureGrid grid = line_grid(20.0, 1.0);
    CHECK_THROWS_AS(action_total(cfg, u1_model(), grid), std::invalid_argument);
}

TEST_CASE("lagrangian density average normalizes by the right measure") {
    GaussianTerm t{1.0, Point{10.0, 0, 0, 0}, 1.0};
    Configuration cfg = ho_config(PeriodicDomain::line(20.0), {&t, 1});
    QuadratureGrid grid = line_grid(20.0, 1.0);
    double s = action_total(cfg, ho_model(), grid);
    CHECK(lagrangian_density_average(cfg, ho_model(), grid) == doctest::Approx(s / 20.0));

    GaugePair p = paired_gauge_configs(71);
    double sb = action_total(p.u1, u1_model(), p.grid);
    CHECK(lagrangian_density_average(p.u1, u1_model(), p.grid) ==
          doctest::Approx(sb / p.grid.domain().volume()));
}
