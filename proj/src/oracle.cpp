#include "gpimc/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "gpimc/rng.hpp"

namespace gpimc {

double lattice_ho_action(std::span<const double> q, double a, double m, double omega) {
    const std::size_t n = q.size();
    if (n < 2) throw std::invalid_argument("lattice action: need at least two sites");
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dq = q[(i + 1) % n] - q[i];
        s += 0.5 * m * dq * dq / a + 0.5 * a * m * omega * omega * q[i] * q[i];
    }
    return s;
}

LatticeHoResult lattice_ho_simulate(int n_sites, double a, double amplitude_cutoff, long n_sweeps,
                                    int n_ensemble, std::uint64_t seed, double m, double omega,
                                    int histogram_bins, double histogram_range) {
    if (n_sites < 2 || !(a > 0.0) || !(amplitude_cutoff > 0.0) || n_sweeps < 0 || n_ensemble < 1)
        throw std::invalid_argument("lattice_ho_simulate: bad parameters");
    std::vector<double> vbar(static_cast<std::size_t>(n_ensemble));
    std::vector<double> q2(static_cast<std::size_t>(n_ensemble));
    Histogram hist(histogram_bins, -histogram_range, histogram_range);
    long accepted = 0, proposed = 0;

    const double w2 = omega * omega;
    for (int chain = 0; chain < n_ensemble; ++chain) {
        Xoshiro256pp rng = Xoshiro256pp::for_chain(seed, static_cast<std::uint64_t>(chain));
        std::vector<double> q(static_cast<std::size_t>(n_sites));
        for (double& qi : q) qi = rng.uniform_range(-amplitude_cutoff, amplitude_cutoff);
        for (long sweep = 0; sweep < n_sweeps; ++sweep) {
            for (int i = 0; i < n_sites; ++i) {
                const double qp = q[(i + 1) % n_sites];
                const double qm = q[(i - 1 + n_sites) % n_sites];
                const double old = q[static_cast<std::size_t>(i)];
                const double cand = old + rng.uniform_range(-amplitude_cutoff, amplitude_cutoff);
                // only the two neighbor springs and the on-site potential move
                const double ds = 0.5 * m / a *
                                      ((cand - qp) * (cand - qp) - (old - qp) * (old - qp) +
                                       (cand - qm) * (cand - qm) - (old - qm) * (old - qm)) +
                                  0.5 * a * m * w2 * (cand * cand - old * old);
                ++proposed;
                const bool accept = ds <= 0.0 ? true : rng.uniform() < std::exp(-ds);
                if (accept) {
                    q[static_cast<std::size_t>(i)] = cand;
                    ++accepted;
                }
            }
        }
        double sq = 0.0;
        for (double qi : q) {
            sq += qi * qi;
            hist.add(qi);
        }
        sq /= n_sites;
        q2[static_cast<std::size_t>(chain)] = sq;
        vbar[static_cast<std::size_t>(chain)] = 0.5 * m * w2 * sq;
    }

    LatticeHoResult out;
    out.potential_avg = mean_and_error(vbar);
    out.q_sq_avg = mean_and_error(q2);
    out.histogram = std::move(hist);
    out.acceptance_rate = proposed > 0 ? static_cast<double>(accepted) / proposed : 0.0;
    return out;
}

double lattice_ho_exact_q_sq(int n_sites, double a, double m, double omega) {
    if (n_sites < 2 || !(a > 0.0)) throw std::invalid_argument("lattice exact: bad parameters");
    // quadratic action S = (1/2) q^T K q with eigenvalues
    // lambda_k = (m/a)(2 - 2 cos(2 pi k / N)) + m a w^2; <q^2> = (1/N) sum 1/lambda_k
    double sum = 0.0;
    for (int k = 0; k < n_sites; ++k) {
        const double c = std::cos(2.0 * std::numbers::pi * k / n_sites);
        sum += 1.0 / (m / a * (2.0 - 2.0 * c) + m * a * omega * omega);
    }
    return sum / n_sites;
}

GroundStateReference analytic_ground_state(double m, double omega) {
    if (!(m > 0.0) || !(omega > 0.0))
        throw std::invalid_argument("analytic_ground_state: bad parameters");
    return GroundStateReference{0.25 * omega, 1.0 / (2.0 * m * omega)};
}

double ground_state_density(double q, double m, double omega) {
    const double mw = m * omega;
    return std::sqrt(mw / std::numbers::pi) * std::exp(-mw * q * q);
}

double analytic_single_gaussian_action(double c, double xi, double m, double omega) {
    if (!(xi > 0.0)) throw std::invalid_argument("analytic action: width must be positive");
    const double root_pi = std::sqrt(std::numbers::pi);
    return c * c * root_pi / (2.0 * std::numbers::sqrt2) * m * (1.0 / xi + omega * omega * xi);
}

}  // namespace gpimc
