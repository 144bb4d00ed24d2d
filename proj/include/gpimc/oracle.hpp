#pragma once

// Independent cross-checks for the continuum sampler: a conventional
// discretized-time lattice Metropolis simulation of the harmonic oscillator,
// its exact mode-sum equilibrium value, and closed-form targets.

#include <cstdint>
#include <span>

#include "gpimc/observables.hpp"
#include "gpimc/stats.hpp"

namespace gpimc {

// S = sum_i a [ (m/2) ((q_{i+1}-q_i)/a)^2 + (m w^2/2) q_i^2 ], periodic
double lattice_ho_action(std::span<const double> q, double a, double m, double omega);

struct LatticeHoResult {
    MeanErr potential_avg;  // (m w^2/2) <q^2> over the ensemble
    MeanErr q_sq_avg;
    Histogram histogram;  // pooled site values of the final configurations
    double acceptance_rate = 0.0;
};

// n_ensemble independent chains of site-by-site Metropolis sweeps from a hot
// start; per-chain time averages of the final configuration enter the
// ensemble statistics, as in the continuum runs.
LatticeHoResult lattice_ho_simulate(int n_sites, double a, double amplitude_cutoff, long n_sweeps,
                                    int n_ensemble, std::uint64_t seed, double m = 1.0,
                                    double omega = 1.0, int histogram_bins = 80,
                                    double histogram_range = 4.0);

// exact <q^2> of the periodic lattice action by Gaussian mode sum
double lattice_ho_exact_q_sq(int n_sites, double a, double m = 1.0, double omega = 1.0);

struct GroundStateReference {
    double potential_avg = 0.0;  // <V> = omega/4 (hbar = 1)
    double q_sq = 0.0;           // <q^2> = 1/(2 m omega)
};

GroundStateReference analytic_ground_state(double m, double omega);

// |psi_0(q)|^2 of the harmonic oscillator ground state
double ground_state_density(double q, double m, double omega);

// S of a single periodic Gaussian bump far from self-images:
// c^2 sqrt(pi) / (2 sqrt(2)) * m * (1/xi + omega^2 xi)
double analytic_single_gaussian_action(double c, double xi, double m, double omega);

}  // namespace gpimc
