#pragma once

// Brute-force check of the interpolator: Gaussian projection onto a finite
// window of observed increments, with covariances taken from the densities.

#include "mmi/fourier.hpp"
#include "mmi/spectral_model.hpp"

#include <map>
#include <vector>

namespace mmi {

struct CovarianceTable {
    std::vector<double> increment;  // R_inc(0..max_lag) of the observed increments
    std::vector<double> noise;      // R_noise(0..max_lag) of the additive stationary part
    int max_lag = 0;
    double psd_margin = 0;          // smallest eigenvalue / trace over the sampled minors
    bool psd_ok = true;

    double inc(int m) const { return increment.at(static_cast<std::size_t>(m < 0 ? -m : m)); }
    double noise_at(int m) const { return noise.at(static_cast<std::size_t>(m < 0 ? -m : m)); }
};

CovarianceTable covariances(const ObservationModel& model, int max_lag, const QuadratureOptions& quadrature = {});

struct ProjectionResult {
    std::map<int, double> weights;   // coefficients on observed increments
    std::map<int, double> boundary;  // coefficients on raw values zeta(k), k = -mu n .. -1
    double mse = 0;
    double target_variance = 0;
    int window = 0;
    int rank = 0;
    double gram_margin = 0;          // smallest Gram eigenvalue / trace
};

ProjectionResult project(const ObservationModel& model, const std::vector<double>& a, int window,
                         const QuadratureOptions& quadrature = {});

} // namespace mmi
