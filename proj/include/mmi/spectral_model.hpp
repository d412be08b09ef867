#pragma once

#include "mmi/increment_algebra.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mmi {

// Midpoint grid on [-pi, pi): lambda_j = -pi + (j + 1/2) 2 pi / M.
std::vector<double> midpoint_grid(int M);
double midpoint_node(int M, int j);
bool is_power_of_two(int M);

// |1 - e^{i lambda mu}|^{2n}
double increment_power(double lambda, int n, int mu);
// |1 - e^{i lambda mu}|^{2n} / lambda^{2n}, continuous at 0 with value mu^{2n}.
double increment_ratio(double lambda, int n, int mu);

// A spectral density. Rational densities are stored through the density psi
// of an underlying stationary sequence:
//   psi(lambda) = scale |num(e^{-i lambda})|^2 / |den(e^{-i lambda})|^2,
//   f(lambda)   = lambda^{2n} psi(lambda) / |1 - e^{-i lambda mu}|^{2n},
// with (n, mu) the increment factor (n = 0 for a stationary density).
class Density {
public:
    enum class Kind { ReducedRational, GridTabulated, Composite };

    Density();  // the zero density

    static Density zero();
    static Density rational(double scale, std::vector<double> numerator,
                            std::vector<double> denominator, int n = 0, int mu = 1);
    static Density constant(double value);
    // Samples of f at the nodes of midpoint_grid(samples.size()).
    static Density grid(std::vector<double> samples);
    // weight * signal + lambda^{2n} * noise
    static Density composite(double weight, const Density& signal, const Density& noise, int n);

    Kind kind() const;
    bool is_zero() const;

    double operator()(double lambda) const;
    // |1 - e^{i lambda mu}|^{2n} f(lambda) / lambda^{2n}
    double reduced(double lambda, int n, int mu) const;

    // Rational accessors.
    double scale() const;
    const std::vector<double>& numerator() const;
    const std::vector<double>& denominator() const;
    int factor_n() const;
    int factor_mu() const;

    // Grid accessors.
    int grid_size() const;
    const std::vector<double>& samples() const;

    // Composite accessors.
    double weight() const;
    const Density& part_signal() const;
    const Density& part_noise() const;
    int composite_n() const;

    // Largest native grid among the pieces, if any piece is tabulated.
    std::optional<int> native_grid() const;

    // psi = scale / |den|^2 with the given increment factor.
    bool is_autoregressive(int n, int mu) const;

    std::string describe() const;

private:
    struct Rep;
    std::shared_ptr<const Rep> rep_;
    explicit Density(std::shared_ptr<const Rep> rep);
};

enum class ObservationMode { SignalPlusNoise, NoiseFree, Cointegrated };
std::string to_string(ObservationMode mode);

// Reduced quantities at one frequency.
//   psi      : density of the signal increments
//   noise    : g (standard) or rho = (p - beta^2 f) / lambda^{2n} (cointegrated)
//   observed : psi + |1 - e^{i lambda mu}|^{2n} g, or the reduced form of p
//   power    : |1 - e^{i lambda mu}|^{2n}
struct SpectralSample {
    double psi = 0;
    double noise = 0;
    double observed = 0;
    double power = 0;
};

class ObservationModel {
public:
    static ObservationModel signal_plus_noise(IncrementSpec spec, Density f, Density g);
    static ObservationModel noise_free(IncrementSpec spec, Density f);
    static ObservationModel cointegrated(IncrementSpec spec, Density f, Density p, double beta);

    const IncrementSpec& spec() const { return spec_; }
    ObservationMode mode() const { return mode_; }
    const Density& signal() const { return f_; }
    const Density& noise() const { return g_; }
    const Density& observed_density() const { return p_; }
    double beta() const { return beta_; }

    SpectralSample sample(double lambda) const;
    std::vector<SpectralSample> sample_grid(int M) const;

    // Grid size every tabulated density shares; throws if they disagree.
    std::optional<int> native_grid() const;

    // g vanishes and psi is scale / |den|^2, so 1/observed is a trigonometric
    // polynomial with exactly computable coefficients.
    bool has_closed_form() const;

private:
    IncrementSpec spec_;
    ObservationMode mode_ = ObservationMode::SignalPlusNoise;
    Density f_, g_, p_;
    double beta_ = 1.0;
};

struct MinimalityReport {
    bool satisfied = false;
    bool converged = false;
    bool divergent = false;
    bool bounded_below = false;
    double integral = 0;  // estimate of the integral of r over [-pi, pi)
    int points = 0;
    std::string message;
};

// r(lambda) = 1 / observed(lambda) with the lambda = 0 factor cancelled.
std::function<double(double)> reduced_integrand(const ObservationModel& model);

MinimalityReport minimality_check(const ObservationModel& model, double tol = 1e-10);

} // namespace mmi
