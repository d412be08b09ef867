#pragma once

#include "mmi/fourier.hpp"
#include "mmi/increment_algebra.hpp"
#include "mmi/spectral_model.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <vector>

namespace mmi {

struct SolverOptions {
    QuadratureOptions quadrature;
    bool compute_weights = true;
    double weight_tol = 1e-8;   // orthogonality and tail tolerance
    int initial_truncation = 32;
    int max_truncation = 10000;
    double mse_tol = 1e-6;      // relative gap allowed between the two MSE routes
};

struct IncrementWeights {
    std::map<int, double> weights;  // w(k) for k <= -1 and k >= N + mu n + 1
    int truncation = 0;
    double orthogonality = 0;  // max |w(k)| over 0 <= k <= N + mu n
    double tail = 0;           // max |w(k)| beyond the truncation
    double imaginary = 0;      // max |Im w(k)|
    int points = 0;
};

struct MseRoutes {
    double quadratic = 0;
    double frequency = 0;
    double relative_gap = 0;
    bool agree = true;
    int points = 0;
};

enum class SolutionKind { Standard, NoiseFree, Cointegrated, SinglePoint };
std::string to_string(SolutionKind kind);

class InterpolationSolution {
public:
    SolutionKind kind() const { return kind_; }
    const ObservationModel& model() const { return model_; }
    const IncrementSpec& spec() const { return model_.spec(); }
    const std::vector<double>& functional() const { return a_; }
    const CoefficientBundle<double>& bundle() const { return bundle_; }
    const FourierMatrixSet& matrices() const { return matrices_; }
    const Eigen::VectorXcd& c() const { return c_; }
    // The vector the system is solved against: rhs - T a_mu.
    const Eigen::VectorXcd& right_side() const { return r_; }
    double mse() const { return routes_.quadratic; }
    const MseRoutes& mse_routes() const { return routes_; }
    double system_residual() const { return system_residual_; }
    int point() const { return point_; }  // gap index for single-point solutions, else -1

    // Increment-domain transfer function: the estimate is the stochastic
    // integral of this function against the observed increments, plus the
    // boundary term. Includes the 1/beta factor in the cointegrated case.
    cplx transfer(double lambda) const;
    // Spectral characteristic h(lambda) = (1 - e^{-i lambda mu})^n / (i lambda)^n * transfer.
    cplx characteristic(double lambda) const;

    bool has_weights() const { return weights_.has_value(); }
    const IncrementWeights& weights() const;
    // Coefficients on raw values zeta(k), k = -mu n .. -1.
    std::map<int, double> boundary_weights() const;
    // Combined coefficients on raw observations zeta(t).
    std::map<int, double> time_weights(double drop_below = 1e-13) const;

    // Pieces of the frequency-domain formulas at one frequency.
    struct Pieces {
        SpectralSample sample;
        cplx A, B, C, E;
    };
    Pieces pieces(double lambda) const;
    Pieces pieces(double lambda, const SpectralSample& sample) const;

private:
    friend class SolutionBuilder;
    SolutionKind kind_ = SolutionKind::Standard;
    ObservationModel model_;
    std::vector<double> a_;
    CoefficientBundle<double> bundle_;
    FourierMatrixSet matrices_;
    Eigen::VectorXcd c_, r_;
    MseRoutes routes_;
    double system_residual_ = 0;
    int point_ = -1;
    std::optional<IncrementWeights> weights_;
    InterpolationSolution(const ObservationModel& model) : model_(model) {}
};

// Observations zeta(t) on integer times; the gap {0..N} must be absent.
struct ObservationSeries {
    std::map<int, double> values;
    double at(int t) const;
};

InterpolationSolution solve(const ObservationModel& model, const std::vector<double>& a,
                            const SolverOptions& options = {});
InterpolationSolution solve_noise_free(const ObservationModel& model, const std::vector<double>& a,
                                       const SolverOptions& options = {});
InterpolationSolution solve_cointegrated(const ObservationModel& model, const std::vector<double>& a,
                                         const SolverOptions& options = {});
// Single missing value at gap index p, assembled from d_p and the sparse T_p.
InterpolationSolution solve_point(const ObservationModel& model, int p, const SolverOptions& options = {});

// Solve on already built matrices (used by the iterative minimax solver).
InterpolationSolution solve_with_matrices(const ObservationModel& model, const std::vector<double>& a,
                                          FourierMatrixSet matrices, const SolverOptions& options = {});

IncrementWeights increment_weights(const InterpolationSolution& sol, int K, double tol,
                                   const QuadratureOptions& quadrature = {});
// Adaptive truncation: doubles K from the initial value until the tail is below tol.
IncrementWeights increment_weights_adaptive(const InterpolationSolution& sol, const SolverOptions& options);

cplx spectral_characteristic(const InterpolationSolution& sol, double lambda);
double mse(const InterpolationSolution& sol);
// Frequency-domain route for the MSE.
double mse_frequency(const InterpolationSolution& sol, const QuadratureOptions& quadrature = {});

double estimate(const InterpolationSolution& sol, const ObservationSeries& series);

struct PointEstimate {
    double value = 0;
    double mse = 0;
};
PointEstimate estimate_point(const ObservationModel& model, int p, const ObservationSeries& series,
                             const SolverOptions& options = {});

// Increments zeta^{(n)}(k, mu) = sum_l (-1)^l C(n, l) zeta(k - l mu).
double increment_of(const ObservationSeries& series, int k, const IncrementSpec& spec);

} // namespace mmi
