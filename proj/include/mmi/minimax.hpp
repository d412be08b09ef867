#pragma once

// Least favorable spectral densities for the admissible classes and the
// saddle-point check of the resulting robust estimate.

#include "mmi/interpolator.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mmi {

enum class ClassKind {
    LowerReciprocalBound,  // (1/2pi) int 1/x >= P for each free component
    EpsNeighborhood        // signal in an L2 ball, second component in an L1 ball
};
std::string to_string(ClassKind kind);

struct ComponentSpec {
    bool known = false;  // fixed at the reference density
    Density reference;   // known density, or ball center for the eps class
    double bound = 0;    // P for the reciprocal bound, eps for the balls
};

// The second component is the noise g, or the observed density p when
// cointegrated is set.
struct DensityClass {
    ClassKind kind = ClassKind::EpsNeighborhood;
    ComponentSpec signal;
    ComponentSpec second;
    bool cointegrated = false;
    double beta = 1.0;

    void validate() const;
};

struct MinimaxOptions {
    int grid = 1024;
    double tol = 1e-6;
    int max_iter = 500;
    double damping = 0.5;
    double min_damping = 1.0 / 128;
    double ceiling = 1e8;  // cap for densities the reciprocal-bound relations send to infinity
    SolverOptions solver;
};

struct ComponentDiagnostics {
    bool free = false;
    double alpha = 0;
    double relation = 0;     // sup-norm residual of the pointwise optimality relation
    double constraint = 0;   // relative residual of the integral constraint
    double slackness = 0;    // constraint residual where alpha > 0
    int clamped = 0;         // grid points held at the ceiling
    double sup_h = 0;        // grid sup of the square root of the frozen weight
};

struct LeastFavorablePair {
    int grid = 0;
    std::vector<double> f0;       // signal samples on midpoint_grid(grid)
    std::vector<double> second0;  // g0, or p0 when cointegrated
    std::vector<double> gamma;    // eps class: subgradient of the L1 ball, |gamma| <= 1
    double alpha1 = 0, alpha2 = 0;
    ComponentDiagnostics signal, second;
    double fixed_point_residual = 0;
    int iterations = 0;
    bool converged = false;
    bool ascent_ok = true;        // no accepted step lowered the objective
    int ascent_violations = 0;
    bool boundary_active = false;
    bool bounded = true;          // frozen weights stay finite on the grid
    std::vector<double> objective_history;
    std::optional<InterpolationSolution> robust_solution;
    std::string message;

    double objective() const { return robust_solution ? robust_solution->mse() : 0.0; }
    Density signal_density() const { return Density::grid(f0); }
    Density second_density() const { return Density::grid(second0); }
};

LeastFavorablePair least_favorable(const DensityClass& cls, const IncrementSpec& spec, const std::vector<double>& a,
                                   const MinimaxOptions& options = {});
LeastFavorablePair least_favorable_cointegrated(const DensityClass& cls, const IncrementSpec& spec,
                                                const std::vector<double>& a, double beta,
                                                const MinimaxOptions& options = {});

// Mean-square error of the estimate built from robust when the true densities
// are (f, second); linear in the densities.
double delta_under(const InterpolationSolution& robust, const Density& f, const Density& second);

// Frozen weights of that linear functional at lambda: the value is
// (1/2pi) int W_signal f + W_second second (plus a positive-part correction
// in the cointegrated case when p < beta^2 f).
struct FrozenWeights {
    double signal = 0;
    double second = 0;
};
FrozenWeights frozen_weights(const InterpolationSolution& robust, double lambda);

struct SaddleReport {
    int samples = 0;
    int violations = 0;
    double max_violation = -INFINITY;
    double delta0 = 0;
    int minimality_failures = 0;
    double tol = 1e-6;
    bool passed = true;
};

SaddleReport verify_saddle(const LeastFavorablePair& pair, const DensityClass& cls, int samples, std::uint64_t seed,
                           double tol = 1e-6);

// Rebuild the pair after scaling the multipliers and reapplying the pointwise
// relations once; used as a negative control for the saddle check.
LeastFavorablePair with_scaled_multipliers(const LeastFavorablePair& pair, const DensityClass& cls,
                                           const IncrementSpec& spec, const std::vector<double>& a,
                                           double factor1, double factor2, const MinimaxOptions& options = {});

} // namespace mmi
