#include "mmi/interpolator.hpp"

#include "mmi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mmi {

namespace {

cplx polynomial_at(const std::vector<double>& coef, double lambda) {
    // sum_k coef(k) e^{i lambda k}
    const cplx z = std::polar(1.0, lambda);
    cplx acc(0, 0);
    for (auto it = coef.rbegin(); it != coef.rend(); ++it) acc = acc * z + *it;
    return acc;
}

cplx polynomial_at(const Eigen::VectorXcd& coef, double lambda) {
    const cplx z = std::polar(1.0, lambda);
    cplx acc(0, 0);
    for (Eigen::Index k = coef.size() - 1; k >= 0; --k) acc = acc * z + coef[k];
    return acc;
}

double beta_of(const ObservationModel& model) {
    return model.mode() == ObservationMode::Cointegrated ? model.beta() : 1.0;
}

// One quadrature of a real integrand over [-pi, pi) divided by 2 pi; grid
// doubling unless the model is tabulated on a native grid.
template <class F>
double mean_over_grid(const ObservationModel& model, const QuadratureOptions& q, F&& integrand, int* points) {
    auto at = [&](int M) {
        double sum = 0;
        for (int j = 0; j < M; ++j) sum += integrand(midpoint_node(M, j));
        return sum / M;
    };
    if (auto M = model.native_grid()) {
        if (points) *points = *M;
        return at(*M);
    }
    int M = std::max(q.initial_points, 64);
    double prev = at(M);
    while (2 * M <= q.max_points) {
        M *= 2;
        const double next = at(M);
        const bool done = std::abs(next - prev) <= q.tol * std::abs(next) || next == prev;
        prev = next;
        if (done) break;
    }
    if (points) *points = M;
    return prev;
}

} // namespace

std::string to_string(SolutionKind kind) {
    switch (kind) {
    case SolutionKind::Standard: return "standard";
    case SolutionKind::NoiseFree: return "noise_free";
    case SolutionKind::Cointegrated: return "cointegrated";
    case SolutionKind::SinglePoint: return "single_point";
    }
    return "unknown";
}

double ObservationSeries::at(int t) const {
    auto it = values.find(t);
    if (it == values.end())
        throw MissingObservationError("observation at time " + std::to_string(t) + " is required", t);
    return it->second;
}

double increment_of(const ObservationSeries& series, int k, const IncrementSpec& spec) {
    double acc = 0;
    for (int l = 0; l <= spec.n; ++l) {
        const double term = static_cast<double>(binomial(spec.n, l)) * series.at(k - l * spec.mu);
        acc += (l % 2 == 0) ? term : -term;
    }
    return acc;
}

InterpolationSolution::Pieces InterpolationSolution::pieces(double lambda) const {
    return pieces(lambda, model_.sample(lambda));
}

InterpolationSolution::Pieces InterpolationSolution::pieces(double lambda, const SpectralSample& sample) const {
    Pieces p;
    p.sample = sample;
    p.A = polynomial_at(a_, lambda);
    p.B = polynomial_at(bundle_.b, lambda);
    p.C = polynomial_at(c_, lambda);
    p.E = std::pow(cplx(1.0, 0.0) - std::polar(1.0, lambda * spec().mu), spec().n);
    return p;
}

cplx InterpolationSolution::transfer(double lambda) const {
    const Pieces p = pieces(lambda);
    if (!(p.sample.observed > 0.0)) throw PoleError("observed density vanishes", lambda);
    const cplx G = p.B - (p.A * p.E * p.sample.noise + p.C) / p.sample.observed;
    return G / beta_of(model_);
}

cplx InterpolationSolution::characteristic(double lambda) const {
    // (1 - e^{-i lambda mu}) / (i lambda) = e^{-i lambda mu / 2} * 2 sin(lambda mu / 2) / lambda
    const int mu = spec().mu;
    const double amp = lambda == 0.0 ? static_cast<double>(mu) : 2.0 * std::sin(0.5 * lambda * mu) / lambda;
    const cplx kernel = std::pow(std::polar(amp, -0.5 * lambda * mu), spec().n);
    return kernel * transfer(lambda);
}

const IncrementWeights& InterpolationSolution::weights() const {
    if (!weights_) throw ValidationError("solution was computed without increment weights");
    return *weights_;
}

std::map<int, double> InterpolationSolution::boundary_weights() const {
    std::map<int, double> out;
    const double beta = beta_of(model_);
    const int nb = spec().boundary();
    for (int k = -nb; k <= -1; ++k) out[k] = -bundle_.v[k + nb] / beta;
    return out;
}

std::map<int, double> InterpolationSolution::time_weights(double drop_below) const {
    std::map<int, double> out;
    const auto& sp = spec();
    for (const auto& [k, w] : weights().weights) {
        for (int l = 0; l <= sp.n; ++l) {
            const double term = static_cast<double>(binomial(sp.n, l)) * w;
            out[k - l * sp.mu] += (l % 2 == 0) ? term : -term;
        }
    }
    for (const auto& [k, w] : boundary_weights()) out[k] += w;
    double scale = 0;
    for (const auto& [k, w] : out) scale = std::max(scale, std::abs(w));
    for (auto it = out.begin(); it != out.end();) {
        if (std::abs(it->second) <= drop_below * std::max(scale, 1.0)) it = out.erase(it);
        else ++it;
    }
    return out;
}

class SolutionBuilder {
public:
    static InterpolationSolution build(SolutionKind kind, const ObservationModel& model,
                                       const std::vector<double>& a, FourierMatrixSet matrices,
                                       const SolverOptions& options, int point);
};

InterpolationSolution SolutionBuilder::build(SolutionKind kind, const ObservationModel& model,
                                             const std::vector<double>& a, FourierMatrixSet matrices,
                                             const SolverOptions& options, int point) {
    const auto& spec = model.spec();
    check_functional_length(spec, a.size());
    for (double x : a)
        if (!std::isfinite(x)) throw ValidationError("functional has a non-finite coefficient");

    InterpolationSolution sol(model);
    sol.kind_ = kind;
    sol.a_ = a;
    sol.point_ = point;
    sol.bundle_ = coefficient_bundle(spec, a);
    sol.matrices_ = std::move(matrices);

    const int D = spec.dimension();
    const Eigen::MatrixXcd P = sol.matrices_.P.dense();
    const Eigen::MatrixXcd T = sol.matrices_.T.dense();
    Eigen::VectorXcd rhs(D), amu(D);
    for (int k = 0; k < D; ++k) {
        rhs[k] = sol.bundle_.rhs[k];
        amu[k] = sol.bundle_.a_mu[k];
    }
    Eigen::VectorXcd Ta(D);
    if (point >= 0) {
        // Sparse T_p: columns p + mu k, k = 0..n, against a_n(k) = (-1)^k C(n, k).
        Ta.setZero();
        Eigen::VectorXcd dp = Eigen::VectorXcd::Zero(D);
        for (int k = 0; k <= point; ++k) dp[k] = static_cast<double>(sol.bundle_.d[point - k]);
        for (int l = 0; l < D; ++l)
            for (int k = 0; k <= spec.n; ++k) {
                const double an = static_cast<double>(binomial(spec.n, k)) * ((k % 2 == 0) ? 1.0 : -1.0);
                Ta[l] += T(l, point + spec.mu * k) * an;
            }
        rhs = dp;
    } else {
        Ta = T * amu;
    }
    sol.r_ = rhs - Ta;

    Eigen::LLT<Eigen::MatrixXcd> llt(P);
    if (llt.info() != Eigen::Success)
        throw NumericalError("Cholesky factorization of P failed (condition estimate " +
                                 std::to_string(sol.matrices_.condition) + ")",
                             "indefinite");
    Eigen::VectorXcd c = llt.solve(sol.r_);
    for (int round = 0; round < 2; ++round) c += llt.solve(sol.r_ - P * c);
    sol.c_ = c;
    const double denom = rhs.norm() + Ta.norm();
    sol.system_residual_ = denom > 0 ? (P * c - sol.r_).norm() / denom : (P * c - sol.r_).norm();

    const double beta = beta_of(model);
    Eigen::VectorXcd av(spec.N + 1);
    for (int k = 0; k <= spec.N; ++k) av[k] = a[k];
    const double quad_r = sol.r_.dot(c).real();  // r^H c
    double quad_q = 0;
    if (point >= 0) quad_q = sol.matrices_.Q.coefficient(0).real();
    else quad_q = av.dot(sol.matrices_.Q.dense() * av).real();
    sol.routes_.quadratic = quad_r / (beta * beta) + quad_q;

    sol.routes_.frequency = mse_frequency(sol, options.quadrature);
    const double scale = std::max(std::abs(sol.routes_.quadratic), std::abs(sol.routes_.frequency));
    sol.routes_.relative_gap =
        scale > 0 ? std::abs(sol.routes_.quadratic - sol.routes_.frequency) / scale : 0.0;
    sol.routes_.agree = sol.routes_.relative_gap <= options.mse_tol || scale < 1e-14;

    if (options.compute_weights) sol.weights_ = increment_weights_adaptive(sol, options);
    return sol;
}

double mse_frequency(const InterpolationSolution& sol, const QuadratureOptions& quadrature) {
    const double beta = beta_of(sol.model());
    const double b2 = beta * beta;
    const bool coint = sol.model().mode() == ObservationMode::Cointegrated;
    auto integrand = [&](double lambda) {
        const auto p = sol.pieces(lambda);
        const auto& s = p.sample;
        const cplx Y = p.A * p.E * s.noise + p.C;
        const cplx Z = b2 * p.A * s.psi - std::conj(p.E) * p.C;
        double v = (s.psi * std::norm(Y) + s.noise * std::norm(Z) / b2) / (s.observed * s.observed);
        // Positive part of the stationary remainder inside the Q integrand.
        if (coint && s.noise < 0) v += s.psi * (-s.noise) * std::norm(p.A) / s.observed;
        return v;
    };
    int points = 0;
    return mean_over_grid(sol.model(), quadrature, integrand, &points);
}

IncrementWeights increment_weights(const InterpolationSolution& sol, int K, double tol,
                                   const QuadratureOptions& quadrature) {
    if (K < 1) throw ValidationError("increment_weights needs K >= 1");
    const int D = sol.spec().dimension();
    IncrementWeights out;
    out.truncation = K;
    // w(k) = (1/2 pi) int e^{-i lambda k} G = c(-k) with c the e^{+i lambda k} coefficients.
    const int kmin = -(D - 1 + 2 * K), kmax = 2 * K;
    std::vector<cplx> c;
    if (auto M = sol.model().native_grid()) {
        if (kmax - kmin + 1 > *M)
            throw ConvergenceError("truncation " + std::to_string(K) + " exceeds what the native grid resolves",
                                   INFINITY);
        std::vector<cplx> samples(*M);
        for (int j = 0; j < *M; ++j) samples[j] = sol.transfer(midpoint_node(*M, j));
        c = coefficients_from_samples(samples, kmin, kmax);
        out.points = *M;
    } else {
        auto series = fourier_coefficients([&sol](double l) { return sol.transfer(l); }, kmin, kmax, quadrature);
        c = std::move(series.values);
        out.points = series.points;
    }
    auto w = [&](int k) { return c[-k - kmin]; };
    double scale = 0;
    for (int k = -2 * K; k <= D - 1 + 2 * K; ++k) {
        out.imaginary = std::max(out.imaginary, std::abs(w(k).imag()));
        scale = std::max(scale, std::abs(w(k)));
        if (k >= 0 && k <= D - 1) out.orthogonality = std::max(out.orthogonality, std::abs(w(k)));
        if (k < -K || k > D - 1 + K) out.tail = std::max(out.tail, std::abs(w(k)));
    }
    if (out.orthogonality > tol)
        throw NumericalError("orthogonality violated: transfer coefficient " + std::to_string(out.orthogonality) +
                                 " inside the gap",
                             "orthogonality");
    if (out.imaginary > 1e-10 * std::max(1.0, scale))
        throw NumericalError("weights have imaginary parts up to " + std::to_string(out.imaginary), "complex_weights");
    const double drop = 1e-13 * std::max(1.0, scale);
    for (int k = -K; k <= D - 1 + K; ++k) {
        if (k >= 0 && k <= D - 1) continue;
        const double v = w(k).real();
        if (std::abs(v) > drop) out.weights[k] = v;
    }
    return out;
}

IncrementWeights increment_weights_adaptive(const InterpolationSolution& sol, const SolverOptions& options) {
    int K = std::max(options.initial_truncation, 1);
    const int D = sol.spec().dimension();
    if (auto M = sol.model().native_grid()) K = std::min(K, std::max((*M - D) / 4, 1));
    while (true) {
        IncrementWeights w = increment_weights(sol, K, options.weight_tol, options.quadrature);
        if (w.tail < options.weight_tol) return w;
        int next = 2 * K;
        if (auto M = sol.model().native_grid()) next = std::min(next, (*M - D) / 4);
        if (next > options.max_truncation || next <= K)
            throw ConvergenceError("weight tail " + std::to_string(w.tail) + " above tolerance at truncation " +
                                       std::to_string(K),
                                   w.tail);
        K = next;
    }
}

InterpolationSolution solve_with_matrices(const ObservationModel& model, const std::vector<double>& a,
                                          FourierMatrixSet matrices, const SolverOptions& options) {
    SolutionKind kind = SolutionKind::Standard;
    if (model.mode() == ObservationMode::NoiseFree) kind = SolutionKind::NoiseFree;
    if (model.mode() == ObservationMode::Cointegrated) kind = SolutionKind::Cointegrated;
    return SolutionBuilder::build(kind, model, a, std::move(matrices), options, -1);
}

InterpolationSolution solve(const ObservationModel& model, const std::vector<double>& a,
                            const SolverOptions& options) {
    switch (model.mode()) {
    case ObservationMode::NoiseFree: return solve_noise_free(model, a, options);
    case ObservationMode::Cointegrated: return solve_cointegrated(model, a, options);
    case ObservationMode::SignalPlusNoise: break;
    }
    check_functional_length(model.spec(), a.size());
    return SolutionBuilder::build(SolutionKind::Standard, model, a, build_standard(model, options.quadrature),
                                  options, -1);
}

InterpolationSolution solve_noise_free(const ObservationModel& model, const std::vector<double>& a,
                                       const SolverOptions& options) {
    if (model.mode() == ObservationMode::Cointegrated)
        throw ValidationError("solve_noise_free needs a model without a cointegration partner");
    if (model.mode() == ObservationMode::SignalPlusNoise && !model.noise().is_zero())
        throw ValidationError("solve_noise_free needs a zero noise density");
    check_functional_length(model.spec(), a.size());
    const auto nf = ObservationModel::noise_free(model.spec(), model.signal());
    return SolutionBuilder::build(SolutionKind::NoiseFree, nf, a, build_noise_free(nf, options.quadrature),
                                  options, -1);
}

InterpolationSolution solve_cointegrated(const ObservationModel& model, const std::vector<double>& a,
                                         const SolverOptions& options) {
    if (model.mode() != ObservationMode::Cointegrated)
        throw ValidationError("solve_cointegrated needs a cointegrated model");
    check_functional_length(model.spec(), a.size());
    return SolutionBuilder::build(SolutionKind::Cointegrated, model, a,
                                  build_cointegrated(model, options.quadrature), options, -1);
}

InterpolationSolution solve_point(const ObservationModel& model, int p, const SolverOptions& options) {
    if (p < 0 || p > model.spec().N)
        throw ValidationError("point " + std::to_string(p) + " is outside the gap 0.." + std::to_string(model.spec().N));
    std::vector<double> e(model.spec().N + 1, 0.0);
    e[p] = 1.0;
    return SolutionBuilder::build(SolutionKind::SinglePoint, model, e, build_matrices(model, options.quadrature),
                                  options, p);
}

cplx spectral_characteristic(const InterpolationSolution& sol, double lambda) { return sol.characteristic(lambda); }

double mse(const InterpolationSolution& sol) { return sol.mse(); }

double estimate(const InterpolationSolution& sol, const ObservationSeries& series) {
    const auto& sp = sol.spec();
    for (int t = 0; t <= sp.N; ++t)
        if (series.values.count(t))
            throw ValidationError("series contains a value inside the gap at time " + std::to_string(t));
    double acc = 0;
    for (const auto& [k, w] : sol.weights().weights) acc += w * increment_of(series, k, sp);
    for (const auto& [k, w] : sol.boundary_weights()) acc += w * series.at(k);
    return acc;
}

PointEstimate estimate_point(const ObservationModel& model, int p, const ObservationSeries& series,
                             const SolverOptions& options) {
    const auto sol = solve_point(model, p, options);
    return {estimate(sol, series), sol.mse()};
}

} // namespace mmi
