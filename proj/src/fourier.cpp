#include "mmi/fourier.hpp"

#include "mmi/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace mmi {

namespace {

std::mutex planner_mutex;  // FFTW planning is not thread-safe

int next_power_of_two(int x) {
    int M = 1;
    while (M < x) M <<= 1;
    return M;
}

double max_abs(const std::vector<cplx>& v) {
    double m = 0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

std::vector<cplx> coefficients_from_samples(const std::vector<cplx>& samples, int kmin, int kmax) {
    const int M = static_cast<int>(samples.size());
    if (kmax < kmin) return {};
    if (kmax - kmin + 1 > M)
        throw ValidationError("coefficient range " + std::to_string(kmax - kmin + 1) +
                              " exceeds the grid size " + std::to_string(M));
    std::vector<cplx> buf(samples);
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_plan plan = fftw_plan_dft_1d(M, reinterpret_cast<fftw_complex*>(buf.data()),
                                          reinterpret_cast<fftw_complex*>(buf.data()),
                                          FFTW_BACKWARD, FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }
    // e^{i lambda_j k} = (-1)^k e^{i h k / 2} e^{2 pi i j k / M}
    const double h = 2.0 * std::numbers::pi / M;
    std::vector<cplx> out(kmax - kmin + 1);
    for (int k = kmin; k <= kmax; ++k) {
        const int idx = ((k % M) + M) % M;
        const cplx phase = std::polar(1.0, 0.5 * h * k) * ((k % 2 == 0) ? 1.0 : -1.0);
        out[k - kmin] = phase * buf[idx] / static_cast<double>(M);
    }
    return out;
}

std::vector<cplx> coefficients_from_samples(const std::vector<double>& samples, int kmin, int kmax) {
    std::vector<cplx> c(samples.begin(), samples.end());
    return coefficients_from_samples(c, kmin, kmax);
}

CoefficientSeries fourier_coefficients(const std::function<cplx(double)>& w, int kmin, int kmax,
                                       const QuadratureOptions& options) {
    CoefficientSeries out;
    out.kmin = kmin;
    out.kmax = kmax;
    if (kmax < kmin) return out;
    int M = next_power_of_two(std::max(options.initial_points, 4 * (kmax - kmin + 1)));
    auto sample = [&](int m) {
        std::vector<cplx> s(m);
        for (int j = 0; j < m; ++j) s[j] = w(midpoint_node(m, j));
        return coefficients_from_samples(s, kmin, kmax);
    };
    std::vector<cplx> prev = sample(M);
    while (true) {
        if (2 * M > options.max_points) {
            throw ConvergenceError("Fourier coefficients did not converge by " + std::to_string(M) +
                                       " points (last change " + std::to_string(out.residual) + ")",
                                   out.residual);
        }
        M *= 2;
        std::vector<cplx> next = sample(M);
        const double scale = std::max(max_abs(next), 1e-300);
        out.residual = max_abs_diff(next, prev) / scale;
        prev = std::move(next);
        if (out.residual <= options.tol || max_abs(prev) == 0.0) break;
    }
    out.values = std::move(prev);
    out.points = M;
    out.converged = true;
    return out;
}

CoefficientSeries fourier_coefficients(const std::function<double(double)>& w, int kmax,
                                       const QuadratureOptions& options) {
    if (kmax < 0) throw ValidationError("fourier_coefficients needs kmax >= 0");
    return fourier_coefficients([&w](double l) { return cplx(w(l), 0.0); }, -kmax, kmax, options);
}

ToeplitzMatrix::ToeplitzMatrix(int dim) : generator_(std::max(2 * dim - 1, 0), cplx(0, 0)), dim_(dim) {}

ToeplitzMatrix::ToeplitzMatrix(std::vector<cplx> generator, int dim)
    : generator_(std::move(generator)), dim_(dim) {
    if (static_cast<int>(generator_.size()) != 2 * dim - 1)
        throw ValidationError("Toeplitz generator must have 2*dim-1 entries");
}

bool ToeplitzMatrix::is_zero() const {
    return std::all_of(generator_.begin(), generator_.end(), [](const cplx& x) { return x == cplx(0, 0); });
}

Eigen::MatrixXcd ToeplitzMatrix::dense() const {
    Eigen::MatrixXcd m(dim_, dim_);
    for (int k = 0; k < dim_; ++k)
        for (int j = 0; j < dim_; ++j) m(k, j) = coefficient(j - k);
    return m;
}

std::string to_string(MatrixVariant v) {
    switch (v) {
    case MatrixVariant::Standard: return "standard";
    case MatrixVariant::NoiseFree: return "noise_free";
    case MatrixVariant::Cointegrated: return "cointegrated";
    }
    return "unknown";
}

MatrixIntegrands matrix_integrands(const ObservationModel& model, const SpectralSample& s) {
    MatrixIntegrands out;
    if (!(s.observed > 0.0)) throw MinimalityError("observed density vanishes on the quadrature grid");
    out.p = 1.0 / s.observed;
    switch (model.mode()) {
    case ObservationMode::NoiseFree: break;
    case ObservationMode::SignalPlusNoise:
        out.t = s.noise / s.observed;
        out.q = s.psi * s.noise / s.observed;
        break;
    case ObservationMode::Cointegrated:
        out.t = s.noise / s.observed;
        out.q = s.psi * std::max(s.noise, 0.0) / s.observed;
        break;
    }
    return out;
}

namespace {

struct Generators {
    std::vector<cplx> p, t, q;
};

Generators generators_on_grid(const ObservationModel& model, int M, bool need_tq) {
    const int D = model.spec().dimension();
    const int N1 = model.spec().N + 1;
    std::vector<double> wp(M), wt(M), wq(M);
    for (int j = 0; j < M; ++j) {
        const auto s = model.sample(midpoint_node(M, j));
        const auto in = matrix_integrands(model, s);
        wp[j] = in.p;
        wt[j] = in.t;
        wq[j] = in.q;
    }
    Generators g;
    g.p = coefficients_from_samples(wp, -(D - 1), D - 1);
    if (need_tq) {
        g.t = coefficients_from_samples(wt, -(D - 1), D - 1);
        g.q = coefficients_from_samples(wq, -(N1 - 1), N1 - 1);
    } else {
        g.t.assign(2 * D - 1, cplx(0, 0));
        g.q.assign(2 * N1 - 1, cplx(0, 0));
    }
    return g;
}

// |den|^2 / (scale num0^2) has the exact coefficients sum_j den_j den_{j+|m|} / (scale num0^2).
std::vector<cplx> autoregressive_generator(const Density& f, int D) {
    const auto& den = f.denominator();
    const double norm = f.scale() * f.numerator()[0] * f.numerator()[0];
    std::vector<cplx> out(2 * D - 1, cplx(0, 0));
    for (int m = -(D - 1); m <= D - 1; ++m) {
        const int a = std::abs(m);
        double acc = 0;
        for (std::size_t j = 0; j + a < den.size(); ++j) acc += den[j] * den[j + a];
        out[m + D - 1] = acc / norm;
    }
    return out;
}

void check_positive_definite(FourierMatrixSet& set) {
    const Eigen::MatrixXcd P = set.P.dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(P, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double trace = ev.sum();
    set.min_eigenvalue = ev.minCoeff();
    set.condition = ev.maxCoeff() / set.min_eigenvalue;
    if (!(set.min_eigenvalue > 1e-10 * trace))
        throw NumericalError("matrix P is not positive definite (smallest eigenvalue " +
                                 std::to_string(set.min_eigenvalue) + ", trace " + std::to_string(trace) + ")",
                             "indefinite");
}

FourierMatrixSet build_common(const ObservationModel& model, const QuadratureOptions& options,
                              MatrixVariant variant) {
    const auto& spec = model.spec();
    const int D = spec.dimension();
    const int N1 = spec.N + 1;
    FourierMatrixSet set;
    set.variant = variant;
    set.beta = model.beta();

    const auto minimal = minimality_check(model);
    if (!minimal.satisfied) throw MinimalityError("minimality condition fails: " + minimal.message);

    const bool need_tq = variant != MatrixVariant::NoiseFree;
    Generators g;
    if (model.has_closed_form()) {
        g.p = autoregressive_generator(model.signal(), D);
        g.t.assign(2 * D - 1, cplx(0, 0));
        g.q.assign(2 * N1 - 1, cplx(0, 0));
        set.closed_form = true;
    } else if (auto native = model.native_grid()) {
        g = generators_on_grid(model, *native, need_tq);
        set.points = *native;
    } else {
        int M = std::max(options.initial_points, 64);
        g = generators_on_grid(model, M, need_tq);
        while (true) {
            if (2 * M > options.max_points)
                throw ConvergenceError("matrix quadrature did not converge (last change " +
                                           std::to_string(set.residual) + ")",
                                       set.residual);
            M *= 2;
            Generators next = generators_on_grid(model, M, need_tq);
            double r = max_abs_diff(next.p, g.p) / std::max(max_abs(next.p), 1e-300);
            if (need_tq) {
                r = std::max(r, max_abs_diff(next.t, g.t) / std::max(max_abs(next.t), 1e-300));
                r = std::max(r, max_abs_diff(next.q, g.q) / std::max(max_abs(next.q), 1e-300));
            }
            g = std::move(next);
            set.residual = r;
            if (r <= options.tol) break;
        }
        set.points = M;
    }
    set.P = ToeplitzMatrix(std::move(g.p), D);
    set.T = ToeplitzMatrix(std::move(g.t), D);
    set.Q = ToeplitzMatrix(std::move(g.q), N1);
    check_positive_definite(set);
    return set;
}

} // namespace

FourierMatrixSet build_standard(const ObservationModel& model, const QuadratureOptions& options) {
    if (model.mode() == ObservationMode::Cointegrated)
        throw ValidationError("build_standard needs a signal-plus-noise model");
    return build_common(model, options, MatrixVariant::Standard);
}

FourierMatrixSet build_noise_free(const ObservationModel& model, const QuadratureOptions& options) {
    if (model.mode() == ObservationMode::Cointegrated ||
        (model.mode() == ObservationMode::SignalPlusNoise && !model.noise().is_zero()))
        throw ValidationError("build_noise_free needs a model without noise");
    return build_common(model, options, MatrixVariant::NoiseFree);
}

FourierMatrixSet build_cointegrated(const ObservationModel& model, const QuadratureOptions& options) {
    if (model.mode() != ObservationMode::Cointegrated)
        throw ValidationError("build_cointegrated needs a cointegrated model");
    return build_common(model, options, MatrixVariant::Cointegrated);
}

FourierMatrixSet build_matrices(const ObservationModel& model, const QuadratureOptions& options) {
    switch (model.mode()) {
    case ObservationMode::NoiseFree: return build_noise_free(model, options);
    case ObservationMode::Cointegrated: return build_cointegrated(model, options);
    case ObservationMode::SignalPlusNoise: return build_standard(model, options);
    }
    return build_standard(model, options);
}

} // namespace mmi
