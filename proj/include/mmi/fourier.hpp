#pragma once

#include "mmi/spectral_model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <vector>

namespace mmi {

using cplx = std::complex<double>;

struct QuadratureOptions {
    int initial_points = 4096;
    int max_points = 1 << 20;
    double tol = 1e-10;  // relative change between successive grid doublings
};

// Coefficients c(k) = (1/2pi) int e^{i lambda k} w(lambda) d lambda for
// kmin <= k <= kmax.
struct CoefficientSeries {
    int kmin = 0;
    int kmax = -1;
    std::vector<cplx> values;
    int points = 0;          // grid size of the final estimate
    double residual = 0;     // change at the last doubling
    bool converged = true;

    cplx at(int k) const { return (k < kmin || k > kmax) ? cplx(0, 0) : values[k - kmin]; }
};

// Midpoint-rule coefficients from samples on midpoint_grid(samples.size()).
std::vector<cplx> coefficients_from_samples(const std::vector<cplx>& samples, int kmin, int kmax);
std::vector<cplx> coefficients_from_samples(const std::vector<double>& samples, int kmin, int kmax);

CoefficientSeries fourier_coefficients(const std::function<double(double)>& w, int kmax,
                                       const QuadratureOptions& options = {});
CoefficientSeries fourier_coefficients(const std::function<cplx(double)>& w, int kmin, int kmax,
                                       const QuadratureOptions& options = {});

// Hermitian Toeplitz matrix stored through c(-(dim-1)..dim-1); entry (k, j) = c(j - k).
class ToeplitzMatrix {
public:
    ToeplitzMatrix() = default;
    explicit ToeplitzMatrix(int dim);  // zero matrix
    ToeplitzMatrix(std::vector<cplx> generator, int dim);

    int dim() const { return dim_; }
    cplx coefficient(int m) const { return generator_[m + dim_ - 1]; }
    cplx operator()(int k, int j) const { return coefficient(j - k); }
    const std::vector<cplx>& generator() const { return generator_; }
    bool is_zero() const;

    Eigen::MatrixXcd dense() const;

private:
    std::vector<cplx> generator_;
    int dim_ = 0;
};

enum class MatrixVariant { Standard, NoiseFree, Cointegrated };
std::string to_string(MatrixVariant v);

struct FourierMatrixSet {
    MatrixVariant variant = MatrixVariant::Standard;
    double beta = 1.0;
    ToeplitzMatrix P;  // (N + mu n + 1)^2
    ToeplitzMatrix T;  // (N + mu n + 1)^2
    ToeplitzMatrix Q;  // (N + 1)^2
    int points = 0;
    bool closed_form = false;
    double residual = 0;
    double min_eigenvalue = 0;
    double condition = 0;
};

// Integrands behind the three matrices at one frequency.
struct MatrixIntegrands {
    double p = 0, t = 0, q = 0;
};
MatrixIntegrands matrix_integrands(const ObservationModel& model, const SpectralSample& s);

FourierMatrixSet build_standard(const ObservationModel& model, const QuadratureOptions& options = {});
FourierMatrixSet build_noise_free(const ObservationModel& model, const QuadratureOptions& options = {});
FourierMatrixSet build_cointegrated(const ObservationModel& model, const QuadratureOptions& options = {});
// Dispatch on the model's mode.
FourierMatrixSet build_matrices(const ObservationModel& model, const QuadratureOptions& options = {});

} // namespace mmi
