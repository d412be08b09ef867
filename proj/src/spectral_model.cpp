#include "mmi/spectral_model.hpp"

#include "mmi/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace mmi {

namespace {

constexpr double kPi = std::numbers::pi;

double squared_modulus(const std::vector<double>& poly, double lambda) {
    std::complex<double> acc(0.0, 0.0);
    // Horner in z = e^{-i lambda}.
    const std::complex<double> z = std::polar(1.0, -lambda);
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * z + *it;
    return std::norm(acc);
}

void check_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw ValidationError(std::string(what) + " contains a non-finite value");
}

} // namespace

std::vector<double> midpoint_grid(int M) {
    std::vector<double> out(M);
    for (int j = 0; j < M; ++j) out[j] = midpoint_node(M, j);
    return out;
}

double midpoint_node(int M, int j) { return -kPi + (j + 0.5) * (2.0 * kPi / M); }

bool is_power_of_two(int M) { return M > 0 && (M & (M - 1)) == 0; }

double increment_power(double lambda, int n, int mu) {
    if (n == 0) return 1.0;
    const double s = 2.0 * std::sin(0.5 * mu * lambda);
    return std::pow(s * s, n);
}

double increment_ratio(double lambda, int n, int mu) {
    if (n == 0) return 1.0;
    if (lambda == 0.0) return std::pow(static_cast<double>(mu), 2 * n);
    const double s = 2.0 * std::sin(0.5 * mu * lambda) / lambda;
    return std::pow(s * s, n);
}

struct Density::Rep {
    Kind kind = Kind::ReducedRational;
    // rational
    double scale = 0;
    std::vector<double> num{1.0};
    std::vector<double> den{1.0};
    int n = 0;
    int mu = 1;
    // grid
    std::vector<double> samples;
    // composite
    double weight = 1;
    std::shared_ptr<const Density> signal;
    std::shared_ptr<const Density> noise;
    int composite_n = 0;
};

Density::Density() : rep_(std::make_shared<Rep>()) {}
Density::Density(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

Density Density::zero() { return Density(); }

Density Density::rational(double scale, std::vector<double> numerator,
                          std::vector<double> denominator, int n, int mu) {
    if (!(scale >= 0) || !std::isfinite(scale)) throw ValidationError("density scale must be finite and >= 0");
    if (numerator.empty()) numerator = {1.0};
    if (denominator.empty()) throw ValidationError("rational density needs a denominator");
    check_finite(numerator, "numerator");
    check_finite(denominator, "denominator");
    if (n < 0 || mu < 1) throw ValidationError("increment factor needs n >= 0 and mu >= 1");
    // The denominator must stay away from the unit circle: roots of the
    // polynomial in z through its companion matrix.
    while (denominator.size() > 1 && denominator.back() == 0.0) denominator.pop_back();
    if (denominator[0] == 0.0 && denominator.size() == 1)
        throw ValidationError("denominator polynomial is identically zero");
    const int deg = static_cast<int>(denominator.size()) - 1;
    if (deg > 0) {
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
        for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
        for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -denominator[i] / denominator[deg];
        const Eigen::VectorXcd roots = companion.eigenvalues();
        for (Eigen::Index i = 0; i < roots.size(); ++i)
            if (std::abs(std::abs(roots[i]) - 1.0) < 1e-7)
                throw ValidationError("denominator polynomial vanishes on the unit circle");
    }
    auto rep = std::make_shared<Rep>();
    rep->kind = Kind::ReducedRational;
    rep->scale = scale;
    rep->num = std::move(numerator);
    rep->den = std::move(denominator);
    rep->n = n;
    rep->mu = mu;
    return Density(rep);
}

Density Density::constant(double value) { return rational(value, {1.0}, {1.0}); }

Density Density::grid(std::vector<double> samples) {
    const int M = static_cast<int>(samples.size());
    if (!is_power_of_two(M) || M < 8)
        throw ValidationError("grid density needs a power-of-two sample count >= 8, got " + std::to_string(M));
    check_finite(samples, "grid density");
    for (double x : samples)
        if (x < 0) throw ValidationError("grid density has a negative sample");
    auto rep = std::make_shared<Rep>();
    rep->kind = Kind::GridTabulated;
    rep->samples = std::move(samples);
    return Density(rep);
}

Density Density::composite(double weight, const Density& signal, const Density& noise, int n) {
    if (!(weight >= 0) || !std::isfinite(weight)) throw ValidationError("composite weight must be >= 0");
    if (n < 1) throw ValidationError("composite density needs n >= 1");
    auto rep = std::make_shared<Rep>();
    rep->kind = Kind::Composite;
    rep->weight = weight;
    rep->signal = std::make_shared<const Density>(signal);
    rep->noise = std::make_shared<const Density>(noise);
    rep->composite_n = n;
    return Density(rep);
}

Density::Kind Density::kind() const { return rep_->kind; }

bool Density::is_zero() const {
    switch (rep_->kind) {
    case Kind::ReducedRational:
        return rep_->scale == 0.0 ||
               std::all_of(rep_->num.begin(), rep_->num.end(), [](double x) { return x == 0.0; });
    case Kind::GridTabulated:
        return std::all_of(rep_->samples.begin(), rep_->samples.end(), [](double x) { return x == 0.0; });
    case Kind::Composite:
        return (rep_->weight == 0.0 || rep_->signal->is_zero()) && rep_->noise->is_zero();
    }
    return false;
}

double Density::operator()(double lambda) const {
    const Rep& r = *rep_;
    switch (r.kind) {
    case Kind::ReducedRational: {
        if (is_zero()) return 0.0;
        const double den = squared_modulus(r.den, lambda);
        if (den == 0.0) throw PoleError("density denominator vanishes", lambda);
        const double psi = r.scale * squared_modulus(r.num, lambda) / den;
        const double ratio = increment_ratio(lambda, r.n, r.mu);
        if (ratio == 0.0) {
            if (psi == 0.0) return 0.0;
            throw PoleError("density has a pole at a zero of the increment factor", lambda);
        }
        return psi / ratio;
    }
    case Kind::GridTabulated: {
        const auto& s = r.samples;
        const int M = static_cast<int>(s.size());
        const double t = (lambda + kPi) * M / (2.0 * kPi) - 0.5;
        double fl = std::floor(t);
        double frac = t - fl;
        // Snap to a node when lambda is one up to rounding.
        if (frac < 1e-9) frac = 0.0;
        if (frac > 1.0 - 1e-9) {
            fl += 1.0;
            frac = 0.0;
        }
        const int j0 = ((static_cast<int>(fl) % M) + M) % M;
        const int j1 = (j0 + 1) % M;
        return (1.0 - frac) * s[j0] + frac * s[j1];
    }
    case Kind::Composite: {
        const double l2n = std::pow(lambda * lambda, r.composite_n);
        return r.weight * (*r.signal)(lambda) + l2n * (*r.noise)(lambda);
    }
    }
    return 0.0;
}

double Density::reduced(double lambda, int n, int mu) const {
    const Rep& r = *rep_;
    if (r.kind == Kind::ReducedRational && r.n == n && r.mu == mu) {
        if (is_zero()) return 0.0;
        const double den = squared_modulus(r.den, lambda);
        if (den == 0.0) throw PoleError("density denominator vanishes", lambda);
        return r.scale * squared_modulus(r.num, lambda) / den;
    }
    if (r.kind == Kind::Composite && r.composite_n == n) {
        return r.weight * r.signal->reduced(lambda, n, mu) +
               increment_power(lambda, n, mu) * (*r.noise)(lambda);
    }
    return increment_ratio(lambda, n, mu) * (*this)(lambda);
}

double Density::scale() const { return rep_->scale; }
const std::vector<double>& Density::numerator() const { return rep_->num; }
const std::vector<double>& Density::denominator() const { return rep_->den; }
int Density::factor_n() const { return rep_->n; }
int Density::factor_mu() const { return rep_->mu; }
int Density::grid_size() const { return static_cast<int>(rep_->samples.size()); }
const std::vector<double>& Density::samples() const { return rep_->samples; }
double Density::weight() const { return rep_->weight; }
const Density& Density::part_signal() const {
    if (rep_->kind != Kind::Composite) throw ValidationError("not a composite density");
    return *rep_->signal;
}
const Density& Density::part_noise() const {
    if (rep_->kind != Kind::Composite) throw ValidationError("not a composite density");
    return *rep_->noise;
}
int Density::composite_n() const { return rep_->composite_n; }

std::optional<int> Density::native_grid() const {
    switch (rep_->kind) {
    case Kind::ReducedRational: return std::nullopt;
    case Kind::GridTabulated: return grid_size();
    case Kind::Composite: {
        auto a = rep_->signal->native_grid();
        auto b = rep_->noise->native_grid();
        if (a && b && *a != *b) throw ValidationError("composite mixes grids of different sizes");
        return a ? a : b;
    }
    }
    return std::nullopt;
}

bool Density::is_autoregressive(int n, int mu) const {
    const Rep& r = *rep_;
    return r.kind == Kind::ReducedRational && r.n == n && r.mu == mu && r.scale > 0 &&
           r.num.size() == 1 && r.num[0] != 0.0;
}

std::string Density::describe() const {
    std::ostringstream os;
    switch (rep_->kind) {
    case Kind::ReducedRational:
        os << "rational(scale=" << rep_->scale << ", n=" << rep_->n << ", mu=" << rep_->mu << ")";
        break;
    case Kind::GridTabulated: os << "grid(M=" << grid_size() << ")"; break;
    case Kind::Composite:
        os << "composite(" << rep_->weight << "*" << rep_->signal->describe() << " + lambda^"
           << 2 * rep_->composite_n << "*" << rep_->noise->describe() << ")";
        break;
    }
    return os.str();
}

std::string to_string(ObservationMode mode) {
    switch (mode) {
    case ObservationMode::SignalPlusNoise: return "signal_plus_noise";
    case ObservationMode::NoiseFree: return "noise_free";
    case ObservationMode::Cointegrated: return "cointegrated";
    }
    return "unknown";
}

ObservationModel ObservationModel::signal_plus_noise(IncrementSpec spec, Density f, Density g) {
    spec.validate();
    ObservationModel m;
    m.spec_ = spec;
    m.mode_ = ObservationMode::SignalPlusNoise;
    m.f_ = std::move(f);
    m.g_ = std::move(g);
    m.p_ = Density::composite(1.0, m.f_, m.g_, spec.n);
    (void)m.native_grid();
    return m;
}

ObservationModel ObservationModel::noise_free(IncrementSpec spec, Density f) {
    spec.validate();
    ObservationModel m;
    m.spec_ = spec;
    m.mode_ = ObservationMode::NoiseFree;
    m.f_ = std::move(f);
    m.g_ = Density::zero();
    m.p_ = m.f_;
    (void)m.native_grid();
    return m;
}

ObservationModel ObservationModel::cointegrated(IncrementSpec spec, Density f, Density p, double beta) {
    spec.validate();
    if (beta == 0.0 || !std::isfinite(beta)) throw ValidationError("cointegration coefficient beta must be finite and nonzero");
    ObservationModel m;
    m.spec_ = spec;
    m.mode_ = ObservationMode::Cointegrated;
    m.f_ = std::move(f);
    m.p_ = std::move(p);
    m.g_ = Density::zero();
    m.beta_ = beta;
    (void)m.native_grid();
    return m;
}

SpectralSample ObservationModel::sample(double lambda) const {
    const int n = spec_.n, mu = spec_.mu;
    SpectralSample s;
    s.power = increment_power(lambda, n, mu);
    s.psi = f_.reduced(lambda, n, mu);
    switch (mode_) {
    case ObservationMode::NoiseFree:
        s.noise = 0.0;
        s.observed = s.psi;
        break;
    case ObservationMode::SignalPlusNoise:
        s.noise = g_.is_zero() ? 0.0 : g_(lambda);
        s.observed = s.psi + s.power * s.noise;
        break;
    case ObservationMode::Cointegrated: {
        const double b2 = beta_ * beta_;
        s.observed = p_.reduced(lambda, n, mu);
        if (p_.kind() == Density::Kind::Composite && p_.composite_n() == n) {
            // rho = g_c + (w psi_c - beta^2 psi) / power; exact when w psi_c == beta^2 psi.
            const double excess = p_.weight() * p_.part_signal().reduced(lambda, n, mu) - b2 * s.psi;
            s.noise = p_.part_noise()(lambda);
            if (excess != 0.0) {
                if (s.power == 0.0) throw PoleError("stationary remainder undefined at a zero of the increment factor", lambda);
                s.noise += excess / s.power;
            }
        } else {
            const double excess = s.observed - b2 * s.psi;
            if (excess == 0.0) {
                s.noise = 0.0;
            } else {
                if (s.power == 0.0) throw PoleError("stationary remainder undefined at a zero of the increment factor", lambda);
                s.noise = excess / s.power;
            }
        }
        break;
    }
    }
    return s;
}

std::vector<SpectralSample> ObservationModel::sample_grid(int M) const {
    std::vector<SpectralSample> out(M);
    for (int j = 0; j < M; ++j) out[j] = sample(midpoint_node(M, j));
    return out;
}

std::optional<int> ObservationModel::native_grid() const {
    std::optional<int> out;
    for (const Density* d : {&f_, &g_, &p_}) {
        auto m = d->native_grid();
        if (!m) continue;
        if (out && *out != *m) throw ValidationError("model densities are tabulated on different grids");
        out = m;
    }
    return out;
}

bool ObservationModel::has_closed_form() const {
    if (mode_ == ObservationMode::Cointegrated) return false;
    if (mode_ == ObservationMode::SignalPlusNoise && !g_.is_zero()) return false;
    return f_.is_autoregressive(spec_.n, spec_.mu);
}

std::function<double(double)> reduced_integrand(const ObservationModel& model) {
    return [model](double lambda) {
        const double q = model.sample(lambda).observed;
        if (!(q > 0.0)) throw PoleError("observed density vanishes; reduced integrand has a pole", lambda);
        return 1.0 / q;
    };
}

namespace {

// Midpoint rule for the integral of 1/observed over [-pi, pi); infinite if
// the observed density vanishes at a node.
double midpoint_integral(const ObservationModel& model, int M, double* min_q, double* max_q) {
    double sum = 0;
    double lo = INFINITY, hi = 0;
    for (int j = 0; j < M; ++j) {
        const double q = model.sample(midpoint_node(M, j)).observed;
        lo = std::min(lo, q);
        hi = std::max(hi, q);
        sum += (q > 0.0) ? 1.0 / q : INFINITY;
    }
    if (min_q) *min_q = lo;
    if (max_q) *max_q = hi;
    return sum * (2.0 * kPi / M);
}

} // namespace

MinimalityReport minimality_check(const ObservationModel& model, double tol) {
    MinimalityReport rep;
    if (auto M = model.native_grid()) {
        double lo = 0, hi = 0;
        rep.integral = midpoint_integral(model, *M, &lo, &hi);
        rep.points = *M;
        if (!(lo > 0.0) || !std::isfinite(rep.integral)) {
            rep.divergent = true;
            rep.message = "observed density vanishes on the grid; the minimality integral diverges";
            return rep;
        }
        rep.satisfied = rep.converged = true;
        rep.bounded_below = true;
        return rep;
    }

    if (model.has_closed_form()) {
        // 1/psi = |den|^2 / scale; its integral is 2 pi sum(den_k^2) / (scale num0^2).
        const Density& f = model.signal();
        double ss = 0;
        for (double x : f.denominator()) ss += x * x;
        rep.integral = 2.0 * kPi * ss / (f.scale() * f.numerator()[0] * f.numerator()[0]);
        rep.satisfied = rep.converged = rep.bounded_below = true;
        rep.message = "closed form";
        return rep;
    }

    // A positive lower bound on a fine probe grid makes the integral finite.
    double lo = 0, hi = 0;
    (void)midpoint_integral(model, 1 << 16, &lo, &hi);
    rep.bounded_below = lo > 1e-9 * hi && hi > 0;

    std::vector<double> history;
    int M = 4096;
    history.push_back(midpoint_integral(model, M, nullptr, nullptr));
    while (M < (1 << 20)) {
        M *= 2;
        history.push_back(midpoint_integral(model, M, nullptr, nullptr));
        const double a = history[history.size() - 2], b = history.back();
        if (std::isfinite(b) && std::abs(b - a) <= tol * std::abs(b)) {
            rep.converged = true;
            break;
        }
        if (!std::isfinite(b)) break;
    }
    rep.integral = history.back();
    rep.points = M;
    if (rep.converged || rep.bounded_below) {
        rep.satisfied = std::isfinite(rep.integral);
        if (!rep.converged) rep.message = "quadrature not converged but the integrand is bounded";
        return rep;
    }
    // Divergent integrals keep growing without geometric decay of the increments.
    bool growing = !std::isfinite(rep.integral);
    if (!growing && history.size() >= 4) {
        const std::size_t k = history.size();
        const double d1 = history[k - 3] - history[k - 4];
        const double d2 = history[k - 2] - history[k - 3];
        const double d3 = history[k - 1] - history[k - 2];
        growing = d1 > 0 && d2 > 0 && d3 > 0 && d3 > 0.5 * d2 && d2 > 0.5 * d1;
    }
    rep.divergent = growing;
    rep.message = growing ? "minimality integral diverges" : "minimality quadrature did not converge";
    return rep;
}

} // namespace mmi
