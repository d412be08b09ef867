#include "models.hpp"

#include <sstream>

namespace mmi::testing {

IncrementSpec golden_spec() { return {1, 1, 1}; }

Density golden_signal() { return Density::rational(1.0, {1.0}, {1.0, 0.5}, 1, 1); }

std::vector<double> golden_functional() { return {2.0, 1.0}; }

ObservationModel golden_model() { return ObservationModel::signal_plus_noise(golden_spec(), golden_signal(), Density::zero()); }

std::vector<double> poly_from_roots(const std::vector<double>& roots) {
    std::vector<double> p{1.0};
    for (double r : roots) {
        std::vector<double> next(p.size() + 1, 0.0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            next[i] += p[i];
            next[i + 1] += r * p[i];
        }
        p = std::move(next);
    }
    return p;
}

ObservationModel RandomCase::model() const {
    return noisy ? ObservationModel::signal_plus_noise(spec, signal, noise) : ObservationModel::noise_free(spec, signal);
}

RandomCase random_case(std::mt19937_64& rng, bool noisy) {
    std::uniform_int_distribution<int> pick12(1, 2), pickN(0, 3), pick_roots(0, 2);
    std::uniform_real_distribution<double> root(-0.5, 0.5), coef(-1.0, 1.0), noise_scale(0.05, 0.25);

    RandomCase c;
    c.spec = {pick12(rng), pick12(rng), pickN(rng)};
    std::vector<double> ar, ma;
    const int kind = std::uniform_int_distribution<int>(0, 2)(rng);  // 0 AR, 1 MA, 2 ARMA
    if (kind != 1) ar.resize(std::max(1, pick_roots(rng)));
    if (kind != 0) ma.resize(std::max(1, pick_roots(rng)));
    for (double& r : ar) r = root(rng);
    for (double& r : ma) r = root(rng);
    c.signal = Density::rational(1.0, poly_from_roots(ma), poly_from_roots(ar), c.spec.n, c.spec.mu);
    c.noisy = noisy;
    if (noisy) {
        const double phi = root(rng);
        c.noise = Density::rational(noise_scale(rng), {1.0}, {1.0, phi}, 0, 1);
    } else {
        c.noise = Density::zero();
    }
    c.functional.resize(c.spec.N + 1);
    for (double& x : c.functional) x = coef(rng);
    c.functional[0] += c.functional[0] >= 0 ? 0.25 : -0.25;

    std::ostringstream os;
    os << "n=" << c.spec.n << " mu=" << c.spec.mu << " N=" << c.spec.N << " ar=" << ar.size() << " ma=" << ma.size()
       << (noisy ? " noisy" : " noiseless");
    c.label = os.str();
    return c;
}

} // namespace mmi::testing
