#include "mmi/minimax.hpp"

#include "mmi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace mmi {

std::string to_string(ClassKind kind) {
    return kind == ClassKind::LowerReciprocalBound ? "lower_reciprocal_bound" : "eps_neighborhood";
}

void DensityClass::validate() const {
    for (const ComponentSpec* c : {&signal, &second}) {
        if (!c->known && !(c->bound > 0) )
            throw ValidationError("free class components need a positive bound (P or eps)");
        if (!std::isfinite(c->bound)) throw ValidationError("class bound must be finite");
    }
    if (cointegrated && (beta == 0.0 || !std::isfinite(beta)))
        throw ValidationError("cointegrated class needs a finite nonzero beta");
}

namespace {

enum class Role { Fixed, Reciprocal, L2, L1 };

// Frozen weight written as W(x) = kappa / (sigma x + tau)^2 in the component x.
struct Shape {
    double kappa = 0, sigma = 0, tau = 0;
    double weight(double x) const {
        const double d = sigma * x + tau;
        return kappa / (d * d);
    }
};

struct ShapePair {
    Shape signal, second;
};

double lambda_power(double lambda, int n) { return std::pow(lambda * lambda, n); }

// Shapes of both components at one frequency. f and x2 are the current
// values of the signal and second component at lambda.
ShapePair shapes_at(const InterpolationSolution& sol, double lambda, double f, double x2) {
    const auto& spec = sol.spec();
    const auto p = sol.pieces(lambda);
    const auto& s = p.sample;
    const double kr = increment_ratio(lambda, spec.n, spec.mu);
    const double L = lambda_power(lambda, spec.n);
    ShapePair out;
    if (sol.model().mode() == ObservationMode::Cointegrated) {
        const double b2 = sol.model().beta() * sol.model().beta();
        const cplx Y = p.A * p.E * s.noise + p.C;
        const cplx Z = b2 * p.A * s.psi - std::conj(p.E) * p.C;
        const double q2 = s.observed * s.observed;
        out.signal = {(kr * std::norm(Y) - std::norm(Z) / L) / q2, 0.0, 1.0};
        out.second = {std::norm(Z) / (b2 * L * kr * kr), 1.0, 0.0};
    } else {
        const cplx Y = p.A * p.E * s.noise + p.C;
        const cplx Z = p.A * s.psi - std::conj(p.E) * p.C;
        out.signal = {std::norm(Y) / kr, 1.0, L * x2};
        out.second = {std::norm(Z) / (kr * kr), L, f};
    }
    return out;
}

struct Update {
    std::vector<double> x;
    std::vector<char> clamped;
    std::vector<double> gamma;
    double alpha = 0;
    int clamped_count = 0;
};

// Multiplier alpha with h(alpha) = target for a nonincreasing h.
template <class H>
double fit_multiplier(H&& h, double target, double guess) {
    double lo = guess > 0 && std::isfinite(guess) ? guess : 1.0;
    double hi = lo;
    int guard = 0;
    while (h(lo) < target) {
        lo /= 4;
        if (++guard > 600) throw NumericalError("class constraint cannot be met for any multiplier", "infeasible");
    }
    guard = 0;
    while (h(hi) > target) {
        hi *= 4;
        if (++guard > 600) throw NumericalError("class constraint cannot be met for any multiplier", "infeasible");
    }
    for (int it = 0; it < 200 && hi > lo * (1 + 1e-15); ++it) {
        const double mid = std::sqrt(lo * hi);
        if (h(mid) > target) lo = mid;
        else hi = mid;
    }
    return std::sqrt(lo * hi);
}

double mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sup_abs(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Solve alpha (x - x1)(sigma x + tau)^2 = kappa for x >= x1, kappa >= 0, sigma > 0.
double ball_point(double alpha, double x1, const Shape& sh) {
    if (sh.kappa <= 0) return x1;
    const double d1 = sh.sigma * x1 + sh.tau;
    double x = x1 + sh.kappa / (alpha * d1 * d1);  // the residual is >= 0 here
    for (int it = 0; it < 60; ++it) {
        const double d = sh.sigma * x + sh.tau;
        const double phi = alpha * (x - x1) * d * d - sh.kappa;
        const double dphi = alpha * (d * d + 2.0 * sh.sigma * (x - x1) * d);
        const double step = phi / dphi;
        x -= step;
        if (x < x1) x = x1;
        if (std::abs(step) <= 1e-15 * std::max(std::abs(x), 1e-300)) break;
    }
    return x;
}

struct Component {
    Role role = Role::Fixed;
    std::vector<double> ref;
    double bound = 0;
    double ceiling = 1e8;

    // x for a given multiplier; clamped marks ceiling or zero-floor points.
    void apply(double alpha, const std::vector<Shape>& sh, const std::vector<double>& cur,
               std::vector<double>& x, std::vector<char>& clamped) const {
        const std::size_t M = sh.size();
        x.resize(M);
        clamped.assign(M, 0);
        for (std::size_t j = 0; j < M; ++j) {
            const Shape& s = sh[j];
            switch (role) {
            case Role::Fixed: x[j] = ref[j]; break;
            case Role::Reciprocal: {
                double u;
                if (s.tau > 0) u = std::max(std::sqrt(std::max(s.kappa, 0.0)) - alpha * s.sigma, 0.0) / (alpha * s.tau);
                else u = std::sqrt(std::max(s.weight(cur[j]), 0.0)) / alpha;
                if (!(u > 1.0 / ceiling)) {
                    u = 1.0 / ceiling;
                    clamped[j] = 1;
                }
                x[j] = 1.0 / u;
                break;
            }
            case Role::L2: {
                if (s.sigma > 0) {
                    x[j] = ball_point(alpha, ref[j], s);
                } else {
                    x[j] = ref[j] + s.kappa / (alpha * s.tau * s.tau);
                    if (x[j] < 0) {
                        x[j] = 0;
                        clamped[j] = 1;
                    }
                }
                break;
            }
            case Role::L1: {
                const double root = std::sqrt(std::max(s.kappa, 0.0) / alpha);
                x[j] = std::max(ref[j], (root - s.tau) / s.sigma);
                break;
            }
            }
        }
    }

    double constraint_value(const std::vector<double>& x) const {
        double acc = 0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            switch (role) {
            case Role::Fixed: break;
            case Role::Reciprocal: acc += 1.0 / x[j]; break;
            case Role::L2: acc += (x[j] - ref[j]) * (x[j] - ref[j]); break;
            case Role::L1: acc += std::abs(x[j] - ref[j]); break;
            }
        }
        return acc / static_cast<double>(x.size());
    }

    Update update(const std::vector<Shape>& sh, const std::vector<double>& cur, double alpha_guess) const {
        Update out;
        if (role == Role::Fixed) {
            out.x = ref;
            return out;
        }
        std::vector<double> x;
        std::vector<char> cl;
        auto h = [&](double alpha) {
            apply(alpha, sh, cur, x, cl);
            return constraint_value(x);
        };
        out.alpha = fit_multiplier(h, bound, alpha_guess);
        apply(out.alpha, sh, cur, out.x, out.clamped);
        out.clamped_count = static_cast<int>(std::count(out.clamped.begin(), out.clamped.end(), 1));
        if (role == Role::L1) {
            out.gamma.resize(sh.size());
            for (std::size_t j = 0; j < sh.size(); ++j) {
                if (out.x[j] > ref[j]) out.gamma[j] = 1.0;
                else out.gamma[j] = std::clamp(sh[j].weight(ref[j]) / out.alpha, -1.0, 1.0);
            }
        }
        return out;
    }

    // Damping happens in 1/x for the reciprocal bound.
    bool reciprocal_space() const { return role == Role::Reciprocal; }

    // Pointwise optimality relation at x with multiplier alpha.
    double relation(const std::vector<Shape>& sh, const std::vector<double>& x, const Update& u) const {
        const double alpha = u.alpha;
        double worst = 0, wscale = 0;
        for (std::size_t j = 0; j < x.size(); ++j) wscale = std::max(wscale, std::abs(sh[j].weight(x[j])));
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (!u.clamped.empty() && u.clamped[j]) continue;
            const double W = sh[j].weight(x[j]);
            switch (role) {
            case Role::Fixed: break;
            case Role::Reciprocal:
                // W = alpha^2 / x^2
                worst = std::max(worst, std::abs(std::sqrt(std::max(W, 0.0)) * x[j] - alpha) / alpha);
                break;
            case Role::L2:
                worst = std::max(worst, std::abs(W - alpha * (x[j] - ref[j])) / std::max(wscale, 1e-300));
                break;
            case Role::L1:
                if (x[j] > ref[j] * (1 + 1e-12) + 1e-300) worst = std::max(worst, std::abs(W - alpha) / alpha);
                else worst = std::max(worst, std::max(W - alpha, 0.0) / alpha);
                break;
            }
        }
        return worst;
    }

    double constraint_residual(const std::vector<double>& x) const {
        if (role == Role::Fixed) return 0.0;
        return std::abs(constraint_value(x) - bound) / bound;
    }
};

struct Problem {
    DensityClass cls;
    IncrementSpec spec;
    std::vector<double> a;
    MinimaxOptions opt;
    int M = 0;
    std::vector<double> lam;
    Component sig, sec;

    ObservationModel model_at(const std::vector<double>& f, const std::vector<double>& x2) const {
        if (cls.cointegrated)
            return ObservationModel::cointegrated(spec, Density::grid(f), Density::grid(x2), cls.beta);
        return ObservationModel::signal_plus_noise(spec, Density::grid(f), Density::grid(x2));
    }

    InterpolationSolution solve_at(const std::vector<double>& f, const std::vector<double>& x2) const {
        SolverOptions so = opt.solver;
        so.compute_weights = false;
        return solve(model_at(f, x2), a, so);
    }

    void shapes(const InterpolationSolution& sol, const std::vector<double>& f, const std::vector<double>& x2,
                std::vector<Shape>& s1, std::vector<Shape>& s2) const {
        s1.resize(M);
        s2.resize(M);
        for (int j = 0; j < M; ++j) {
            const auto sp = shapes_at(sol, lam[j], f[j], x2[j]);
            s1[j] = sp.signal;
            s2[j] = sp.second;
        }
    }
};

Component make_component(const ComponentSpec& c, Role free_role, const std::vector<double>& lam, double ceiling) {
    Component out;
    out.role = c.known ? Role::Fixed : free_role;
    out.bound = c.bound;
    out.ceiling = ceiling;
    out.ref.resize(lam.size());
    for (std::size_t j = 0; j < lam.size(); ++j) out.ref[j] = c.reference(lam[j]);
    return out;
}

std::vector<double> initial_values(const Component& c) {
    if (c.role == Role::Reciprocal) return std::vector<double>(c.ref.size(), 1.0 / c.bound);
    return c.ref;
}

std::vector<double> to_damping_space(const Component& c, const std::vector<double>& x) {
    if (!c.reciprocal_space()) return x;
    std::vector<double> u(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) u[j] = 1.0 / x[j];
    return u;
}

std::vector<double> from_damping_space(const Component& c, const std::vector<double>& u) {
    return to_damping_space(c, u);  // the map is an involution
}

double step_residual(const Component& c, const std::vector<double>& x, const std::vector<double>& target) {
    if (c.role == Role::Fixed) return 0.0;
    const auto a = to_damping_space(c, x);
    const auto b = to_damping_space(c, target);
    double d = 0;
    for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
    return d / std::max(sup_abs(a), 1e-300);
}

std::vector<double> blend(const Component& c, const std::vector<double>& x, const std::vector<double>& target,
                          double theta) {
    if (c.role == Role::Fixed) return x;
    const auto a = to_damping_space(c, x);
    const auto b = to_damping_space(c, target);
    std::vector<double> m(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) m[j] = (1 - theta) * a[j] + theta * b[j];
    return from_damping_space(c, m);
}

void fill_diagnostics(const Problem& pb, LeastFavorablePair& pair, const std::vector<double>& f,
                      const std::vector<double>& x2, const InterpolationSolution& sol, double alpha_guess1,
                      double alpha_guess2) {
    std::vector<Shape> s1, s2;
    pb.shapes(sol, f, x2, s1, s2);
    const Update u1 = pb.sig.update(s1, f, alpha_guess1);
    const Update u2 = pb.sec.update(s2, x2, alpha_guess2);
    auto diag = [](const Component& c, const std::vector<Shape>& sh, const std::vector<double>& x, const Update& u) {
        ComponentDiagnostics d;
        d.free = c.role != Role::Fixed;
        d.alpha = u.alpha;
        if (d.free) {
            d.relation = c.relation(sh, x, u);
            d.constraint = c.constraint_residual(x);
            d.slackness = u.alpha > 0 ? d.constraint : 0.0;
            d.clamped = u.clamped_count;
        }
        for (std::size_t j = 0; j < x.size(); ++j)
            d.sup_h = std::max(d.sup_h, std::sqrt(std::abs(sh[j].weight(x[j]))));
        return d;
    };
    pair.signal = diag(pb.sig, s1, f, u1);
    pair.second = diag(pb.sec, s2, x2, u2);
    pair.alpha1 = u1.alpha;
    pair.alpha2 = u2.alpha;
    pair.gamma = pb.sec.role == Role::L1 ? u2.gamma : std::vector<double>{};
    pair.fixed_point_residual = std::max(step_residual(pb.sig, f, u1.x), step_residual(pb.sec, x2, u2.x));
    pair.boundary_active = pair.signal.clamped > 0 || pair.second.clamped > 0;
    pair.bounded = std::isfinite(pair.signal.sup_h) && std::isfinite(pair.second.sup_h) &&
                   pair.signal.sup_h < 1e12 && pair.second.sup_h < 1e12;
}

Problem make_problem(const DensityClass& cls, const IncrementSpec& spec, const std::vector<double>& a,
                     const MinimaxOptions& options) {
    cls.validate();
    spec.validate();
    check_functional_length(spec, a.size());
    if (!is_power_of_two(options.grid) || options.grid < 512)
        throw ValidationError("minimax grid must be a power of two >= 512");
    if (!(options.damping > 0 && options.damping <= 1)) throw ValidationError("damping must lie in (0, 1]");
    if (!(options.tol > 0)) throw ValidationError("tolerance must be positive");
    Problem pb{cls, spec, a, options, options.grid, midpoint_grid(options.grid), {}, {}};
    const bool recip = cls.kind == ClassKind::LowerReciprocalBound;
    pb.sig = make_component(cls.signal, recip ? Role::Reciprocal : Role::L2, pb.lam, options.ceiling);
    pb.sec = make_component(cls.second, recip ? Role::Reciprocal : Role::L1, pb.lam, options.ceiling);
    return pb;
}

LeastFavorablePair run(const DensityClass& cls, const IncrementSpec& spec, const std::vector<double>& a,
                       const MinimaxOptions& options) {
    const Problem pb = make_problem(cls, spec, a, options);
    LeastFavorablePair pair;
    pair.grid = pb.M;
    std::vector<double> f = initial_values(pb.sig);
    std::vector<double> x2 = initial_values(pb.sec);

    InterpolationSolution sol = pb.solve_at(f, x2);
    pair.objective_history.push_back(sol.mse());

    const bool trivial = std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; });
    if (trivial) {
        // Every admissible pair gives zero error; keep the feasible start.
        pair.f0 = f;
        pair.second0 = x2;
        pair.converged = true;
        pair.message = "zero functional: every admissible pair is least favorable";
        pair.robust_solution = sol;
        return pair;
    }

    double alpha1 = 1.0, alpha2 = 1.0;
    std::vector<Shape> s1, s2;
    for (int it = 1; it <= pb.opt.max_iter; ++it) {
        pair.iterations = it;
        pb.shapes(sol, f, x2, s1, s2);
        const Update u1 = pb.sig.update(s1, f, alpha1);
        const Update u2 = pb.sec.update(s2, x2, alpha2);
        if (pb.sig.role != Role::Fixed) alpha1 = u1.alpha;
        if (pb.sec.role != Role::Fixed) alpha2 = u2.alpha;
        const double res = std::max(step_residual(pb.sig, f, u1.x), step_residual(pb.sec, x2, u2.x));
        if (res < 0.01 * pb.opt.tol) break;

        // Damped step; halve theta while the objective drops. If no trial
        // ascends, take the nominal step and record the violation.
        const double base = sol.mse();
        double theta = pb.opt.damping;
        bool accepted = false;
        std::optional<InterpolationSolution> trial;
        std::vector<double> fn, x2n;
        while (theta >= pb.opt.min_damping) {
            fn = blend(pb.sig, f, u1.x, theta);
            x2n = blend(pb.sec, x2, u2.x, theta);
            trial = pb.solve_at(fn, x2n);
            if (trial->mse() >= base - 1e-13 * std::abs(base)) {
                accepted = true;
                break;
            }
            theta *= 0.5;
        }
        if (!accepted) {
            ++pair.ascent_violations;
            fn = blend(pb.sig, f, u1.x, pb.opt.damping);
            x2n = blend(pb.sec, x2, u2.x, pb.opt.damping);
            trial = pb.solve_at(fn, x2n);
        }
        f = std::move(fn);
        x2 = std::move(x2n);
        sol = std::move(*trial);
        pair.objective_history.push_back(sol.mse());
    }

    fill_diagnostics(pb, pair, f, x2, sol, alpha1, alpha2);
    pair.f0 = f;
    pair.second0 = x2;
    pair.ascent_ok = pair.ascent_violations == 0;
    const auto& h = pair.objective_history;
    const bool last_ascent = h.size() < 2 || h.back() >= h[h.size() - 2] - 1e-13 * std::abs(h[h.size() - 2]);
    const double tol = pb.opt.tol;
    const bool residuals_ok = pair.fixed_point_residual < tol && pair.signal.relation < tol &&
                              pair.second.relation < tol && pair.signal.constraint < tol &&
                              pair.second.constraint < tol;
    pair.converged = residuals_ok && last_ascent;
    if (!residuals_ok) pair.message = "iteration cap reached before the residuals met the tolerance";
    else if (!last_ascent) pair.message = "fixed point reached but the objective decreased on the final step";
    else if (!pair.ascent_ok) pair.message = "converged; some steps lowered the objective";
    else pair.message = "converged";
    pair.robust_solution = std::move(sol);
    return pair;
}

} // namespace

LeastFavorablePair least_favorable(const DensityClass& cls, const IncrementSpec& spec, const std::vector<double>& a,
                                   const MinimaxOptions& options) {
    if (cls.cointegrated) throw ValidationError("use least_favorable_cointegrated for cointegrated classes");
    return run(cls, spec, a, options);
}

LeastFavorablePair least_favorable_cointegrated(const DensityClass& cls, const IncrementSpec& spec,
                                                const std::vector<double>& a, double beta,
                                                const MinimaxOptions& options) {
    DensityClass c = cls;
    c.cointegrated = true;
    c.beta = beta;
    return run(c, spec, a, options);
}

FrozenWeights frozen_weights(const InterpolationSolution& robust, double lambda) {
    const auto& model = robust.model();
    const double f = model.signal()(lambda);
    const double x2 = model.mode() == ObservationMode::Cointegrated ? model.observed_density()(lambda)
                                                                      : model.noise()(lambda);
    const auto sp = shapes_at(robust, lambda, f, x2);
    return {sp.signal.weight(f), sp.second.weight(x2)};
}

double delta_under(const InterpolationSolution& robust, const Density& f, const Density& second) {
    const auto& model = robust.model();
    const auto& spec = robust.spec();
    const bool coint = model.mode() == ObservationMode::Cointegrated;
    const double b2 = model.beta() * model.beta();
    auto value = [&](double lambda) {
        const auto w = frozen_weights(robust, lambda);
        const double fv = f(lambda), xv = second(lambda);
        double v = w.signal * fv + w.second * xv;
        if (coint) {
            // Positive part of p - beta^2 f, as inside the Q integrand.
            const double rho = (xv - b2 * fv) / lambda_power(lambda, spec.n);
            if (rho < 0) {
                const double psi = increment_ratio(lambda, spec.n, spec.mu) * fv;
                const auto p = robust.pieces(lambda);
                v += psi * (-rho) * std::norm(p.A) / p.sample.observed;
            }
        }
        return v;
    };
    std::optional<int> M = model.native_grid();
    if (!M) M = f.native_grid() ? f.native_grid() : second.native_grid();
    if (M) {
        double acc = 0;
        for (int j = 0; j < *M; ++j) acc += value(midpoint_node(*M, j));
        return acc / *M;
    }
    int m = 4096;
    double prev = 0;
    for (int j = 0; j < m; ++j) prev += value(midpoint_node(m, j));
    prev /= m;
    while (m < (1 << 20)) {
        m *= 2;
        double next = 0;
        for (int j = 0; j < m; ++j) next += value(midpoint_node(m, j));
        next /= m;
        const bool done = std::abs(next - prev) <= 1e-10 * std::abs(next);
        prev = next;
        if (done) break;
    }
    return prev;
}

SaddleReport verify_saddle(const LeastFavorablePair& pair, const DensityClass& cls, int samples, std::uint64_t seed,
                           double tol) {
    SaddleReport rep;
    rep.tol = tol;
    if (samples <= 0) {
        rep.max_violation = 0;
        return rep;
    }
    if (!pair.robust_solution) throw ValidationError("pair has no robust solution");
    const auto& robust = *pair.robust_solution;
    const int M = pair.grid;
    const auto lam = midpoint_grid(M);
    const auto& spec = robust.spec();
    const bool recip = cls.kind == ClassKind::LowerReciprocalBound;
    const Component sig = make_component(cls.signal, recip ? Role::Reciprocal : Role::L2, lam, 1e8);
    const Component sec = make_component(cls.second, recip ? Role::Reciprocal : Role::L1, lam, 1e8);

    rep.delta0 = delta_under(robust, Density::grid(pair.f0), Density::grid(pair.second0));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int modes = 9;

    auto perturb = [&](const Component& c, const std::vector<double>& x0) {
        if (c.role == Role::Fixed) return c.ref;
        std::vector<double> z(modes);
        for (double& v : z) v = normal(rng);
        std::vector<double> delta(M, 0.0);
        for (int j = 0; j < M; ++j)
            for (int k = 0; k < modes; ++k) delta[j] += z[k] * std::cos(k * lam[j]) / 3.0;
        std::vector<double> x(M);
        if (c.role == Role::Reciprocal) {
            // Multiplicative perturbation, then rescale until the bound holds.
            for (int j = 0; j < M; ++j) x[j] = x0[j] * std::exp(0.3 * delta[j]);
            const double I = c.constraint_value(x);
            if (I < c.bound)
                for (double& v : x) v *= I / c.bound;
            return x;
        }
        const double amp = 0.3 * std::max(mean(x0), mean(c.ref));
        for (int j = 0; j < M; ++j) x[j] = std::max(x0[j] + amp * delta[j], 0.0);
        const double v = c.constraint_value(x);
        if (v > c.bound) {
            // Pull back toward the center along the segment; stays nonnegative.
            const double t = c.role == Role::L2 ? std::sqrt(c.bound / v) : c.bound / v;
            for (int j = 0; j < M; ++j) x[j] = c.ref[j] + t * (x[j] - c.ref[j]);
        }
        return x;
    };

    for (int i = 0; i < samples; ++i) {
        const auto f = perturb(sig, pair.f0);
        const auto x2 = perturb(sec, pair.second0);
        // The robust characteristic must stay admissible: minimality at (f, x2).
        bool minimal = true;
        for (int j = 0; j < M && minimal; ++j) {
            const double kr = increment_ratio(lam[j], spec.n, spec.mu);
            const double obs = cls.cointegrated ? kr * x2[j] : kr * f[j] + kr * lambda_power(lam[j], spec.n) * x2[j];
            if (!(obs > 0) || !std::isfinite(obs)) minimal = false;
        }
        if (!minimal) ++rep.minimality_failures;
        const double d = delta_under(robust, Density::grid(f), Density::grid(x2));
        const double viol = d - rep.delta0;
        rep.max_violation = std::max(rep.max_violation, viol);
        if (viol > tol) ++rep.violations;
        ++rep.samples;
    }
    rep.passed = rep.violations == 0 && rep.minimality_failures == 0;
    return rep;
}

LeastFavorablePair with_scaled_multipliers(const LeastFavorablePair& pair, const DensityClass& cls,
                                           const IncrementSpec& spec, const std::vector<double>& a,
                                           double factor1, double factor2, const MinimaxOptions& options) {
    MinimaxOptions opt = options;
    opt.grid = pair.grid;
    const Problem pb = make_problem(cls, spec, a, opt);
    if (!pair.robust_solution) throw ValidationError("pair has no robust solution");
    std::vector<Shape> s1, s2;
    pb.shapes(*pair.robust_solution, pair.f0, pair.second0, s1, s2);
    LeastFavorablePair out = pair;
    std::vector<char> cl;
    if (pb.sig.role != Role::Fixed) pb.sig.apply(pair.alpha1 * factor1, s1, pair.f0, out.f0, cl);
    if (pb.sec.role != Role::Fixed) pb.sec.apply(pair.alpha2 * factor2, s2, pair.second0, out.second0, cl);
    out.alpha1 = pair.alpha1 * factor1;
    out.alpha2 = pair.alpha2 * factor2;
    out.robust_solution = pb.solve_at(out.f0, out.second0);
    out.converged = false;
    out.message = "multipliers scaled away from the fixed point";
    return out;
}

} // namespace mmi
