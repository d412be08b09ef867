// Acceptance checks, one per criterion: `acceptance <id> [cli-path]` prints a single
// PASS/FAIL line and exits nonzero on failure.
#include "mmi/config.hpp"
#include "mmi/errors.hpp"
#include "mmi/minimax.hpp"
#include "mmi/oracle.hpp"
#include "mmi/report.hpp"
#include "models.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace mmi;
using namespace mmi::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Check {
    Outcome out;
    std::ostringstream log;

    void expect(bool ok, const std::string& what) {
        if (!ok && out.pass) log << "first failure: " << what << "; ";
        out.pass = out.pass && ok;
    }
};

double max_map_diff(const std::map<int, double>& a, const std::map<int, double>& b) {
    std::set<int> keys;
    for (const auto& [k, v] : a) keys.insert(k);
    for (const auto& [k, v] : b) keys.insert(k);
    double d = 0;
    for (int k : keys) {
        const double x = a.count(k) ? a.at(k) : 0.0, y = b.count(k) ? b.at(k) : 0.0;
        d = std::max(d, std::abs(x - y));
    }
    return d;
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

// Fourier coefficients of the increment-domain transfer function by a plain
// midpoint sum, independent of the solver's FFT path.
double gap_leakage(const InterpolationSolution& sol, int M = 8192) {
    const int D = sol.spec().dimension();
    std::vector<cplx> acc(D, cplx(0, 0));
    for (int j = 0; j < M; ++j) {
        const double l = midpoint_node(M, j);
        const cplx G = sol.transfer(l);
        for (int k = 0; k < D; ++k) acc[k] += std::exp(cplx(0, -l * k)) * G;
    }
    double worst = 0;
    for (const auto& a : acc) worst = std::max(worst, std::abs(a) / M);
    return worst;
}

std::vector<RandomCase> sweep_cases(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::vector<RandomCase> out;
    for (int i = 0; i < count; ++i) out.push_back(random_case(rng, i % 2 == 1));
    return out;
}

Outcome golden_algebra() {
    Check c;
    const auto set = build_matrices(golden_model());
    Eigen::MatrixXd F(3, 3), Finv(3, 3);
    F << 5, 2, 0, 2, 5, 2, 0, 2, 5;
    Finv << 21, -10, 4, -10, 25, -10, 4, -10, 21;
    F /= 4.0;
    Finv *= 4.0 / 85.0;
    const double e1 = (set.P.dense() - F.cast<cplx>()).cwiseAbs().maxCoeff();
    const double e2 = (set.P.dense().inverse() - Finv.cast<cplx>()).cwiseAbs().maxCoeff();
    c.expect(e1 < 1e-12, "F error " + sci(e1));
    c.expect(e2 < 1e-12, "F^-1 error " + sci(e2));
    c.out.detail = "max |F - F_printed| = " + sci(e1) + ", max |F^-1 - F^-1_printed| = " + sci(e2);
    return c.out;
}

Outcome golden_weights() {
    Check c;
    const auto sol = solve(golden_model(), golden_functional());
    const auto wide = increment_weights(sol, 64, 1e-10);
    double others = 0;
    for (const auto& [k, w] : wide.weights)
        if (k != -1 && k != 3) others = std::max(others, std::abs(w));
    const auto& w = sol.weights().weights;
    const double e_m1 = std::abs(w.at(-1) + 106.0 / 85.0), e_3 = std::abs(w.at(3) + 4.0 / 85.0);
    const auto tw = sol.time_weights();
    const std::map<int, double> expected{{-2, 106.0 / 85.0}, {-1, 149.0 / 85.0}, {2, 4.0 / 85.0}, {3, -4.0 / 85.0}};
    const double et = max_map_diff(tw, expected);
    c.expect(e_m1 < 1e-10 && e_3 < 1e-10, "increment weights");
    c.expect(others < 1e-10, "spurious weight " + sci(others));
    c.expect(et < 1e-10, "time weights");
    c.out.detail = "w(-1), w(3) errors " + sci(e_m1) + ", " + sci(e_3) + "; other |w| <= " + sci(others) +
                   "; time-weight error " + sci(et);
    return c.out;
}

Outcome golden_mse() {
    Check c;
    const double target = 616.0 / 85.0;
    const auto sol = solve(golden_model(), golden_functional());
    const double quad = sol.mse_routes().quadratic, freq = mse_frequency(sol);
    const double oracle = project(golden_model(), golden_functional(), 10).mse;
    for (double v : {quad, freq, oracle}) c.expect(std::abs(v - target) < 1e-8, "route off target");

    std::ifstream in(fs::path(MMI_TEST_DATA) / "golden_interpolate.json");
    const auto cfg = parse_config(json::parse(in));
    const auto rep = run_task(cfg, std::nullopt).report;
    bool noted = false;
    for (const auto& n : rep["notes"]) noted = noted || n.get<std::string>().find("88/17") != std::string::npos;
    c.expect(noted, "report lacks the 88/17 note");
    c.out.detail = "quadratic " + sci(quad - target) + ", frequency " + sci(freq - target) + ", oracle(K=10) " +
                   sci(oracle - target) + " off 616/85; discrepancy note " + (noted ? "present" : "missing");
    return c.out;
}

Outcome oracle_sweep() {
    Check c;
    double worst_w = 0, worst_m = 0;
    int n = 0;
    for (const auto& rc : sweep_cases(2024, 20)) {
        const auto model = rc.model();
        const auto sol = solve(model, rc.functional);
        const auto pr = project(model, rc.functional, 50);
        const double dw = std::max(max_map_diff(sol.weights().weights, pr.weights),
                                   max_map_diff(sol.boundary_weights(), pr.boundary));
        const double dm = std::abs(sol.mse() - pr.mse);
        c.expect(dw < 1e-6 && dm < 1e-6, rc.label + " weight delta " + sci(dw) + " mse delta " + sci(dm));
        worst_w = std::max(worst_w, dw);
        worst_m = std::max(worst_m, dm);
        ++n;
    }
    c.out.detail = std::to_string(n) + " models; max weight delta " + sci(worst_w) + ", max mse delta " + sci(worst_m) +
                   (c.out.pass ? "" : "; " + c.log.str());
    return c.out;
}

double solution_gap(const InterpolationSolution& a, const InterpolationSolution& b) {
    double d = (a.c() - b.c()).cwiseAbs().maxCoeff();
    d = std::max(d, std::abs(a.mse() - b.mse()));
    d = std::max(d, max_map_diff(a.weights().weights, b.weights().weights));
    d = std::max(d, max_map_diff(a.boundary_weights(), b.boundary_weights()));
    d = std::max(d, max_map_diff(a.time_weights(), b.time_weights()));
    return d;
}

Outcome coherence() {
    Check c;
    double g_nf = 0, g_pt = 0, g_co = 0;
    std::mt19937_64 rng(77);
    std::normal_distribution<double> noise;
    for (int i = 0; i < 10; ++i) {
        const auto rc = random_case(rng, true);
        const auto with_zero = ObservationModel::signal_plus_noise(rc.spec, rc.signal, Density::zero());
        g_nf = std::max(g_nf, solution_gap(solve(with_zero, rc.functional),
                                           solve_noise_free(ObservationModel::noise_free(rc.spec, rc.signal),
                                                            rc.functional)));

        const auto model = rc.model();
        const int p = static_cast<int>(i % (rc.spec.N + 1));
        std::vector<double> e(rc.spec.N + 1, 0.0);
        e[p] = 1.0;
        const auto via_solve = solve(model, e);
        g_pt = std::max(g_pt, solution_gap(via_solve, solve_point(model, p)));
        ObservationSeries series;
        for (int t = -300; t <= rc.spec.N + 300; ++t)
            if (t < 0 || t > rc.spec.N) series.values[t] = noise(rng);
        const auto pe = estimate_point(model, p, series);
        g_pt = std::max({g_pt, std::abs(pe.value - estimate(via_solve, series)), std::abs(pe.mse - via_solve.mse())});

        const auto pd = Density::composite(1.0, rc.signal, rc.noise, rc.spec.n);
        const auto co = solve_cointegrated(ObservationModel::cointegrated(rc.spec, rc.signal, pd, 1.0), rc.functional);
        g_co = std::max(g_co, solution_gap(solve(model, rc.functional), co));
    }
    c.expect(g_nf < 1e-10, "noise-free");
    c.expect(g_pt < 1e-10, "single point");
    c.expect(g_co < 1e-10, "cointegrated");
    c.out.detail = "10 models; max field gap: noise-free " + sci(g_nf) + ", point " + sci(g_pt) + ", cointegrated " +
                   sci(g_co);
    return c.out;
}

Outcome orthogonality() {
    Check c;
    double worst = 0;
    int count = 0;
    auto visit = [&](const InterpolationSolution& sol) {
        const double g = gap_leakage(sol);
        worst = std::max(worst, g);
        c.expect(g < 1e-8, "leakage " + sci(g));
        ++count;
    };
    visit(solve(golden_model(), golden_functional()));
    for (const auto& rc : sweep_cases(2024, 20)) visit(solve(rc.model(), rc.functional));
    std::mt19937_64 rng(99);
    for (int i = 0; i < 6; ++i) {
        const auto rc = random_case(rng, true);
        const auto pd = Density::composite(1.1 * 1.1, rc.signal, rc.noise, rc.spec.n);
        visit(solve_cointegrated(ObservationModel::cointegrated(rc.spec, rc.signal, pd, 1.1), rc.functional));
        visit(solve_point(rc.model(), rc.spec.N));
    }
    c.out.detail = std::to_string(count) + " solutions; max gap-index coefficient " + sci(worst);
    return c.out;
}

Outcome minimax_class(const DensityClass& cls, const std::string& name) {
    Check c;
    MinimaxOptions opt;
    const auto pair = least_favorable(cls, golden_spec(), golden_functional(), opt);
    const auto saddle = verify_saddle(pair, cls, 100, 20240601ULL, 1e-6);
    const double rel = std::max(pair.signal.relation, pair.second.relation);
    const double con = std::max({pair.signal.constraint, pair.second.constraint, pair.signal.slackness,
                                 pair.second.slackness});
    c.expect(pair.converged, "not converged");
    c.expect(pair.fixed_point_residual < 1e-6 && rel < 1e-6, "residuals");
    c.expect(con < 1e-6, "constraints");
    c.expect(saddle.violations == 0, "saddle violations");
    c.out.detail = name + ": converged=" + (pair.converged ? "yes" : "no") + " after " +
                   std::to_string(pair.iterations) + " iterations, residual " + sci(pair.fixed_point_residual) +
                   ", relation " + sci(rel) + ", constraints " + sci(con) + ", saddle violations " +
                   std::to_string(saddle.violations) + "/100 (max excess " + sci(saddle.max_violation) + ")";
    return c.out;
}

Outcome minimax_eps() {
    DensityClass cls;
    cls.kind = ClassKind::EpsNeighborhood;
    cls.signal = {false, golden_signal(), 0.1};
    cls.second = {false, Density::zero(), 0.1};
    return minimax_class(cls, "eps class");
}

Outcome minimax_reciprocal() {
    DensityClass cls;
    cls.kind = ClassKind::LowerReciprocalBound;
    cls.signal = {true, golden_signal(), 0.0};
    cls.second = {false, Density::zero(), 1.0};
    return minimax_class(cls, "reciprocal-bound class, f known, P2 = 1");
}

int run_cli(const std::string& cli, const fs::path& cfg, const fs::path& out) {
    const std::string cmd = cli + " --config " + cfg.string() + " --out " + out.string() + " --grid-out >/dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism(const std::string& cli) {
    Check c;
    if (cli.empty()) return {false, "no CLI path given"};
    const fs::path base = fs::temp_directory_path() / ("mmi_determinism_" + std::to_string(::getpid()));
    int compared = 0;
    for (const char* name : {"golden_interpolate.json", "golden_verify.json", "minimax_eps.json"}) {
        const fs::path cfg = fs::path(MMI_TEST_DATA) / name;
        const fs::path a = base / (std::string(name) + ".a"), b = base / (std::string(name) + ".b");
        fs::create_directories(a);
        fs::create_directories(b);
        const int ra = run_cli(cli, cfg, a), rb = run_cli(cli, cfg, b);
        c.expect(ra == 0 && rb == 0, std::string(name) + " exit codes");
        c.expect(slurp(a / "report.json") == slurp(b / "report.json"), std::string(name) + " report differs");
        c.expect(slurp(a / "grid.csv") == slurp(b / "grid.csv"), std::string(name) + " grid differs");
        ++compared;
    }
    fs::remove_all(base);
    c.out.detail = std::to_string(compared) + " configs run twice; reports and grids " +
                   (c.out.pass ? "byte-identical" : "differ: " + c.log.str());
    return c.out;
}

struct Criterion {
    std::string title;
    double budget_s;
    std::function<Outcome(const std::string&)> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::map<std::string, Criterion> criteria{
        {"1", {"golden example exact algebra", 1, [](const std::string&) { return golden_algebra(); }}},
        {"2", {"golden example weights", 1, [](const std::string&) { return golden_weights(); }}},
        {"3", {"golden example MSE arbitration", 5, [](const std::string&) { return golden_mse(); }}},
        {"4", {"oracle equivalence sweep", 60, [](const std::string&) { return oracle_sweep(); }}},
        {"5", {"specialization coherence", 30, [](const std::string&) { return coherence(); }}},
        {"6", {"orthogonality property", 60, [](const std::string&) { return orthogonality(); }}},
        {"7a", {"minimax eps class", 300, [](const std::string&) { return minimax_eps(); }}},
        {"7b", {"minimax reciprocal-bound class", 300, [](const std::string&) { return minimax_reciprocal(); }}},
        {"8", {"CLI determinism", 120, [](const std::string& cli) { return determinism(cli); }}},
    };
    const std::string id = argc > 1 ? argv[1] : "";
    if (id != "all" && !criteria.count(id)) {
        std::cerr << "usage: acceptance <1|2|3|4|5|6|7a|7b|8|all> [cli-path]\n";
        return 2;
    }
    const std::string cli = argc > 2 ? argv[2] : "";
    auto run_one = [&](const std::string& key) {
        const auto& crit = criteria.at(key);
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = crit.run(cli);
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < crit.budget_s;
        const bool pass = out.pass && in_time;
        std::printf("%s criterion %s (%s): %s; %.2f s of %.0f s budget%s\n", pass ? "PASS" : "FAIL", key.c_str(),
                    crit.title.c_str(), out.detail.c_str(), secs, crit.budget_s, in_time ? "" : " EXCEEDED");
        std::fflush(stdout);
        return pass;
    };
    if (id != "all") return run_one(id) ? 0 : 1;
    int failed = 0;
    for (const auto& [key, crit] : criteria) failed += run_one(key) ? 0 : 1;
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
