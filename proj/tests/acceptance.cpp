// Acceptance gate: one PASS/FAIL line per shipped guarantee, exit code equal
// to the number of failures.  Bands and tolerances are pinned here on
// purpose; loosening them is a deliberate act, not a merge accident.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ghost_spectra/harness.hpp"
#include "ghost_spectra/john.hpp"
#include "ghost_spectra/kernels.hpp"
#include "ghost_spectra/models.hpp"
#include "ghost_spectra/parallel.hpp"
#include "ghost_spectra/spectral.hpp"

using namespace gs;

namespace {

constexpr std::uint64_t kSeed = 20260801;

int g_failures = 0;

void line(int k, const char* name, bool pass, const char* format, ...) {
    char buf[1024];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    std::printf("%-4s criterion %2d [%s]: %s\n", pass ? "PASS" : "FAIL", k, name, buf);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const ResultRow* find_row(const ResultTable& t, const std::string& model,
                          const std::string& method, const std::string& metric) {
    for (const ResultRow& r : t.rows)
        if (r.model == model && r.method == method && r.metric == metric) return &r;
    return nullptr;
}

bool in_band(double x, double lo, double hi) { return x >= lo && x <= hi; }

// Criteria 1 and 2: empirical size of the calibrated tests at (p, n) = (200, 400).
void criteria_size() {
    ExperimentConfig cfg = default_config("size");
    cfg.models = {preset_model("M1"), preset_model("M2"), preset_model("M4"),
                  preset_model("M6")};
    cfg.p_grid = {200};
    cfg.reps = 2000;
    cfg.seed = kSeed;
    cfg.threads = 0;

    const auto t0 = std::chrono::steady_clock::now();
    const ResultTable t = run_size(cfg);
    const double elapsed = seconds_since(t0);

    auto rate = [&](const char* model, const char* method) {
        const ResultRow* r = find_row(t, model, method, "reject_rate");
        return r ? r->value : -1.0;
    };
    const double m1c = rate("M1", "corrected");
    const double m2g = rate("M2", "gaussian");
    const double m2c = rate("M2", "corrected");
    const double m4g = rate("M4", "gaussian");
    const double m4c = rate("M4", "corrected");
    const double m6c = rate("M6", "corrected");

    const bool pass = in_band(m1c, 0.03, 0.07) && in_band(m2g, 0.14, 0.21) &&
                      in_band(m2c, 0.035, 0.075) && m4g >= 0.99 &&
                      in_band(m4c, 0.04, 0.09) && in_band(m6c, 0.035, 0.08) &&
                      elapsed < 600.0;
    line(1, "size bands", pass,
         "M1 corr %.4f [0.03,0.07], M2 gauss %.4f [0.14,0.21], M2 corr %.4f "
         "[0.035,0.075], M4 gauss %.4f >=0.99, M4 corr %.4f [0.04,0.09], "
         "M6 corr %.4f [0.035,0.08], %.0fs < 600s",
         m1c, m2g, m2c, m4g, m4c, m6c, elapsed);

    const ResultRow* mean_nu = find_row(t, "M2", "statistic", "mean_nU");
    const ResultRow* var_nu = find_row(t, "M2", "statistic", "var_nU");
    const double mean = mean_nu ? mean_nu->value : -1.0;
    const double var = var_nu ? var_nu->value : -1.0;
    const double se3 = 3.0 * std::sqrt(4.0 / cfg.reps);
    const bool pass2 =
        std::abs(mean - 199.0) <= se3 && in_band(var, 3.3, 4.7);
    line(2, "statistic moments", pass2,
         "M2 mean nU %.4f (199 +- %.4f), var nU %.4f in [3.3,4.7]", mean, se3, var);
}

void criterion_check(int k, const char* name, const CheckResult& r) {
    line(k, name, r.pass, "%s", r.detail.c_str());
}

// Criterion 8: fluctuation scale across the transition.
void criterion_phase() {
    ExperimentConfig cfg = default_config("phase");
    cfg.phi_grid = {0.6, 1.5};
    cfg.p_grid = {100, 200, 400, 800};
    cfg.reps = 3000;
    cfg.seed = kSeed;
    cfg.threads = 0;
    const auto t0 = std::chrono::steady_clock::now();
    const ResultTable t = run_phase(cfg);
    const double elapsed = seconds_since(t0);

    auto series = [&](const char* model, const char* metric) {
        std::vector<std::pair<double, double>> xy;
        for (int p : cfg.p_grid) {
            for (const ResultRow& r : t.rows)
                if (r.model == model && r.p == p && r.metric == metric)
                    xy.emplace_back(static_cast<double>(p), r.value);
        }
        return xy;
    };

    const auto grow = series("phi=1.5", "var_raw");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [p, v] : grow) {
        const double x = std::log(p), y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(grow.size());
    const double slope = (sxy - sx * sy / m) / (sxx - sx * sx / m);

    auto spread = [](const std::vector<std::pair<double, double>>& xy) {
        double lo = xy.front().second, hi = lo;
        for (const auto& [p, v] : xy) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return hi / lo;
    };
    const double resc_spread = spread(series("phi=1.5", "var_rescaled"));
    const double sub_spread = spread(series("phi=0.6", "var_raw"));

    const bool pass = in_band(slope, 0.5 - 0.25, 0.5 + 0.25) && resc_spread < 2.0 &&
                      sub_spread < 3.0;
    line(8, "phase transition", pass,
         "phi=1.5 raw-variance slope %.3f in [0.25,0.75], rescaled spread %.2fx < 2, "
         "phi=0.6 raw spread %.2fx < 3 (%.0fs)",
         slope, resc_spread, sub_spread, elapsed);
}

// Criterion 9: the energy-based correction estimator on the heavy mixed model.
void criterion_gamma_hat() {
    const BlockModelConfig model = preset_model("M4");
    const int p = 200, n = 400, reps = 200;
    const double target = gamma_scalar_closed_form(gamma_params_for(model, p));

    const SeedSpec seed{kSeed, "acceptance|gamma-hat"};
    std::vector<double> gh(reps);
    parallel_for(gh.size(), 0, [&](std::size_t r) {
        const Eigen::MatrixXd X = sample_block_dataset(model, p, n, seed, r);
        gh[r] = gamma_hat(covariance_stats(X).energies, p);
    });
    double mean = 0.0;
    for (double v : gh) mean += v;
    mean /= reps;

    const Eigen::MatrixXd X0 = sample_block_dataset(model, p, n, seed, 9999);
    const Eigen::VectorXd T0 = covariance_stats(X0).energies;
    double worst_rel = 0.0;
    const double base = gamma_hat(T0, p);
    for (double sigma : {0.1, 10.0}) {
        const double scaled = gamma_hat((sigma * sigma * T0).eval(), p);
        worst_rel = std::max(worst_rel, std::abs(scaled - base) / std::abs(base));
    }

    const bool pass = std::abs(mean - target) <= 0.10 * target && worst_rel <= 1e-12;
    line(9, "correction estimator", pass,
         "M4 mean gamma_hat %.1f vs %.1f (10%% band), scale drift %.2e <= 1e-12",
         mean, target, worst_rel);
}

// Criterion 11: CSV output is byte-identical across thread counts, through
// the real command line binary.
void criterion_cli() {
    const char* cli = std::getenv("GS_CLI");
    if (!cli || !*cli) {
        line(11, "cli determinism", false,
             "GS_CLI is not set; run through ctest or export the binary path");
        return;
    }
    const std::string cfg_path = "acceptance_cli_cfg.json";
    {
        std::ofstream cfg(cfg_path);
        cfg << R"({"kind":"size","models":["M1","M2"],"p_grid":[100],)"
            << R"("reps":300,"seed":31415})";
    }
    auto run = [&](int threads, const std::string& out) {
        std::ostringstream cmd;
        cmd << '"' << cli << '"' << " size --config " << cfg_path << " --out " << out
            << " --threads " << threads << " > /dev/null";
        return std::system(cmd.str().c_str());
    };
    const int rc1 = run(1, "acceptance_cli_t1.csv");
    const int rc8 = run(8, "acceptance_cli_t8.csv");

    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    const std::string a = slurp("acceptance_cli_t1.csv");
    const std::string b = slurp("acceptance_cli_t8.csv");
    const bool pass = rc1 == 0 && rc8 == 0 && !a.empty() && a == b;
    line(11, "cli determinism", pass,
         "exit %d/%d, %zu bytes, --threads 1 vs 8 %s", rc1, rc8, a.size(),
         a == b ? "identical" : "DIFFER");
    std::remove(cfg_path.c_str());
    std::remove("acceptance_cli_t1.csv");
    std::remove("acceptance_cli_t8.csv");
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    const int threads = resolve_threads(0);
    std::printf("acceptance gate, %d threads\n", threads);

    criteria_size();
    criterion_check(3, "moment identities", check_moment_identities());
    criterion_check(4, "residue reduction", check_residue_reduction());
    criterion_check(5, "mp solver", check_mp_closed_form());
    criterion_check(6, "enumeration oracle", check_quadform_enumeration(kSeed));
    {
        const auto s0 = std::chrono::steady_clock::now();
        CheckResult r = check_poisson_spike(kSeed, 0);
        const double el = seconds_since(s0);
        r.pass = r.pass && el < 300.0;
        criterion_check(7, "poisson spike", r);
    }
    criterion_phase();
    criterion_gamma_hat();
    criterion_check(10, "correlation boundary", check_corr_boundary(kSeed));
    criterion_cli();

    std::printf("%d of 11 criteria failed, %.0fs total\n", g_failures,
                seconds_since(t0));
    return g_failures;
}
