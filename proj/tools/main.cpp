// Command line front end: Monte Carlo experiment runners, one-shot
// calibration queries, a sphericity test on user data, and the built-in
// numerical validation suite.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ghost_spectra/calibration.hpp"
#include "ghost_spectra/harness.hpp"
#include "ghost_spectra/john.hpp"
#include "ghost_spectra/parallel.hpp"
#include "ghost_spectra/stats.hpp"

namespace {

using nlohmann::json;

// Reads a whitespace- or comma-separated numeric matrix; rows must be
// rectangular.  Lines starting with '#' are skipped.
Eigen::MatrixXd read_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open data file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        for (char& c : line)
            if (c == ',' || c == '\t' || c == '\r') c = ' ';
        std::istringstream ss(line);
        std::vector<double> row;
        double v;
        while (ss >> v) row.push_back(v);
        if (!ss.eof())
            throw std::invalid_argument("non-numeric entry in data file: " + path);
        if (row.empty()) continue;
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::invalid_argument("ragged rows in data file: " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("empty data file: " + path);
    Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.front().size(); ++j)
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return M;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    out << text;
}

struct RunOptions {
    std::string config_path;
    std::string out;
    std::uint64_t seed = 0;
    int threads = -1;
    double level = -1.0;
    int reps = 0;
    bool full = false;
    bool plots = false;
    bool no_header = false;
    std::string tail;
};

void add_run_options(CLI::App* sub, RunOptions& opt) {
    sub->add_option("--config", opt.config_path, "JSON experiment config");
    sub->add_option("--out", opt.out, "output CSV path");
    sub->add_option("--seed", opt.seed, "master seed");
    sub->add_option("--threads", opt.threads, "worker threads (0 = auto)");
    sub->add_option("--level", opt.level, "nominal test level");
    sub->add_option("--reps", opt.reps, "Monte Carlo replications");
    sub->add_flag("--full", opt.full, "full-scale replication count (10000)");
    sub->add_flag("--plots", opt.plots, "emit SVG charts next to the CSV");
    sub->add_flag("--no-header", opt.no_header, "omit the CSV header row");
    sub->add_option("--tail", opt.tail, "rejection tail: two-sided (default) or upper");
}

int run_experiment(const std::string& kind, const CLI::App* sub, const RunOptions& opt) {
    gs::ExperimentConfig cfg = opt.config_path.empty()
                                   ? gs::default_config(kind)
                                   : gs::load_config_file(opt.config_path);
    if (cfg.kind != kind)
        throw std::invalid_argument("config kind '" + cfg.kind +
                                    "' does not match subcommand '" + kind + "'");
    if (sub->count("--seed")) cfg.seed = opt.seed;
    if (sub->count("--threads")) cfg.threads = opt.threads;
    if (sub->count("--level")) cfg.level = opt.level;
    if (sub->count("--reps")) cfg.reps = opt.reps;
    if (sub->count("--tail")) cfg.tail = opt.tail;
    if (sub->count("--plots")) cfg.plots = true;
    if (sub->count("--out")) cfg.out = opt.out;
    if (opt.full) cfg.reps = 10000;
    cfg.validate();

    gs::ResultTable table;
    if (kind == "size")
        table = gs::run_size(cfg);
    else if (kind == "power")
        table = gs::run_power(cfg);
    else
        table = gs::run_phase(cfg);

    const std::string out_path = cfg.out.empty() ? kind + ".csv" : cfg.out;
    write_text(out_path, table.to_csv(!opt.no_header));
    std::cout << "wrote " << out_path << " (" << table.rows.size() << " rows)\n";

    if (cfg.plots) {
        std::string stem = out_path;
        if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv")
            stem = stem.substr(0, stem.size() - 4);
        for (const std::string& f : gs::write_plots(table, cfg, stem))
            std::cout << "wrote " << f << "\n";
    }
    return 0;
}

int run_calibrate(double c, int n, double gamma, const std::string& model_name, int p,
                  const std::string& f_name, double sigma2, bool classic_form,
                  int nodes) {
    const gs::Poly f = gs::Poly::named(f_name);
    const gs::DiscreteLaw H = gs::DiscreteLaw::point(sigma2);

    if (!model_name.empty()) {
        if (p <= 0) throw std::invalid_argument("--model needs --p");
        gamma = gs::gamma_scalar_closed_form(
            gs::gamma_params_for(gs::preset_model(model_name), p));
    }

    const gs::ContourSpec contour = gs::ContourSpec::around(c, H, 0.5, 0.75, nodes);
    const auto [inner, outer] = gs::nested_contours(c, H, nodes);
    const gs::GammaEvaluator eval = gs::spherical_gamma_eval(gamma, sigma2, classic_form);
    const gs::MeanApprox mean = gs::mean_approximant(f, c, H, eval, n, contour);
    const gs::CovApprox cov = gs::cov_approximant(f, f, c, H, eval, n, inner, outer);

    json out;
    out["c"] = c;
    out["n"] = n;
    out["gamma"] = gamma;
    out["f"] = f_name;
    out["sigma2"] = sigma2;
    out["classic_form"] = classic_form;
    out["M0"] = mean.m0;
    out["M1"] = mean.m1;
    out["V0"] = cov.v0;
    out["V1"] = cov.v1;
    if (sigma2 == 1.0)
        out["residue_multiplier"] = gs::residue_m1_spherical(f, c, classic_form);
    if (p > 0) {
        const gs::JohnMoments jm = gs::john_asymptotics(p, n, gamma);
        out["john"] = {{"mean_nU", jm.mean_nU},
                       {"var_nU", jm.var_nU},
                       {"mean_Q", jm.mean_Q},
                       {"var_Q", jm.var_Q}};
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_test(const std::string& data_path, bool transpose, double level,
             bool no_studentize) {
    Eigen::MatrixXd M = read_matrix(data_path);
    // Default file layout: rows are observations, columns are variables;
    // internally observations live in columns.
    Eigen::MatrixXd X = transpose ? M : Eigen::MatrixXd(M.transpose());
    const gs::SpectralSample sample = gs::covariance_stats(X);
    const gs::JohnReport r = gs::calibrate_all(sample, &X, !no_studentize);

    const double thr_two = gs::normal_quantile(1.0 - level / 2.0);
    const double thr_up = gs::normal_quantile(1.0 - level);
    json out;
    out["p"] = r.p;
    out["n"] = r.n;
    out["U"] = r.U;
    out["Q"] = r.Q;
    out["nU"] = r.nU;
    out["gamma_hat"] = r.gamma_hat;
    out["nu4_hat"] = r.nu4_hat;
    out["level"] = level;
    out["z"] = {{"gaussian", r.z_gaussian}, {"wy", r.z_wy}, {"corrected", r.z_corrected}};
    out["p_upper"] = {{"gaussian", r.p_gaussian}, {"wy", r.p_wy}, {"corrected", r.p_corrected}};
    out["reject_two_sided"] = {{"gaussian", std::abs(r.z_gaussian) > thr_two},
                               {"wy", std::abs(r.z_wy) > thr_two},
                               {"corrected", std::abs(r.z_corrected) > thr_two}};
    out["reject_upper"] = {{"gaussian", r.z_gaussian > thr_up},
                           {"wy", r.z_wy > thr_up},
                           {"corrected", r.z_corrected > thr_up}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_validation(std::uint64_t seed, int threads, bool quick) {
    const std::vector<gs::CheckResult> results = gs::run_validate(seed, threads, quick);
    bool all = true;
    for (const gs::CheckResult& r : results) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << ": " << r.detail << "\n";
        all = all && r.pass;
    }
    std::cout << (all ? "all checks passed\n" : "some checks FAILED\n");
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fluctuation-calibrated linear spectral statistics of sample "
                 "covariance matrices"};
    app.require_subcommand(1);

    RunOptions size_opt, power_opt, phase_opt;
    CLI::App* size_cmd = app.add_subcommand("size", "empirical size of the sphericity tests");
    add_run_options(size_cmd, size_opt);
    CLI::App* power_cmd = app.add_subcommand("power", "size-adjusted power against block alternatives");
    add_run_options(power_cmd, power_opt);
    CLI::App* phase_cmd = app.add_subcommand("phase", "fluctuation scale across the phase transition");
    add_run_options(phase_cmd, phase_opt);

    double cal_c = 0.5, cal_gamma = 0.0, cal_sigma2 = 1.0;
    int cal_n = 0, cal_p = 0, cal_nodes = 512;
    std::string cal_model, cal_f = "x2";
    bool cal_classic = false;
    CLI::App* cal_cmd = app.add_subcommand("calibrate", "print mean/covariance functionals");
    cal_cmd->add_option("--c", cal_c, "dimension ratio p/n")->required();
    cal_cmd->add_option("--n", cal_n, "sample size")->required();
    cal_cmd->add_option("--gamma", cal_gamma, "scalar correction");
    cal_cmd->add_option("--model", cal_model, "model preset supplying gamma (needs --p)");
    cal_cmd->add_option("--p", cal_p, "dimension (for --model and the asymptotic moments)");
    cal_cmd->add_option("--f", cal_f, "test function: x, x2, x3, ...");
    cal_cmd->add_option("--sigma2", cal_sigma2, "population scale");
    cal_cmd->add_flag("--classic-form", cal_classic,
                      "classic residue sign and first-power covariance pair");
    cal_cmd->add_option("--nodes", cal_nodes, "quadrature nodes per contour side");

    std::string test_data;
    bool test_transpose = false, test_no_studentize = false;
    double test_level = 0.05;
    CLI::App* test_cmd = app.add_subcommand("test", "sphericity test on a data matrix");
    test_cmd->add_option("--data", test_data, "matrix file (rows = observations)")->required();
    test_cmd->add_flag("--transpose", test_transpose, "rows are variables instead");
    test_cmd->add_option("--level", test_level, "nominal level");
    test_cmd->add_flag("--no-studentize", test_no_studentize,
                       "raw energies in the correction estimator");

    std::uint64_t val_seed = 20260801;
    int val_threads = 0;
    bool val_quick = false;
    CLI::App* val_cmd = app.add_subcommand("validate", "run the numerical validation suite");
    val_cmd->add_option("--seed", val_seed, "master seed");
    val_cmd->add_option("--threads", val_threads, "worker threads (0 = auto)");
    val_cmd->add_flag("--quick", val_quick, "reduced replication counts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (size_cmd->parsed()) return run_experiment("size", size_cmd, size_opt);
        if (power_cmd->parsed()) return run_experiment("power", power_cmd, power_opt);
        if (phase_cmd->parsed()) return run_experiment("phase", phase_cmd, phase_opt);
        if (cal_cmd->parsed())
            return run_calibrate(cal_c, cal_n, cal_gamma, cal_model, cal_p, cal_f,
                                 cal_sigma2, cal_classic, cal_nodes);
        if (test_cmd->parsed())
            return run_test(test_data, test_transpose, test_level, test_no_studentize);
        if (val_cmd->parsed()) return run_validation(val_seed, val_threads, val_quick);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
