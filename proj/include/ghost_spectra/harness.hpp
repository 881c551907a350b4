// Monte Carlo experiment harness: JSON-configured size, power and phase
// runs with deterministic seeding, plus the self-validation checks that pin
// the numerics against closed forms and exact oracles.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ghost_spectra/csv.hpp"
#include "ghost_spectra/models.hpp"

namespace gs {

struct ExperimentConfig {
    std::string kind = "size";  // size | power | phase
    std::vector<BlockModelConfig> models;
    std::vector<int> p_grid;
    double n_factor = 2.0;
    int reps = 2000;
    double level = 0.05;
    std::uint64_t seed = 20260801;
    int threads = 0;  // 0 resolves via GHOST_SPECTRA_THREADS, then hardware
    std::string tail = "two-sided";  // or "upper"
    double sigma2 = 1.0;

    // power settings
    std::vector<double> a_grid = {1.0, 1.25, 1.5, 2.0, 3.0};
    double alt_frac = 0.2;

    // phase settings
    std::vector<double> phi_grid = {0.6, 0.9, 1.2, 1.5};
    double phase_c = 0.5;
    double phase_tau = 1.0;

    bool plots = false;
    std::string out;

    void validate() const;
};

// Baseline configuration for a run kind, before JSON overrides.
ExperimentConfig default_config(const std::string& kind);

// Parses a JSON config; unknown keys are rejected so typos fail loudly.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

ResultTable run_size(const ExperimentConfig& cfg);
ResultTable run_power(const ExperimentConfig& cfg);
ResultTable run_phase(const ExperimentConfig& cfg);

// Writes SVG charts next to the CSV; `stem` is the output path without
// extension.  Returns the files written.
std::vector<std::string> write_plots(const ResultTable& table,
                                     const ExperimentConfig& cfg,
                                     const std::string& stem);

// Self-validation checks.  Each one pins a module against an independent
// oracle with a fixed tolerance and reports the measured numbers.
struct CheckResult {
    std::string id;
    bool pass = false;
    std::string detail;
};

CheckResult check_mp_closed_form();
CheckResult check_residue_reduction();
CheckResult check_moment_identities();
CheckResult check_quadform_enumeration(std::uint64_t seed);
CheckResult check_poisson_spike(std::uint64_t seed, int threads, int reps = 5000,
                                int p = 1000, int n = 2000);
CheckResult check_corr_boundary(std::uint64_t seed, std::int64_t rows = 1000000);

std::vector<CheckResult> run_validate(std::uint64_t seed, int threads,
                                      bool quick = false);

}  // namespace gs
