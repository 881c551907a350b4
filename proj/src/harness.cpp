#include "ghost_spectra/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ghost_spectra/john.hpp"
#include "ghost_spectra/kernels.hpp"
#include "ghost_spectra/parallel.hpp"
#include "ghost_spectra/spectral.hpp"
#include "ghost_spectra/stats.hpp"
#include "ghost_spectra/svg.hpp"

namespace gs {

namespace {

using nlohmann::json;

std::string format_short(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string stream_id(const std::string& kind, const std::string& model, int p, int n,
                      const std::string& suffix = "") {
    std::string id = kind;
    id += '|';
    id += model;
    id += "|p=" + std::to_string(p) + "|n=" + std::to_string(n);
    id += suffix;
    return id;
}

// Per-replicate outputs of one null or alternative draw.
struct RepOut {
    double z_gaussian = 0.0;
    double z_wy = 0.0;
    double z_corrected = 0.0;
    double nU = 0.0;
    double gamma_hat = 0.0;
};

RepOut summarize(const Eigen::MatrixXd& X) {
    const SpectralSample stats = covariance_stats(X);
    const JohnReport rep = calibrate_all(stats, &X);
    return {rep.z_gaussian, rep.z_wy, rep.z_corrected, rep.nU, rep.gamma_hat};
}

double reject_threshold(const std::string& tail, double level) {
    return (tail == "upper") ? normal_quantile(1.0 - level)
                             : normal_quantile(1.0 - level / 2.0);
}

bool rejects(double z, const std::string& tail, double threshold) {
    return (tail == "upper") ? (z > threshold) : (std::abs(z) > threshold);
}

// Empirical upper quantile: the order statistic at rank ceil((1-level) R).
double empirical_quantile(std::vector<double> v, double level) {
    std::sort(v.begin(), v.end());
    const std::size_t R = v.size();
    std::size_t rank = static_cast<std::size_t>(
        std::ceil((1.0 - level) * static_cast<double>(R)));
    if (rank < 1) rank = 1;
    if (rank > R) rank = R;
    return v[rank - 1];
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (static_cast<double>(v.size()) - 1.0);
}

BlockModelConfig model_from_json(const json& j) {
    if (j.is_string()) return preset_model(j.get<std::string>());
    if (!j.is_object()) throw std::invalid_argument("model entries must be names or objects");
    BlockModelConfig cfg;
    cfg.name = j.value("name", std::string("custom"));
    if (!j.contains("blocks") || !j["blocks"].is_array() || j["blocks"].empty())
        throw std::invalid_argument("custom model needs a nonempty blocks array");
    for (const json& jb : j["blocks"]) {
        BlockSpec b;
        b.ratio = jb.at("ratio").get<double>();
        const std::string dir = jb.value("direction", std::string("gaussian"));
        if (dir == "gaussian")
            b.dist = Dist::gaussian;
        else if (dir == "rademacher")
            b.dist = Dist::rademacher;
        else if (dir == "student_t")
            b.dist = Dist::student_t;
        else
            throw std::invalid_argument("unknown direction law: " + dir);
        b.df = jb.value("df", 0);
        b.tau = jb.value("tau", 0.0);
        b.delta = jb.value("delta", 1.0);
        b.alpha = jb.value("alpha", 1.0);
        cfg.blocks.push_back(b);
    }
    return cfg;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (kind != "size" && kind != "power" && kind != "phase")
        throw std::invalid_argument("unknown experiment kind: " + kind);
    if (reps < 100) throw std::invalid_argument("need at least 100 replications");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must lie in (0,1)");
    if (tail != "two-sided" && tail != "upper")
        throw std::invalid_argument("tail must be two-sided or upper");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
    if (!(n_factor > 0.0)) throw std::invalid_argument("n_factor must be positive");
    if (p_grid.empty()) throw std::invalid_argument("empty p grid");
    for (int p : p_grid)
        if (p < 2) throw std::invalid_argument("dimensions must be at least 2");
    if (kind != "phase") {
        if (models.empty()) throw std::invalid_argument("no models configured");
        for (const BlockModelConfig& m : models)
            for (int p : p_grid) validate_model(m, p);
    }
    if (kind == "power") {
        if (a_grid.empty()) throw std::invalid_argument("empty alternative grid");
        for (double a : a_grid)
            if (!(a > 0.0)) throw std::invalid_argument("alternative strengths must be positive");
        if (!(alt_frac > 0.0 && alt_frac <= 1.0))
            throw std::invalid_argument("alternative fraction must lie in (0,1]");
    }
    if (kind == "phase") {
        if (phi_grid.empty()) throw std::invalid_argument("empty phi grid");
        if (!(phase_c > 0.0)) throw std::invalid_argument("phase ratio must be positive");
        if (!(phase_tau > 0.0)) throw std::invalid_argument("phase tau must be positive");
        for (double phi : phi_grid)
            if (!(2.0 - phi > 0.0))
                throw std::invalid_argument("phi must stay below 2 so delta = 2 - phi > 0");
    }
}

ExperimentConfig default_config(const std::string& kind) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    if (kind == "size") {
        cfg.p_grid = {50, 100, 150, 200, 250, 300};
        for (const std::string& name : known_presets()) cfg.models.push_back(preset_model(name));
    } else if (kind == "power") {
        cfg.p_grid = {200};
        for (const std::string& name : known_presets()) cfg.models.push_back(preset_model(name));
    } else if (kind == "phase") {
        cfg.p_grid = {100, 150, 200, 300, 400, 600, 800};
    } else {
        throw std::invalid_argument("unknown experiment kind: " + kind);
    }
    return cfg;
}

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

    const std::string kind = j.value("kind", std::string("size"));
    ExperimentConfig cfg = default_config(kind);

    static const std::set<std::string> known = {
        "kind",   "models", "p_grid", "n_factor", "reps",        "level",
        "seed",   "threads", "tail",  "sigma2",   "alternative", "phase",
        "plots",  "out"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw std::invalid_argument("unknown config key: " + it.key());

    if (j.contains("models")) {
        cfg.models.clear();
        for (const json& jm : j["models"]) cfg.models.push_back(model_from_json(jm));
    }
    if (j.contains("p_grid")) cfg.p_grid = j["p_grid"].get<std::vector<int>>();
    cfg.n_factor = j.value("n_factor", cfg.n_factor);
    cfg.reps = j.value("reps", cfg.reps);
    cfg.level = j.value("level", cfg.level);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.tail = j.value("tail", cfg.tail);
    cfg.sigma2 = j.value("sigma2", cfg.sigma2);
    cfg.plots = j.value("plots", cfg.plots);
    cfg.out = j.value("out", cfg.out);
    if (j.contains("alternative")) {
        const json& ja = j["alternative"];
        cfg.alt_frac = ja.value("frac", cfg.alt_frac);
        if (ja.contains("a_grid")) cfg.a_grid = ja["a_grid"].get<std::vector<double>>();
    }
    if (j.contains("phase")) {
        const json& jp = j["phase"];
        cfg.phase_c = jp.value("c", cfg.phase_c);
        cfg.phase_tau = jp.value("tau", cfg.phase_tau);
        if (jp.contains("phi_grid")) cfg.phi_grid = jp["phi_grid"].get<std::vector<double>>();
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json(buf.str());
}

ResultTable run_size(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.kind != "size") throw std::invalid_argument("config kind must be size");
    const double threshold = reject_threshold(cfg.tail, cfg.level);

    ResultTable table;
    for (const BlockModelConfig& model : cfg.models) {
        for (int p : cfg.p_grid) {
            const int n = static_cast<int>(std::lround(cfg.n_factor * p));
            const std::string id = stream_id("size", model.name, p, n);
            const SeedSpec seed{cfg.seed, id};

            std::vector<RepOut> reps(static_cast<std::size_t>(cfg.reps));
            parallel_for(reps.size(), cfg.threads, [&](std::size_t r) {
                const Eigen::MatrixXd X = sample_block_dataset(
                    model, p, n, seed, r, nullptr, cfg.sigma2);
                reps[r] = summarize(X);
            });

            double rej_g = 0.0, rej_w = 0.0, rej_c = 0.0;
            std::vector<double> nu(reps.size()), gh(reps.size());
            for (std::size_t r = 0; r < reps.size(); ++r) {
                rej_g += rejects(reps[r].z_gaussian, cfg.tail, threshold);
                rej_w += rejects(reps[r].z_wy, cfg.tail, threshold);
                rej_c += rejects(reps[r].z_corrected, cfg.tail, threshold);
                nu[r] = reps[r].nU;
                gh[r] = reps[r].gamma_hat;
            }
            const double R = static_cast<double>(reps.size());
            auto add = [&](const std::string& method, const std::string& metric, double v) {
                table.rows.push_back({"size", model.name, p, n, method, metric, v,
                                      cfg.reps, cfg.seed});
            };
            add("gaussian", "reject_rate", rej_g / R);
            add("wy", "reject_rate", rej_w / R);
            add("corrected", "reject_rate", rej_c / R);
            add("statistic", "mean_nU", mean_of(nu));
            add("statistic", "var_nU", variance_of(nu));
            add("statistic", "mean_gamma_hat", mean_of(gh));
        }
    }
    table.sort_rows();
    return table;
}

ResultTable run_power(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.kind != "power") throw std::invalid_argument("config kind must be power");

    ResultTable table;
    for (const BlockModelConfig& model : cfg.models) {
        for (int p : cfg.p_grid) {
            const int n = static_cast<int>(std::lround(cfg.n_factor * p));

            // Critical values from a dedicated null run.
            const SeedSpec null_seed{cfg.seed, stream_id("power", model.name, p, n, ":null")};
            std::vector<RepOut> null_reps(static_cast<std::size_t>(cfg.reps));
            parallel_for(null_reps.size(), cfg.threads, [&](std::size_t r) {
                const Eigen::MatrixXd X = sample_block_dataset(
                    model, p, n, null_seed, r, nullptr, cfg.sigma2);
                null_reps[r] = summarize(X);
            });
            const bool upper = (cfg.tail == "upper");
            auto null_scores = [&](auto member) {
                std::vector<double> v(null_reps.size());
                for (std::size_t r = 0; r < null_reps.size(); ++r)
                    v[r] = upper ? null_reps[r].*member : std::abs(null_reps[r].*member);
                return v;
            };
            const double crit_g = empirical_quantile(null_scores(&RepOut::z_gaussian), cfg.level);
            const double crit_w = empirical_quantile(null_scores(&RepOut::z_wy), cfg.level);
            const double crit_c = empirical_quantile(null_scores(&RepOut::z_corrected), cfg.level);

            // Alternative draws: one base dataset per replicate, rescaled by
            // each alternative strength so power curves share their noise.
            const int spiked = static_cast<int>(std::floor(cfg.alt_frac * p));
            const SeedSpec alt_seed{cfg.seed, stream_id("power", model.name, p, n, ":alt")};
            struct AltOut {
                std::vector<double> z_g, z_w, z_c;
            };
            std::vector<AltOut> alt(static_cast<std::size_t>(cfg.reps));
            parallel_for(alt.size(), cfg.threads, [&](std::size_t r) {
                const Eigen::MatrixXd base = sample_block_dataset(
                    model, p, n, alt_seed, r, nullptr, cfg.sigma2);
                AltOut& out = alt[r];
                out.z_g.resize(cfg.a_grid.size());
                out.z_w.resize(cfg.a_grid.size());
                out.z_c.resize(cfg.a_grid.size());
                for (std::size_t ia = 0; ia < cfg.a_grid.size(); ++ia) {
                    Eigen::MatrixXd X = base;
                    X.topRows(spiked) *= std::sqrt(cfg.a_grid[ia]);
                    const RepOut rep = summarize(X);
                    out.z_g[ia] = rep.z_gaussian;
                    out.z_w[ia] = rep.z_wy;
                    out.z_c[ia] = rep.z_corrected;
                }
            });

            auto add = [&](const std::string& method, const std::string& metric, double v) {
                table.rows.push_back({"power", model.name, p, n, method, metric, v,
                                      cfg.reps, cfg.seed});
            };
            add("gaussian", "critical_value", crit_g);
            add("wy", "critical_value", crit_w);
            add("corrected", "critical_value", crit_c);
            const double R = static_cast<double>(alt.size());
            for (std::size_t ia = 0; ia < cfg.a_grid.size(); ++ia) {
                double pg = 0.0, pw = 0.0, pc = 0.0;
                for (const AltOut& out : alt) {
                    pg += (upper ? out.z_g[ia] : std::abs(out.z_g[ia])) > crit_g;
                    pw += (upper ? out.z_w[ia] : std::abs(out.z_w[ia])) > crit_w;
                    pc += (upper ? out.z_c[ia] : std::abs(out.z_c[ia])) > crit_c;
                }
                const std::string suffix = "power_adj_a=" + format_short(cfg.a_grid[ia]);
                add("gaussian", suffix, pg / R);
                add("wy", suffix, pw / R);
                add("corrected", suffix, pc / R);
            }
        }
    }
    table.sort_rows();
    return table;
}

ResultTable run_phase(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.kind != "phase") throw std::invalid_argument("config kind must be phase");
    const DiscreteLaw H = DiscreteLaw::point(1.0);
    const Poly f2 = Poly::x2();

    ResultTable table;
    for (double phi : cfg.phi_grid) {
        const double delta = 2.0 - phi;
        BlockModelConfig model;
        model.name = "phi=" + format_short(phi);
        BlockSpec b;
        b.ratio = 1.0;
        b.dist = Dist::gaussian;
        b.tau = cfg.phase_tau;
        b.delta = delta;
        b.alpha = 1.0;
        model.blocks = {b};

        for (int p : cfg.p_grid) {
            const int n = static_cast<int>(std::lround(p / cfg.phase_c));
            validate_model(model, p);
            const double c_n = static_cast<double>(p) / n;
            const SeedSpec seed{cfg.seed, stream_id("phase", model.name, p, n)};

            std::vector<double> values(static_cast<std::size_t>(cfg.reps));
            parallel_for(values.size(), cfg.threads, [&](std::size_t r) {
                const Eigen::MatrixXd X = sample_block_dataset(model, p, n, seed, r);
                const SpectralSample stats = covariance_stats(X);
                values[r] = lss_centered(stats, f2, c_n, H);
            });

            const PhaseIndices idx = phase_indices({{1.0, delta}}, p);
            const double var_raw = variance_of(values);
            auto add = [&](const std::string& metric, double v) {
                table.rows.push_back({"phase", model.name, p, n, "lss_x2", metric, v,
                                      cfg.reps, cfg.seed});
            };
            add("var_raw", var_raw);
            add("var_rescaled", idx.r_p * idx.r_p * var_raw);
            add("r_p", idx.r_p);
            add("mean", mean_of(values));
        }
    }
    table.sort_rows();
    return table;
}

std::vector<std::string> write_plots(const ResultTable& table,
                                     const ExperimentConfig& cfg,
                                     const std::string& stem) {
    std::vector<std::string> written;
    auto save = [&](const std::string& path, const LinePlot& plot) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write plot file: " + path);
        out << render_svg(plot);
        written.push_back(path);
    };

    if (cfg.kind == "size" || cfg.kind == "power") {
        for (const BlockModelConfig& model : cfg.models) {
            LinePlot plot;
            plot.title = cfg.kind + " " + model.name;
            plot.x_label = (cfg.kind == "size") ? "p" : "a";
            plot.y_label = "rejection rate";
            for (const std::string& method : {"gaussian", "wy", "corrected"}) {
                PlotSeries series;
                series.label = method;
                for (const ResultRow& r : table.rows) {
                    if (r.model != model.name || r.method != method) continue;
                    if (cfg.kind == "size") {
                        if (r.metric != "reject_rate") continue;
                        series.x.push_back(r.p);
                    } else {
                        if (r.metric.rfind("power_adj_a=", 0) != 0) continue;
                        series.x.push_back(std::stod(r.metric.substr(12)));
                    }
                    series.y.push_back(r.value);
                }
                if (!series.x.empty()) plot.series.push_back(std::move(series));
            }
            if (!plot.series.empty())
                save(stem + "_" + model.name + ".svg", plot);
        }
    } else if (cfg.kind == "phase") {
        for (const char* metric : {"var_raw", "var_rescaled"}) {
            LinePlot plot;
            plot.title = std::string("phase ") + metric;
            plot.x_label = "p";
            plot.y_label = metric;
            plot.log_x = true;
            plot.log_y = true;
            for (double phi : cfg.phi_grid) {
                PlotSeries series;
                series.label = "phi=" + format_short(phi);
                for (const ResultRow& r : table.rows) {
                    if (r.model != series.label || r.metric != metric) continue;
                    series.x.push_back(r.p);
                    series.y.push_back(r.value);
                }
                if (!series.x.empty()) plot.series.push_back(std::move(series));
            }
            if (!plot.series.empty()) save(stem + "_" + metric + ".svg", plot);
        }
    }
    return written;
}

}  // namespace gs
