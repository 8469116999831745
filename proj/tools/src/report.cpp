#include "macgof_cli/report.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace macgof::cli {

namespace {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, res.ptr};
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

Json ar_regime_json(const ARRegime& r) {
    Json noise{{"kind", r.noise.kind == NoiseSpec::Kind::Gaussian ? "gaussian" : "lognormal"},
               {"variance", r.noise.variance},
               {"scale", r.noise.scale}};
    if (r.noise.kind == NoiseSpec::Kind::LogNormal) noise["mean"] = r.noise.mean;
    return Json{{"intercept", r.intercept}, {"coefficients", r.coefficients}, {"noise", noise}};
}

// Replaces generic covariate tokens x1, x2, ... in a term name by column names.
std::string with_column_names(const std::string& term, const std::vector<std::string>& x_names) {
    std::string out;
    for (std::size_t i = 0; i < term.size();) {
        if (term[i] == 'x' && i + 1 < term.size() && std::isdigit(static_cast<unsigned char>(term[i + 1]))) {
            std::size_t j = i + 1;
            while (j < term.size() && std::isdigit(static_cast<unsigned char>(term[j]))) ++j;
            const std::size_t index = std::stoul(term.substr(i + 1, j - i - 1));
            if (index >= 1 && index <= x_names.size()) {
                out += x_names[index - 1];
                i = j;
                continue;
            }
        }
        out += term[i++];
    }
    return out;
}

}  // namespace

Json fitted_model_json(const FittedModel& fit, const std::vector<std::string>& x_names) {
    Json j;
    j["family"] = std::string(to_string(fit.family));
    if (fit.fixed_means) {
        j["source"] = "external_means";
        j["dispersion"] = fit.dispersion;
        return j;
    }
    if (fit.ar) {
        j["source"] = "fixed_autoregression";
        j["order"] = fit.ar->order();
        j["lower_regime"] = ar_regime_json(fit.ar->lower);
        if (fit.ar->threshold) {
            j["threshold"] = Json{{"lag", fit.ar->threshold->lag},
                                  {"value", fit.ar->threshold->value},
                                  {"upper_regime", ar_regime_json(fit.ar->threshold->upper)}};
        }
        j["rss"] = fit.diagnostics.rss;
        return j;
    }
    j["source"] = "fitted";
    j["feature_map"] = fit.feature_map.describe();
    const auto names = fit.feature_map.column_names(x_names.size());
    Json coef = Json::array();
    for (Eigen::Index c = 0; c < fit.theta_hat.size(); ++c) {
        const std::string name = with_column_names(names[static_cast<std::size_t>(c)], x_names);
        coef.push_back(Json{{"term", name}, {"estimate", fit.theta_hat[c]}});
    }
    j["coefficients"] = coef;
    j["log_likelihood"] = fit.diagnostics.log_likelihood;
    if (fit.family == Family::LinearGaussian) {
        j["dispersion"] = fit.dispersion;
        j["rss"] = fit.diagnostics.rss;
    } else {
        j["deviance"] = fit.diagnostics.deviance;
        j["iterations"] = fit.diagnostics.iterations;
    }
    return j;
}

Json gof_config_json(const GofConfig& cfg) {
    return Json{{"B", cfg.B},
                {"M", cfg.M},
                {"B_inner", cfg.B_inner},
                {"k", cfg.mac.k},
                {"strategy", std::string(to_string(cfg.mac.strategy))},
                {"pair_ordering", std::string(to_string(cfg.mac.pair_ordering))},
                {"bootstrap", std::string(to_string(cfg.bootstrap))},
                {"alpha", cfg.alpha},
                {"null_protocol", cfg.refit_null ? "refit" : "plugin"},
                {"locations", cfg.redraw_locations ? "redraw" : "fixed"},
                {"seed", cfg.seed}};
}

Json null_summary_json(const NullSummary& s) {
    return Json{{"M", s.M},     {"mean", s.mean}, {"q05", s.q05}, {"q25", s.q25},
                {"q50", s.q50}, {"q75", s.q75},   {"q95", s.q95}};
}

Json gof_report_json(const GofReport& report, const std::vector<std::string>& x_names) {
    double var = 0.0;
    for (double t : report.T_b) var += (t - report.T_B) * (t - report.T_B);
    const double sd = report.T_b.size() > 1 ? std::sqrt(var / static_cast<double>(report.T_b.size() - 1)) : 0.0;
    return Json{{"n", report.n},
                {"k", report.k},
                {"covariates", x_names},
                {"fitted_model", fitted_model_json(report.fitted, x_names)},
                {"config", gof_config_json(report.config)},
                {"null_seed", report.null_seed},
                {"T_B", report.T_B},
                {"T_b_sd", sd},
                {"T_b", report.T_b},
                {"null_summary", null_summary_json(report.null_summary)},
                {"null_from_cache", report.null_from_cache},
                {"p_value", report.p_value},
                {"rejected", report.rejected},
                {"warnings", report.warnings}};
}

Json power_curve_json(const experiments::PowerCurve& curve) {
    Json points = Json::array();
    for (const auto& p : curve.points) {
        points.push_back(Json{{"c", p.c}, {"rate", p.rate}, {"se", p.standard_error()}, {"reps", p.reps}});
    }
    return Json{{"example", curve.example},
                {"n", curve.n},
                {"alpha", curve.config.alpha},
                {"k", curve.config.k},
                {"null_draws", curve.config.null_draws},
                {"strategy", std::string(to_string(curve.config.strategy))},
                {"seed", curve.config.seed},
                {"points", points}};
}

Json replication_json(const experiments::ReplicationResult& r) {
    Json j{{"example", r.id},
           {"n", r.n},
           {"runs", r.p_values.size() + r.failed_fits},
           {"failed_fits", r.failed_fits},
           {"config", gof_config_json(r.config)},
           {"rejection_fraction", r.rejection_fraction},
           {"p_values", r.p_values},
           {"T_B", r.T_B}};
    if (r.id != "6") j["mean_adjusted_r2"] = r.mean_adjusted_r2;
    return j;
}

Json envelope(const std::string& command, std::uint64_t seed, Json payload, double wall_time_seconds) {
    Json j;
    j["format_version"] = kReportFormatVersion;
    j["command"] = command;
    j["seed"] = seed;
    j["result"] = std::move(payload);
    j[kTimingKey] = Json{{"finished_at", utc_timestamp()}, {"wall_time_seconds", wall_time_seconds}};
    return j;
}

Json without_timing(Json report) {
    report.erase(kTimingKey);
    return report;
}

std::string dump(const Json& report) { return report.dump(2) + "\n"; }

void write_atomically(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << text;
        if (!out.flush()) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
}

std::string series_csv(const std::string& index_name, const std::string& value_name, const std::vector<double>& values) {
    std::string out = index_name + "," + value_name + "\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += std::to_string(i + 1) + "," + format_double(values[i]) + "\n";
    }
    return out;
}

}  // namespace macgof::cli
