#include "macgof/gof.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace macgof {

namespace {

void validate(const GofConfig& cfg) {
    if (cfg.B < 1) throw std::invalid_argument("gof: B must be at least 1");
    if (cfg.M < 99) throw std::invalid_argument("gof: M must be at least 99, got " + std::to_string(cfg.M));
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw std::invalid_argument("gof: alpha must lie in (0, 1)");
}

GofReport run(const PairedSample& data, FittedModel fit, GofConfig cfg, const NullCache* cache,
              std::chrono::steady_clock::time_point start) {
    GofReport report;
    report.n = data.size();
    report.k = resolve_location_count(cfg.mac, report.n);
    cfg.mac.k = report.k;
    if (cfg.B_inner == 0) cfg.B_inner = cfg.B;

    const RowMatrix& xs = data.xs();
    const std::vector<double> y = data.response();

    BootstrapMacConfig series_cfg;
    series_cfg.replicates = cfg.B;
    series_cfg.mac = cfg.mac;
    series_cfg.kind = cfg.bootstrap;
    series_cfg.redraw_locations = cfg.redraw_locations;
    series_cfg.seed = cfg.seed;
    report.T_b = bootstrap_mac_series(fit, xs, y, series_cfg);
    report.T_B = std::accumulate(report.T_b.begin(), report.T_b.end(), 0.0) / static_cast<double>(report.T_b.size());

    const NullConfig null_cfg = gof_null_config(cfg, report.n);
    report.null_seed = null_cfg.seed;

    if (cache) {
        auto found = cache->lookup(null_meta(fit, xs, null_cfg));
        if (!found.warning.empty()) report.warnings.push_back(found.warning);
        if (found.hit) {
            report.null = std::move(*found.hit);
            report.null_from_cache = true;
        }
    }
    if (!report.null_from_cache) {
        report.null = simulate_null(fit, xs, null_cfg);
        if (cache) {
            try {
                (void)cache->store(report.null);
            } catch (const std::exception& e) {
                report.warnings.push_back(std::string("null cache: store failed: ") + e.what());
            }
        }
    }

    report.null_summary = summarize(report.null);
    report.p_value = p_value(report.T_B, report.null);
    report.rejected = report.p_value <= cfg.alpha;
    report.fitted = std::move(fit);
    report.config = cfg;
    report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace

NullConfig gof_null_config(const GofConfig& cfg, std::size_t n) {
    NullConfig null_cfg;
    null_cfg.replicates = cfg.M;
    null_cfg.b_inner = cfg.B_inner == 0 ? cfg.B : cfg.B_inner;
    null_cfg.mac = cfg.mac;
    null_cfg.mac.k = resolve_location_count(cfg.mac, n);
    null_cfg.kind = cfg.bootstrap;
    null_cfg.protocol = cfg.refit_null ? NullProtocol::Refit : NullProtocol::PlugIn;
    null_cfg.redraw_locations = cfg.redraw_locations;
    null_cfg.seed = derive_seed(cfg.seed, Stream::Null);
    return null_cfg;
}

NullSummary summarize(const NullDistribution& null) {
    NullSummary s;
    s.M = null.size();
    s.mean = null.mean();
    s.q05 = null.quantile(0.05);
    s.q25 = null.quantile(0.25);
    s.q50 = null.quantile(0.50);
    s.q75 = null.quantile(0.75);
    s.q95 = null.quantile(0.95);
    return s;
}

GofReport gof_test(const PairedSample& data, const ModelSpec& model, const GofConfig& cfg, const NullCache* cache) {
    const auto start = std::chrono::steady_clock::now();
    validate(cfg);
    if (data.y_dim() != 1) {
        throw std::invalid_argument("gof: model assessment needs a scalar response, got q=" +
                                    std::to_string(data.y_dim()));
    }
    FittedModel fit = fit_model(model, data.xs(), data.response());
    return run(data, std::move(fit), cfg, cache, start);
}

ExternalNoise parse_external_noise(std::string_view name) {
    if (name == "gaussian") return {ExternalNoise::Kind::Gaussian, std::nullopt};
    if (name == "poisson") return {ExternalNoise::Kind::Poisson, std::nullopt};
    if (name == "bernoulli") return {ExternalNoise::Kind::Bernoulli, std::nullopt};
    if (name == "none") return {ExternalNoise::Kind::None, std::nullopt};
    throw std::invalid_argument("unknown noise model '" + std::string(name) + "' (gaussian|poisson|bernoulli|none)");
}

FittedModel external_model(const PairedSample& data, std::span<const double> fitted_means,
                           const ExternalNoise& noise) {
    if (data.y_dim() != 1) {
        throw std::invalid_argument("gof: model assessment needs a scalar response, got q=" +
                                    std::to_string(data.y_dim()));
    }
    if (fitted_means.size() != data.size()) {
        throw std::invalid_argument("gof: " + std::to_string(fitted_means.size()) + " fitted means for " +
                                    std::to_string(data.size()) + " observations");
    }
    for (std::size_t i = 0; i < fitted_means.size(); ++i) {
        const double m = fitted_means[i];
        const bool ok = std::isfinite(m) && (noise.kind != ExternalNoise::Kind::Poisson || m >= 0.0) &&
                        (noise.kind != ExternalNoise::Kind::Bernoulli || (m >= 0.0 && m <= 1.0));
        if (!ok) {
            throw std::invalid_argument("gof: fitted mean " + std::to_string(m) + " at row " + std::to_string(i + 1) +
                                        " is invalid for this noise model");
        }
    }

    const std::vector<double> y = data.response();
    FittedModel fit;
    fit.fixed_means.emplace(fitted_means.begin(), fitted_means.end());
    fit.theta_hat.resize(0);
    switch (noise.kind) {
        case ExternalNoise::Kind::Gaussian:
        case ExternalNoise::Kind::None: {
            fit.family = Family::LinearGaussian;
            fit.residuals.resize(y.size());
            double rss = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) {
                fit.residuals[i] = noise.kind == ExternalNoise::Kind::None ? 0.0 : y[i] - fitted_means[i];
                rss += fit.residuals[i] * fit.residuals[i];
            }
            fit.diagnostics.rss = rss;
            if (noise.kind == ExternalNoise::Kind::Gaussian) {
                if (noise.variance && !(*noise.variance >= 0.0)) {
                    throw std::invalid_argument("gof: noise variance must be non-negative");
                }
                fit.dispersion = noise.variance.value_or(rss / static_cast<double>(y.size()));
            }
            break;
        }
        case ExternalNoise::Kind::Poisson: fit.family = Family::Poisson; break;
        case ExternalNoise::Kind::Bernoulli: fit.family = Family::Logistic; break;
    }
    return fit;
}

GofReport gof_test_external(const PairedSample& data, std::span<const double> fitted_means,
                            const ExternalNoise& noise, const GofConfig& cfg, const NullCache* cache) {
    const auto start = std::chrono::steady_clock::now();
    validate(cfg);
    if (cfg.refit_null) {
        throw std::invalid_argument("gof: externally supplied means cannot be refit");
    }
    return run(data, external_model(data, fitted_means, noise), cfg, cache, start);
}

}  // namespace macgof
