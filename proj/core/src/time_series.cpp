#include "macgof/errors.hpp"
#include "macgof/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace macgof {

namespace {

void validate_regime(const ARRegime& r, const char* which) {
    const std::string name(which);
    if (r.coefficients.empty()) {
        throw std::invalid_argument("AR " + name + " regime needs at least one lag coefficient");
    }
    const bool finite = std::isfinite(r.intercept) &&
                        std::all_of(r.coefficients.begin(), r.coefficients.end(),
                                    [](double c) { return std::isfinite(c); });
    if (!finite) throw std::invalid_argument("AR " + name + " regime has non-finite coefficients");
    if (!(r.noise.variance >= 0.0) || !(r.noise.scale >= 0.0)) {
        throw std::invalid_argument("AR " + name + " regime noise needs variance >= 0 and scale >= 0");
    }
    if (r.noise.kind == NoiseSpec::Kind::LogNormal && r.noise.variance > 0.0 && !(r.noise.mean > 0.0)) {
        throw std::invalid_argument("AR " + name + " regime: log-normal innovation needs a positive mean");
    }
}

}  // namespace

double NoiseSpec::draw(Rng& rng) const {
    if (kind == Kind::Gaussian) {
        if (variance == 0.0) return 0.0;
        return scale * std::normal_distribution<double>(0.0, std::sqrt(variance))(rng);
    }
    if (variance == 0.0) return scale * mean;
    // Moment matching: the innovation itself has the given mean and variance.
    const double sigma2 = std::log1p(variance / (mean * mean));
    const double mu = std::log(mean) - 0.5 * sigma2;
    return scale * std::lognormal_distribution<double>(mu, std::sqrt(sigma2))(rng);
}

std::size_t FixedARSpec::order() const noexcept {
    std::size_t order = lower.coefficients.size();
    if (threshold) {
        order = std::max({order, threshold->upper.coefficients.size(), threshold->lag});
    }
    return order;
}

const ARRegime& FixedARSpec::regime(std::span<const double> lags) const {
    if (threshold && lags[threshold->lag - 1] > threshold->value) {
        return threshold->upper;
    }
    return lower;
}

void FixedARSpec::validate() const {
    validate_regime(lower, "lower");
    if (threshold) {
        if (threshold->lag == 0) throw std::invalid_argument("AR threshold lag must be >= 1");
        validate_regime(threshold->upper, "upper");
    }
}

FixedARSpec FixedARSpec::sunspot_ar9() {
    // Lag 6 is printed as a second z_{t-5} term in the source; it is read as lag 6.
    return FixedARSpec{
        ARRegime{6.96, {1.21, -0.45, -0.17, 0.20, -0.13, 0.03, 0.01, -0.03, 0.21}, NoiseSpec::gaussian(221.24)},
        std::nullopt};
}

FixedARSpec FixedARSpec::sunspot_tar() {
    return FixedARSpec{
        ARRegime{10.88, {1.869, -1.556, 0.086, 0.326}, NoiseSpec::gaussian(275.7)},
        Threshold{3, 32.3,
                  ARRegime{8.726,
                           {0.679, 0.064, -0.217, 0.044, -0.118, -0.005, 0.192, -0.285, 0.242, -0.123, 0.246},
                           NoiseSpec::gaussian(82.9, 2.0)}}};
}

FixedARSpec FixedARSpec::sunspot_ar2_lognormal() {
    return FixedARSpec{ARRegime{0.0, {1.6759, -0.7840}, NoiseSpec::log_normal(13.88, 153.39)}, std::nullopt};
}

FixedARSpec FixedARSpec::preset(std::string_view name) {
    if (name == "ar9") return sunspot_ar9();
    if (name == "tar") return sunspot_tar();
    if (name == "ar2-lognormal") return sunspot_ar2_lognormal();
    throw std::invalid_argument("unknown AR preset '" + std::string(name) + "' (ar9|tar|ar2-lognormal)");
}

FittedModel fixed_ar_model(FixedARSpec spec) {
    spec.validate();
    FittedModel fit;
    fit.family = Family::FixedAR;
    fit.theta_hat.resize(static_cast<Eigen::Index>(spec.lower.coefficients.size() + 1));
    fit.theta_hat[0] = spec.lower.intercept;
    for (std::size_t l = 0; l < spec.lower.coefficients.size(); ++l) {
        fit.theta_hat[static_cast<Eigen::Index>(l + 1)] = spec.lower.coefficients[l];
    }
    fit.ar = std::move(spec);
    return fit;
}

std::vector<double> simulate_ar(const FixedARSpec& spec, std::size_t length, std::size_t burn_in,
                                std::span<const double> init, Rng& rng) {
    spec.validate();
    const std::size_t order = spec.order();
    if (length <= order) {
        throw std::invalid_argument("simulate_ar: length must exceed the lag order " + std::to_string(order));
    }
    if (init.size() < order) {
        throw std::invalid_argument("simulate_ar: need " + std::to_string(order) + " initial values, got " +
                                    std::to_string(init.size()));
    }

    std::vector<double> history(init.end() - static_cast<std::ptrdiff_t>(order), init.end());
    history.reserve(order + burn_in + length);
    std::vector<double> lags(order);
    for (std::size_t t = 0; t < burn_in + length; ++t) {
        for (std::size_t l = 0; l < order; ++l) {
            lags[l] = history[history.size() - 1 - l];
        }
        const ARRegime& reg = spec.regime(lags);
        double z = reg.intercept;
        for (std::size_t l = 0; l < reg.coefficients.size(); ++l) {
            z += reg.coefficients[l] * lags[l];
        }
        z += reg.noise.draw(rng);
        if (!std::isfinite(z)) {
            throw NumericalError("simulate_ar: recursion became non-finite at index " + std::to_string(t));
        }
        history.push_back(z);
    }
    return {history.end() - static_cast<std::ptrdiff_t>(length), history.end()};
}

PairedSample lag_embed(std::span<const double> series, std::size_t order) {
    if (order == 0 || series.size() <= order) {
        throw std::invalid_argument("lag_embed: series of length " + std::to_string(series.size()) +
                                    " is too short for order " + std::to_string(order));
    }
    const std::size_t n = series.size() - order;
    RowMatrix xs(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(order));
    std::vector<double> y(n);
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t l = 0; l < order; ++l) {
            xs(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(l)) = series[order + t - 1 - l];
        }
        y[t] = series[order + t];
    }
    return PairedSample::scalar_response(std::move(xs), y);
}

}  // namespace macgof
