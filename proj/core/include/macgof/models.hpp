#pragma once

#include "macgof/random.hpp"
#include "macgof/sample_space.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace macgof {

enum class Family { LinearGaussian, Logistic, Poisson, FixedAR };

[[nodiscard]] std::string_view to_string(Family f) noexcept;
/// Accepts "linear", "logistic", "poisson", "ar". @throws std::invalid_argument
[[nodiscard]] Family parse_family(std::string_view name);

enum class BootstrapKind { Residual, Parametric };

[[nodiscard]] std::string_view to_string(BootstrapKind k) noexcept;
[[nodiscard]] BootstrapKind parse_bootstrap_kind(std::string_view name);

/**
 * @brief Maps a covariate vector x in R^p to a design row.
 *
 * Kinds:
 *  - Linear: x_1 .. x_p
 *  - Polynomial(d): x_j^e for every covariate j and 1 <= e <= d (no cross terms)
 *  - WithInteractions(o): products of up to o distinct covariates
 *  - Custom: explicit terms such as "x1", "x2^2", "x1*x3", "log(x2)", "sqrt(x1)", "exp(x1)"
 *
 * An intercept column comes first unless disabled. Covariates are 1-based in
 * term strings.
 */
class FeatureMap {
public:
    enum class Kind { Linear, Polynomial, WithInteractions, Custom };

    [[nodiscard]] static FeatureMap linear(bool intercept = true);
    [[nodiscard]] static FeatureMap polynomial(int degree, bool intercept = true);
    [[nodiscard]] static FeatureMap with_interactions(int order, bool intercept = true);
    [[nodiscard]] static FeatureMap custom(std::vector<std::string> terms, bool intercept = true);

    /// "linear" | "poly:D" | "interact:O" | "custom:t1;t2;..."; a trailing ",nointercept" drops the intercept.
    [[nodiscard]] static FeatureMap parse(std::string_view spec);
    /// Inverse of parse().
    [[nodiscard]] std::string describe() const;

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] bool includes_intercept() const noexcept { return intercept_; }

    [[nodiscard]] std::size_t width(std::size_t p) const;
    [[nodiscard]] std::vector<std::string> column_names(std::size_t p) const;
    [[nodiscard]] Eigen::MatrixXd design(const RowMatrix& xs) const;

    bool operator==(const FeatureMap&) const = default;

private:
    struct Factor {
        enum class Op { Power, Log, Sqrt, Exp };
        std::size_t index = 0;  // 0-based covariate
        Op op = Op::Power;
        int power = 1;
        bool operator==(const Factor&) const = default;
    };
    using Term = std::vector<Factor>;

    FeatureMap(Kind kind, int degree, std::vector<std::string> terms, bool intercept);

    [[nodiscard]] std::vector<Term> terms_for(std::size_t p) const;
    static Term parse_term(std::string_view text);
    static std::string term_name(const Term& term);

    Kind kind_ = Kind::Linear;
    int degree_ = 1;
    std::vector<std::string> custom_terms_;
    std::vector<Term> parsed_terms_;
    bool intercept_ = true;
};

/// Innovation distribution of one AR regime.
struct NoiseSpec {
    enum class Kind { Gaussian, LogNormal };
    Kind kind = Kind::Gaussian;
    double mean = 0.0;      ///< LogNormal only: mean of the innovation itself
    double variance = 1.0;  ///< variance of the unscaled innovation
    double scale = 1.0;     ///< the innovation is multiplied by this factor

    [[nodiscard]] static NoiseSpec gaussian(double variance, double scale = 1.0) {
        return {Kind::Gaussian, 0.0, variance, scale};
    }
    [[nodiscard]] static NoiseSpec log_normal(double mean, double variance) {
        return {Kind::LogNormal, mean, variance, 1.0};
    }
    [[nodiscard]] double expected_value() const noexcept { return kind == Kind::LogNormal ? scale * mean : 0.0; }
    double draw(Rng& rng) const;
};

struct ARRegime {
    double intercept = 0.0;
    std::vector<double> coefficients;  ///< weight of z_{t-1}, z_{t-2}, ...
    NoiseSpec noise;
};

/**
 * @brief Autoregression with fixed coefficients, optionally two-regime.
 *
 * Without a threshold, `lower` is the only regime. With a threshold on lag d,
 * `lower` applies when z_{t-d} <= value and `threshold->upper` otherwise.
 */
struct FixedARSpec {
    struct Threshold {
        std::size_t lag = 1;
        double value = 0.0;
        ARRegime upper;
    };

    ARRegime lower;
    std::optional<Threshold> threshold;

    /// Largest lag referenced by either regime or by the threshold.
    [[nodiscard]] std::size_t order() const noexcept;
    /// Regime selected by a lag vector (lags[0] = z_{t-1}).
    [[nodiscard]] const ARRegime& regime(std::span<const double> lags) const;
    /// @throws std::invalid_argument if the spec is malformed
    void validate() const;

    /// Annual sunspot models with fixed, previously published coefficients.
    [[nodiscard]] static FixedARSpec sunspot_ar9();
    [[nodiscard]] static FixedARSpec sunspot_tar();
    [[nodiscard]] static FixedARSpec sunspot_ar2_lognormal();
    /// "ar9" | "tar" | "ar2-lognormal". @throws std::invalid_argument
    [[nodiscard]] static FixedARSpec preset(std::string_view name);
};

struct FitDiagnostics {
    double log_likelihood = 0.0;
    double rss = 0.0;       ///< residual sum of squares (LinearGaussian)
    double deviance = 0.0;  ///< GLM deviance
    int iterations = 0;
    std::vector<double> deviance_trace;  ///< deviance after each accepted GLM step
};

/**
 * Working model with estimates. Immutable after construction and safe to
 * share across concurrent bootstrap draws.
 */
struct FittedModel {
    Family family = Family::LinearGaussian;
    FeatureMap feature_map = FeatureMap::linear();
    Eigen::VectorXd theta_hat;
    double dispersion = 0.0;         ///< residual variance estimate (LinearGaussian)
    std::vector<double> residuals;   ///< y - fitted mean (LinearGaussian)
    FitDiagnostics diagnostics;
    std::optional<FixedARSpec> ar;   ///< FixedAR only
    /// Externally supplied mean vector; predict() returns it verbatim and the model cannot be refit.
    std::optional<std::vector<double>> fixed_means;
};

/// What to fit: family plus feature map, or a fixed autoregression.
struct ModelSpec {
    Family family = Family::LinearGaussian;
    FeatureMap feature_map = FeatureMap::linear();
    std::optional<FixedARSpec> ar;
};

/**
 * @brief Least-squares fit of y on the design produced by `fm`.
 *
 * Solved by column-pivoted QR. dispersion = RSS / (n - m).
 * @throws std::invalid_argument if n <= m or lengths disagree
 * @throws NumericalError naming the collinear columns if the design is rank deficient
 */
[[nodiscard]] FittedModel fit_ols(const RowMatrix& xs, std::span<const double> y, const FeatureMap& fm);

struct GlmOptions {
    int max_iterations = 100;
    double gradient_tolerance = 1e-8;
    /// |theta| or a linear predictor beyond this is treated as divergence (separation, or an all-zero Poisson response).
    double divergence_bound = 30.0;
};

/**
 * @brief Maximum-likelihood fit of a logistic or Poisson GLM with canonical link.
 *
 * Newton-Raphson / IRLS with step halving, so the deviance never increases
 * between accepted iterates (beyond 1e-10 relative rounding slack on a full step). Converged when the max-norm of the score is at
 * most options.gradient_tolerance.
 *
 * @throws std::invalid_argument for invalid responses (non-binary / negative or non-integer counts) or n <= m
 * @throws NumericalError on divergence or non-convergence
 */
[[nodiscard]] FittedModel fit_glm(const RowMatrix& xs, std::span<const double> y, Family family,
                                  const FeatureMap& fm, const GlmOptions& options = {});

/// Log-likelihood of a canonical-link GLM at theta.
[[nodiscard]] double glm_log_likelihood(Family family, const Eigen::MatrixXd& design, std::span<const double> y,
                                        const Eigen::VectorXd& theta);
/// Gradient of glm_log_likelihood: design^T (y - mu).
[[nodiscard]] Eigen::VectorXd glm_score(Family family, const Eigen::MatrixXd& design, std::span<const double> y,
                                        const Eigen::VectorXd& theta);

/// Wraps a fixed autoregression as a working model over lag-embedded samples.
[[nodiscard]] FittedModel fixed_ar_model(FixedARSpec spec);

/// Dispatch on spec.family.
[[nodiscard]] FittedModel fit_model(const ModelSpec& spec, const RowMatrix& xs, std::span<const double> y);

/// Fit the same working model (family and feature map) to a new response. @throws std::invalid_argument for external means
[[nodiscard]] FittedModel refit(const FittedModel& like, const RowMatrix& xs, std::span<const double> y);

/// Mean response at each row of xs.
[[nodiscard]] std::vector<double> predict(const FittedModel& fit, const RowMatrix& xs);

/**
 * @brief Draw a bootstrap response vector conditional on xs.
 *
 * Residual: mean + residuals resampled with replacement after centring
 * (LinearGaussian only). Parametric: Gaussian with the estimated dispersion,
 * Bernoulli, Poisson, or the AR innovation law, around the fitted means.
 *
 * @throws std::invalid_argument when Residual is requested for a family without residuals
 */
[[nodiscard]] std::vector<double> bootstrap_response(const FittedModel& fit, const RowMatrix& xs, BootstrapKind kind,
                                                     Rng& rng);

/**
 * @brief Simulate a fixed autoregression.
 *
 * `init` holds at least order() starting values, oldest first. The returned
 * series has `length` values generated after discarding `burn_in` values.
 * @throws NumericalError with the offending index if the recursion becomes non-finite
 */
[[nodiscard]] std::vector<double> simulate_ar(const FixedARSpec& spec, std::size_t length, std::size_t burn_in,
                                              std::span<const double> init, Rng& rng);

/// Pairs each z_t (t >= order) with its lag vector (z_{t-1}, ..., z_{t-order}).
[[nodiscard]] PairedSample lag_embed(std::span<const double> series, std::size_t order);

}  // namespace macgof
