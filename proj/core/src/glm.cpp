#include "macgof/errors.hpp"
#include "macgof/models.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace macgof {

namespace {

constexpr int kMaxHalvings = 60;
constexpr double kRoundingSlack = 1e-10;

// log(1 + e^x) without overflow.
double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double inverse_link(Family family, double eta) {
    if (family == Family::Logistic) {
        return eta >= 0 ? 1.0 / (1.0 + std::exp(-eta)) : std::exp(eta) / (1.0 + std::exp(eta));
    }
    return std::exp(eta);
}

void require_glm_family(Family family) {
    if (family != Family::Logistic && family != Family::Poisson) {
        throw std::invalid_argument("fit_glm: family must be logistic or poisson");
    }
}

void validate_response(Family family, std::span<const double> y) {
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double v = y[i];
        if (family == Family::Logistic && v != 0.0 && v != 1.0) {
            throw std::invalid_argument("fit_glm: logistic response must be 0 or 1 (row " + std::to_string(i + 1) +
                                        ")");
        }
        if (family == Family::Poisson && (!(v >= 0.0) || v != std::floor(v) || !std::isfinite(v))) {
            throw std::invalid_argument("fit_glm: poisson response must be a non-negative integer (row " +
                                        std::to_string(i + 1) + ")");
        }
    }
}

double deviance(Family family, const Eigen::VectorXd& eta, std::span<const double> y) {
    double dev = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double yi = y[static_cast<std::size_t>(i)];
        const double e = eta[i];
        if (family == Family::Logistic) {
            dev += softplus(e) - yi * e;
        } else {
            dev += std::exp(e) - yi * e - (yi > 0 ? yi - yi * std::log(yi) : 0.0);
        }
    }
    return 2.0 * dev;
}

}  // namespace

double glm_log_likelihood(Family family, const Eigen::MatrixXd& design, std::span<const double> y,
                          const Eigen::VectorXd& theta) {
    require_glm_family(family);
    const Eigen::VectorXd eta = design * theta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double yi = y[static_cast<std::size_t>(i)];
        if (family == Family::Logistic) {
            ll += yi * eta[i] - softplus(eta[i]);
        } else {
            ll += yi * eta[i] - std::exp(eta[i]) - std::lgamma(yi + 1.0);
        }
    }
    return ll;
}

Eigen::VectorXd glm_score(Family family, const Eigen::MatrixXd& design, std::span<const double> y,
                          const Eigen::VectorXd& theta) {
    require_glm_family(family);
    const Eigen::VectorXd eta = design * theta;
    Eigen::VectorXd resid(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        resid[i] = y[static_cast<std::size_t>(i)] - inverse_link(family, eta[i]);
    }
    return design.transpose() * resid;
}

FittedModel fit_glm(const RowMatrix& xs, std::span<const double> y, Family family, const FeatureMap& fm,
                    const GlmOptions& options) {
    require_glm_family(family);
    if (static_cast<std::size_t>(xs.rows()) != y.size()) {
        throw std::invalid_argument("fit_glm: xs and y have different lengths");
    }
    validate_response(family, y);
    const Eigen::MatrixXd X = fm.design(xs);
    const auto n = X.rows();
    const auto m = X.cols();
    if (n <= m) {
        throw std::invalid_argument("fit_glm: need more observations (" + std::to_string(n) + ") than columns (" +
                                    std::to_string(m) + ")");
    }

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(m);
    if (family == Family::Poisson && fm.includes_intercept()) {
        const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
        if (mean > 0.0) theta[0] = std::log(mean);
    }

    FittedModel fit;
    fit.family = family;
    fit.feature_map = fm;

    Eigen::VectorXd eta = X * theta;
    double dev = deviance(family, eta, y);
    double grad_norm = 0.0;
    for (int iter = 0; iter <= options.max_iterations; ++iter) {
        Eigen::VectorXd resid(n);
        Eigen::VectorXd weight(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mu = inverse_link(family, eta[i]);
            resid[i] = y[static_cast<std::size_t>(i)] - mu;
            weight[i] = family == Family::Logistic ? mu * (1.0 - mu) : mu;
        }
        const Eigen::VectorXd score = X.transpose() * resid;
        grad_norm = score.lpNorm<Eigen::Infinity>();
        if (grad_norm <= options.gradient_tolerance) {
            fit.theta_hat = theta;
            fit.diagnostics.deviance = dev;
            fit.diagnostics.iterations = iter;
            fit.diagnostics.log_likelihood = glm_log_likelihood(family, X, y, theta);
            return fit;
        }
        if (iter == options.max_iterations) break;

        const Eigen::MatrixXd info = X.transpose() * weight.asDiagonal() * X;
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
            throw NumericalError("fit_glm: Fisher information is singular at iteration " + std::to_string(iter));
        }
        const Eigen::VectorXd step = ldlt.solve(score);

        // Step halving: accept the first step that does not increase the deviance.
        double t = 1.0;
        bool accepted = false;
        for (int h = 0; h < kMaxHalvings; ++h, t *= 0.5) {
            const Eigen::VectorXd candidate = theta + t * step;
            const Eigen::VectorXd cand_eta = X * candidate;
            const double cand_dev = deviance(family, cand_eta, y);
            // Rounding-level increases are tolerated only for the full Newton step.
            const bool decreases = cand_dev <= dev || (h == 0 && cand_dev <= dev + kRoundingSlack * (1.0 + std::abs(dev)));
            if (std::isfinite(cand_dev) && decreases) {
                theta = candidate;
                eta = cand_eta;
                dev = cand_dev;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            std::ostringstream msg;
            msg << "fit_glm: step halving failed at iteration " << iter << " (score max-norm " << grad_norm << ")";
            throw NumericalError(msg.str());
        }
        fit.diagnostics.deviance_trace.push_back(dev);
        if (std::max(theta.lpNorm<Eigen::Infinity>(), eta.lpNorm<Eigen::Infinity>()) > options.divergence_bound) {
            throw NumericalError(
                std::string("fit_glm: coefficients or linear predictor diverged beyond ") + std::to_string(options.divergence_bound) +
                (family == Family::Logistic ? " (complete or quasi-complete separation)"
                                            : " (fitted means collapsing to zero)"));
        }
    }
    std::ostringstream msg;
    msg << "fit_glm: no convergence after " << options.max_iterations << " iterations (score max-norm "
        << grad_norm << ", deviance " << dev << ")";
    throw NumericalError(msg.str());
}

}  // namespace macgof
