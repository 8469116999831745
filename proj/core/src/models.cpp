#include "macgof/models.hpp"

#include "macgof/errors.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace macgof {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

int parse_positive_int(std::string_view s, std::string_view what) {
    s = trim(s);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || value < 1) {
        throw std::invalid_argument("feature map: invalid " + std::string(what) + " '" + std::string(s) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double integer_power(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

}  // namespace

std::string_view to_string(Family f) noexcept {
    switch (f) {
        case Family::LinearGaussian: return "linear";
        case Family::Logistic: return "logistic";
        case Family::Poisson: return "poisson";
        case Family::FixedAR: return "ar";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    if (name == "linear" || name == "gaussian") return Family::LinearGaussian;
    if (name == "logistic") return Family::Logistic;
    if (name == "poisson") return Family::Poisson;
    if (name == "ar") return Family::FixedAR;
    throw std::invalid_argument("unknown family '" + std::string(name) + "' (linear|logistic|poisson|ar)");
}

std::string_view to_string(BootstrapKind k) noexcept {
    return k == BootstrapKind::Residual ? "residual" : "parametric";
}

BootstrapKind parse_bootstrap_kind(std::string_view name) {
    if (name == "residual") return BootstrapKind::Residual;
    if (name == "parametric") return BootstrapKind::Parametric;
    throw std::invalid_argument("unknown bootstrap kind '" + std::string(name) + "' (residual|parametric)");
}

// ---------------------------------------------------------------------------
// FeatureMap

FeatureMap::FeatureMap(Kind kind, int degree, std::vector<std::string> terms, bool intercept)
    : kind_(kind), degree_(degree), custom_terms_(std::move(terms)), intercept_(intercept) {
    for (const auto& t : custom_terms_) {
        parsed_terms_.push_back(parse_term(t));
    }
}

FeatureMap FeatureMap::linear(bool intercept) { return FeatureMap(Kind::Linear, 1, {}, intercept); }

FeatureMap FeatureMap::polynomial(int degree, bool intercept) {
    if (degree < 1) throw std::invalid_argument("feature map: polynomial degree must be >= 1");
    return FeatureMap(Kind::Polynomial, degree, {}, intercept);
}

FeatureMap FeatureMap::with_interactions(int order, bool intercept) {
    if (order < 1) throw std::invalid_argument("feature map: interaction order must be >= 1");
    return FeatureMap(Kind::WithInteractions, order, {}, intercept);
}

FeatureMap FeatureMap::custom(std::vector<std::string> terms, bool intercept) {
    if (terms.empty() && !intercept) throw std::invalid_argument("feature map: no columns");
    return FeatureMap(Kind::Custom, 1, std::move(terms), intercept);
}

FeatureMap FeatureMap::parse(std::string_view spec) {
    spec = trim(spec);
    bool intercept = true;
    if (const auto comma = spec.rfind(','); comma != std::string_view::npos &&
                                            trim(spec.substr(comma + 1)) == "nointercept") {
        intercept = false;
        spec = trim(spec.substr(0, comma));
    }
    if (spec == "linear") return linear(intercept);
    const auto colon = spec.find(':');
    const auto head = spec.substr(0, colon);
    const auto tail = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    if (head == "poly") return polynomial(parse_positive_int(tail, "degree"), intercept);
    if (head == "interact") return with_interactions(parse_positive_int(tail, "order"), intercept);
    if (head == "custom") {
        std::vector<std::string> terms;
        for (auto t : split(tail, ';')) {
            if (!t.empty()) terms.emplace_back(t);
        }
        return custom(std::move(terms), intercept);
    }
    throw std::invalid_argument("feature map: unknown spec '" + std::string(spec) +
                                "' (linear|poly:D|interact:O|custom:t1;t2)");
}

std::string FeatureMap::describe() const {
    std::string out;
    switch (kind_) {
        case Kind::Linear: out = "linear"; break;
        case Kind::Polynomial: out = "poly:" + std::to_string(degree_); break;
        case Kind::WithInteractions: out = "interact:" + std::to_string(degree_); break;
        case Kind::Custom:
            out = "custom:";
            for (std::size_t i = 0; i < custom_terms_.size(); ++i) {
                if (i) out += ';';
                out += custom_terms_[i];
            }
            break;
    }
    if (!intercept_) out += ",nointercept";
    return out;
}

FeatureMap::Term FeatureMap::parse_term(std::string_view text) {
    Term term;
    for (auto factor : split(text, '*')) {
        Factor f;
        std::string_view var = factor;
        for (auto [name, op] : {std::pair{std::string_view("log("), Factor::Op::Log},
                                std::pair{std::string_view("sqrt("), Factor::Op::Sqrt},
                                std::pair{std::string_view("exp("), Factor::Op::Exp}}) {
            if (factor.starts_with(name) && factor.ends_with(')')) {
                f.op = op;
                var = trim(factor.substr(name.size(), factor.size() - name.size() - 1));
                break;
            }
        }
        if (f.op == Factor::Op::Power) {
            if (const auto caret = var.find('^'); caret != std::string_view::npos) {
                f.power = parse_positive_int(var.substr(caret + 1), "power");
                var = trim(var.substr(0, caret));
            }
        }
        if (var.size() < 2 || var.front() != 'x') {
            throw std::invalid_argument("feature map: cannot parse term '" + std::string(text) + "'");
        }
        f.index = static_cast<std::size_t>(parse_positive_int(var.substr(1), "covariate index")) - 1;
        term.push_back(f);
    }
    return term;
}

std::string FeatureMap::term_name(const Term& term) {
    std::string name;
    for (std::size_t i = 0; i < term.size(); ++i) {
        const auto& f = term[i];
        const std::string var = "x" + std::to_string(f.index + 1);
        if (i) name += '*';
        switch (f.op) {
            case Factor::Op::Power: name += f.power == 1 ? var : var + "^" + std::to_string(f.power); break;
            case Factor::Op::Log: name += "log(" + var + ")"; break;
            case Factor::Op::Sqrt: name += "sqrt(" + var + ")"; break;
            case Factor::Op::Exp: name += "exp(" + var + ")"; break;
        }
    }
    return name;
}

std::vector<FeatureMap::Term> FeatureMap::terms_for(std::size_t p) const {
    std::vector<Term> terms;
    switch (kind_) {
        case Kind::Linear:
            for (std::size_t j = 0; j < p; ++j) terms.push_back({Factor{j, Factor::Op::Power, 1}});
            break;
        case Kind::Polynomial:
            for (std::size_t j = 0; j < p; ++j) {
                for (int e = 1; e <= degree_; ++e) terms.push_back({Factor{j, Factor::Op::Power, e}});
            }
            break;
        case Kind::WithInteractions: {
            // Subsets of {0..p-1} of size 1..order, by size then lexicographically.
            const std::size_t order = std::min<std::size_t>(static_cast<std::size_t>(degree_), p);
            for (std::size_t size = 1; size <= order; ++size) {
                std::vector<std::size_t> idx(size);
                std::iota(idx.begin(), idx.end(), std::size_t{0});
                while (true) {
                    Term t;
                    for (std::size_t j : idx) t.push_back(Factor{j, Factor::Op::Power, 1});
                    terms.push_back(std::move(t));
                    std::size_t pos = size;
                    while (pos > 0 && idx[pos - 1] == p - size + pos - 1) --pos;
                    if (pos == 0) break;
                    ++idx[pos - 1];
                    for (std::size_t q = pos; q < size; ++q) idx[q] = idx[q - 1] + 1;
                }
            }
            break;
        }
        case Kind::Custom:
            for (const auto& t : parsed_terms_) {
                for (const auto& f : t) {
                    if (f.index >= p) {
                        throw std::invalid_argument("feature map: term '" + term_name(t) + "' references x" +
                                                    std::to_string(f.index + 1) + " but only " +
                                                    std::to_string(p) + " covariates exist");
                    }
                }
            }
            terms = parsed_terms_;
            break;
    }
    return terms;
}

std::size_t FeatureMap::width(std::size_t p) const { return terms_for(p).size() + (intercept_ ? 1 : 0); }

std::vector<std::string> FeatureMap::column_names(std::size_t p) const {
    std::vector<std::string> names;
    if (intercept_) names.emplace_back("(intercept)");
    for (const auto& t : terms_for(p)) names.push_back(term_name(t));
    return names;
}

Eigen::MatrixXd FeatureMap::design(const RowMatrix& xs) const {
    const auto n = xs.rows();
    const auto terms = terms_for(static_cast<std::size_t>(xs.cols()));
    const Eigen::Index offset = intercept_ ? 1 : 0;
    Eigen::MatrixXd X(n, static_cast<Eigen::Index>(terms.size()) + offset);
    if (intercept_) X.col(0).setOnes();
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(terms.size()); ++c) {
        const auto& term = terms[static_cast<std::size_t>(c)];
        for (Eigen::Index i = 0; i < n; ++i) {
            double v = 1.0;
            for (const auto& f : term) {
                const double x = xs(i, static_cast<Eigen::Index>(f.index));
                switch (f.op) {
                    case Factor::Op::Power: v *= integer_power(x, f.power); break;
                    case Factor::Op::Log: v *= std::log(x); break;
                    case Factor::Op::Sqrt: v *= std::sqrt(x); break;
                    case Factor::Op::Exp: v *= std::exp(x); break;
                }
            }
            if (!std::isfinite(v)) {
                throw DataError("feature map: term '" + term_name(term) + "' is not finite at row " +
                                std::to_string(i + 1));
            }
            X(i, c + offset) = v;
        }
    }
    return X;
}

// ---------------------------------------------------------------------------
// Least squares

FittedModel fit_ols(const RowMatrix& xs, std::span<const double> y, const FeatureMap& fm) {
    if (static_cast<std::size_t>(xs.rows()) != y.size()) {
        throw std::invalid_argument("fit_ols: xs and y have different lengths");
    }
    const Eigen::MatrixXd X = fm.design(xs);
    const auto n = X.rows();
    const auto m = X.cols();
    if (n <= m) {
        throw std::invalid_argument("fit_ols: need more observations (" + std::to_string(n) + ") than columns (" +
                                    std::to_string(m) + ")");
    }
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < m) {
        const auto names = fm.column_names(static_cast<std::size_t>(xs.cols()));
        std::string cols;
        for (Eigen::Index r = qr.rank(); r < m; ++r) {
            if (!cols.empty()) cols += ", ";
            cols += names[static_cast<std::size_t>(qr.colsPermutation().indices()[r])];
        }
        throw NumericalError("fit_ols: design matrix is rank deficient; collinear columns: " + cols);
    }

    FittedModel fit;
    fit.family = Family::LinearGaussian;
    fit.feature_map = fm;
    fit.theta_hat = qr.solve(yv);
    const Eigen::VectorXd resid = yv - X * fit.theta_hat;
    fit.residuals.assign(resid.data(), resid.data() + n);
    const double rss = resid.squaredNorm();
    fit.dispersion = rss / static_cast<double>(n - m);
    fit.diagnostics.rss = rss;
    const double sigma2_ml = rss / static_cast<double>(n);
    fit.diagnostics.log_likelihood =
        sigma2_ml > 0.0 ? -0.5 * static_cast<double>(n) * (std::log(2.0 * std::numbers::pi * sigma2_ml) + 1.0)
                        : std::numeric_limits<double>::infinity();
    fit.diagnostics.iterations = 1;
    return fit;
}

// ---------------------------------------------------------------------------
// Dispatch, prediction, bootstrap

FittedModel fit_model(const ModelSpec& spec, const RowMatrix& xs, std::span<const double> y) {
    switch (spec.family) {
        case Family::LinearGaussian: return fit_ols(xs, y, spec.feature_map);
        case Family::Logistic:
        case Family::Poisson: return fit_glm(xs, y, spec.family, spec.feature_map);
        case Family::FixedAR: {
            if (!spec.ar) throw std::invalid_argument("fit_model: FixedAR requires an AR specification");
            if (static_cast<std::size_t>(xs.cols()) != spec.ar->order()) {
                throw std::invalid_argument("fit_model: AR model of order " + std::to_string(spec.ar->order()) +
                                            " needs lag vectors of that length, got " +
                                            std::to_string(xs.cols()));
            }
            FittedModel fit = fixed_ar_model(*spec.ar);
            const auto mu = predict(fit, xs);
            fit.residuals.resize(y.size());
            double rss = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) {
                fit.residuals[i] = y[i] - mu[i];
                rss += fit.residuals[i] * fit.residuals[i];
            }
            fit.diagnostics.rss = rss;
            return fit;
        }
    }
    throw std::invalid_argument("fit_model: unknown family");
}

FittedModel refit(const FittedModel& like, const RowMatrix& xs, std::span<const double> y) {
    if (like.fixed_means) {
        throw std::invalid_argument("refit: a model given by external means cannot be refit");
    }
    return fit_model(ModelSpec{like.family, like.feature_map, like.ar}, xs, y);
}

std::vector<double> predict(const FittedModel& fit, const RowMatrix& xs) {
    const auto n = static_cast<std::size_t>(xs.rows());
    if (fit.fixed_means) {
        if (fit.fixed_means->size() != n) {
            throw std::invalid_argument("predict: external mean vector has " +
                                        std::to_string(fit.fixed_means->size()) + " entries for " +
                                        std::to_string(n) + " rows");
        }
        return *fit.fixed_means;
    }
    std::vector<double> mu(n);
    if (fit.family == Family::FixedAR) {
        const auto& spec = *fit.ar;
        if (static_cast<std::size_t>(xs.cols()) != spec.order()) {
            throw std::invalid_argument("predict: lag vectors do not match the AR order");
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::span<const double> lags(xs.data() + i * spec.order(), spec.order());
            const auto& reg = spec.regime(lags);
            double z = reg.intercept + reg.noise.expected_value();
            for (std::size_t l = 0; l < reg.coefficients.size(); ++l) z += reg.coefficients[l] * lags[l];
            mu[i] = z;
        }
        return mu;
    }
    const Eigen::MatrixXd X = fit.feature_map.design(xs);
    if (X.cols() != fit.theta_hat.size()) {
        throw std::invalid_argument("predict: covariate dimension does not match the fitted model");
    }
    const Eigen::VectorXd eta = X * fit.theta_hat;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = eta[static_cast<Eigen::Index>(i)];
        switch (fit.family) {
            case Family::LinearGaussian: mu[i] = e; break;
            case Family::Logistic: mu[i] = e >= 0 ? 1.0 / (1.0 + std::exp(-e)) : std::exp(e) / (1.0 + std::exp(e)); break;
            case Family::Poisson: mu[i] = std::exp(e); break;
            case Family::FixedAR: break;
        }
    }
    return mu;
}

std::vector<double> bootstrap_response(const FittedModel& fit, const RowMatrix& xs, BootstrapKind kind, Rng& rng) {
    std::vector<double> y = predict(fit, xs);
    const std::size_t n = y.size();

    if (kind == BootstrapKind::Residual) {
        if (fit.family != Family::LinearGaussian || fit.residuals.empty()) {
            throw std::invalid_argument("no residual bootstrap for this family (" +
                                        std::string(to_string(fit.family)) + ")");
        }
        const double centre = std::accumulate(fit.residuals.begin(), fit.residuals.end(), 0.0) /
                              static_cast<double>(fit.residuals.size());
        std::uniform_int_distribution<std::size_t> pick(0, fit.residuals.size() - 1);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] += fit.residuals[pick(rng)] - centre;
        }
        return y;
    }

    switch (fit.family) {
        case Family::LinearGaussian: {
            const double sd = std::sqrt(fit.dispersion);
            if (sd > 0.0) {
                std::normal_distribution<double> noise(0.0, sd);
                for (auto& v : y) v += noise(rng);
            }
            break;
        }
        case Family::Logistic:
            for (auto& v : y) v = std::bernoulli_distribution(std::clamp(v, 0.0, 1.0))(rng) ? 1.0 : 0.0;
            break;
        case Family::Poisson:
            for (auto& v : y) {
                v = v > 0.0 ? static_cast<double>(std::poisson_distribution<long long>(v)(rng)) : 0.0;
            }
            break;
        case Family::FixedAR: {
            const auto& spec = *fit.ar;
            for (std::size_t i = 0; i < n; ++i) {
                const std::span<const double> lags(xs.data() + i * spec.order(), spec.order());
                const auto& noise = spec.regime(lags).noise;
                y[i] += noise.draw(rng) - noise.expected_value();
            }
            break;
        }
    }
    return y;
}

}  // namespace macgof
