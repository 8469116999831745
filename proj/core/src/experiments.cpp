#include "macgof/experiments.hpp"

#include "macgof/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace macgof::experiments {

namespace {

void check_example(int example) {
    if (example < 1 || example > 4) {
        throw std::invalid_argument("power example must be 1..4, got " + std::to_string(example));
    }
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return empirical_quantile(v, 0.5);
}

std::uint64_t curve_seed(std::uint64_t seed, int example, std::size_t n) {
    return derive_seed(seed, Stream::Experiment, static_cast<std::uint64_t>(example) * 1000003ULL + n);
}

}  // namespace

std::size_t power_example_dimension(int example) {
    check_example(example);
    static constexpr std::array<std::size_t, 4> dims{1, 2, 2, 5};
    return dims[static_cast<std::size_t>(example - 1)];
}

double power_example_null_c(int example) {
    check_example(example);
    return example <= 2 ? 1.0 : 0.0;
}

std::pair<PairedSample, PairedSample> draw_power_example(int example, std::size_t n, double c, Rng& rng) {
    const std::size_t d = power_example_dimension(example);
    if (n < 2) throw std::invalid_argument("draw_power_example: n must be at least 2");

    std::normal_distribution<double> normal(0.0, 1.0);
    RowMatrix xs(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < xs.size(); ++i) xs.data()[i] = normal(rng);

    std::vector<double> y(n);
    std::vector<double> y_star(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = [&](std::size_t j) { return xs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); };
        double base = 0.0;
        double shifted = 0.0;
        switch (example) {
            case 1:
                base = x(0);
                shifted = c * x(0);
                break;
            case 2:
                base = x(0) + x(1);
                shifted = x(0) + c * x(1);
                break;
            case 3:
                base = x(0) + x(1);
                shifted = base + c * x(0) * x(1);
                break;
            default: {
                double prod = 1.0;
                for (std::size_t j = 0; j < d; ++j) {
                    base += x(j);
                    prod *= x(j);
                }
                shifted = base + c * prod;
                break;
            }
        }
        y[i] = shifted + normal(rng);
        y_star[i] = base + normal(rng);
    }
    return {PairedSample::scalar_response(xs, y), PairedSample::scalar_response(xs, y_star)};
}

double power_example_mac(int example, std::size_t n, double c, std::size_t k, LocationStrategy strategy, Rng& rng) {
    const auto [a, b] = draw_power_example(example, n, c, rng);
    MacConfig cfg;
    cfg.k = k;
    cfg.strategy = strategy;
    const LocationSet locs = select_locations(a, b, cfg, rng);
    return mac(a, b, locs, cfg).value;
}

double PowerPoint::standard_error() const noexcept {
    if (reps == 0) return 0.0;
    return std::sqrt(rate * (1.0 - rate) / static_cast<double>(reps));
}

PowerCurve power_curve(int example, std::size_t n, std::span<const double> c_grid, const PowerConfig& cfg) {
    check_example(example);
    if (cfg.reps < 1) throw std::invalid_argument("power_curve: reps must be at least 1");
    if (cfg.null_draws < 99) throw std::invalid_argument("power_curve: need at least 99 null draws");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw std::invalid_argument("power_curve: alpha must lie in (0, 1)");

    PowerCurve curve;
    curve.example = example;
    curve.n = n;
    curve.config = cfg;

    const std::uint64_t base = curve_seed(cfg.seed, example, n);
    const double null_c = power_example_null_c(example);
    NullDistribution null;
    null.draws.resize(cfg.null_draws);
    parallel_for(cfg.null_draws, [&](std::size_t r) {
        Rng rng = make_rng(base, Stream::Null, r);
        null.draws[r] = power_example_mac(example, n, null_c, cfg.k, cfg.strategy, rng);
    });
    std::sort(null.draws.begin(), null.draws.end());

    for (std::size_t ci = 0; ci < c_grid.size(); ++ci) {
        const std::uint64_t point_seed = derive_seed(base, Stream::Experiment, ci);
        std::vector<char> rejected(cfg.reps, 0);
        parallel_for(cfg.reps, [&](std::size_t r) {
            Rng rng = make_rng(point_seed, Stream::Experiment, r);
            const double stat = power_example_mac(example, n, c_grid[ci], cfg.k, cfg.strategy, rng);
            rejected[r] = p_value(stat, null) <= cfg.alpha ? 1 : 0;
        });
        PowerPoint point;
        point.example = example;
        point.n = n;
        point.c = c_grid[ci];
        point.reps = cfg.reps;
        point.rate = static_cast<double>(std::count(rejected.begin(), rejected.end(), 1)) /
                     static_cast<double>(cfg.reps);
        curve.points.push_back(point);
    }
    curve.null_draws = std::move(null.draws);
    return curve;
}

void write_power_csv(std::ostream& out, const std::vector<PowerCurve>& curves, bool header) {
    if (header) out << "example,n,c,rate,se,reps,alpha,k,null_draws,seed\n";
    for (const auto& curve : curves) {
        for (const auto& p : curve.points) {
            out << p.example << ',' << p.n << ',' << p.c << ',' << p.rate << ',' << p.standard_error() << ','
                << p.reps << ',' << curve.config.alpha << ',' << curve.config.k << ',' << curve.config.null_draws
                << ',' << curve.config.seed << '\n';
        }
    }
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::sort(sample.begin(), sample.end());
    const auto m = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
    }
    return d;
}

double ks_uniform(std::vector<double> sample) {
    return ks_distance(std::move(sample), [](double x) { return std::clamp(x, 0.0, 1.0); });
}

double chi_squared_cdf(double x, double df) {
    if (!(df > 0.0)) throw std::invalid_argument("chi_squared_cdf: degrees of freedom must be positive");
    if (x <= 0.0) return 0.0;
    return boost::math::gamma_p(0.5 * df, 0.5 * x);
}

Chi2Check chi2_convergence_check(std::span<const double> probs, std::size_t n, std::size_t sims, std::uint64_t seed) {
    if (probs.size() < 2) throw std::invalid_argument("chi2_convergence_check: need at least 2 cells");
    double total = 0.0;
    for (double p : probs) {
        if (!(p > 0.0)) throw std::invalid_argument("chi2_convergence_check: cell probabilities must be positive");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("chi2_convergence_check: probabilities must sum to 1");
    if (sims < 1 || n < 1) throw std::invalid_argument("chi2_convergence_check: n and sims must be positive");

    // Multinomial draw by sequential conditional binomials.
    auto multinomial = [&](Rng& rng) {
        std::vector<std::int64_t> counts(probs.size(), 0);
        std::int64_t left = static_cast<std::int64_t>(n);
        double mass = 1.0;
        for (std::size_t c = 0; c + 1 < probs.size() && left > 0; ++c) {
            const double p = std::clamp(probs[c] / mass, 0.0, 1.0);
            counts[c] = std::binomial_distribution<std::int64_t>(left, p)(rng);
            left -= counts[c];
            mass -= probs[c];
        }
        counts.back() += left;
        return counts;
    };

    Chi2Check check;
    check.degrees_of_freedom = static_cast<double>(probs.size() - 1);
    check.statistics.resize(sims);
    parallel_for(sims, [&](std::size_t s) {
        Rng rng = make_rng(seed, Stream::Experiment, s);
        const auto p = multinomial(rng);
        const auto q = multinomial(rng);
        double t = 0.0;
        for (std::size_t c = 0; c < probs.size(); ++c) {
            const std::int64_t r = p[c] + q[c];
            if (r > 0) {
                const auto diff = static_cast<double>(p[c] - q[c]);
                t += diff * diff / static_cast<double>(r);
            }
        }
        check.statistics[s] = t;
    });
    check.mean = std::accumulate(check.statistics.begin(), check.statistics.end(), 0.0) / static_cast<double>(sims);
    const double df = check.degrees_of_freedom;
    check.ks = ks_distance(check.statistics, [df](double x) { return chi_squared_cdf(x, df); });
    return check;
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("log_log_slope: need at least two (x, y) pairs of equal length");
    }
    std::vector<double> lx(x.size());
    std::vector<double> ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("log_log_slope: values must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx == 0.0) throw std::invalid_argument("log_log_slope: x values are all equal");
    return sxy / sxx;
}

ScalingResult scaling_check(Hypothesis h, std::span<const std::size_t> n_grid, std::size_t k, std::size_t reps,
                            std::uint64_t seed) {
    if (reps < 1) throw std::invalid_argument("scaling_check: reps must be at least 1");
    ScalingResult result;
    result.hypothesis = h;
    result.n_grid.assign(n_grid.begin(), n_grid.end());
    const double c = h == Hypothesis::H0 ? 1.0 : 3.0;
    for (std::size_t n : n_grid) {
        std::vector<double> values(reps);
        const std::uint64_t base = derive_seed(seed, Stream::Experiment, n);
        parallel_for(reps, [&](std::size_t r) {
            Rng rng = make_rng(base, Stream::Experiment, r);
            values[r] = power_example_mac(1, n, c, k, LocationStrategy::RandomSubset, rng);
        });
        result.medians.push_back(median(std::move(values)));
    }
    std::vector<double> ns(n_grid.begin(), n_grid.end());
    result.slope = log_log_slope(ns, result.medians);
    return result;
}

ReplicationExample replication_example(std::string_view id) {
    if (id == "5a" || id == "5b") return {std::string(id), ModelSpec{Family::LinearGaussian, FeatureMap::linear(), {}}};
    if (id == "6") return {std::string(id), ModelSpec{Family::Logistic, FeatureMap::linear(), {}}};
    throw std::invalid_argument("unknown replication example '" + std::string(id) + "' (5a|5b|6)");
}

PairedSample draw_replication_data(std::string_view id, std::size_t n, Rng& rng) {
    (void)replication_example(id);
    RowMatrix xs(static_cast<Eigen::Index>(n), 1);
    std::vector<double> y(n);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        double x = 0.0;
        if (id == "6") {
            x = normal(rng);
            const double eta = 2.0 * x + x * x;
            y[i] = uniform(rng) < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0;
        } else {
            x = uniform(rng);
            const double mean = id == "5a" ? 10.0 * (x - 0.2) * (x - 0.2) : 4.7 * x;
            y[i] = mean + normal(rng);
        }
        xs(static_cast<Eigen::Index>(i), 0) = x;
    }
    return PairedSample::scalar_response(std::move(xs), y);
}

double adjusted_r2(const FittedModel& fit, std::span<const double> y) {
    const auto n = static_cast<double>(y.size());
    const auto m = static_cast<double>(fit.theta_hat.size());
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double tss = 0.0;
    for (double v : y) tss += (v - mean) * (v - mean);
    if (tss == 0.0 || n <= m) return 0.0;
    return 1.0 - (fit.diagnostics.rss / (n - m)) / (tss / (n - 1.0));
}

ReplicationResult replicate_example(std::string_view id, std::size_t n, std::size_t runs, const GofConfig& cfg,
                                    std::uint64_t seed) {
    const ReplicationExample ex = replication_example(id);
    if (runs < 1) throw std::invalid_argument("replicate_example: runs must be at least 1");

    struct Run {
        bool ok = false;
        double p = 1.0;
        double t = 0.0;
        double r2 = 0.0;
    };
    std::vector<Run> out(runs);
    parallel_for(runs, [&](std::size_t r) {
        Rng rng = make_rng(seed, Stream::Experiment, 2 * r);
        const PairedSample data = draw_replication_data(id, n, rng);
        GofConfig run_cfg = cfg;
        run_cfg.seed = derive_seed(seed, Stream::Experiment, 2 * r + 1);
        try {
            const GofReport report = gof_test(data, ex.working_model, run_cfg);
            out[r] = {true, report.p_value, report.T_B,
                      ex.working_model.family == Family::LinearGaussian ? adjusted_r2(report.fitted, data.response())
                                                                        : 0.0};
        } catch (const NumericalError&) {
            out[r].ok = false;
        }
    });

    ReplicationResult result;
    result.id = ex.id;
    result.n = n;
    result.config = cfg;
    double r2 = 0.0;
    std::size_t rejected = 0;
    for (const auto& run : out) {
        if (!run.ok) {
            ++result.failed_fits;
            continue;
        }
        result.p_values.push_back(run.p);
        result.T_B.push_back(run.t);
        r2 += run.r2;
        if (run.p <= cfg.alpha) ++rejected;
    }
    const std::size_t ok = result.p_values.size();
    if (ok > 0) {
        result.rejection_fraction = static_cast<double>(rejected) / static_cast<double>(ok);
        result.mean_adjusted_r2 = r2 / static_cast<double>(ok);
    }
    return result;
}

}  // namespace macgof::experiments
