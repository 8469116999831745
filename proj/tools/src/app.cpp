#include "macgof_cli/app.hpp"

#include "macgof/errors.hpp"
#include "macgof/experiments.hpp"
#include "macgof/gof.hpp"
#include "macgof_cli/csv.hpp"
#include "macgof_cli/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <sstream>

namespace macgof::cli {

namespace {

using Clock = std::chrono::steady_clock;

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    std::string cache_dir;
    std::string out;
    bool full = false;
};

struct MacOptions {
    std::size_t k = 0;
    std::string strategy = "random";
    std::string ordering = "upper";
};

struct ModelOptions {
    std::string data;
    std::string response;
    std::string covariates;
    std::string categorical;
    std::string family = "linear";
    std::string features = "linear";
    std::string ar_preset;
    std::string series;
    double ar_intercept = 0.0;
    std::vector<double> ar_coef;
    double ar_noise_variance = 1.0;
    std::string means_column;
    std::string noise = "gaussian";
    std::optional<double> noise_variance;
};

struct TestOptions {
    std::optional<std::size_t> B;
    std::optional<std::size_t> M;
    std::size_t B_inner = 0;
    std::string bootstrap = "parametric";
    bool refit_null = false;
    bool redraw_locations = false;
    double alpha = 0.05;
};

struct TwoSampleOptions {
    std::string first;
    std::string second;
    std::string response;
    std::string covariates;
    std::size_t permutations = 999;
};

struct PowerOptions {
    std::vector<int> examples{1, 2, 3, 4};
    std::vector<std::size_t> sizes{100, 200, 300};
    std::vector<double> c_grid;
    std::optional<std::size_t> reps;
    std::size_t null_draws = 999;
    std::size_t k = 100;
    double alpha = 0.05;
    std::string csv;
};

struct ReplicateOptions {
    std::string example;
    std::optional<std::size_t> runs;
    std::size_t n = 200;
    std::string data;
    std::string response = "mpg";
    std::string covariates = "cylinders,displacement,horsepower,weight,acceleration,model_year,origin";
    std::string categorical = "origin";
    std::string series = "sunspots";
};

void add_mac_options(CLI::App* cmd, MacOptions& o) {
    cmd->add_option("--k", o.k, "Number of locations (0 = min(n, 100))");
    cmd->add_option("--strategy", o.strategy, "Location selection: random | cluster | all")
        ->check(CLI::IsMember({"random", "cluster", "all"}));
    cmd->add_option("--ordering", o.ordering, "Location pairs: upper (i < j) | both")
        ->check(CLI::IsMember({"upper", "both"}));
}

void add_model_options(CLI::App* cmd, ModelOptions& o) {
    cmd->add_option("--data", o.data, "Input CSV file with a header row")->required();
    cmd->add_option("--response", o.response, "Response column");
    cmd->add_option("--covariates", o.covariates, "Comma-separated covariate columns (default: all others)");
    cmd->add_option("--categorical", o.categorical, "Comma-separated covariates to dummy-code");
    cmd->add_option("--family", o.family, "Working model: linear | logistic | poisson | ar")
        ->check(CLI::IsMember({"linear", "logistic", "poisson", "ar"}));
    cmd->add_option("--features", o.features, "Feature map: linear | poly:D | interact:O | custom:t1;t2 [,nointercept]");
    cmd->add_option("--ar-preset", o.ar_preset, "Fixed autoregression: ar9 | tar | ar2-lognormal");
    cmd->add_option("--series", o.series, "Series column for --family ar (lag vectors are built from it)");
    cmd->add_option("--ar-intercept", o.ar_intercept, "Intercept of a custom Gaussian autoregression");
    cmd->add_option("--ar-coef", o.ar_coef, "Lag coefficients of a custom Gaussian autoregression")->delimiter(',');
    cmd->add_option("--ar-noise-variance", o.ar_noise_variance, "Innovation variance of a custom autoregression");
    cmd->add_option("--means-column", o.means_column, "Column of externally fitted means (skips fitting)");
    cmd->add_option("--noise", o.noise, "Response law around external means: gaussian | poisson | bernoulli | none")
        ->check(CLI::IsMember({"gaussian", "poisson", "bernoulli", "none"}));
    cmd->add_option("--noise-variance", o.noise_variance, "Gaussian variance around external means");
}

void add_test_options(CLI::App* cmd, TestOptions& o) {
    cmd->add_option("--b", o.B, "Bootstrap replicates B (quick 200, --full 1000)");
    cmd->add_option("--m", o.M, "Null replicates M (quick 199, --full 999)");
    cmd->add_option("--b-inner", o.B_inner, "Bootstrap replicates per null replicate (0 = B)");
    cmd->add_option("--bootstrap", o.bootstrap, "residual | parametric")
        ->check(CLI::IsMember({"residual", "parametric"}));
    cmd->add_flag("--refit-null", o.refit_null, "Refit the working model inside every null replicate");
    cmd->add_flag("--redraw-locations", o.redraw_locations, "Draw new locations for every bootstrap replicate");
    cmd->add_option("--alpha", o.alpha, "Significance level for the reject flag");
}

MacConfig mac_config(const MacOptions& o) {
    MacConfig cfg;
    cfg.k = o.k;
    cfg.strategy = parse_location_strategy(o.strategy);
    cfg.pair_ordering = parse_pair_ordering(o.ordering);
    return cfg;
}

GofConfig gof_config(const TestOptions& t, const MacOptions& m, const GlobalOptions& g, std::uint64_t seed) {
    GofConfig cfg;
    cfg.B = t.B.value_or(g.full ? 1000 : 200);
    cfg.M = t.M.value_or(g.full ? 999 : 199);
    cfg.B_inner = t.B_inner;
    cfg.mac = mac_config(m);
    cfg.bootstrap = parse_bootstrap_kind(t.bootstrap);
    cfg.alpha = t.alpha;
    cfg.refit_null = t.refit_null;
    cfg.redraw_locations = t.redraw_locations;
    cfg.seed = seed;
    return cfg;
}

std::optional<NullCache> open_cache(const GlobalOptions& g) {
    if (!g.cache_dir.empty()) return NullCache(g.cache_dir);
    if (const char* env = std::getenv(kCacheDirEnv); env != nullptr && *env != '\0') return NullCache(env);
    return std::nullopt;
}

FixedARSpec ar_spec(const ModelOptions& o) {
    if (!o.ar_preset.empty()) return FixedARSpec::preset(o.ar_preset);
    if (o.ar_coef.empty()) throw std::invalid_argument("--family ar needs --ar-preset or --ar-coef");
    return FixedARSpec{ARRegime{o.ar_intercept, o.ar_coef, NoiseSpec::gaussian(o.ar_noise_variance)}, std::nullopt};
}

// A prepared assessment problem: data plus either a model spec or external means.
struct Problem {
    PairedSample data;
    std::vector<std::string> x_names;
    std::optional<ModelSpec> spec;
    std::vector<double> external_means;
    ExternalNoise noise;
    Json input;
    std::vector<std::string> warnings;
};

Problem prepare(const ModelOptions& o) {
    Json input{{"data", o.data}};
    if (o.family == "ar") {
        if (o.series.empty()) throw std::invalid_argument("--family ar needs --series");
        const FixedARSpec spec = ar_spec(o);
        const auto series = read_numeric_column(o.data, o.series);
        PairedSample sample = lag_embed(series, spec.order());
        std::vector<std::string> names;
        for (std::size_t l = 1; l <= spec.order(); ++l) names.push_back("lag" + std::to_string(l));
        input["series"] = o.series;
        input["series_length"] = series.size();
        return Problem{std::move(sample), std::move(names), ModelSpec{Family::FixedAR, FeatureMap::linear(), spec}, {},
                       {}, input, {}};
    }
    if (o.response.empty()) throw std::invalid_argument("--response is required");

    ColumnRoles roles;
    roles.response = {o.response};
    if (!o.means_column.empty()) roles.response.push_back(o.means_column);
    roles.covariates = split_names(o.covariates);
    roles.categorical = split_names(o.categorical);
    IngestResult ingested = ingest_csv(o.data, roles);

    input["response"] = o.response;
    input["rows_used"] = ingested.sample.size();
    input["dropped_lines"] = ingested.dropped_lines;

    if (o.means_column.empty()) {
        return Problem{std::move(ingested.sample),
                       std::move(ingested.x_names),
                       ModelSpec{parse_family(o.family), FeatureMap::parse(o.features), std::nullopt},
                       {},
                       {},
                       input,
                       std::move(ingested.warnings)};
    }
    const RowMatrix& ys = ingested.sample.ys();
    std::vector<double> y(static_cast<std::size_t>(ys.rows()));
    std::vector<double> means(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = ys(static_cast<Eigen::Index>(i), 0);
        means[i] = ys(static_cast<Eigen::Index>(i), 1);
    }
    ExternalNoise noise = parse_external_noise(o.noise);
    noise.variance = o.noise_variance;
    input["means_column"] = o.means_column;
    input["noise"] = o.noise;
    return Problem{PairedSample::scalar_response(ingested.sample.xs(), y),
                   std::move(ingested.x_names),
                   std::nullopt,
                   std::move(means),
                   noise,
                   input,
                   std::move(ingested.warnings)};
}

void emit(const Json& report, const GlobalOptions& g, std::ostream& out,
          const std::vector<std::pair<std::string, std::string>>& companions = {}) {
    if (g.out.empty()) {
        out << dump(report);
        return;
    }
    write_atomically(g.out, dump(report));
    for (const auto& [suffix, text] : companions) {
        write_atomically(g.out + suffix, text);
    }
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int cmd_gof(const ModelOptions& mo, const TestOptions& to, const MacOptions& ma, const GlobalOptions& g,
            std::uint64_t seed, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    Problem p = prepare(mo);
    for (const auto& w : p.warnings) err << "warning: " << w << '\n';
    const GofConfig cfg = gof_config(to, ma, g, seed);
    const auto cache = open_cache(g);
    const NullCache* cache_ptr = cache ? &*cache : nullptr;
    const GofReport report = p.spec ? gof_test(p.data, *p.spec, cfg, cache_ptr)
                                    : gof_test_external(p.data, p.external_means, p.noise, cfg, cache_ptr);
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';

    Json payload = gof_report_json(report, p.x_names);
    payload["input"] = p.input;
    payload["ingest_warnings"] = p.warnings;
    emit(envelope("gof", seed, payload, seconds_since(start)), g, out,
         {{".tb.csv", series_csv("b", "T_b", report.T_b)}, {".null.csv", series_csv("r", "null_draw", report.null.draws)}});
    return kSuccess;
}

int cmd_null_dist(const ModelOptions& mo, const TestOptions& to, const MacOptions& ma, const GlobalOptions& g,
                  std::uint64_t seed, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    const auto cache = open_cache(g);
    if (!cache) {
        throw std::invalid_argument(std::string("null-dist needs --cache-dir or ") + kCacheDirEnv);
    }
    Problem p = prepare(mo);
    for (const auto& w : p.warnings) err << "warning: " << w << '\n';
    const GofConfig cfg = gof_config(to, ma, g, seed);
    if (cfg.M < 99) throw std::invalid_argument("--m must be at least 99");

    FittedModel fit;
    if (p.spec) {
        fit = fit_model(*p.spec, p.data.xs(), p.data.response());
    } else {
        fit = external_model(p.data, p.external_means, p.noise);
    }
    const NullConfig null_cfg = gof_null_config(cfg, p.data.size());
    const NullMeta meta = null_meta(fit, p.data.xs(), null_cfg);
    auto found = cache->lookup(meta);
    if (!found.warning.empty()) err << "warning: " << found.warning << '\n';
    bool computed = false;
    NullDistribution null;
    if (found.hit) {
        null = std::move(*found.hit);
    } else {
        null = simulate_null(fit, p.data.xs(), null_cfg);
        (void)cache->store(null);
        computed = true;
    }
    Json payload{{"meta", meta.key()},
                 {"cache_file", cache->path_for(meta).string()},
                 {"computed", computed},
                 {"config", gof_config_json(cfg)},
                 {"null_summary", null_summary_json(summarize(null))},
                 {"input", p.input}};
    emit(envelope("null-dist", seed, payload, seconds_since(start)), g, out,
         {{".null.csv", series_csv("r", "null_draw", null.draws)}});
    return kSuccess;
}

int cmd_two_sample(const TwoSampleOptions& o, const MacOptions& ma, const GlobalOptions& g, std::uint64_t seed,
                   std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    if (o.permutations < 99) throw std::invalid_argument("--permutations must be at least 99");
    ColumnRoles roles;
    roles.response = split_names(o.response);
    if (roles.response.empty()) throw std::invalid_argument("--response is required");
    roles.covariates = split_names(o.covariates);
    const IngestResult first = ingest_csv(o.first, roles);
    const std::string second_path = o.second.empty() ? o.first : o.second;
    const IngestResult second = ingest_csv(second_path, roles);
    for (const auto& w : first.warnings) err << "warning: " << o.first << ": " << w << '\n';
    for (const auto& w : second.warnings) err << "warning: " << second_path << ": " << w << '\n';
    if (first.x_names != second.x_names) throw DataError("the two files have different covariate columns");

    const PairedSample& a = first.sample;
    const PairedSample& b = second.sample;
    MacConfig cfg = mac_config(ma);
    cfg.k = resolve_location_count(cfg, std::min(a.size(), b.size()));
    Rng loc_rng = make_rng(seed, Stream::Locations);
    const LocationSet locs = select_locations(a, b, cfg, loc_rng);
    const MacResult observed = mac(a, b, locs, cfg);

    const std::size_t n1 = a.size();
    const std::size_t total = n1 + b.size();
    const std::size_t p = a.x_dim();
    const std::size_t q = a.y_dim();
    RowMatrix pooled_x(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(p));
    RowMatrix pooled_y(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(q));
    pooled_x << a.xs(), b.xs();
    pooled_y << a.ys(), b.ys();

    std::vector<double> draws(o.permutations);
    parallel_for(o.permutations, [&](std::size_t r) {
        Rng rng = make_rng(seed, Stream::Permutation, r);
        std::vector<Eigen::Index> idx(total);
        std::iota(idx.begin(), idx.end(), Eigen::Index{0});
        std::shuffle(idx.begin(), idx.end(), rng);
        auto take = [&](std::size_t from, std::size_t count) {
            RowMatrix xs(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(p));
            RowMatrix ys(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(q));
            for (std::size_t i = 0; i < count; ++i) {
                xs.row(static_cast<Eigen::Index>(i)) = pooled_x.row(idx[from + i]);
                ys.row(static_cast<Eigen::Index>(i)) = pooled_y.row(idx[from + i]);
            }
            return PairedSample(std::move(xs), std::move(ys));
        };
        draws[r] = mac(take(0, n1), take(n1, total - n1), locs, cfg).value;
    });
    NullDistribution null;
    null.draws = draws;
    std::sort(null.draws.begin(), null.draws.end());
    const double pv = p_value(observed.value, null);

    Json payload{{"first", o.first},
                 {"second", second_path},
                 {"n_first", a.size()},
                 {"n_second", b.size()},
                 {"k", cfg.k},
                 {"strategy", std::string(to_string(cfg.strategy))},
                 {"pair_ordering", std::string(to_string(cfg.pair_ordering))},
                 {"mac", observed.value},
                 {"mean_local_statistic", observed.mean_value},
                 {"argmax_pair", {observed.argmax_pair.first, observed.argmax_pair.second}},
                 {"pair_count", observed.pair_count},
                 {"permutations", o.permutations},
                 {"permutation_summary", null_summary_json(summarize(null))},
                 {"p_value", pv}};
    emit(envelope("two-sample", seed, payload, seconds_since(start)), g, out,
         {{".null.csv", series_csv("r", "permutation_mac", null.draws)}});
    return kSuccess;
}

int cmd_power(const PowerOptions& o, const GlobalOptions& g, std::uint64_t seed, std::ostream& out) {
    const auto start = Clock::now();
    experiments::PowerConfig cfg;
    cfg.reps = o.reps.value_or(g.full ? 1000 : 500);
    cfg.alpha = o.alpha;
    cfg.k = o.k;
    cfg.null_draws = o.null_draws;
    cfg.seed = seed;

    std::vector<experiments::PowerCurve> curves;
    for (int ex : o.examples) {
        std::vector<double> grid = o.c_grid;
        if (grid.empty()) {
            for (int c = ex <= 2 ? 1 : 0; c <= 5; ++c) grid.push_back(c);
        }
        for (std::size_t n : o.sizes) {
            curves.push_back(experiments::power_curve(ex, n, grid, cfg));
        }
    }
    Json payload{{"curves", Json::array()}};
    for (const auto& c : curves) payload["curves"].push_back(power_curve_json(c));
    std::ostringstream csv;
    experiments::write_power_csv(csv, curves);
    if (!o.csv.empty()) write_atomically(o.csv, csv.str());
    emit(envelope("power-sim", seed, payload, seconds_since(start)), g, out, {{".csv", csv.str()}});
    return kSuccess;
}

int cmd_replicate(const ReplicateOptions& o, const TestOptions& to, const MacOptions& ma, const GlobalOptions& g,
                  std::uint64_t seed, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    const GofConfig cfg = gof_config(to, ma, g, seed);
    Json payload;
    if (o.example == "5a" || o.example == "5b" || o.example == "6") {
        const std::size_t runs = o.runs.value_or(100);
        payload = replication_json(experiments::replicate_example(o.example, o.n, runs, cfg, seed));
    } else if (o.example == "7") {
        if (o.data.empty()) throw std::invalid_argument("example 7 needs --data (Auto MPG as CSV)");
        ModelOptions mo;
        mo.data = o.data;
        mo.response = o.response;
        mo.covariates = o.covariates;
        mo.categorical = o.categorical;
        Problem p = prepare(mo);
        for (const auto& w : p.warnings) err << "warning: " << w << '\n';
        const GofReport report = gof_test(p.data, *p.spec, cfg);
        payload = gof_report_json(report, p.x_names);
        payload["example"] = "7";
        payload["expectation"] = "the linear model is expected to be rejected";
    } else if (o.example == "9") {
        if (o.data.empty()) throw std::invalid_argument("example 9 needs --data (annual sunspot numbers as CSV)");
        payload["example"] = "9";
        payload["expectation"] = "TAR is expected to show the smallest T_B";
        for (const std::string preset : {"ar9", "tar", "ar2-lognormal"}) {
            ModelOptions mo;
            mo.data = o.data;
            mo.family = "ar";
            mo.series = o.series;
            mo.ar_preset = preset;
            Problem p = prepare(mo);
            payload["models"][preset] = gof_report_json(gof_test(p.data, *p.spec, cfg), p.x_names);
        }
    } else {
        throw std::invalid_argument("unknown example '" + o.example + "' (5a | 5b | 6 | 7 | 9)");
    }
    emit(envelope("replicate", seed, payload, seconds_since(start)), g, out);
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Goodness-of-fit assessment of statistical models with the MAC statistic"};
    app.set_config("--config", "", "Read options from a TOML/INI file");
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--seed", g.seed, "Master seed (default: drawn from system entropy and printed)");
    app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
    app.add_option("--cache-dir", g.cache_dir, std::string("Null-distribution cache directory (overrides ") +
                                                   kCacheDirEnv + ")");
    app.add_option("--out", g.out, "Report file (JSON); companion CSVs are written next to it");
    app.add_flag("--full", g.full, "Full-scale defaults (B = 1000, M = 999, 1000 power replications)");

    MacOptions mac_opts;
    ModelOptions model_opts;
    TestOptions test_opts;

    auto* gof = app.add_subcommand("gof", "Bootstrap MAC goodness-of-fit test of a working model");
    add_model_options(gof, model_opts);
    add_test_options(gof, test_opts);
    add_mac_options(gof, mac_opts);

    auto* null_dist = app.add_subcommand("null-dist", "Simulate a null distribution and store it in the cache");
    add_model_options(null_dist, model_opts);
    add_test_options(null_dist, test_opts);
    add_mac_options(null_dist, mac_opts);

    TwoSampleOptions two;
    auto* two_sample = app.add_subcommand("two-sample", "MAC two-sample test with a permutation p-value");
    two_sample->add_option("--first", two.first, "First CSV file")->required();
    two_sample->add_option("--second", two.second, "Second CSV file (default: the first)");
    two_sample->add_option("--response", two.response, "Comma-separated response columns")->required();
    two_sample->add_option("--covariates", two.covariates, "Comma-separated covariate columns (default: all others)");
    two_sample->add_option("--permutations", two.permutations, "Number of permutations");
    add_mac_options(two_sample, mac_opts);

    PowerOptions power;
    auto* power_sim = app.add_subcommand("power-sim", "Power of the MAC two-sample test on examples 1-4");
    power_sim->add_option("--example", power.examples, "Examples (1-4)")->delimiter(',');
    power_sim->add_option("--n", power.sizes, "Sample sizes")->delimiter(',');
    power_sim->add_option("--c", power.c_grid, "Effect sizes (default 1..5 or 0..5)")->delimiter(',');
    power_sim->add_option("--reps", power.reps, "Replications per point (quick 500, --full 1000)");
    power_sim->add_option("--null-draws", power.null_draws, "Monte Carlo null draws per (example, n)");
    power_sim->add_option("--k", power.k, "Number of locations");
    power_sim->add_option("--alpha", power.alpha, "Significance level");
    power_sim->add_option("--csv", power.csv, "Tidy CSV output (example,n,c,rate,...)");

    ReplicateOptions rep;
    auto* replicate = app.add_subcommand("replicate", "Model-checking examples 5a, 5b, 6 and recipes 7, 9");
    replicate->add_option("--example", rep.example, "5a | 5b | 6 | 7 | 9")->required();
    replicate->add_option("--runs", rep.runs, "Synthetic datasets for 5a, 5b, 6");
    replicate->add_option("--n", rep.n, "Observations per synthetic dataset");
    replicate->add_option("--data", rep.data, "Dataset for examples 7 and 9");
    replicate->add_option("--response", rep.response, "Example 7 response column");
    replicate->add_option("--covariates", rep.covariates, "Example 7 covariate columns");
    replicate->add_option("--categorical", rep.categorical, "Example 7 categorical columns");
    replicate->add_option("--series", rep.series, "Example 9 series column");
    add_test_options(replicate, test_opts);
    add_mac_options(replicate, mac_opts);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        set_worker_threads(g.threads);
        std::uint64_t seed = 0;
        if (g.seed) {
            seed = *g.seed;
        } else {
            seed = entropy_seed();
            err << "seed: " << seed << '\n';
        }
        if (gof->parsed()) return cmd_gof(model_opts, test_opts, mac_opts, g, seed, out, err);
        if (null_dist->parsed()) return cmd_null_dist(model_opts, test_opts, mac_opts, g, seed, out, err);
        if (two_sample->parsed()) return cmd_two_sample(two, mac_opts, g, seed, out, err);
        if (power_sim->parsed()) return cmd_power(power, g, seed, out);
        if (replicate->parsed()) return cmd_replicate(rep, test_opts, mac_opts, g, seed, out, err);
        return kUsageError;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
}

}  // namespace macgof::cli
