#include "macgof/null_dist.hpp"

#include "macgof/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace macgof {

namespace {

constexpr std::string_view kCacheMagic = "macgof-null-distribution 1";

template <typename T>
std::uint64_t hash_value(const T& value, std::uint64_t h) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    return fnv1a(bytes, h);
}

std::uint64_t hash_doubles(std::span<const double> values, std::uint64_t h) {
    h = hash_value(values.size(), h);
    return fnv1a({reinterpret_cast<const unsigned char*>(values.data()), values.size() * sizeof(double)}, h);
}

std::uint64_t hash_regime(const ARRegime& r, std::uint64_t h) {
    h = hash_value(r.intercept, h);
    h = hash_doubles(r.coefficients, h);
    h = hash_value(static_cast<int>(r.noise.kind), h);
    h = hash_value(r.noise.mean, h);
    h = hash_value(r.noise.variance, h);
    return hash_value(r.noise.scale, h);
}

std::string hex(std::uint64_t v) {
    char buf[17];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, 16);
    std::string out(buf, res.ptr);
    return std::string(16 - out.size(), '0') + out;
}

// One T_b series. Shared by the public entry point (parallel over b) and the
// null replicates (already parallel over r, so serial inside).
std::vector<double> mac_series(const FittedModel& fit, const RowMatrix& xs, std::span<const double> y_ref,
                               const BootstrapMacConfig& cfg, bool parallel) {
    if (cfg.replicates < 1) {
        throw std::invalid_argument("bootstrap MAC series needs at least one replicate");
    }
    if (static_cast<std::size_t>(xs.rows()) != y_ref.size()) {
        throw std::invalid_argument("bootstrap MAC series: response has " + std::to_string(y_ref.size()) +
                                    " values for " + std::to_string(xs.rows()) + " rows");
    }
    const PairedSample reference = PairedSample::scalar_response(xs, y_ref);
    auto draw = [&](std::size_t b) {
        Rng rng = make_rng(cfg.seed, Stream::Bootstrap, b);
        return bootstrap_response(fit, xs, cfg.kind, rng);
    };

    std::vector<double> series(cfg.replicates);
    if (!cfg.redraw_locations) {
        const std::vector<double> first = draw(0);
        Rng loc_rng = make_rng(cfg.seed, Stream::Locations);
        LocationSet locs = select_locations(reference, reference.with_response(first), cfg.mac, loc_rng);
        const MacEvaluator evaluator(reference, std::move(locs), cfg.mac.pair_ordering);
        series[0] = evaluator.against_response(first).value;
        auto body = [&](std::size_t b) { series[b + 1] = evaluator.against_response(draw(b + 1)).value; };
        if (parallel) {
            parallel_for(cfg.replicates - 1, body);
        } else {
            for (std::size_t b = 0; b + 1 < cfg.replicates; ++b) body(b);
        }
        return series;
    }

    auto body = [&](std::size_t b) {
        const std::vector<double> ys = draw(b);
        Rng loc_rng = make_rng(cfg.seed, Stream::Locations, b);
        LocationSet locs = select_locations(reference, reference.with_response(ys), cfg.mac, loc_rng);
        series[b] = MacEvaluator(reference, std::move(locs), cfg.mac.pair_ordering).against_response(ys).value;
    };
    if (parallel) {
        parallel_for(cfg.replicates, body);
    } else {
        for (std::size_t b = 0; b < cfg.replicates; ++b) body(b);
    }
    return series;
}

std::optional<NullDistribution> read_cache_file(std::istream& in, const NullMeta& meta, std::string& problem) {
    std::string line;
    if (!std::getline(in, line) || line != kCacheMagic) {
        problem = "unrecognised header";
        return std::nullopt;
    }
    if (!std::getline(in, line) || line != "meta " + meta.key()) {
        problem = "meta block does not match the request";
        return std::nullopt;
    }
    std::size_t count = 0;
    if (!std::getline(in, line) || line.rfind("count ", 0) != 0) {
        problem = "missing count";
        return std::nullopt;
    }
    {
        const char* first = line.data() + 6;
        const char* last = line.data() + line.size();
        const auto res = std::from_chars(first, last, count);
        if (res.ec != std::errc() || res.ptr != last) {
            problem = "malformed count";
            return std::nullopt;
        }
    }
    NullDistribution null;
    null.meta = meta;
    null.draws.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line)) {
            problem = "truncated after " + std::to_string(i) + " of " + std::to_string(count) + " draws";
            return std::nullopt;
        }
        double v = 0.0;
        const auto res = std::from_chars(line.data(), line.data() + line.size(), v);
        if (res.ec != std::errc() || res.ptr != line.data() + line.size() || !std::isfinite(v) || v < 0.0) {
            problem = "invalid draw on line " + std::to_string(i + 4);
            return std::nullopt;
        }
        null.draws.push_back(v);
    }
    if (!std::getline(in, line) || line != "end") {
        problem = "missing end marker";
        return std::nullopt;
    }
    if (!std::is_sorted(null.draws.begin(), null.draws.end())) {
        problem = "draws are not sorted";
        return std::nullopt;
    }
    return null;
}

}  // namespace

std::string_view to_string(NullProtocol p) noexcept {
    return p == NullProtocol::Refit ? "refit" : "plugin";
}

std::vector<double> bootstrap_mac_series(const FittedModel& fit, const RowMatrix& xs, std::span<const double> y_ref,
                                         const BootstrapMacConfig& cfg) {
    return mac_series(fit, xs, y_ref, cfg, true);
}

std::string NullMeta::key() const {
    std::ostringstream out;
    out << "n=" << n << ";k=" << k << ";strategy=" << to_string(strategy) << ";ordering=" << to_string(ordering)
        << ";family=" << to_string(family) << ";bootstrap=" << to_string(bootstrap) << ";B_inner=" << b_inner
        << ";seed=" << seed << ";protocol=" << to_string(protocol)
        << ";locations=" << (redraw_locations ? "redraw" : "fixed") << ";model=" << hex(model_fingerprint);
    return out.str();
}

double NullDistribution::mean() const {
    if (draws.empty()) throw std::invalid_argument("NullDistribution::mean: no draws");
    return std::accumulate(draws.begin(), draws.end(), 0.0) / static_cast<double>(draws.size());
}

std::uint64_t model_fingerprint(const FittedModel& fit, const RowMatrix& xs) {
    std::uint64_t h = fnv1a({});
    h = hash_value(static_cast<int>(fit.family), h);
    h = hash_value(xs.rows(), h);
    h = hash_value(xs.cols(), h);
    h = hash_doubles({xs.data(), static_cast<std::size_t>(xs.size())}, h);
    h = hash_doubles(predict(fit, xs), h);
    h = hash_value(fit.dispersion, h);
    h = hash_doubles(fit.residuals, h);
    const std::string fm = fit.feature_map.describe();
    h = fnv1a({reinterpret_cast<const unsigned char*>(fm.data()), fm.size()}, h);
    if (fit.ar) {
        h = hash_regime(fit.ar->lower, h);
        if (fit.ar->threshold) {
            h = hash_value(fit.ar->threshold->lag, h);
            h = hash_value(fit.ar->threshold->value, h);
            h = hash_regime(fit.ar->threshold->upper, h);
        }
    }
    return h;
}

NullMeta null_meta(const FittedModel& fit, const RowMatrix& xs, const NullConfig& cfg) {
    NullMeta meta;
    meta.n = static_cast<std::size_t>(xs.rows());
    meta.k = resolve_location_count(cfg.mac, meta.n);
    meta.strategy = cfg.mac.strategy;
    meta.ordering = cfg.mac.pair_ordering;
    meta.family = fit.family;
    meta.bootstrap = cfg.kind;
    meta.b_inner = cfg.b_inner;
    meta.seed = cfg.seed;
    meta.protocol = cfg.protocol;
    meta.redraw_locations = cfg.redraw_locations;
    meta.model_fingerprint = model_fingerprint(fit, xs);
    return meta;
}

NullDistribution simulate_null(const FittedModel& fit, const RowMatrix& xs, const NullConfig& cfg) {
    if (cfg.replicates < 99) {
        throw std::invalid_argument("simulate_null: need at least 99 replicates, got " +
                                    std::to_string(cfg.replicates));
    }
    if (cfg.b_inner < 1) {
        throw std::invalid_argument("simulate_null: B_inner must be at least 1");
    }
    if (cfg.protocol == NullProtocol::Refit && fit.fixed_means) {
        throw std::invalid_argument("simulate_null: externally supplied means cannot be refit");
    }

    NullDistribution null;
    null.meta = null_meta(fit, xs, cfg);
    MacConfig mac_cfg = cfg.mac;
    mac_cfg.k = null.meta.k;

    null.draws.resize(cfg.replicates);
    parallel_for(cfg.replicates, [&](std::size_t r) {
        const std::uint64_t rep_seed = derive_seed(cfg.seed, Stream::Null, r);
        Rng ref_rng = make_rng(rep_seed, Stream::NullReference);
        const std::vector<double> y0 = bootstrap_response(fit, xs, cfg.kind, ref_rng);

        BootstrapMacConfig inner;
        inner.replicates = cfg.b_inner;
        inner.mac = mac_cfg;
        inner.kind = cfg.kind;
        inner.redraw_locations = cfg.redraw_locations;
        inner.seed = rep_seed;

        std::vector<double> series;
        if (cfg.protocol == NullProtocol::Refit) {
            series = mac_series(refit(fit, xs, y0), xs, y0, inner, false);
        } else {
            series = mac_series(fit, xs, y0, inner, false);
        }
        null.draws[r] = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
    });
    std::sort(null.draws.begin(), null.draws.end());
    return null;
}

double p_value(double observed, const NullDistribution& null) {
    if (!std::isfinite(observed)) {
        throw std::invalid_argument("p_value: observed statistic is not finite");
    }
    if (null.draws.empty()) {
        throw std::invalid_argument("p_value: empty null distribution");
    }
    const auto first_ge = std::lower_bound(null.draws.begin(), null.draws.end(), observed);
    const auto at_least = static_cast<double>(null.draws.end() - first_ge);
    return (1.0 + at_least) / (static_cast<double>(null.draws.size()) + 1.0);
}

NullCache::NullCache(std::filesystem::path directory) : directory_(std::move(directory)) {}

std::filesystem::path NullCache::path_for(const NullMeta& meta) const {
    const std::string key = meta.key();
    const std::uint64_t h = fnv1a({reinterpret_cast<const unsigned char*>(key.data()), key.size()});
    return directory_ / ("null-" + hex(h) + ".txt");
}

NullCache::Lookup NullCache::lookup(const NullMeta& meta) const {
    Lookup result;
    const auto path = path_for(meta);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) {
        return result;
    }
    std::ifstream in(path);
    if (!in) {
        result.warning = "null cache: cannot open " + path.string() + "; recomputing";
        return result;
    }
    std::string problem;
    result.hit = read_cache_file(in, meta, problem);
    if (!result.hit) {
        result.warning = "null cache: ignoring " + path.string() + " (" + problem + "); recomputing";
    }
    return result;
}

std::filesystem::path NullCache::store(const NullDistribution& null) const {
    std::filesystem::create_directories(directory_);
    const auto path = path_for(null.meta);
    auto tmp = path;
    tmp += ".tmp-" + hex(entropy_seed());
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) {
            throw std::runtime_error("null cache: cannot write " + tmp.string());
        }
        out << kCacheMagic << '\n' << "meta " << null.meta.key() << '\n' << "count " << null.draws.size() << '\n';
        char buf[64];
        for (double d : null.draws) {
            const auto res = std::to_chars(buf, buf + sizeof(buf), d);
            out.write(buf, res.ptr - buf);
            out.put('\n');
        }
        out << "end\n";
        if (!out.flush()) {
            throw std::runtime_error("null cache: write to " + tmp.string() + " failed");
        }
    }
    std::filesystem::rename(tmp, path);
    return path;
}

std::uint64_t fnv1a(std::span<const unsigned char> bytes, std::uint64_t h) {
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace macgof
