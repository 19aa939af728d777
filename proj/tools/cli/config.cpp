#include "cli/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "cli/inputs.hpp"

namespace adjrisk::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

class Collector {
public:
    void add(std::string msg) { errors_.push_back(std::move(msg)); }
    [[nodiscard]] bool ok() const { return errors_.empty(); }

    [[noreturn]] void raise(const std::string& path) const {
        std::string msg = "invalid configuration '" + path + "':";
        for (const std::string& e : errors_) {
            msg += "\n  - " + e;
        }
        throw UsageError(msg);
    }

private:
    std::vector<std::string> errors_;
};

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where,
                Collector& errs) {
    for (const auto& item : obj.items()) {
        if (allowed.count(item.key()) == 0) {
            errs.add(where + ": unknown key '" + item.key() + "'");
        }
    }
}

std::string resolve_path(const fs::path& base, const std::string& p) {
    const fs::path candidate(p);
    return candidate.is_absolute() ? p : (base / candidate).lexically_normal().string();
}

std::optional<PriceSource> parse_price_source(const json& j, const std::string& where,
                                              const fs::path& base, Collector& errs) {
    PriceSource src;
    if (j.is_string()) {
        src.path = resolve_path(base, j.get<std::string>());
        if (!fs::exists(*src.path)) {
            errs.add(where + ": file '" + *src.path + "' does not exist");
        }
        return src;
    }
    if (j.is_object() && j.contains("synthetic")) {
        check_keys(j, {"synthetic"}, where, errs);
        const json& s = j["synthetic"];
        if (!s.is_object()) {
            errs.add(where + ".synthetic: expected an object");
            return std::nullopt;
        }
        check_keys(s, {"observations", "volatility"}, where + ".synthetic", errs);
        if (!s.contains("observations") || !s["observations"].is_number_unsigned() ||
            s["observations"].get<std::size_t>() < 2) {
            errs.add(where + ".synthetic.observations: expected an integer >= 2");
        } else {
            src.synthetic_observations = s["observations"].get<std::size_t>();
        }
        if (s.contains("volatility")) {
            if (!s["volatility"].is_number() || !(s["volatility"].get<double>() > 0.0)) {
                errs.add(where + ".synthetic.volatility: expected a positive number");
            } else {
                src.synthetic_volatility = s["volatility"].get<double>();
            }
        }
        return src;
    }
    errs.add(where + ": expected a file path or {\"synthetic\": {...}}");
    return std::nullopt;
}

std::optional<RiskFamilySpec> parse_family_field(const json& j, const std::string& where,
                                                 Collector& errs) {
    if (!j.is_string()) {
        errs.add(where + ": expected a family string such as \"es\" or \"scrm:0.95\"");
        return std::nullopt;
    }
    try {
        return parse_family(j.get<std::string>());
    } catch (const std::exception& e) {
        errs.add(where + ": " + e.what());
        return std::nullopt;
    }
}

std::optional<Date> parse_date_field(const json& j, const std::string& where, Collector& errs) {
    if (!j.is_string()) {
        errs.add(where + ": expected an ISO date string");
        return std::nullopt;
    }
    try {
        return parse_date(j.get<std::string>());
    } catch (const std::exception& e) {
        errs.add(where + ": " + e.what());
        return std::nullopt;
    }
}

std::optional<ProfileSpec> parse_profile(const json& j, const std::string& where,
                                         const fs::path& base, Collector& errs) {
    if (!j.is_object() || j.size() != 1) {
        errs.add(where + ": expected exactly one of 'step', 'file', 'frame', 'reevaluated'");
        return std::nullopt;
    }
    const auto& [kind, body] = *j.items().begin();
    try {
        if (kind == "step") {
            if (body.is_string()) {
                return parse_step_spec(body.get<std::string>());
            }
            check_keys(body, {"levels", "values"}, where + ".step", errs);
            const auto levels = body.at("levels").get<std::vector<double>>();
            const auto values = body.at("values").get<std::vector<double>>();
            return step_profile(levels, values);
        }
        if (kind == "file") {
            const std::string p = resolve_path(base, body.get<std::string>());
            if (!fs::exists(p)) {
                errs.add(where + ".file: '" + p + "' does not exist");
                return std::nullopt;
            }
            return load_profile_table(p);
        }
        if (kind == "reevaluated") {
            check_keys(body, {"lookback", "family"}, where + ".reevaluated", errs);
            ReevaluatedProfile re;
            if (body.contains("lookback")) {
                if (!body["lookback"].is_number_unsigned() || body["lookback"].get<std::size_t>() < 1) {
                    errs.add(where + ".reevaluated.lookback: expected a positive integer");
                } else {
                    re.lookback = body["lookback"].get<std::size_t>();
                }
            }
            if (body.contains("family")) {
                re.benchmark_family =
                    parse_family_field(body["family"], where + ".reevaluated.family", errs);
            }
            return re;
        }
        if (kind == "frame") {
            check_keys(body, {"start", "end", "family", "source"}, where + ".frame", errs);
            FrameProfile fr{};
            const auto start = parse_date_field(body.value("start", json()), where + ".frame.start", errs);
            const auto end = parse_date_field(body.value("end", json()), where + ".frame.end", errs);
            if (body.contains("family")) {
                fr.family = parse_family_field(body["family"], where + ".frame.family", errs);
            }
            if (body.contains("source")) {
                const std::string s = body["source"].is_string() ? body["source"].get<std::string>() : "";
                if (s != "benchmark" && s != "prices") {
                    errs.add(where + ".frame.source: expected \"benchmark\" or \"prices\"");
                }
                fr.use_benchmark_series = s != "prices";
            }
            if (!start || !end) {
                return std::nullopt;
            }
            fr.start = *start;
            fr.end = *end;
            if (fr.end < fr.start) {
                errs.add(where + ".frame: end precedes start");
            }
            return fr;
        }
    } catch (const std::exception& e) {
        errs.add(where + "." + kind + ": " + e.what());
        return std::nullopt;
    }
    errs.add(where + ": unknown profile kind '" + kind + "'");
    return std::nullopt;
}

}  // namespace

RunConfig load_run_config(const std::string& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open configuration '" + path + "'");
    }
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("configuration '" + path + "' is not valid JSON: " + e.what());
    }
    if (!root.is_object()) {
        throw UsageError("configuration '" + path + "' must be a JSON object");
    }
    const fs::path base = fs::path(path).parent_path();
    Collector errs;
    RunConfig cfg;
    check_keys(root,
               {"prices", "benchmark_prices", "window", "grid_step", "level_bounds", "measures",
                "reldiff", "output", "seed"},
               "config", errs);

    if (root.contains("window")) {
        if (!root["window"].is_number_unsigned()) {
            errs.add("window: expected a positive integer");
        } else {
            cfg.window = root["window"].get<std::size_t>();
        }
    }
    if (root.contains("grid_step")) {
        if (!root["grid_step"].is_number()) {
            errs.add("grid_step: expected a number");
        } else {
            cfg.grid_step = root["grid_step"].get<double>();
        }
    }
    if (root.contains("level_bounds")) {
        const json& b = root["level_bounds"];
        if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number()) {
            errs.add("level_bounds: expected [lower, upper]");
        } else {
            cfg.level_lower = b[0].get<double>();
            cfg.level_upper = b[1].get<double>();
        }
    }
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned()) {
            errs.add("seed: expected a non-negative integer");
        } else {
            cfg.seed = root["seed"].get<std::uint64_t>();
        }
    }
    if (root.contains("output")) {
        if (!root["output"].is_string()) {
            errs.add("output: expected a path");
        } else {
            cfg.output = resolve_path(base, root["output"].get<std::string>());
        }
    }
    if (!root.contains("prices")) {
        errs.add("prices: required");
    } else if (auto src = parse_price_source(root["prices"], "prices", base, errs)) {
        cfg.prices = *src;
    }
    if (root.contains("benchmark_prices")) {
        cfg.benchmark_prices =
            parse_price_source(root["benchmark_prices"], "benchmark_prices", base, errs);
    }

    if (!root.contains("measures") || !root["measures"].is_array() || root["measures"].empty()) {
        errs.add("measures: expected a non-empty array");
    } else {
        std::size_t i = 0;
        for (const json& m : root["measures"]) {
            const std::string where = "measures[" + std::to_string(i++) + "]";
            if (!m.is_object()) {
                errs.add(where + ": expected an object");
                continue;
            }
            check_keys(m, {"name", "family", "profile"}, where, errs);
            const std::string name =
                m.contains("name") && m["name"].is_string() ? m["name"].get<std::string>() : "";
            if (name.empty()) {
                errs.add(where + ".name: expected a non-empty string");
            }
            const auto family = parse_family_field(m.value("family", json()), where + ".family", errs);
            std::optional<ProfileSpec> profile;
            if (!m.contains("profile")) {
                errs.add(where + ".profile: required");
            } else {
                profile = parse_profile(m["profile"], where + ".profile", base, errs);
            }
            if (family && profile && !name.empty()) {
                cfg.measures.push_back({name, *family, *profile});
            }
        }
    }
    if (root.contains("reldiff")) {
        const json& r = root["reldiff"];
        bool good = r.is_array();
        if (good) {
            for (const json& pair : r) {
                if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
                    !pair[1].is_string()) {
                    good = false;
                    break;
                }
                cfg.reldiffs.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
            }
        }
        if (!good) {
            errs.add("reldiff: expected an array of [A, B] name pairs");
        }
    }

    if (overrides.seed) {
        cfg.seed = *overrides.seed;
    }
    if (overrides.window) {
        cfg.window = *overrides.window;
    }
    if (overrides.grid_step) {
        cfg.grid_step = *overrides.grid_step;
    }
    if (overrides.out) {
        cfg.output = *overrides.out;
    }

    // Structural checks shared with the library.
    BacktestConfig probe;
    probe.window = cfg.window;
    probe.grid_step = cfg.grid_step;
    probe.level_lower = cfg.level_lower;
    probe.level_upper = cfg.level_upper;
    probe.reldiffs = cfg.reldiffs;
    for (const MeasureSpec& m : cfg.measures) {
        ProfileSource src = ReevaluatedProfile{};
        if (const auto* g = std::get_if<TargetRiskProfile>(&m.profile)) {
            src = *g;
        } else if (const auto* re = std::get_if<ReevaluatedProfile>(&m.profile)) {
            src = *re;
        }
        probe.measures.push_back({m.name, m.family, src});
    }
    for (const std::string& e : probe.validate()) {
        if (cfg.measures.empty() && e == "at least one measure is required") {
            continue;
        }
        errs.add(e);
    }
    if (!errs.ok()) {
        errs.raise(path);
    }
    return cfg;
}

PriceSeries load_price_source(const PriceSource& src, std::uint64_t seed,
                              std::vector<std::string>& warnings) {
    if (src.path) {
        LoadedPrices loaded = [&] {
            try {
                return load_prices(*src.path);
            } catch (const std::runtime_error& e) {
                throw UsageError(e.what());
            }
        }();
        warnings.insert(warnings.end(), loaded.warnings.begin(), loaded.warnings.end());
        return loaded.series;
    }
    return synthetic_prices(src.synthetic_observations, seed, src.synthetic_volatility);
}

BacktestConfig resolve_backtest_config(const RunConfig& cfg, const ReturnSeries& prices,
                                       const ReturnSeries* benchmark) {
    BacktestConfig out;
    out.window = cfg.window;
    out.grid_step = cfg.grid_step;
    out.level_lower = cfg.level_lower;
    out.level_upper = cfg.level_upper;
    out.reldiffs = cfg.reldiffs;
    const BenchmarkProfileOptions opts = out.benchmark_options();
    for (const MeasureSpec& m : cfg.measures) {
        if (const auto* g = std::get_if<TargetRiskProfile>(&m.profile)) {
            out.measures.push_back({m.name, m.family, *g});
        } else if (const auto* re = std::get_if<ReevaluatedProfile>(&m.profile)) {
            out.measures.push_back({m.name, m.family, *re});
        } else {
            const auto& fr = std::get<FrameProfile>(m.profile);
            const ReturnSeries& source = fr.use_benchmark_series && benchmark ? *benchmark : prices;
            out.measures.push_back(
                {m.name, m.family,
                 calibrate_frame_profile(source, fr.start, fr.end, fr.family.value_or(m.family),
                                         opts, cfg.window)});
        }
    }
    return out;
}

}  // namespace adjrisk::cli
