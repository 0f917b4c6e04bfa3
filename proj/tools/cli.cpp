#include "cli.hpp"

#include "scour/error.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>
#include <ostream>

namespace scour::cli {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string num(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::size_t start = 0;
        while (start <= item.size()) {
            const auto comma = item.find(',', start);
            const auto piece = item.substr(start, comma == std::string::npos ? std::string::npos
                                                                             : comma - start);
            if (!piece.empty()) out.push_back(piece);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    return out;
}

template <typename Fn>
void write_with(const fs::path& path, Fn&& fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    fn(out);
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

void echo_config(const RunConfig& config, const fs::path& dir) {
    write_with(dir / "run_config.json", [&](std::ostream& o) { write_config(o, config); });
}

// Raw flag storage shared by the data-driven commands. Only flags the user passed
// override the config file; unset ones fall through to the file, then defaults.
struct Flags {
    std::string config_path;
    std::string scale;
    std::string data;
    std::vector<std::string> specs;
    std::uint64_t seed = 0;
    std::uint64_t split_seed = 0;
    double ratio = 0.7;
    std::size_t particles = 0;
    std::size_t iterations = 0;
    double inertia = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double vcap = 0.0;
    double a_min = 0.0, a_max = 0.0, exp_min = 0.0, exp_max = 0.0;
    std::string out;
    bool strict = false;
    bool hancu_squared = false;
    std::string units;
    unsigned workers = 1;
    std::vector<std::string> models;
    std::vector<std::string> baselines;
    std::size_t repeats = 1;

    std::map<std::string, CLI::Option*> opts;

    bool given(const std::string& name) const {
        auto it = opts.find(name);
        return it != opts.end() && it->second->count() > 0;
    }
};

void add_common(CLI::App& cmd, Flags& f, bool with_specs, bool with_swarm) {
    f.opts["config"] = cmd.add_option("--config", f.config_path, "Replay a run_config.json");
    f.opts["scale"] = cmd.add_option("--scale", f.scale, "lab or field");
    f.opts["data"] = cmd.add_option("--data", f.data, "Input CSV");
    f.opts["out"] = cmd.add_option("--out", f.out, "Output directory");
    f.opts["seed"] = cmd.add_option("--seed", f.seed, "Master seed (fallback: SCOUR_SEED)");
    f.opts["split-seed"] = cmd.add_option("--split-seed", f.split_seed, "Split seed (default: --seed)");
    f.opts["ratio"] = cmd.add_option("--ratio", f.ratio, "Training fraction (default 0.7)");
    f.opts["strict"] = cmd.add_flag("--strict", f.strict, "Reject the file on any bad row");
    f.opts["units"] = cmd.add_option("--units", f.units, "Metric units: meters or dimensionless");
    f.opts["workers"] = cmd.add_option("--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber);
    f.opts["hancu-squared"] =
        cmd.add_flag("--hancu-squared", f.hancu_squared, "Use Vc^2/(gD) in the Hancu formula");
    if (with_specs)
        f.opts["spec"] = cmd.add_option("--spec", f.specs, "Spec ids (L1..L6, F1..F6) or 'all'");
    if (with_swarm) {
        f.opts["particles"] = cmd.add_option("--particles", f.particles, "Swarm size");
        f.opts["iterations"] = cmd.add_option("--iterations", f.iterations, "PSO iterations");
        f.opts["inertia"] = cmd.add_option("--inertia", f.inertia, "Inertia weight w");
        f.opts["c1"] = cmd.add_option("--c1", f.c1, "Cognitive coefficient");
        f.opts["c2"] = cmd.add_option("--c2", f.c2, "Social coefficient");
        f.opts["vcap"] = cmd.add_option("--vcap", f.vcap, "Velocity cap as a fraction of the range");
        f.opts["a-min"] = cmd.add_option("--a-min", f.a_min, "Lower bound for a");
        f.opts["a-max"] = cmd.add_option("--a-max", f.a_max, "Upper bound for a");
        f.opts["exp-min"] = cmd.add_option("--exp-min", f.exp_min, "Lower bound for exponents");
        f.opts["exp-max"] = cmd.add_option("--exp-max", f.exp_max, "Upper bound for exponents");
    }
}

RunConfig resolve(const std::string& command, const Flags& f) {
    RunConfig c;
    bool seed_from_file = false;
    if (f.given("config")) {
        c = load_config(f.config_path);
        seed_from_file = true;
    } else if (const char* env = std::getenv("SCOUR_SEED"); env && *env) {
        std::uint64_t v = 0;
        const std::string_view s(env);
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw ConfigError("SCOUR_SEED is not an unsigned integer: '" + std::string(s) + "'");
        c.swarm.seed = v;
        c.split_seed = v;
    } else {
        c.swarm.seed = kDefaultSeed;
        c.split_seed = kDefaultSeed;
    }
    c.command = command;

    if (f.given("scale"))
        c.scale = parse_scale(f.scale);
    else if (!f.given("config"))
        throw ConfigError("--scale is required (lab or field)");
    if (f.given("data")) c.data = f.data;
    if (f.given("out")) c.output_dir = f.out;
    if (f.given("spec")) c.spec_ids = split_list(f.specs);
    if (f.given("seed")) {
        c.swarm.seed = f.seed;
        if (!f.given("split-seed") && !seed_from_file) c.split_seed = f.seed;
    }
    if (f.given("split-seed")) c.split_seed = f.split_seed;
    if (f.given("ratio")) c.split_ratio = f.ratio;
    if (f.given("particles")) c.swarm.particle_count = f.particles;
    if (f.given("iterations")) c.swarm.iteration_count = f.iterations;
    if (f.given("inertia")) c.swarm.inertia_weight = f.inertia;
    if (f.given("c1")) c.swarm.cognitive_coeff = f.c1;
    if (f.given("c2")) c.swarm.social_coeff = f.c2;
    if (f.given("vcap")) c.swarm.velocity_cap_fraction = f.vcap;
    if (f.given("a-min")) c.bounds.a_lower = f.a_min;
    if (f.given("a-max")) c.bounds.a_upper = f.a_max;
    if (f.given("exp-min")) c.bounds.exponent_lower = f.exp_min;
    if (f.given("exp-max")) c.bounds.exponent_upper = f.exp_max;
    if (f.given("strict")) c.strict = f.strict;
    if (f.given("hancu-squared")) c.hancu_squared = f.hancu_squared;
    if (f.given("units")) c.units = parse_metric_units(f.units);
    if (f.given("workers")) c.workers = f.workers;
    if (f.given("model")) c.models = f.models;
    if (f.given("baseline")) c.baselines = split_list(f.baselines);
    if (f.given("repeats")) c.repeats = f.repeats;
    c.swarm.workers = c.workers;

    if (c.data.empty()) throw ConfigError("--data is required");
    c.swarm.validate();
    if (!(c.bounds.a_lower > 0.0)) throw ConfigError("--a-min must be positive");
    c.bounds.for_spec(builtin_spec(c.scale == Scale::Laboratory ? "L1" : "F1")).validate();
    if (!(c.split_ratio > 0.0 && c.split_ratio < 1.0)) throw ConfigError("--ratio must lie in (0, 1)");
    return c;
}

std::vector<ModelSpec> resolve_specs(const RunConfig& c) {
    if (c.spec_ids.empty()) throw ConfigError("--spec is required");
    if (c.spec_ids.size() == 1 && c.spec_ids.front() == "all") return builtin_specs(c.scale);
    std::vector<ModelSpec> out;
    for (const auto& id : c.spec_ids) {
        auto spec = builtin_spec(id);
        if (spec.scale != c.scale)
            throw ConfigError("spec '" + id + "' belongs to " + std::string(to_string(spec.scale)) +
                              " data but --scale is " + std::string(to_string(c.scale)));
        out.push_back(std::move(spec));
    }
    return out;
}

LoadResult load_data(const RunConfig& c, std::ostream& err) {
    auto loaded = load_csv(c.data, c.scale, c.strict);
    for (const auto& r : loaded.rejections)
        err << "warning: " << c.data << ":" << r.line << ": rejected: " << r.reason << '\n';
    return loaded;
}

fs::path prepare_out(const RunConfig& c) {
    if (c.output_dir.empty()) throw ConfigError("--out is required");
    fs::path dir(c.output_dir);
    fs::create_directories(dir);
    return dir;
}

int cmd_fit(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto specs = resolve_specs(c);
    const auto dir = prepare_out(c);
    const auto loaded = load_data(c, err);
    const auto options = c.workbench_options();
    const auto data_split = split(loaded.records, c.split_ratio, c.split_seed);
    const auto reports = fit_specs(specs, data_split, options);
    const auto settings = settings_of(c.scale, options);

    for (const auto& rep : reports) {
        save_model(dir / (rep.model_id + ".model.json"), *rep.model);
        write_with(dir / (rep.model_id + ".report.json"),
                   [&](std::ostream& o) { write_report(o, rep, settings); });
        out << rep.model_id << ": a=" << num(rep.model->a);
        for (std::size_t k = 0; k < rep.model->exponents.size(); ++k)
            out << ' ' << feature_symbol(rep.model->spec.features[k]) << '^'
                << num(rep.model->exponents[k]);
        out << "  test_rmse=" << num(rep.test.rmse) << '\n';
    }
    emit_metrics_table(reports, dir / "metrics.csv");
    echo_config(c, dir);
    return kSuccess;
}

int cmd_sensitivity(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto dir = prepare_out(c);
    const auto loaded = load_data(c, err);
    const auto specs = c.spec_ids.empty() ? builtin_specs(c.scale) : resolve_specs(c);
    const auto runs =
        run_sensitivity_repeated(loaded.records, c.scale, specs, c.workbench_options(), c.repeats);
    const auto& run = runs.front();

    emit_report(run, dir / "sensitivity_report.json");
    emit_band_table(run.reports, dir / "band_table.csv");
    emit_scatter_data(run.reports, dir / "scatter.csv");
    emit_metrics_table(run.reports, dir / "metrics.csv");
    for (const auto& rep : run.reports) save_model(dir / (rep.model_id + ".model.json"), *rep.model);
    if (runs.size() > 1) emit_robustness_table(runs, dir / "robustness.csv");
    echo_config(c, dir);

    out << "ranking:";
    for (const auto& id : run.ranking) out << ' ' << id;
    out << "\nmost_effective_feature: "
        << (run.most_effective_feature ? std::string(feature_symbol(*run.most_effective_feature))
                                       : std::string("undefined"))
        << '\n';
    for (std::size_t k = 1; k < runs.size(); ++k) {
        const auto& extra = runs[k];
        out << "split_seed " << extra.options.split_seed << ": most_effective_feature "
            << (extra.most_effective_feature ? std::string(feature_symbol(*extra.most_effective_feature))
                                             : std::string("undefined"))
            << '\n';
    }
    for (const auto& f : run.failures) err << "warning: " << f.spec_id << " failed: " << f.message << '\n';
    return kSuccess;
}

int cmd_baselines(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto dir = prepare_out(c);
    const auto loaded = load_data(c, err);
    std::vector<PowerLawModel> models;
    for (const auto& path : c.models) models.push_back(load_model(path));
    std::vector<BaselineId> ids;
    if (c.baselines.empty())
        for (const auto& b : all_baselines()) ids.push_back(b.id);
    else
        for (const auto& key : c.baselines) ids.push_back(parse_baseline(key));

    const auto data_split = split(loaded.records, c.split_ratio, c.split_seed);
    const auto table = run_comparison(c.scale, models, ids, data_split, c.workbench_options());

    emit_report(table, dir / "comparison_report.json");
    emit_metrics_table(table.rows, dir / "metrics.csv");
    emit_band_table(table.rows, dir / "band_table.csv");
    emit_scatter_data(table.rows, dir / "scatter.csv");
    echo_config(c, dir);

    write_metrics_table(out, table.rows);
    for (const auto& note : table.notes) err << "note: " << note << '\n';
    return kSuccess;
}

int cmd_split(const RunConfig& c, const std::string& train_path, const std::string& test_path,
              std::ostream& out, std::ostream& err) {
    const auto loaded = load_data(c, err);
    const auto parts = split(loaded.records, c.split_ratio, c.split_seed);
    for (const auto& p : {fs::path(train_path), fs::path(test_path)})
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
    write_with(train_path, [&](std::ostream& o) { write_csv(o, parts.training, c.scale); });
    write_with(test_path, [&](std::ostream& o) { write_csv(o, parts.testing, c.scale); });
    const fs::path echo_dir = fs::path(train_path).has_parent_path()
                                  ? fs::path(train_path).parent_path()
                                  : fs::path(".");
    echo_config(c, echo_dir);
    out << "training=" << parts.training.size() << " testing=" << parts.testing.size() << '\n';
    return kSuccess;
}

struct PredictFlags {
    std::string model;
    double D = 0, V = 0, y = 0, d50 = 0, sigma = 0, Vc = 0, L = 0;
    CLI::Option* vc_opt = nullptr;
    CLI::Option* l_opt = nullptr;
};

int cmd_predict(const PredictFlags& f, std::ostream& out) {
    const bool has_vc = f.vc_opt->count() > 0;
    const bool has_l = f.l_opt->count() > 0;
    if (has_vc == has_l) throw ConfigError("predict needs exactly one of --Vc (laboratory) or --L (field)");
    const auto model = load_model(f.model);

    RawScourRecord r;
    r.scale = has_vc ? Scale::Laboratory : Scale::Field;
    r.pier_width = f.D;
    r.mean_velocity = f.V;
    r.flow_depth = f.y;
    r.d50 = f.d50;
    r.gradation = f.sigma;
    r.scour_depth = 0.0;
    if (has_vc) r.critical_velocity = f.Vc;
    if (has_l) r.pier_length = f.L;
    const double s_over_y = predict(model, derive_features(r));
    out << "S_over_y=" << num(s_over_y) << '\n' << "S_m=" << num(s_over_y * f.y) << '\n';
    return kSuccess;
}

} // namespace

WorkbenchOptions RunConfig::workbench_options() const {
    WorkbenchOptions o;
    o.swarm = swarm;
    o.swarm.workers = workers;
    o.bounds = bounds;
    o.split_ratio = split_ratio;
    o.split_seed = split_seed;
    o.units = units;
    o.baseline.hancu_squared = hancu_squared;
    o.workers = workers;
    return o;
}

void write_config(std::ostream& out, const RunConfig& c) {
    Json j;
    j["command"] = c.command;
    j["scale"] = std::string(to_string(c.scale));
    j["data"] = c.data;
    j["spec_ids"] = c.spec_ids;
    j["swarm"] = {{"particle_count", c.swarm.particle_count},
                  {"iteration_count", c.swarm.iteration_count},
                  {"inertia_weight", c.swarm.inertia_weight},
                  {"cognitive_coeff", c.swarm.cognitive_coeff},
                  {"social_coeff", c.swarm.social_coeff},
                  {"velocity_cap_fraction", c.swarm.velocity_cap_fraction},
                  {"seed", c.swarm.seed}};
    j["bounds"] = {{"a_lower", c.bounds.a_lower},
                   {"a_upper", c.bounds.a_upper},
                   {"exponent_lower", c.bounds.exponent_lower},
                   {"exponent_upper", c.bounds.exponent_upper}};
    j["split"] = {{"ratio", c.split_ratio}, {"seed", c.split_seed}};
    j["output_dir"] = c.output_dir;
    j["strict"] = c.strict;
    j["hancu_squared"] = c.hancu_squared;
    j["metric_units"] = std::string(to_string(c.units));
    j["workers"] = c.workers;
    j["models"] = c.models;
    j["baselines"] = c.baselines;
    j["repeats"] = c.repeats;
    out << j.dump(2) << '\n';
}

RunConfig read_config(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    try {
        const Json j = Json::parse(text);
        RunConfig c;
        c.command = j.value("command", "");
        c.scale = parse_scale(j.at("scale").get<std::string>());
        c.data = j.value("data", "");
        c.spec_ids = j.value("spec_ids", std::vector<std::string>{});
        const auto& sw = j.at("swarm");
        c.swarm.particle_count = sw.at("particle_count").get<std::size_t>();
        c.swarm.iteration_count = sw.at("iteration_count").get<std::size_t>();
        c.swarm.inertia_weight = sw.at("inertia_weight").get<double>();
        c.swarm.cognitive_coeff = sw.at("cognitive_coeff").get<double>();
        c.swarm.social_coeff = sw.at("social_coeff").get<double>();
        c.swarm.velocity_cap_fraction = sw.at("velocity_cap_fraction").get<double>();
        c.swarm.seed = sw.at("seed").get<std::uint64_t>();
        const auto& b = j.at("bounds");
        c.bounds.a_lower = b.at("a_lower").get<double>();
        c.bounds.a_upper = b.at("a_upper").get<double>();
        c.bounds.exponent_lower = b.at("exponent_lower").get<double>();
        c.bounds.exponent_upper = b.at("exponent_upper").get<double>();
        c.split_ratio = j.at("split").at("ratio").get<double>();
        c.split_seed = j.at("split").at("seed").get<std::uint64_t>();
        c.output_dir = j.value("output_dir", "");
        c.strict = j.value("strict", false);
        c.hancu_squared = j.value("hancu_squared", false);
        c.units = parse_metric_units(j.value("metric_units", "meters"));
        c.workers = j.value("workers", 1u);
        c.swarm.workers = c.workers;
        c.models = j.value("models", std::vector<std::string>{});
        c.baselines = j.value("baselines", std::vector<std::string>{});
        c.repeats = j.value("repeats", std::size_t{1});
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("run config: ") + e.what());
    }
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open config file '" + path.string() + "'");
    return read_config(in);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fit and evaluate power-law pier-scour equations"};
    app.require_subcommand(1);

    Flags fit_flags, sens_flags, base_flags, split_flags;

    auto* fit_cmd = app.add_subcommand("fit", "Fit power-law specs on the training split");
    add_common(*fit_cmd, fit_flags, true, true);

    auto* sens_cmd = app.add_subcommand("sensitivity", "Run the feature-exclusion matrix");
    add_common(*sens_cmd, sens_flags, true, true);
    sens_flags.opts["repeats"] = sens_cmd->add_option(
        "--repeats", sens_flags.repeats, "Also rerun on the next N-1 split seeds (default 1)")
        ->check(CLI::PositiveNumber);

    auto* base_cmd = app.add_subcommand("baselines", "Evaluate published formulas on the testing split");
    add_common(*base_cmd, base_flags, false, false);
    base_flags.opts["model"] = base_cmd->add_option("--model", base_flags.models, "Fitted model files to compare");
    base_flags.opts["baseline"] = base_cmd->add_option("--baseline", base_flags.baselines, "Restrict to these baselines");

    auto* split_cmd = app.add_subcommand("split", "Write the training/testing partition as CSV");
    add_common(*split_cmd, split_flags, false, false);
    std::string out_train, out_test;
    split_cmd->add_option("--out-train", out_train, "Training CSV")->required();
    split_cmd->add_option("--out-test", out_test, "Testing CSV")->required();

    auto* pred_cmd = app.add_subcommand("predict", "Predict scour depth for one record");
    PredictFlags pf;
    pred_cmd->add_option("--model", pf.model, "Model file")->required();
    pred_cmd->add_option("--D", pf.D, "Pier width (m)")->required();
    pred_cmd->add_option("--V", pf.V, "Mean velocity (m/s)")->required();
    pred_cmd->add_option("--y", pf.y, "Flow depth (m)")->required();
    pred_cmd->add_option("--d50", pf.d50, "Median grain size (m)")->required();
    pred_cmd->add_option("--sigma", pf.sigma, "Sediment gradation")->required();
    pf.vc_opt = pred_cmd->add_option("--Vc", pf.Vc, "Critical velocity (m/s), laboratory");
    pf.l_opt = pred_cmd->add_option("--L", pf.L, "Pier length (m), field");
    pf.vc_opt->excludes(pf.l_opt);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }

    try {
        if (*fit_cmd) return cmd_fit(resolve("fit", fit_flags), out, err);
        if (*sens_cmd) return cmd_sensitivity(resolve("sensitivity", sens_flags), out, err);
        if (*base_cmd) return cmd_baselines(resolve("baselines", base_flags), out, err);
        if (*split_cmd) return cmd_split(resolve("split", split_flags), out_train, out_test, out, err);
        if (*pred_cmd) return cmd_predict(pf, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kDataValidation;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kDataValidation;
    }
    return kUsage;
}

} // namespace scour::cli
