#include "hawkes/config.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "hawkes/errors.hpp"

namespace hawkes {

namespace {

using nlohmann::json;

std::string item_path(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string index_path(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

void require_object(const json& value, const std::string& path) {
    if (!value.is_object()) throw ConfigError(path, "expected an object");
}

void reject_unknown(const json& object, const std::set<std::string>& allowed,
                    const std::string& path) {
    for (const auto& [key, _] : object.items()) {
        if (allowed.find(key) == allowed.end()) {
            throw ConfigError(item_path(path, key), "unknown key");
        }
    }
}

const json* find(const json& object, const std::string& key) {
    const auto it = object.find(key);
    return it == object.end() ? nullptr : &*it;
}

double get_double(const json& value, const std::string& path) {
    if (!value.is_number()) throw ConfigError(path, "expected a number");
    return value.get<double>();
}

int get_int(const json& value, const std::string& path) {
    if (!value.is_number_integer()) throw ConfigError(path, "expected an integer");
    return value.get<int>();
}

std::uint64_t get_u64(const json& value, const std::string& path) {
    if (value.is_number_unsigned()) return value.get<std::uint64_t>();
    if (value.is_number_integer() && value.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(value.get<std::int64_t>());
    }
    throw ConfigError(path, "expected a nonnegative integer");
}

std::string get_string(const json& value, const std::string& path) {
    if (!value.is_string()) throw ConfigError(path, "expected a string");
    return value.get<std::string>();
}

bool get_bool(const json& value, const std::string& path) {
    if (!value.is_boolean()) throw ConfigError(path, "expected a boolean");
    return value.get<bool>();
}

double get_positive(const json& value, const std::string& path) {
    const double v = get_double(value, path);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(path, "must be positive and finite");
    return v;
}

RateFunction parse_rate(const json& value, const std::string& path) {
    require_object(value, path);
    const json* kind_value = find(value, "kind");
    if (kind_value == nullptr) throw ConfigError(item_path(path, "kind"), "missing key");
    const std::string kind = get_string(*kind_value, item_path(path, "kind"));
    try {
        if (kind == "exp_sigmoid") {
            reject_unknown(value, {"kind", "scale", "threshold"}, path);
            const json* scale = find(value, "scale");
            const json* threshold = find(value, "threshold");
            if (scale == nullptr) throw ConfigError(item_path(path, "scale"), "missing key");
            if (threshold == nullptr) {
                throw ConfigError(item_path(path, "threshold"), "missing key");
            }
            return RateFunction::exp_sigmoid(get_double(*scale, item_path(path, "scale")),
                                             get_double(*threshold, item_path(path, "threshold")));
        }
        if (kind == "clipped_linear") {
            reject_unknown(value, {"kind", "base", "slope", "cap"}, path);
            const json* base = find(value, "base");
            const json* slope = find(value, "slope");
            const json* cap = find(value, "cap");
            if (base == nullptr) throw ConfigError(item_path(path, "base"), "missing key");
            if (slope == nullptr) throw ConfigError(item_path(path, "slope"), "missing key");
            if (cap == nullptr) throw ConfigError(item_path(path, "cap"), "missing key");
            return RateFunction::clipped_linear(get_double(*base, item_path(path, "base")),
                                                get_double(*slope, item_path(path, "slope")),
                                                get_double(*cap, item_path(path, "cap")));
        }
        if (kind == "constant") {
            reject_unknown(value, {"kind", "value"}, path);
            const json* v = find(value, "value");
            if (v == nullptr) throw ConfigError(item_path(path, "value"), "missing key");
            return RateFunction::constant(get_double(*v, item_path(path, "value")));
        }
    } catch (const std::invalid_argument& error) {
        throw ConfigError(path, error.what());
    }
    throw ConfigError(item_path(path, "kind"),
                      "unknown rate kind \"" + kind +
                          "\" (expected exp_sigmoid, clipped_linear or constant)");
}

json rate_to_json(const RateFunction& rate) {
    json value;
    value["kind"] = rate.kind_name();
    switch (rate.kind()) {
        case RateFunction::Kind::ExpSigmoid:
            value["scale"] = rate.param_a();
            value["threshold"] = rate.param_b();
            break;
        case RateFunction::Kind::ClippedLinear:
            value["base"] = rate.param_a();
            value["slope"] = rate.param_b();
            value["cap"] = rate.param_c();
            break;
        case RateFunction::Kind::Constant:
            value["value"] = rate.param_a();
            break;
    }
    return value;
}

NetworkModel parse_model(const json& document) {
    const json* model_value = find(document, "model");
    if (model_value == nullptr) throw ConfigError("model", "missing key");
    require_object(*model_value, "model");
    reject_unknown(*model_value, {"populations"}, "model");
    const json* pops_value = find(*model_value, "populations");
    if (pops_value == nullptr) throw ConfigError("model.populations", "missing key");
    if (!pops_value->is_array() || pops_value->size() != 2) {
        throw ConfigError("model.populations", "expected an array of exactly 2 populations");
    }

    std::array<PopulationParams, 2> pops;
    std::array<bool, 2> has_p = {false, false};
    for (std::size_t i = 0; i < 2; ++i) {
        const std::string path = index_path("model.populations", i);
        const json& pop_value = (*pops_value)[i];
        require_object(pop_value, path);
        reject_unknown(pop_value, {"eta", "nu", "c", "n_neurons", "p", "rate"}, path);

        PopulationParams& pop = pops[i];
        const json* eta = find(pop_value, "eta");
        if (eta == nullptr) throw ConfigError(item_path(path, "eta"), "missing key");
        pop.eta = get_int(*eta, item_path(path, "eta"));
        if (pop.eta < 0 || pop.eta > NetworkModel::kMaxEta) {
            throw ConfigError(item_path(path, "eta"),
                              "must lie in [0, " + std::to_string(NetworkModel::kMaxEta) + "]");
        }

        const json* nu = find(pop_value, "nu");
        if (nu == nullptr) throw ConfigError(item_path(path, "nu"), "missing key");
        pop.nu = get_positive(*nu, item_path(path, "nu"));

        pop.sign = i == 0 ? -1 : +1;
        if (const json* c = find(pop_value, "c")) {
            const double value = get_double(*c, item_path(path, "c"));
            if (value != -1.0 && value != 1.0) {
                throw ConfigError(item_path(path, "c"), "must be -1 or 1");
            }
            pop.sign = static_cast<int>(value);
        }

        pop.n_neurons = 50;
        if (const json* n = find(pop_value, "n_neurons")) {
            pop.n_neurons = get_int(*n, item_path(path, "n_neurons"));
            if (pop.n_neurons < 1) {
                throw ConfigError(item_path(path, "n_neurons"), "must be >= 1");
            }
        }

        if (const json* p = find(pop_value, "p")) {
            pop.proportion = get_double(*p, item_path(path, "p"));
            if (!(pop.proportion > 0.0) || !(pop.proportion < 1.0)) {
                throw ConfigError(item_path(path, "p"), "must lie in (0, 1)");
            }
            has_p[i] = true;
        }

        const json* rate = find(pop_value, "rate");
        if (rate == nullptr) throw ConfigError(item_path(path, "rate"), "missing key");
        pop.rate = parse_rate(*rate, item_path(path, "rate"));
    }

    if (has_p[0] != has_p[1]) {
        throw ConfigError("model.populations", "p must be given for both populations or neither");
    }
    if (!has_p[0]) {
        const double total = static_cast<double>(pops[0].n_neurons + pops[1].n_neurons);
        pops[0].proportion = static_cast<double>(pops[0].n_neurons) / total;
        pops[1].proportion = static_cast<double>(pops[1].n_neurons) / total;
    } else if (std::abs(pops[0].proportion + pops[1].proportion - 1.0) > 1e-12) {
        throw ConfigError("model.populations", "p values sum to " +
                                                   std::to_string(pops[0].proportion +
                                                                  pops[1].proportion) +
                                                   ", expected 1");
    }

    try {
        return NetworkModel(pops[0], pops[1]);
    } catch (const std::invalid_argument& error) {
        throw ConfigError("model", error.what());
    }
}

std::vector<double> get_double_array(const json& value, const std::string& path) {
    if (!value.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> values;
    values.reserve(value.size());
    for (std::size_t i = 0; i < value.size(); ++i) {
        values.push_back(get_double(value[i], index_path(path, i)));
    }
    return values;
}

Scheme parse_scheme(const json& value, const std::string& path) {
    const std::string name = get_string(value, path);
    const std::optional<Scheme> scheme = scheme_from_name(name);
    if (!scheme) throw ConfigError(path, "unknown scheme \"" + name + "\"");
    return *scheme;
}

BoundKind parse_bound(const json& value, const std::string& path) {
    const std::string name = get_string(value, path);
    if (name == "local") return BoundKind::Local;
    if (name == "global") return BoundKind::Global;
    throw ConfigError(path, "unknown bound \"" + name + "\" (expected local or global)");
}

void parse_run_block(const json& document, RunConfig& config) {
    const json* run = find(document, "run");
    if (run == nullptr) {
        config.t_max = 100.0;
        return;
    }
    require_object(*run, "run");
    reject_unknown(*run,
                   {"mode", "t_max", "n_steps", "delta", "scheme", "bound", "seed", "out_dir",
                    "x0", "sample_delta"},
                   "run");

    if (const json* mode = find(*run, "mode")) {
        const std::string name = get_string(*mode, "run.mode");
        const std::optional<RunMode> parsed = mode_from_name(name);
        if (!parsed) throw ConfigError("run.mode", "unknown mode \"" + name + "\"");
        config.mode = *parsed;
    }
    if (const json* delta = find(*run, "delta")) {
        config.delta = get_positive(*delta, "run.delta");
    }
    if (const json* t_max = find(*run, "t_max")) {
        config.t_max = get_positive(*t_max, "run.t_max");
    }
    if (const json* n_steps = find(*run, "n_steps")) {
        const int n = get_int(*n_steps, "run.n_steps");
        if (n < 1) throw ConfigError("run.n_steps", "must be >= 1");
        config.n_steps = static_cast<std::size_t>(n);
    }
    if (!config.t_max && !config.n_steps) config.t_max = 100.0;
    if (config.t_max && config.n_steps) {
        const double implied = static_cast<double>(*config.n_steps) * config.delta;
        if (std::abs(implied - *config.t_max) > 1e-9 * std::max(1.0, *config.t_max)) {
            throw ConfigError("run.n_steps", "inconsistent with t_max: " +
                                                 std::to_string(*config.n_steps) + " steps of " +
                                                 std::to_string(config.delta) + " span " +
                                                 std::to_string(implied));
        }
    }
    if (const json* scheme = find(*run, "scheme")) {
        config.scheme = parse_scheme(*scheme, "run.scheme");
    }
    if (const json* bound = find(*run, "bound")) {
        config.bound = parse_bound(*bound, "run.bound");
    }
    if (const json* seed = find(*run, "seed")) {
        config.seed = get_u64(*seed, "run.seed");
    }
    if (const json* out_dir = find(*run, "out_dir")) {
        config.out_dir = get_string(*out_dir, "run.out_dir");
        if (config.out_dir.empty()) throw ConfigError("run.out_dir", "must not be empty");
    }
    if (const json* x0 = find(*run, "x0")) {
        config.x0 = get_double_array(*x0, "run.x0");
        if (config.x0.size() != static_cast<std::size_t>(config.model.kappa())) {
            throw ConfigError("run.x0", "expected " + std::to_string(config.model.kappa()) +
                                            " components, got " +
                                            std::to_string(config.x0.size()));
        }
        for (std::size_t i = 0; i < config.x0.size(); ++i) {
            if (!std::isfinite(config.x0[i])) {
                throw ConfigError(index_path("run.x0", i), "must be finite");
            }
        }
    }
    if (const json* sample_delta = find(*run, "sample_delta")) {
        config.sample_delta = get_positive(*sample_delta, "run.sample_delta");
    }
}

void parse_converge_block(const json& document, RunConfig& config) {
    const json* block = find(document, "converge");
    if (block == nullptr) return;
    require_object(*block, "converge");
    reject_unknown(*block, {"deltas", "replicates", "t_star", "ref_delta", "schemes"}, "converge");
    if (const json* deltas = find(*block, "deltas")) {
        config.converge.deltas = get_double_array(*deltas, "converge.deltas");
        for (std::size_t i = 0; i < config.converge.deltas.size(); ++i) {
            if (!(config.converge.deltas[i] > 0.0)) {
                throw ConfigError(index_path("converge.deltas", i), "must be positive");
            }
        }
        if (config.converge.deltas.size() < 3) {
            throw ConfigError("converge.deltas", "need at least 3 deltas for a slope fit");
        }
    }
    if (const json* replicates = find(*block, "replicates")) {
        config.converge.replicates = get_int(*replicates, "converge.replicates");
        if (config.converge.replicates < 1) {
            throw ConfigError("converge.replicates", "must be >= 1");
        }
    }
    if (const json* t_star = find(*block, "t_star")) {
        config.converge.t_star = get_positive(*t_star, "converge.t_star");
    }
    if (const json* ref_delta = find(*block, "ref_delta")) {
        config.converge.ref_delta = get_positive(*ref_delta, "converge.ref_delta");
    }
    if (const json* schemes = find(*block, "schemes")) {
        if (!schemes->is_array() || schemes->empty()) {
            throw ConfigError("converge.schemes", "expected a nonempty array of scheme names");
        }
        config.converge.schemes.clear();
        for (std::size_t i = 0; i < schemes->size(); ++i) {
            config.converge.schemes.push_back(
                parse_scheme((*schemes)[i], index_path("converge.schemes", i)));
        }
    }
}

void parse_compare_block(const json& document, RunConfig& config) {
    const json* block = find(document, "compare");
    if (block == nullptr) return;
    require_object(*block, "compare");
    reject_unknown(*block, {"t_long", "delta"}, "compare");
    if (const json* t_long = find(*block, "t_long")) {
        config.compare.t_long = get_positive(*t_long, "compare.t_long");
        if (config.compare.t_long < 1e3) {
            throw ConfigError("compare.t_long", "must be >= 1e3 for a stationary comparison");
        }
    }
    if (const json* delta = find(*block, "delta")) {
        config.compare.delta = get_positive(*delta, "compare.delta");
    }
}

void parse_timing_block(const json& document, RunConfig& config) {
    const json* block = find(document, "timing");
    if (block == nullptr) return;
    require_object(*block, "timing");
    reject_unknown(*block, {"n_list", "bounds", "t_max", "repeats"}, "timing");
    if (const json* n_list = find(*block, "n_list")) {
        if (!n_list->is_array() || n_list->empty()) {
            throw ConfigError("timing.n_list", "expected a nonempty array of neuron counts");
        }
        config.timing.n_list.clear();
        for (std::size_t i = 0; i < n_list->size(); ++i) {
            const int n = get_int((*n_list)[i], index_path("timing.n_list", i));
            if (n < 2) throw ConfigError(index_path("timing.n_list", i), "must be >= 2");
            config.timing.n_list.push_back(n);
        }
    }
    if (const json* bounds = find(*block, "bounds")) {
        if (!bounds->is_array() || bounds->empty()) {
            throw ConfigError("timing.bounds", "expected a nonempty array of bound names");
        }
        config.timing.bound_kinds.clear();
        for (std::size_t i = 0; i < bounds->size(); ++i) {
            config.timing.bound_kinds.push_back(
                parse_bound((*bounds)[i], index_path("timing.bounds", i)));
        }
    }
    if (const json* t_max = find(*block, "t_max")) {
        config.timing.t_max = get_positive(*t_max, "timing.t_max");
    }
    if (const json* repeats = find(*block, "repeats")) {
        config.timing.repeats = get_int(*repeats, "timing.repeats");
        if (config.timing.repeats < 3) throw ConfigError("timing.repeats", "must be >= 3");
    }
}

void parse_bounds_block(const json& document, RunConfig& config) {
    const json* block = find(document, "bounds");
    if (block == nullptr) return;
    require_object(*block, "bounds");
    reject_unknown(*block, {"t_max", "n_points", "delta", "include_l0"}, "bounds");
    if (const json* t_max = find(*block, "t_max")) {
        config.bounds.t_max = get_positive(*t_max, "bounds.t_max");
    }
    if (const json* n_points = find(*block, "n_points")) {
        config.bounds.n_points = get_int(*n_points, "bounds.n_points");
        if (config.bounds.n_points < 2) throw ConfigError("bounds.n_points", "must be >= 2");
    }
    if (const json* delta = find(*block, "delta")) {
        config.bounds.delta = get_positive(*delta, "bounds.delta");
    }
    if (const json* include_l0 = find(*block, "include_l0")) {
        config.bounds.include_l0 = get_bool(*include_l0, "bounds.include_l0");
    }
}

}  // namespace

std::string mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::Pdmp: return "pdmp";
        case RunMode::Sde: return "sde";
        case RunMode::Ode: return "ode";
        case RunMode::Bounds: return "bounds";
        case RunMode::Converge: return "converge";
        case RunMode::Compare: return "compare";
        case RunMode::Timing: return "timing";
        case RunMode::Density: return "density";
    }
    return "sde";
}

std::optional<RunMode> mode_from_name(const std::string& name) {
    if (name == "pdmp") return RunMode::Pdmp;
    if (name == "sde") return RunMode::Sde;
    if (name == "ode") return RunMode::Ode;
    if (name == "bounds") return RunMode::Bounds;
    if (name == "converge") return RunMode::Converge;
    if (name == "compare") return RunMode::Compare;
    if (name == "timing") return RunMode::Timing;
    if (name == "density") return RunMode::Density;
    return std::nullopt;
}

RunConfig parse_config(const nlohmann::json& document) {
    require_object(document, "");
    reject_unknown(document, {"model", "run", "converge", "compare", "timing", "bounds"}, "");

    RunConfig config(parse_model(document));
    parse_run_block(document, config);
    parse_converge_block(document, config);
    parse_compare_block(document, config);
    parse_timing_block(document, config);
    parse_bounds_block(document, config);
    return config;
}

RunConfig parse_config_text(const std::string& text) {
    json document;
    try {
        document = json::parse(text);
    } catch (const json::parse_error& error) {
        throw ConfigError("", std::string("malformed JSON: ") + error.what());
    }
    return parse_config(document);
}

RunConfig load_config_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError(file.string(), "cannot open config file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

nlohmann::json to_json(const RunConfig& config) {
    json document;

    json populations = json::array();
    for (int k = 1; k <= 2; ++k) {
        const PopulationParams& pop = config.model.pop(k);
        json entry;
        entry["eta"] = pop.eta;
        entry["nu"] = pop.nu;
        entry["c"] = static_cast<double>(pop.sign);
        entry["n_neurons"] = pop.n_neurons;
        entry["p"] = pop.proportion;
        entry["rate"] = rate_to_json(pop.rate);
        populations.push_back(std::move(entry));
    }
    document["model"]["populations"] = std::move(populations);

    json& run = document["run"];
    run["mode"] = mode_name(config.mode);
    if (config.t_max) run["t_max"] = *config.t_max;
    if (config.n_steps) run["n_steps"] = *config.n_steps;
    run["delta"] = config.delta;
    run["scheme"] = scheme_name(config.scheme);
    run["bound"] = config.bound == BoundKind::Local ? "local" : "global";
    run["seed"] = config.seed;
    run["out_dir"] = config.out_dir;
    run["x0"] = config.x0;
    if (config.sample_delta) run["sample_delta"] = *config.sample_delta;

    json& converge = document["converge"];
    converge["deltas"] = config.converge.deltas;
    converge["replicates"] = config.converge.replicates;
    converge["t_star"] = config.converge.t_star;
    converge["ref_delta"] = config.converge.ref_delta;
    json scheme_names = json::array();
    for (const Scheme scheme : config.converge.schemes) scheme_names.push_back(scheme_name(scheme));
    converge["schemes"] = std::move(scheme_names);

    json& compare = document["compare"];
    compare["t_long"] = config.compare.t_long;
    compare["delta"] = config.compare.delta;

    json& timing = document["timing"];
    timing["n_list"] = config.timing.n_list;
    json bound_names = json::array();
    for (const BoundKind bound : config.timing.bound_kinds) {
        bound_names.push_back(bound == BoundKind::Local ? "local" : "global");
    }
    timing["bounds"] = std::move(bound_names);
    timing["t_max"] = config.timing.t_max;
    timing["repeats"] = config.timing.repeats;

    json& bounds = document["bounds"];
    bounds["t_max"] = config.bounds.t_max;
    bounds["n_points"] = config.bounds.n_points;
    bounds["delta"] = config.bounds.delta;
    bounds["include_l0"] = config.bounds.include_l0;

    return document;
}

std::string config_hash(const RunConfig& config) {
    const std::string canonical = to_json(config).dump();
    std::uint64_t hash = 1469598103934665603ull;
    for (const unsigned char c : canonical) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buffer, 16);
}

}  // namespace hawkes
