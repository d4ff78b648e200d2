#ifndef HAWKES_CONFIG_HPP
#define HAWKES_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hawkes/integrators.hpp"
#include "hawkes/model.hpp"
#include "hawkes/pdmp.hpp"

namespace hawkes {

enum class RunMode { Pdmp, Sde, Ode, Bounds, Converge, Compare, Timing, Density };

std::string mode_name(RunMode mode);
std::optional<RunMode> mode_from_name(const std::string& name);

struct ConvergeConfig {
    std::vector<double> deltas = {1e-3, 1e-2, 1e-1};
    int replicates = 200;
    double t_star = 1.0;
    double ref_delta = 1e-4;
    std::vector<Scheme> schemes = {Scheme::EulerMaruyama, Scheme::LieTrotter, Scheme::Strang};
};

struct CompareConfig {
    double t_long = 2e4;
    double delta = 0.1;
};

struct TimingConfig {
    std::vector<int> n_list = {20, 50, 100, 150, 200};
    std::vector<BoundKind> bound_kinds = {BoundKind::Local, BoundKind::Global};
    double t_max = 100.0;
    int repeats = 3;
};

struct BoundsConfig {
    double t_max = 10.0;
    int n_points = 101;
    double delta = 0.1;
    bool include_l0 = true;
};

// Fully resolved run description: the model, the requested mode, and every
// knob with its default applied. Construction goes through parse_config so
// an instance is always schema-valid.
struct RunConfig {
    explicit RunConfig(NetworkModel m) : model(std::move(m)), x0(model.zero_state()) {}

    NetworkModel model;
    RunMode mode = RunMode::Sde;
    std::optional<double> t_max;          // defaults to 100 when n_steps is absent
    std::optional<std::size_t> n_steps;   // alternative grid length for sde/ode runs
    double delta = 0.1;
    Scheme scheme = Scheme::Strang;
    BoundKind bound = BoundKind::Local;
    std::uint64_t seed = 0;
    std::string out_dir = "results";
    StateVec x0;
    std::optional<double> sample_delta;   // pdmp only: also sample on this grid

    ConvergeConfig converge;
    CompareConfig compare;
    TimingConfig timing;
    BoundsConfig bounds;
};

// Validates the document against the schema (unknown keys rejected) and
// resolves all defaults. Constraint violations raise ConfigError carrying
// the path of the offending key.
RunConfig parse_config(const nlohmann::json& document);

// Convenience wrappers; malformed JSON raises ConfigError as well.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::filesystem::path& file);

// Canonical echo of a resolved configuration; parse_config(to_json(c))
// reproduces c exactly.
nlohmann::json to_json(const RunConfig& config);

// FNV-1a over the canonical serialization, as a 16-digit hex string.
// Identifies a run's full configuration in output file headers.
std::string config_hash(const RunConfig& config);

}  // namespace hawkes

#endif
