#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "hawkes/config.hpp"
#include "hawkes/errors.hpp"
#include "hawkes/run.hpp"

namespace {

struct SubcommandSpec {
    const char* name;
    const char* description;
    hawkes::RunMode mode;
};

constexpr SubcommandSpec kSubcommands[] = {
    {"simulate-pdmp", "Exact thinning simulation of the spiking network", hawkes::RunMode::Pdmp},
    {"simulate-sde", "Diffusion approximation path (sde, or ode if the config says so)",
     hawkes::RunMode::Sde},
    {"bounds", "First and second moment bound curves", hawkes::RunMode::Bounds},
    {"converge", "Mean-square convergence study (RMSE against a fine reference)",
     hawkes::RunMode::Converge},
    {"compare", "Long-run PDMP versus diffusion comparison", hawkes::RunMode::Compare},
    {"timing", "Wall-clock benchmark of the simulators", hawkes::RunMode::Timing},
    {"density", "Empirical marginal densities of a long diffusion run", hawkes::RunMode::Density},
};

std::optional<std::uint64_t> seed_from_environment() {
    const char* text = std::getenv("SEED_OVERRIDE");
    if (text == nullptr || *text == '\0') return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const unsigned long long value = std::strtoull(text, &end, 10);
    if (errno != 0 || end == text || *end != '\0') {
        throw hawkes::ConfigError("SEED_OVERRIDE", "expected an unsigned integer, got \"" +
                                                       std::string(text) + "\"");
    }
    return value;
}

int run_command(const hawkes::RunMode mode, const std::string& config_file,
                const std::optional<std::uint64_t>& seed_flag,
                const std::optional<std::string>& out_flag) {
    hawkes::RunConfig config = hawkes::load_config_file(config_file);

    // The subcommand fixes the mode; an sde config may still ask for the
    // noise-free variant via run.mode = "ode".
    if (mode == hawkes::RunMode::Sde) {
        if (config.mode != hawkes::RunMode::Ode) config.mode = hawkes::RunMode::Sde;
    } else {
        config.mode = mode;
    }

    // Seed precedence: --seed flag, then SEED_OVERRIDE, then the config.
    if (seed_flag) {
        config.seed = *seed_flag;
    } else if (const auto env_seed = seed_from_environment()) {
        config.seed = *env_seed;
    }
    if (out_flag) config.out_dir = *out_flag;

    const hawkes::RunReport report = hawkes::run(config);
    std::cout << "mode=" << hawkes::mode_name(config.mode) << " seed=" << config.seed
              << " config_hash=" << report.hash << '\n';
    std::cout << "wall_seconds=" << report.wall_seconds << '\n';
    for (const std::string& name : report.outputs) {
        std::cout << "wrote " << (report.out_dir / name).string() << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and analysis toolkit for two-population Hawkes networks"};
    app.require_subcommand(1);

    struct Invocation {
        hawkes::RunMode mode;
        std::string config_file;
        std::optional<std::uint64_t> seed;
        std::optional<std::string> out_dir;
    };
    std::optional<Invocation> invocation;

    for (const SubcommandSpec& spec : kSubcommands) {
        CLI::App* sub = app.add_subcommand(spec.name, spec.description);
        auto state = std::make_shared<Invocation>();
        state->mode = spec.mode;
        sub->add_option("--config", state->config_file, "Run configuration (JSON)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option_function<std::uint64_t>(
            "--seed", [state](const std::uint64_t value) { state->seed = value; },
            "Override the seed from the config and SEED_OVERRIDE");
        sub->add_option_function<std::string>(
            "--out", [state](const std::string& value) { state->out_dir = value; },
            "Override the output directory");
        sub->callback([state, &invocation]() { invocation = *state; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& error) {
        const int code = app.exit(error);
        return code == 0 ? 0 : 2;
    }

    try {
        return run_command(invocation->mode, invocation->config_file, invocation->seed,
                           invocation->out_dir);
    } catch (const hawkes::ConfigError& error) {
        std::cerr << "config error: " << error.what() << '\n';
        return 2;
    } catch (const hawkes::NumericalError& error) {
        std::cerr << "numerical error: " << error.what() << '\n';
        return 3;
    } catch (const hawkes::InsufficientDataError& error) {
        std::cerr << "insufficient data: " << error.what() << '\n';
        return 4;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 1;
    }
}
