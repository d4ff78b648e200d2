#ifndef HAWKES_RUN_HPP
#define HAWKES_RUN_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "hawkes/config.hpp"

namespace hawkes {

inline constexpr const char* kVersion = "0.1.0";

struct RunReport {
    std::filesystem::path out_dir;
    std::vector<std::string> outputs;  // file names relative to out_dir
    std::string hash;
    double wall_seconds = 0.0;
};

// Dispatches a parsed configuration to the matching module, writes the
// result CSVs, a gnuplot script and run_report.json into config.out_dir and
// returns what was written. Every output file starts with a comment line
// naming the config hash and the seed.
RunReport run(const RunConfig& config);

}  // namespace hawkes

#endif
