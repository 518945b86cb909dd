#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace cfgdw {

enum class InputKind { Auto, Source, CfgJson };

struct PipelineConfig {
    std::string command;            // build, decompose, validate, play, oracle, lift, export-dot, generate
    std::string input;
    InputKind kind = InputKind::Auto;
    std::string output;             // empty: stdout
    std::string decomposition;      // validate: decomposition JSON to check instead of building one
    bool contract = false;
    std::uint64_t seed = 0;
    std::optional<int> max_rounds;
    int m = 2;
    int k_max = 3;
    int size = 20;                  // generate
    std::string cops = "f";         // play: f | optimal
    int num_cops = 3;               // play --cops optimal
    std::string robber = "lazy";    // play: lazy | lazy-max | optimal | random
    std::optional<int> robber_start;
    std::string what = "cfg";       // export-dot: cfg | decomposition
};

/// Exit codes: 0 success, 1 validation failure (or robber escape in play),
/// 2 I/O error, 3 parse or input error.
int run(const PipelineConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and runs; the tool's main.
int cli_main(int argc, char** argv);

} // namespace cfgdw
