#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <didq/channel.hpp>
#include <didq/geometry.hpp>

namespace didq::cli {

struct PipelineConfig {
    /// "pure" or "typical"
    std::string kind = "pure";
    std::vector<std::size_t> n;
    double alpha = 0.25;
    double t = 0.25;
    /// defaults to sqrt(n) / 2 per length
    std::optional<double> delta;
    double gamma = 0.5;
    bool sampling = false;
    std::size_t sample_trials = 200'000;
    std::size_t enumeration_cap = 10'000'000;

    double delta_for(std::size_t length) const;
};

struct Lemma2Config {
    std::size_t pairs = 500;
    std::vector<std::size_t> n = {2, 3, 4, 5, 6};
    std::vector<double> deltas = {0.5, 1.0, 2.0};
    std::size_t dim = 2;
};

struct VerifyConfig {
    std::filesystem::path code;
    bool oracle = true;
};

struct SimConfig {
    std::size_t povms = 8;
    /// coarse-graining sizes applied to each sampled basis (below the dimension)
    std::vector<std::size_t> bins;
};

struct ExperimentConfig {
    std::string experiment = "experiment";
    std::uint64_t seed = 0;
    std::optional<CqChannel> channel;
    Metric metric = Metric::SqrtHs;
    std::optional<Grid> grid;
    Schedule schedule;
    PipelineConfig pipeline;
    Lemma2Config lemma2;
    VerifyConfig verify;
    SimConfig sim;
    /// dimension used as the reference in sweeps; estimated when absent
    std::optional<double> dimension;
    std::filesystem::path output = "out";
    std::size_t cap = 4096;
    /// FNV-1a of the canonical config after overrides
    std::string hash;

    const CqChannel& require_channel() const;
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> output;
    std::optional<std::size_t> cap;
};

/// Parses and validates a JSON config; relative paths resolve against the
/// config file's directory. Unknown keys are errors.
ExperimentConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                              const Overrides& overrides = {});

} // namespace didq::cli
