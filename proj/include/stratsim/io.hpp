#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "stratsim/instance.hpp"

namespace stratsim {

struct ExperimentConfig;
struct TrialSet;
struct TrialResult;

/// Malformed or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

/// {"vertex_count": V, "edges": [[a, b], ...]} with a < b.
Json graph_to_json(const ManipulationGraph& g);
ManipulationGraph graph_from_json(const Json& j);

/// Matrix of +-1 labels, row i = h^i.
Json class_to_json(const HypothesisClass& c);
HypothesisClass class_from_json(const Json& j);

Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& j);

Instance load_instance(const std::string& path);
void save_json(const std::string& path, const Json& j);
Json load_json(const std::string& path);

/// Keys: instance, learner, adversary, T, trials, seed, out, emit_rounds, threads.
ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& config);

Json trial_to_json(const TrialResult& r, bool with_rounds);
Json trial_set_to_json(const ExperimentConfig& config, const TrialSet& set);

}  // namespace stratsim
