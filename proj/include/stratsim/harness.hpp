#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stratsim/adversary.hpp"
#include "stratsim/agnostic.hpp"
#include "stratsim/instance.hpp"
#include "stratsim/learner.hpp"

namespace stratsim {

inline constexpr int kSchemaVersion = 1;

struct InstanceSpec {
  /// figure1, d_copies, composite, stochastic, random_graph, file.
  std::string builder = "figure1";
  std::size_t n = 4;
  std::size_t d = 1;
  std::size_t vertices = 20;
  std::size_t max_degree = 8;
  std::size_t class_size = 32;
  std::uint64_t instance_seed = 0;
  std::string path;
};

struct LearnerSpec {
  /// uniform_mix, expert_mix, naive, combined, ftrl, exp3, explore_positive.
  std::string name = "uniform_mix";
  std::optional<double> explore_probability;
  std::optional<double> eta;
  std::optional<double> nu;
  std::optional<double> epsilon;
  std::optional<double> rho;
  std::optional<double> rate;
};

struct ExperimentConfig {
  InstanceSpec instance;
  LearnerSpec learner;
  AdversarySpec adversary;
  std::size_t horizon = 1024;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::string out;
  bool emit_rounds = false;
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 0;

  void validate() const;
};

Instance build_instance(const InstanceSpec& spec, std::size_t horizon);

std::unique_ptr<Learner> make_learner(const LearnerSpec& spec, const Instance& inst, std::size_t horizon);

/// God-view transcript of one round.
struct RoundRecord {
  std::size_t round = 0;
  Agent agent{};
  std::size_t support_size = 0;
  std::int64_t sampled_member = Atom::kNotMember;
  bool sampled_all_positive = false;
  VertexId landed = 0;
  bool moved = false;
  Label prediction = Label::Negative;
  int loss = 0;
};

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> hidden_index;
  std::optional<std::size_t> target;
  std::int64_t mistakes = 0;
  std::vector<std::int64_t> per_hypothesis_loss;
  std::int64_t best_loss = 0;
  std::int64_t regret = 0;
  /// Regret recomputed from shifted losses y 1{h in R}.
  std::int64_t shifted_regret = 0;
  InvariantLog invariants;
  std::vector<RoundRecord> rounds;
};

/// Protocol loop: announce, adversary move (sees D_t), sample, best
/// response, feedback, god-view accounting and invariant hooks.
TrialResult run_protocol(const Instance& inst, Learner& learner, Adversary& adversary, std::size_t horizon,
                         Rng& learner_rng, Rng& adversary_rng, bool emit_rounds = false);

/// One trial with seed `seed`: streams are derived per role from it.
TrialResult run_trial(const ExperimentConfig& config, const Instance& inst, std::size_t trial, std::uint64_t seed);

struct SummaryStats {
  double mean = 0.0;
  double se = 0.0;
  double min = 0.0;
  double max = 0.0;
};

SummaryStats summarize(const std::vector<double>& values);

struct TrialSet {
  std::vector<TrialResult> trials;
  SummaryStats mistakes;
  SummaryStats regret;
  InvariantLog invariants;
};

/// Trials use seeds seed + i and run concurrently; results are in trial order.
TrialSet run_trials(const ExperimentConfig& config);
TrialSet run_trials(const ExperimentConfig& config, const Instance& inst);

/// Guarantee formula matching the configured learner at this point.
double bound_value(const ExperimentConfig& config, const Instance& inst);

struct SweepRow {
  double value = 0.0;
  SummaryStats mistakes;
  SummaryStats regret;
  double bound = 0.0;
  std::int64_t violations = 0;
};

/// axis is T, n or d; values must be strictly ascending.
std::vector<SweepRow> sweep(const ExperimentConfig& config, const std::string& axis, const std::vector<double>& values);

void write_sweep_csv(std::ostream& os, const std::string& axis, const std::vector<SweepRow>& rows);

/// Replays every round whose classifier is h+ or a class member through the
/// graph and checks z, the prediction and the loss bit-exactly.
bool replay_transcript(const Instance& inst, const std::vector<RoundRecord>& rounds);

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::size_t trials = 4;
  /// Replaces nu = 1/16 by nu = 1 in the stability probe.
  bool inject_stability_fault = false;
};

InvariantLog verify_invariants(const VerifyOptions& options);

/// One line per check: name, checks, violations, PASS/FAIL.
void write_report(std::ostream& os, const InvariantLog& log);

}  // namespace stratsim
