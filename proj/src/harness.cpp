#include "stratsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "stratsim/io.hpp"

namespace stratsim {

void ExperimentConfig::validate() const {
  if (horizon < 1) throw ConfigError("T must be at least 1");
  if (trials < 1) throw ConfigError("trials must be at least 1");
}

Instance build_instance(const InstanceSpec& spec, std::size_t horizon) {
  const auto& b = spec.builder;
  if (b == "figure1") return build_figure1(spec.n);
  if (b == "d_copies") return build_d_copies(spec.n, spec.d);
  if (b == "composite") return build_agnostic_composite(spec.n, horizon);
  if (b == "stochastic") return build_stochastic(spec.n);
  if (b == "random_graph") return build_random_graph(spec.vertices, spec.max_degree, spec.class_size, spec.instance_seed);
  if (b == "file") return load_instance(spec.path);
  throw ConfigError("unknown instance builder '" + b + "'");
}

std::unique_ptr<Learner> make_learner(const LearnerSpec& spec, const Instance& inst, std::size_t horizon) {
  const auto& name = spec.name;
  if (name == "uniform_mix") return std::make_unique<UniformMix>(inst.graph, inst.cls, horizon, spec.explore_probability);
  if (name == "expert_mix") return std::make_unique<ExpertMix>(inst.graph, inst.cls, horizon, spec.explore_probability);
  if (name == "naive") return std::make_unique<NaiveDeterministic>(inst.cls);
  if (name == "combined") return make_combined_min_learner(inst.graph, inst.cls, horizon);
  if (name == "ftrl") {
    return std::make_unique<FtrlLogBarrier>(inst.graph, inst.cls, horizon, FtrlOverrides{spec.eta, spec.nu, spec.epsilon});
  }
  if (name == "exp3") return std::make_unique<Exp3>(inst.cls, horizon, spec.rate);
  if (name == "explore_positive") {
    return std::make_unique<ExplorePositiveHedge>(inst.graph, inst.cls, horizon, spec.rho, spec.rate);
  }
  throw ConfigError("unknown learner '" + name + "'");
}

// ------------------------------------------------------------------ protocol

TrialResult run_protocol(const Instance& inst, Learner& learner, Adversary& adversary, std::size_t horizon,
                         Rng& learner_rng, Rng& adversary_rng, bool emit_rounds) {
  const auto& g = *inst.graph;
  const auto& cls = *inst.cls;
  const std::size_t vertices = g.vertex_count();

  TrialResult result;
  result.hidden_index = adversary.hidden_index();
  result.target = adversary.target();
  if (emit_rounds) result.rounds.reserve(horizon);

  // Rounds per (x, y); per-hypothesis losses are folded in at the end.
  std::vector<std::int64_t> counts(2 * vertices, 0);
  std::int64_t negative_rounds = 0;
  Agent agent{};

  for (std::size_t t = 0; t < horizon; ++t) {
    const ClassifierDistribution& announced = learner.announce();
    announced.validate();

    agent = adversary.next(announced, t, adversary_rng);
    g.check_vertex(agent.x);

    const std::size_t atom = announced.sample(learner_rng);
    const Hypothesis& h = *announced[atom].classifier;
    const auto outcome = best_response(g, h, agent.x);
    const Label prediction = h(outcome.landed);
    const int loss = prediction != agent.y ? 1 : 0;

    result.invariants.record("protocol.best_response",
                             g.in_closed_neighborhood(agent.x, outcome.landed) &&
                                 outcome.moved == (outcome.landed != agent.x) &&
                                 (labels_all_negative(g, h, agent.x) || prediction == Label::Positive));

    adversary.audit(RoundView{t, announced, h, agent, outcome, loss}, result.invariants);

    if (emit_rounds) {
      result.rounds.push_back({t, agent, announced.size(), announced[atom].member, h.all_positive(), outcome.landed,
                               outcome.moved, prediction, loss});
    }

    learner.observe(atom, outcome.landed, agent.y);

    result.mistakes += loss;
    ++counts[2 * agent.x + (agent.y == Label::Positive ? 1 : 0)];
    if (agent.y == Label::Negative) ++negative_rounds;

    learner.audit(AuditContext{g, cls, agent, result.target}, result.invariants);
  }
  learner.finish(AuditContext{g, cls, agent, result.target}, result.invariants);

  // God-view per-hypothesis strategic and shifted losses.
  result.per_hypothesis_loss.assign(cls.size(), 0);
  std::vector<std::int64_t> shifted(cls.size(), 0);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    const auto x = static_cast<VertexId>(k / 2);
    const Label y = k % 2 == 1 ? Label::Positive : Label::Negative;
    for (std::size_t i = 0; i < cls.size(); ++i) {
      const bool negative = labels_all_negative(g, cls[i], x);
      result.per_hypothesis_loss[i] += counts[k] * strategic_loss(g, cls[i], x, y);
      if (negative) shifted[i] += counts[k] * to_int(y);
    }
  }
  result.best_loss = *std::min_element(result.per_hypothesis_loss.begin(), result.per_hypothesis_loss.end());
  result.regret = result.mistakes - result.best_loss;

  // Strategic loss = shifted loss + 1{y = -1}, for learner and members alike.
  const std::int64_t best_shifted = *std::min_element(shifted.begin(), shifted.end());
  result.shifted_regret = (result.mistakes - negative_rounds) - best_shifted;
  bool pairwise = true;
  for (std::size_t i = 0; i < cls.size(); ++i) {
    pairwise = pairwise && result.per_hypothesis_loss[i] - shifted[i] == negative_rounds;
  }
  result.invariants.record("protocol.shift_invariance", pairwise && result.regret == result.shifted_regret);

  if (result.target) {
    result.invariants.record("adversary.realizable", result.per_hypothesis_loss[*result.target] == 0);
  }
  return result;
}

TrialResult run_trial(const ExperimentConfig& config, const Instance& inst, std::size_t trial, std::uint64_t seed) {
  Rng learner_rng = make_stream(seed, 0, StreamRole::Learner);
  Rng adversary_rng = make_stream(seed, 0, StreamRole::Adversary);
  auto learner = make_learner(config.learner, inst, config.horizon);
  auto adversary = make_adversary(config.adversary, inst, config.horizon, adversary_rng);
  auto result = run_protocol(inst, *learner, *adversary, config.horizon, learner_rng, adversary_rng, config.emit_rounds);
  result.trial = trial;
  result.seed = seed;
  return result;
}

SummaryStats summarize(const std::vector<double>& values) {
  SummaryStats s;
  if (values.empty()) return s;
  const double k = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / k;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.se = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
  }
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  return s;
}

TrialSet run_trials(const ExperimentConfig& config) {
  config.validate();
  return run_trials(config, build_instance(config.instance, config.horizon));
}

TrialSet run_trials(const ExperimentConfig& config, const Instance& inst) {
  config.validate();
  TrialSet set;
  set.trials.resize(config.trials);

  std::size_t workers = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, config.trials);

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t i = next++; i < config.trials; i = next++) {
        set.trials[i] = run_trial(config, inst, i, config.seed + i);
      }
    } catch (...) {
      errors[w] = std::current_exception();
      next = config.trials;
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<double> mistakes;
  std::vector<double> regret;
  for (const auto& r : set.trials) {
    mistakes.push_back(static_cast<double>(r.mistakes));
    regret.push_back(static_cast<double>(r.regret));
    set.invariants.merge(r.invariants);
  }
  set.mistakes = summarize(mistakes);
  set.regret = summarize(regret);
  return set;
}

// --------------------------------------------------------------------- sweep

double bound_value(const ExperimentConfig& config, const Instance& inst) {
  const double T = static_cast<double>(config.horizon);
  const double n = static_cast<double>(inst.cls->size());
  const double inf = std::numeric_limits<double>::infinity();
  auto learner = make_learner(config.learner, inst, config.horizon);

  auto uniform_mix_bound = [&](const UniformMix& u) {
    const double p = u.explore_probability();
    return p > 0.0 ? p * T + (1.0 - p) / p * std::log(n) : inf;
  };

  if (const auto* u = dynamic_cast<const UniformMix*>(learner.get())) return uniform_mix_bound(*u);
  if (const auto* e = dynamic_cast<const ExpertMix*>(learner.get())) {
    const double p = e->explore_probability();
    const double delta = static_cast<double>(std::max<std::size_t>(e->max_degree(), 1));
    return p > 0.0 ? p * T + 2.0 * (1.0 - p) / p * e->mistake_bound() * std::log(2.0 * delta) : inf;
  }
  if (dynamic_cast<const NaiveDeterministic*>(learner.get()) != nullptr) return n - 1.0;
  if (const auto* f = dynamic_cast<const FtrlLogBarrier*>(learner.get())) {
    const auto& q = f->params();
    return n / q.nu * std::log(1.0 / q.epsilon) + std::log(n) / q.eta + q.eta * T;
  }
  if (const auto* x = dynamic_cast<const Exp3*>(learner.get())) {
    return std::log(n) / x->rate() + x->rate() * n * T;
  }
  if (const auto* h = dynamic_cast<const ExplorePositiveHedge*>(learner.get())) {
    return h->rho() * T + (std::log(n) / h->rate() + h->rate() * h->rho() * T) / h->rho();
  }
  return inf;
}

std::vector<SweepRow> sweep(const ExperimentConfig& config, const std::string& axis, const std::vector<double>& values) {
  if (axis != "T" && axis != "n" && axis != "d") throw ConfigError("sweep axis must be T, n or d");
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 1.0) || values[i] != std::floor(values[i])) {
      throw ConfigError("sweep values must be positive integers");
    }
    if (i > 0 && !(values[i] > values[i - 1])) throw ConfigError("sweep values must be ascending");
  }
  const auto& b = config.instance.builder;
  if (axis == "n" && b != "figure1" && b != "d_copies" && b != "composite" && b != "stochastic") {
    throw ConfigError("builder '" + b + "' has no n parameter");
  }
  if (axis == "d" && b != "figure1" && b != "d_copies") throw ConfigError("builder '" + b + "' has no d parameter");

  std::vector<SweepRow> rows;
  for (double v : values) {
    ExperimentConfig c = config;
    const auto k = static_cast<std::size_t>(v);
    if (axis == "T") c.horizon = k;
    if (axis == "n") c.instance.n = k;
    if (axis == "d") {
      c.instance.builder = "d_copies";
      c.instance.d = k;
    }
    const Instance inst = build_instance(c.instance, c.horizon);
    const TrialSet set = run_trials(c, inst);
    rows.push_back({v, set.mistakes, set.regret, bound_value(c, inst), set.invariants.total_violations()});
  }
  return rows;
}

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void write_sweep_csv(std::ostream& os, const std::string& axis, const std::vector<SweepRow>& rows) {
  os << axis << ",mean_mistakes,se_mistakes,mean_regret,se_regret,bound_value,schema_version\n";
  for (const auto& r : rows) {
    os << format_number(r.value) << ',' << format_number(r.mistakes.mean) << ',' << format_number(r.mistakes.se) << ','
       << format_number(r.regret.mean) << ',' << format_number(r.regret.se) << ',' << format_number(r.bound) << ','
       << kSchemaVersion << '\n';
  }
}

bool replay_transcript(const Instance& inst, const std::vector<RoundRecord>& rounds) {
  const auto& g = *inst.graph;
  const auto all_positive = Hypothesis::constant(g.vertex_count(), Label::Positive);
  for (const auto& r : rounds) {
    const Hypothesis* h = nullptr;
    if (r.sampled_all_positive) {
      h = &all_positive;
    } else if (r.sampled_member != Atom::kNotMember) {
      h = &(*inst.cls)[static_cast<std::size_t>(r.sampled_member)];
    } else {
      continue;
    }
    const auto outcome = best_response(g, *h, r.agent.x);
    if (outcome.landed != r.landed || outcome.moved != r.moved) return false;
    if ((*h)(outcome.landed) != r.prediction) return false;
    if (strategic_loss(g, *h, r.agent.x, r.agent.y) != r.loss) return false;
  }
  return true;
}

void write_report(std::ostream& os, const InvariantLog& log) {
  for (const auto& [name, t] : log.tallies()) {
    os << (t.violations == 0 ? "PASS " : "FAIL ") << name << " checks=" << t.checks << " violations=" << t.violations
       << '\n';
  }
}

}  // namespace stratsim
