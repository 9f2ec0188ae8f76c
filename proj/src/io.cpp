#include "stratsim/io.hpp"

#include <fstream>
#include <set>

#include "stratsim/harness.hpp"

namespace stratsim {

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get_as(const Json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
void read_optional(const Json& j, const std::string& key, const std::string& where, T& out) {
  if (j.contains(key)) out = get_as<T>(j, key, where);
}

template <typename T>
void read_optional(const Json& j, const std::string& key, const std::string& where, std::optional<T>& out) {
  if (j.contains(key)) out = get_as<T>(j, key, where);
}

std::size_t get_count(const Json& j, const std::string& key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError(where + "." + key + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

void check_schema(const Json& j, const std::string& where) {
  if (j.contains("schema_version") && j.at("schema_version") != kSchemaVersion) {
    throw ConfigError(where + ": unsupported schema_version " + j.at("schema_version").dump());
  }
}

}  // namespace

Json graph_to_json(const ManipulationGraph& g) {
  Json edges = Json::array();
  for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
  return Json{{"vertex_count", g.vertex_count()}, {"edges", std::move(edges)}};
}

ManipulationGraph graph_from_json(const Json& j) {
  check_keys(j, {"vertex_count", "edges"}, "graph");
  const auto vc = get_count(j, "vertex_count", "graph");
  std::vector<ManipulationGraph::Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw ConfigError("graph edges must be pairs");
    edges.emplace_back(e[0].get<VertexId>(), e[1].get<VertexId>());
  }
  try {
    return ManipulationGraph::from_edges(vc, edges);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("graph: ") + e.what());
  }
}

Json class_to_json(const HypothesisClass& c) {
  Json rows = Json::array();
  for (const auto& h : c.members()) {
    Json row = Json::array();
    for (Eigen::Index v = 0; v < h.labels().size(); ++v) row.push_back(static_cast<int>(h.labels()[v]));
    rows.push_back(std::move(row));
  }
  return rows;
}

HypothesisClass class_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("class must be a non-empty matrix of +-1 labels");
  const std::size_t vc = j.front().size();
  std::vector<Hypothesis> members;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != vc) throw ConfigError("class rows must have equal length");
    LabelVector labels(static_cast<Eigen::Index>(vc));
    for (std::size_t v = 0; v < vc; ++v) {
      const int y = row[v].get<int>();
      if (y != 1 && y != -1) throw ConfigError("class labels must be +1 or -1");
      labels[static_cast<Eigen::Index>(v)] = static_cast<std::int8_t>(y);
    }
    members.emplace_back(std::move(labels));
  }
  try {
    return HypothesisClass(vc, std::move(members));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("class: ") + e.what());
  }
}

Json instance_to_json(const Instance& inst) {
  Json j{{"schema_version", kSchemaVersion},
         {"builder", inst.builder},
         {"graph", graph_to_json(*inst.graph)},
         {"class", class_to_json(*inst.cls)}};
  if (!inst.figure1.empty()) {
    Json comps = Json::array();
    for (const auto& f : inst.figure1) comps.push_back({{"n", f.n}, {"offset", f.offset}});
    j["figure1"] = std::move(comps);
  }
  if (!inst.isolated.empty()) j["isolated"] = inst.isolated;
  if (inst.arm) j["arm"] = *inst.arm == CompositeArm::Realizable ? "realizable" : "stochastic";
  return j;
}

Instance instance_from_json(const Json& j) {
  check_keys(j, {"schema_version", "builder", "graph", "class", "figure1", "isolated", "arm"}, "instance");
  check_schema(j, "instance");
  Instance inst;
  inst.builder = j.value("builder", std::string("file"));
  inst.graph = std::make_shared<const ManipulationGraph>(graph_from_json(j.at("graph")));
  inst.cls = std::make_shared<const HypothesisClass>(class_from_json(j.at("class")));
  if (inst.cls->vertex_count() != inst.graph->vertex_count()) {
    throw ConfigError("instance: class labels a different number of vertices than the graph has");
  }
  if (j.contains("figure1")) {
    for (const auto& c : j.at("figure1")) {
      Figure1Layout f{c.at("n").get<std::size_t>(), c.at("offset").get<VertexId>()};
      if (f.n < 2 || f.sink() >= inst.graph->vertex_count()) throw ConfigError("instance: bad figure1 component");
      inst.figure1.push_back(f);
    }
  }
  if (j.contains("isolated")) {
    for (const auto& v : j.at("isolated")) {
      const auto x = v.get<VertexId>();
      if (x >= inst.graph->vertex_count() || inst.graph->degree(x) != 0) {
        throw ConfigError("instance: isolated list contains a non-isolated vertex");
      }
      inst.isolated.push_back(x);
    }
  }
  if (j.contains("arm")) {
    const auto arm = j.at("arm").get<std::string>();
    if (arm != "realizable" && arm != "stochastic") throw ConfigError("instance: arm must be realizable or stochastic");
    inst.arm = arm == "realizable" ? CompositeArm::Realizable : CompositeArm::Stochastic;
  }
  return inst;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

Instance load_instance(const std::string& path) {
  try {
    return instance_from_json(load_json(path));
  } catch (const ConfigError& e) {
    throw ConfigError("'" + path + "': " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

ExperimentConfig config_from_json(const Json& j) {
  check_keys(j, {"schema_version", "instance", "learner", "adversary", "T", "trials", "seed", "out", "emit_rounds",
                 "threads"},
             "config");
  check_schema(j, "config");
  ExperimentConfig c;
  try {
    if (j.contains("instance")) {
      const auto& i = j.at("instance");
      check_keys(i, {"builder", "n", "d", "vertices", "max_degree", "class_size", "instance_seed", "path"}, "instance");
      read_optional(i, "builder", "instance", c.instance.builder);
      if (i.contains("n")) c.instance.n = get_count(i, "n", "instance");
      if (i.contains("d")) c.instance.d = get_count(i, "d", "instance");
      if (i.contains("vertices")) c.instance.vertices = get_count(i, "vertices", "instance");
      if (i.contains("max_degree")) c.instance.max_degree = get_count(i, "max_degree", "instance");
      if (i.contains("class_size")) c.instance.class_size = get_count(i, "class_size", "instance");
      read_optional(i, "instance_seed", "instance", c.instance.instance_seed);
      read_optional(i, "path", "instance", c.instance.path);
    }
    if (j.contains("learner")) {
      const auto& l = j.at("learner");
      if (l.is_string()) {
        c.learner.name = l.get<std::string>();
      } else {
        check_keys(l, {"name", "explore_probability", "eta", "nu", "epsilon", "rho", "rate"}, "learner");
        read_optional(l, "name", "learner", c.learner.name);
        read_optional(l, "explore_probability", "learner", c.learner.explore_probability);
        read_optional(l, "eta", "learner", c.learner.eta);
        read_optional(l, "nu", "learner", c.learner.nu);
        read_optional(l, "epsilon", "learner", c.learner.epsilon);
        read_optional(l, "rho", "learner", c.learner.rho);
        read_optional(l, "rate", "learner", c.learner.rate);
      }
    }
    if (j.contains("adversary")) {
      const auto& a = j.at("adversary");
      if (a.is_string()) {
        c.adversary.name = a.get<std::string>();
      } else {
        check_keys(a, {"name", "gamma_scale", "sequence_seed", "target"}, "adversary");
        read_optional(a, "name", "adversary", c.adversary.name);
        read_optional(a, "gamma_scale", "adversary", c.adversary.gamma_scale);
        read_optional(a, "sequence_seed", "adversary", c.adversary.sequence_seed);
        read_optional(a, "target", "adversary", c.adversary.target);
      }
    }
    if (j.contains("T")) c.horizon = get_count(j, "T", "config");
    if (j.contains("trials")) c.trials = get_count(j, "trials", "config");
    read_optional(j, "seed", "config", c.seed);
    read_optional(j, "out", "config", c.out);
    read_optional(j, "emit_rounds", "config", c.emit_rounds);
    if (j.contains("threads")) c.threads = get_count(j, "threads", "config");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  Json learner{{"name", c.learner.name}};
  auto put = [](Json& j, const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  put(learner, "explore_probability", c.learner.explore_probability);
  put(learner, "eta", c.learner.eta);
  put(learner, "nu", c.learner.nu);
  put(learner, "epsilon", c.learner.epsilon);
  put(learner, "rho", c.learner.rho);
  put(learner, "rate", c.learner.rate);

  Json adversary{{"name", c.adversary.name}, {"gamma_scale", c.adversary.gamma_scale}};
  if (c.adversary.sequence_seed) adversary["sequence_seed"] = *c.adversary.sequence_seed;
  if (c.adversary.target) adversary["target"] = *c.adversary.target;

  Json instance{{"builder", c.instance.builder},     {"n", c.instance.n},
                {"d", c.instance.d},                 {"vertices", c.instance.vertices},
                {"max_degree", c.instance.max_degree}, {"class_size", c.instance.class_size},
                {"instance_seed", c.instance.instance_seed}};
  if (!c.instance.path.empty()) instance["path"] = c.instance.path;

  return Json{{"schema_version", kSchemaVersion},
              {"instance", std::move(instance)},
              {"learner", std::move(learner)},
              {"adversary", std::move(adversary)},
              {"T", c.horizon},
              {"trials", c.trials},
              {"seed", c.seed},
              {"emit_rounds", c.emit_rounds}};
}

Json trial_to_json(const TrialResult& r, bool with_rounds) {
  Json j{{"trial", r.trial},   {"seed", r.seed},     {"mistakes", r.mistakes},
         {"best_loss", r.best_loss}, {"regret", r.regret}, {"shifted_regret", r.shifted_regret}};
  j["hidden_index"] = r.hidden_index ? Json(*r.hidden_index) : Json(nullptr);
  j["target"] = r.target ? Json(*r.target) : Json(nullptr);
  j["per_hypothesis_loss"] = r.per_hypothesis_loss;
  Json inv = Json::object();
  for (const auto& [name, t] : r.invariants.tallies()) inv[name] = {{"checks", t.checks}, {"violations", t.violations}};
  j["invariants"] = std::move(inv);
  if (with_rounds) {
    Json rounds = Json::array();
    for (const auto& rr : r.rounds) {
      rounds.push_back({{"t", rr.round},
                        {"x", rr.agent.x},
                        {"y", to_int(rr.agent.y)},
                        {"support_size", rr.support_size},
                        {"sampled_member", rr.sampled_member},
                        {"sampled_all_positive", rr.sampled_all_positive},
                        {"z", rr.landed},
                        {"moved", rr.moved},
                        {"prediction", to_int(rr.prediction)},
                        {"loss", rr.loss}});
    }
    j["rounds"] = std::move(rounds);
  }
  return j;
}

Json trial_set_to_json(const ExperimentConfig& config, const TrialSet& set) {
  auto stats = [](const SummaryStats& s) {
    return Json{{"mean", s.mean}, {"se", s.se}, {"min", s.min}, {"max", s.max}};
  };
  Json inv = Json::object();
  for (const auto& [name, t] : set.invariants.tallies()) inv[name] = {{"checks", t.checks}, {"violations", t.violations}};
  Json trials = Json::array();
  for (const auto& r : set.trials) trials.push_back(trial_to_json(r, config.emit_rounds));
  return Json{{"schema_version", kSchemaVersion},
              {"config", config_to_json(config)},
              {"mistakes", stats(set.mistakes)},
              {"regret", stats(set.regret)},
              {"invariants", std::move(inv)},
              {"trials", std::move(trials)}};
}

}  // namespace stratsim
