#include <cmath>

#include "stratsim/harness.hpp"

namespace stratsim {

namespace {

void estimator_suite(Rng& rng, std::size_t configurations, InvariantLog& log) {
  for (std::size_t k = 0; k < configurations; ++k) {
    const auto n = static_cast<Eigen::Index>(1 + uniform_index(rng, 10));
    Eigen::VectorXd p(n);
    for (Eigen::Index i = 0; i < n; ++i) p[i] = -std::log(1.0 - uniform01(rng));
    p /= p.sum();
    Eigen::Array<bool, Eigen::Dynamic, 1> region(n);
    for (Eigen::Index i = 0; i < n; ++i) region[i] = (rng() >> 63) != 0;
    const Label y = (rng() >> 63) != 0 ? Label::Positive : Label::Negative;
    const double q = region.select(p.array(), 0.0).sum();

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
    double second = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto d_hat = shifted_loss_estimate(p, region, y, region[j]);
      mean += p[j] * d_hat;
      const double per_outcome = (p.array() * d_hat.array().square()).sum();
      second += p[j] * per_outcome;
      if (region[j]) log.record("estimator.second_moment_identity", std::abs(per_outcome - 1.0 / q) <= 1e-12 / q);
    }
    const Eigen::VectorXd truth = region.cast<double>().matrix() * to_int(y);
    log.record("estimator.unbiased", (mean - truth).cwiseAbs().maxCoeff() <= 1e-12);
    log.record("estimator.second_moment", std::abs(second - (region.any() ? 1.0 : 0.0)) <= 1e-12);
  }
}

// Cumulative vector (c, 0, ..., 0) whose solution puts `mass` on coordinate 0.
Eigen::VectorXd cumulative_for_mass(const FtrlParams<double>& params, Eigen::Index n, double mass) {
  double lo = -1e6;
  double hi = 1e6;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  for (int it = 0; it < 200; ++it) {
    d[0] = (lo + hi) / 2;
    const double p0 = ftrl_solve(d, params)[0];
    if (p0 > mass) {
      lo = d[0];
    } else {
      hi = d[0];
    }
  }
  return d;
}

void stability_probe(bool fault, InvariantLog& log) {
  const Eigen::Index n = 4;
  for (double eta : {0.1, 1.0, 10.0}) {
    const FtrlParams<double> params{eta, fault ? 1.0 : 1.0 / 16.0, 1e-4};
    for (double mass : {0.01, 0.1, 0.5}) {
      const Eigen::VectorXd d = cumulative_for_mass(params, n, mass);
      const Eigen::VectorXd p = ftrl_solve(d, params);
      for (int r = 1; r < (1 << n); ++r) {
        Eigen::Array<bool, Eigen::Dynamic, 1> region(n);
        for (Eigen::Index i = 0; i < n; ++i) region[i] = ((r >> i) & 1) != 0;
        for (Label y : {Label::Negative, Label::Positive}) {
          const Eigen::VectorXd next = ftrl_solve(d + shifted_loss_estimate(p, region, y, true), params);
          log.record("ftrl.stability_probe", multiplicative_stability(p, next, 1e-8));
        }
      }
    }
  }
}

struct Scenario {
  InstanceSpec instance;
  std::string learner;
  std::string adversary;
  std::size_t horizon;
};

}  // namespace

InvariantLog verify_invariants(const VerifyOptions& options) {
  InvariantLog log;
  Rng rng = make_stream(options.seed, 0, StreamRole::Instance);
  estimator_suite(rng, 1000, log);
  stability_probe(options.inject_stability_fault, log);

  auto figure1 = [](std::size_t n) {
    InstanceSpec s;
    s.builder = "figure1";
    s.n = n;
    return s;
  };
  auto random_graph = [&](std::size_t vertices, std::size_t degree, std::size_t members) {
    InstanceSpec s;
    s.builder = "random_graph";
    s.vertices = vertices;
    s.max_degree = degree;
    s.class_size = members;
    s.instance_seed = options.seed;
    return s;
  };
  InstanceSpec stochastic;
  stochastic.builder = "stochastic";
  stochastic.n = 8;
  InstanceSpec copies;
  copies.builder = "d_copies";
  copies.n = 3;
  copies.d = 2;

  const std::vector<Scenario> scenarios = {
      {figure1(6), "uniform_mix", "general", 256},
      {figure1(6), "uniform_mix", "proper", 256},
      {random_graph(12, 4, 16), "uniform_mix", "random_realizable", 256},
      {figure1(5), "expert_mix", "general", 256},
      {random_graph(12, 4, 16), "expert_mix", "random_realizable", 256},
      {copies, "expert_mix", "d_copies", 256},
      {copies, "uniform_mix", "d_copies", 256},
      {figure1(6), "ftrl", "general", 256},
      {stochastic, "ftrl", "stochastic", 512},
      {random_graph(12, 4, 16), "ftrl", "random_realizable", 256},
      {stochastic, "exp3", "stochastic", 256},
      {figure1(4), "exp3", "proper", 256},
      {random_graph(12, 4, 16), "explore_positive", "random_realizable", 256},
      {figure1(6), "naive", "proper", 64},
  };
  for (const auto& s : scenarios) {
    ExperimentConfig c;
    c.instance = s.instance;
    c.learner.name = s.learner;
    c.adversary.name = s.adversary;
    c.horizon = s.horizon;
    c.trials = options.trials;
    c.seed = options.seed;
    c.threads = 1;
    log.merge(run_trials(c).invariants);
  }
  return log;
}

}  // namespace stratsim
