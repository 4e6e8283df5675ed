#include "quantq/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>

#include "quantq/bounds.hpp"
#include "quantq/eval.hpp"
#include "quantq/finite_model.hpp"
#include "quantq/plot.hpp"
#include "quantq/qlearn.hpp"
#include "quantq/solver.hpp"
#include "quantq/stats.hpp"

namespace quantq {

namespace fs = std::filesystem;

namespace {

// Stream tags so that the empirical weighting trajectory and the learning
// runs never share random numbers with each other.
constexpr std::uint64_t kTrajectoryStream = 0x7472616a;
constexpr std::uint64_t kLearningStream = 0x6c6561726e;

std::ofstream open_output(const Config& cfg, const std::string& name) {
  fs::create_directories(cfg.output.dir);
  const fs::path path = fs::path(cfg.output.dir) / name;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

double native(const Environment& env, double cost) {
  return env.objective() == Objective::kMaximizeReward ? -cost : cost;
}

std::uint64_t run_seed(const Config& cfg, std::uint64_t seed, const Resolution& r) {
  return Rng::derive(cfg.seed, {kLearningStream, seed, static_cast<std::uint64_t>(r.value)}).engine()();
}

std::mutex& log_mutex() {
  static std::mutex m;
  return m;
}

void log_line(std::ostream& log, const std::string& text) {
  std::lock_guard lock(log_mutex());
  log << text << '\n';
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) out += (out.empty() ? "" : "; ") + f;
  return out;
}

// Runs fn(i, inner_jobs) over resolutions, resolutions in parallel when there
// are several, and prints the collected report strings in order.
void for_each_resolution(const Config& cfg, const std::vector<Resolution>& res, std::ostream& report,
                         const std::function<std::string(std::size_t, std::size_t)>& fn) {
  const std::size_t outer = res.size() > 1 ? std::min(cfg.jobs, res.size()) : 1;
  const std::size_t inner = outer > 1 ? 1 : cfg.jobs;
  std::vector<std::string> lines(res.size());
  parallel_for(res.size(), outer, [&](std::size_t i) {
    try {
      lines[i] = fn(i, inner);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw std::runtime_error(res[i].label + ": " + e.what());
    }
  });
  for (const auto& l : lines) report << l;
}

std::vector<Point> exploration_trajectory(const Config& cfg, const Environment& env, const StateQuantizer& q,
                                          const ActionNet& net, std::size_t index) {
  Rng rng = Rng::derive(cfg.seed, {kTrajectoryStream, index});
  std::vector<Point> traj;
  traj.reserve(cfg.weighting.trajectory_steps);
  Point x = env.sample_reset_state(rng);
  for (std::uint64_t t = 0; t < cfg.weighting.trajectory_steps; ++t) {
    traj.push_back(x);
    if (cfg.learning.episode_length > 0 && (t + 1) % cfg.learning.episode_length == 0) {
      x = env.sample_reset_state(rng);
    } else {
      x = env.sample_next(x, net[rng.index(net.size())], rng);
    }
    if (!q.try_quantize(x)) throw DomainError("exploration trajectory left the quantized region");
  }
  return traj;
}

FiniteModel model_for(const Config& cfg, const Environment& env, const Resolution& r, const ActionNet& net,
                      std::size_t index, std::size_t jobs) {
  if (cfg.model.path) {
    std::ifstream in(*cfg.model.path);
    if (!in) throw ConfigError("model.path", "cannot open '" + *cfg.model.path + "'");
    FiniteModel fm = read_finite_model(in);
    if (fm.num_states() != r.quantizer->size() || fm.num_actions() != net.size())
      throw ConfigError("model.path", "saved model is " + std::to_string(fm.num_states()) + "x" +
                                          std::to_string(fm.num_actions()) + " but the config implies " +
                                          std::to_string(r.quantizer->size()) + "x" + std::to_string(net.size()));
    return fm;
  }
  const WeightingMeasure weighting =
      cfg.weighting.kind == WeightingMeasure::Kind::kEmpirical
          ? WeightingMeasure::empirical(r.quantizer, exploration_trajectory(cfg, env, *r.quantizer, net, index))
          : WeightingMeasure::uniform(r.quantizer);
  ModelSampling sampling;
  sampling.outer_samples = cfg.model.outer_samples;
  sampling.inner_samples = cfg.model.inner_samples;
  sampling.seed = cfg.seed;
  sampling.jobs = jobs;
  return construct_finite_model(env, *r.quantizer, net, weighting, sampling);
}

LearningRun learning_run(const Config& cfg, const Resolution& r, std::size_t k, std::uint64_t seed) {
  LearningRun run;
  run.seed = run_seed(cfg, seed, r);
  run.beta = cfg.beta;
  run.total_steps = cfg.learning.total_steps.value_or(cfg.learning.steps_per_state_action * r.quantizer->size() * k);
  run.episode_length = cfg.learning.episode_length;
  run.step_size = cfg.learning.step_size;
  run.checkpoints = cfg.learning.checkpoints;
  // Episodes restart uniformly over the quantized core, so every interior cell
  // is reachable even when the environment's own reset region is smaller.
  run.reset = [core = r.quantizer->core()](Rng& rng) {
    Point x = Point::zeros(core.dim());
    for (std::size_t d = 0; d < core.dim(); ++d) x[d] = rng.uniform(core.lower[d], core.upper[d]);
    return x;
  };
  return run;
}

std::size_t eval_horizon(const Config& cfg, const Environment& env) {
  if (cfg.eval.horizon > 0) return cfg.eval.horizon;
  if (!env.regularity())
    throw ConfigError("eval.horizon", "required for environments without a declared cost bound");
  return default_horizon(cfg.beta, env.regularity()->c_sup, cfg.eval.truncation_eps);
}

RolloutSpec rollout_spec(const Config& cfg, const Environment& env, double x0, std::size_t jobs) {
  RolloutSpec spec;
  spec.x0 = Point(x0);
  spec.horizon = eval_horizon(cfg, env);
  spec.n_rollouts = cfg.eval.n_rollouts;
  spec.beta = cfg.beta;
  spec.seed = cfg.seed;
  spec.jobs = jobs;
  return spec;
}

void require_x0(const Config& cfg) {
  if (cfg.eval.x0.empty()) throw ConfigError("eval.x0", "at least one initial state is required");
}

}  // namespace

std::vector<Resolution> build_resolutions(const Config& cfg, const Environment& env) {
  const auto& ss = env.state_space();
  if (ss.dim != 1) throw ConfigError("environment", "the config front end handles 1-D state spaces only");
  std::vector<Resolution> out;
  if (cfg.quantizer.kind == QuantizerConfig::Kind::kUniform) {
    if (ss.kind != StateSpaceDesc::Kind::kCompactBox)
      throw ConfigError("quantizer.kind", "a non-compact state space needs kind 'overflow'");
    const Box core = ss.core();
    const double lo = cfg.quantizer.lower.value_or(core.lower[0]);
    const double hi = cfg.quantizer.upper.value_or(core.upper[0]);
    if (lo > core.lower[0] || hi < core.upper[0])
      throw ConfigError("quantizer", "grid [lower, upper] must cover the state space");
    for (std::size_t m : cfg.quantizer.cells)
      out.push_back({"M" + std::to_string(m), static_cast<double>(m),
                     std::make_shared<const StateQuantizer>(build_uniform_quantizer(lo, hi, m))});
  } else {
    for (const auto& level : cfg.quantizer.levels) {
      try {
        out.push_back({"n" + std::to_string(level.label), static_cast<double>(level.label),
                       std::make_shared<const StateQuantizer>(build_overflow_quantizer(level.radius, level.bin_length))});
      } catch (const std::invalid_argument& e) {
        throw ConfigError("quantizer", "level n=" + std::to_string(level.label) + ": " + e.what());
      }
    }
  }
  return out;
}

std::shared_ptr<const ActionNet> build_actions(const Config& cfg, const Environment& env) {
  const Box& box = env.action_space().box;
  if (cfg.action_net.points) return std::make_shared<const ActionNet>(build_action_net_count(box, *cfg.action_net.points));
  return std::make_shared<const ActionNet>(build_action_net(box, *cfg.action_net.bin_length));
}

void cmd_solve(const Config& cfg, std::ostream& report, std::ostream& log) {
  const EnvironmentPtr env = build_environment(cfg.environment);
  const auto res = build_resolutions(cfg, *env);
  const auto net = build_actions(cfg, *env);
  for_each_resolution(cfg, res, report, [&](std::size_t i, std::size_t jobs) {
    const auto& r = res[i];
    const auto t0 = std::chrono::steady_clock::now();
    const FiniteModel fm = model_for(cfg, *env, r, *net, i, jobs);
    const auto check = validate_model(fm);
    const SolveResult sol = value_iteration(fm, cfg.beta, cfg.solver.tol, cfg.solver.max_iters);
    const auto policy = greedy_policy(sol.q, r.quantizer, net);

    if (!cfg.model.path) {
      auto os = open_output(cfg, "model_" + r.label + ".txt");
      write_finite_model(os, fm);
    }
    {
      auto os = open_output(cfg, "quantizer_" + r.label + ".csv");
      write_quantizer_csv(os, *r.quantizer);
    }
    {
      auto os = open_output(cfg, "value_" + r.label + ".csv");
      write_value_csv(os, sol.value, *r.quantizer, policy.actions());
    }
    {
      auto os = open_output(cfg, "q_" + r.label + ".csv");
      write_q_csv(os, sol.q, *r.quantizer);
    }
    {
      auto os = open_output(cfg, "policy_" + r.label + ".csv");
      write_policy_csv(os, policy);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log_line(log, r.label + ": solved in " + std::to_string(secs) + " s");

    std::ostringstream line;
    line << r.label << ": states=" << fm.num_states() << " actions=" << fm.num_actions()
         << " iterations=" << sol.value.iterations << " residual=" << sol.value.residual
         << " model_flags=" << check.flags.size() << '\n';
    return line.str();
  });
}

void cmd_learn(const Config& cfg, std::ostream& report, std::ostream& log) {
  const EnvironmentPtr env = build_environment(cfg.environment);
  const auto res = build_resolutions(cfg, *env);
  const auto net = build_actions(cfg, *env);
  const auto exploration = ExplorationPolicy::uniform(net->size());
  for_each_resolution(cfg, res, report, [&](std::size_t i, std::size_t jobs) {
    const auto& r = res[i];
    const auto& seeds = cfg.learning.seeds;
    std::vector<std::string> lines(seeds.size());
    parallel_for(seeds.size(), jobs, [&](std::size_t s) {
      const std::string stem = r.label + "_seed" + std::to_string(seeds[s]);
      const auto t0 = std::chrono::steady_clock::now();
      LearningRun run = learning_run(cfg, r, net->size(), seeds[s]);
      std::ofstream updates;
      if (cfg.learning.log_updates) {
        updates = open_output(cfg, "updates_" + stem + ".csv");
        run.log = csv_update_log(updates);
      }
      const LearningResult lr = quantized_q_learning(*env, *r.quantizer, *net, exploration, run,
                                                     QTable(r.quantizer->size(), net->size(), cfg.learning.q0));
      const VisitReport visits = visit_report(lr.table, cfg.learning.visit_floor);
      {
        auto os = open_output(cfg, "qtable_" + stem + ".txt");
        write_qtable(os, lr.table);
      }
      {
        auto os = open_output(cfg, "visits_" + stem + ".csv");
        write_visit_csv(os, visits, net->size());
      }
      if (!lr.checkpoints.empty()) {
        auto os = open_output(cfg, "checkpoints_" + stem + ".csv");
        os.precision(17);
        os << "step,bin,action,q\n";
        for (const auto& c : lr.checkpoints)
          for (std::size_t idx = 0; idx < c.q.size(); ++idx)
            os << c.step << ',' << idx / net->size() << ',' << idx % net->size() << ',' << c.q[idx] << '\n';
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      log_line(log, stem + ": " + std::to_string(lr.table.steps) + " steps in " + std::to_string(secs) + " s");
      std::ostringstream line;
      line << stem << ": steps=" << lr.table.steps << " episodes=" << lr.episodes << " min_visits=" << visits.min_count
           << '\n';
      for (const auto& w : visits.warnings) line << "  warning: " << w << '\n';
      lines[s] = line.str();
    });
    std::string all;
    for (const auto& l : lines) all += l;
    return all;
  });
}

void cmd_eval(const Config& cfg, std::ostream& report, std::ostream& log) {
  const EnvironmentPtr env = build_environment(cfg.environment);
  const auto res = build_resolutions(cfg, *env);
  const auto net = build_actions(cfg, *env);
  require_x0(cfg);
  if (cfg.eval.qtable && res.size() != 1) throw ConfigError("eval.qtable", "a saved Q table fixes the resolution; list exactly one");
  for_each_resolution(cfg, res, report, [&](std::size_t i, std::size_t jobs) {
    const auto& r = res[i];
    std::vector<std::size_t> actions;
    if (cfg.eval.qtable) {
      std::ifstream in(*cfg.eval.qtable);
      if (!in) throw ConfigError("eval.qtable", "cannot open '" + *cfg.eval.qtable + "'");
      const QTable qt = read_qtable(in);
      if (qt.num_states != r.quantizer->size() || qt.num_actions != net->size())
        throw ConfigError("eval.qtable", "table shape does not match the quantizer and action net");
      actions = greedy_actions(qt.as_q_function(cfg.beta));
    } else {
      const FiniteModel fm = model_for(cfg, *env, r, *net, i, jobs);
      actions = greedy_actions(value_iteration(fm, cfg.beta, cfg.solver.tol, cfg.solver.max_iters).q);
    }
    const PiecewisePolicy policy(std::move(actions), r.quantizer, net);
    std::vector<EvalResult> rows;
    std::ostringstream line;
    line.precision(10);
    for (double x0 : cfg.eval.x0) {
      rows.push_back(rollout_value(*env, policy, rollout_spec(cfg, *env, x0, jobs)));
      line << r.label << ": x0=" << x0 << " cost=" << rows.back().mean << " se=" << rows.back().standard_error
           << " truncation=" << rows.back().truncation << '\n';
    }
    auto os = open_output(cfg, "eval_" + r.label + ".csv");
    write_eval_csv(os, rows);
    log_line(log, r.label + ": evaluated " + std::to_string(rows.size()) + " initial state(s)");
    return line.str();
  });
}

void cmd_bound(const Config& cfg, std::ostream& report, std::ostream& log) {
  const EnvironmentPtr env = build_environment(cfg.environment);
  const auto res = build_resolutions(cfg, *env);
  const auto net = build_actions(cfg, *env);
  const auto& bc = cfg.bound;
  const auto& decl = env->regularity();
  const bool compact = env->state_space().kind == StateSpaceDesc::Kind::kCompactBox;

  std::optional<LipschitzEstimate> probe;
  std::vector<std::string> estimated;
  auto estimate = [&]() -> const LipschitzEstimate& {
    if (!probe) {
      log << "estimating regularity constants from " << bc.probe_pairs << " probe pairs\n";
      probe = estimate_lipschitz_constants(*env, bc.probe_pairs, bc.probe_samples, cfg.seed);
    }
    return *probe;
  };
  auto alpha_c = [&]() -> double {
    if (bc.alpha_c) return *bc.alpha_c;
    if (decl && decl->alpha_c) return *decl->alpha_c;
    estimated.push_back("alpha_c estimated from probes (lower estimate)");
    return estimate().alpha_c;
  };
  auto alpha_t = [&](RegularityClass cls) -> double {
    if (bc.alpha_t) return *bc.alpha_t;
    if (decl && decl->alpha_t && decl->kind == cls) return *decl->alpha_t;
    if (cls == RegularityClass::kWasserstein) {
      estimated.push_back("alpha_T (W1) estimated from probes (lower estimate)");
      return estimate().alpha_t_w1;
    }
    estimated.push_back("alpha_T (TV) estimated from histograms (biased, approximate)");
    return estimate().alpha_t_tv;
  };
  auto c_sup = [&]() -> double {
    if (bc.c_sup) return *bc.c_sup;
    if (decl) return decl->c_sup;
    throw ConfigError("bound.c_sup", "required: the environment declares no cost bound");
  };

  std::ostringstream text;
  auto csv = open_output(cfg, "bounds.csv");
  csv.precision(17);
  csv << "resolution,tag,value,inputs,flags\n";
  text.precision(10);
  auto emit = [&](const Resolution& r, BoundResult b) {
    for (const auto& e : estimated) b.flags.push_back(e);
    text << "[" << r.label << "] " << b.tag << '\n' << "  value = " << b.value << '\n';
    std::string inputs;
    for (const auto& [k, v] : b.inputs) {
      text << "  " << k << " = " << v << '\n';
      std::ostringstream kv;
      kv.precision(17);
      kv << k << '=' << v;
      inputs += (inputs.empty() ? "" : ";") + kv.str();
    }
    for (const auto& f : b.flags) text << "  flag: " << f << '\n';
    csv << r.label << ',' << b.tag << ',' << b.value << ',' << inputs << ",\"" << join_flags(b.flags) << "\"\n";
  };

  for (std::size_t i = 0; i < res.size(); ++i) {
    const auto& r = res[i];
    const LossReport losses = r.quantizer->losses();
    for (const auto& kind : bc.kinds) {
      estimated.clear();
      BoundInputs in;
      in.beta = cfg.beta;
      in.l_bar = losses.l_bar;
      in.l_minus = losses.l_minus;
      in.compact_state_space = compact;
      in.alpha_c = alpha_c();
      if (kind == "w1-value" || kind == "w1-policy") {
        in.alpha_t = alpha_t(RegularityClass::kWasserstein);
        emit(r, kind == "w1-value" ? wasserstein_value_bound(in) : wasserstein_policy_bound(in));
      } else if (kind == "tv-value" || kind == "tv-policy") {
        in.alpha_t = alpha_t(RegularityClass::kTotalVariation);
        in.c_sup = c_sup();
        in.loss_tail_majorant = bc.tail_majorant;
        if (!bc.loss_values.empty()) {
          in.expected_loss_series = bc.loss_values;
          in.series_certified = true;
        } else {
          const auto weighting = WeightingMeasure::uniform(r.quantizer);
          in.expected_loss_series =
              estimate_expected_loss_series(*env, weighting, uniform_random_policy(*net), bc.loss_series.horizon,
                                            bc.loss_series.n_rollouts, cfg.seed, {}, 32, cfg.jobs)
                  .mean;
        }
        emit(r, kind == "tv-value" ? tv_value_bound(in) : tv_policy_bound(in));
      } else {  // rate
        in.alpha_t = alpha_t(RegularityClass::kWasserstein);
        in.c_sup = c_sup();
        in.m = r.quantizer->interior_size();
        in.d = 1;
        const Box core = r.quantizer->core();
        in.alpha_cover = bc.alpha_cover.value_or(uniform_grid_alpha_cover(core.lower[0], core.upper[0]));
        auto [tv, w1] = dimensional_bounds(in);
        emit(r, std::move(tv));
        emit(r, std::move(w1));
      }
    }
  }
  report << text.str();
}

void write_experiment_csv(std::ostream& os, const std::vector<ExperimentRow>& rows, bool timing) {
  const auto old = os.precision(17);
  const std::size_t runs = rows.empty() ? 0 : rows.front().learned.size();
  os << "label,resolution,num_states,num_actions,x0,vi_value";
  for (std::size_t s = 0; s < runs; ++s) os << ",learned_" << s + 1;
  os << ",learned_mean,learned_se,gap,vi_policy_return,vi_policy_se,learned_policy_return,learned_policy_se";
  if (timing) os << ",wall_time_s";
  os << '\n';
  for (const auto& r : rows) {
    os << r.label << ',' << r.resolution << ',' << r.num_states << ',' << r.num_actions << ',' << r.x0 << ','
       << r.vi_value;
    for (double v : r.learned) os << ',' << v;
    os << ',' << r.learned_mean << ',' << r.learned_se << ',' << r.gap << ',' << r.vi_policy_return << ','
       << r.vi_policy_se << ',' << r.learned_policy_return << ',' << r.learned_policy_se;
    if (timing) os << ',' << r.wall_time_s;
    os << '\n';
  }
  os.precision(old);
}

ExperimentSummary cmd_experiment(const std::string& name, const Config& cfg, std::ostream& report, std::ostream& log) {
  const EnvironmentPtr env = build_environment(cfg.environment);
  const auto res = build_resolutions(cfg, *env);
  const auto net = build_actions(cfg, *env);
  require_x0(cfg);
  const auto exploration = ExplorationPolicy::uniform(net->size());
  const std::size_t nx = cfg.eval.x0.size();
  std::vector<ExperimentRow> rows(res.size() * nx);

  for_each_resolution(cfg, res, report, [&](std::size_t i, std::size_t jobs) {
    const auto& r = res[i];
    const auto t0 = std::chrono::steady_clock::now();
    const FiniteModel fm = model_for(cfg, *env, r, *net, i, jobs);
    const SolveResult sol = value_iteration(fm, cfg.beta, cfg.solver.tol, cfg.solver.max_iters);
    const auto vi_policy = greedy_policy(sol.q, r.quantizer, net);

    const auto& seeds = cfg.learning.seeds;
    std::vector<QTable> tables(seeds.size());
    parallel_for(seeds.size(), jobs, [&](std::size_t s) {
      tables[s] = quantized_q_learning(*env, *r.quantizer, *net, exploration, learning_run(cfg, r, net->size(), seeds[s]),
                                       QTable(r.quantizer->size(), net->size(), cfg.learning.q0))
                      .table;
    });

    for (std::size_t k = 0; k < nx; ++k) {
      const double x0 = cfg.eval.x0[k];
      const std::size_t y0 = r.quantizer->quantize(Point(x0));
      const RolloutSpec spec = rollout_spec(cfg, *env, x0, jobs);
      ExperimentRow& row = rows[i * nx + k];
      row.label = r.label;
      row.resolution = r.value;
      row.num_states = r.quantizer->size();
      row.num_actions = net->size();
      row.x0 = x0;
      row.vi_value = native(*env, sol.value.values[y0]);
      std::vector<double> policy_returns;
      for (const auto& t : tables) {
        row.learned.push_back(native(*env, t.row_min(y0)));
        const auto learned_policy = greedy_policy(t.as_q_function(cfg.beta), r.quantizer, net);
        policy_returns.push_back(native(*env, rollout_value(*env, learned_policy, spec).mean));
      }
      const auto learned = summarize(row.learned);
      row.learned_mean = learned.mean;
      row.learned_se = learned.standard_error;
      row.gap = std::abs(row.learned_mean - row.vi_value);
      const EvalResult vi_eval = rollout_value(*env, vi_policy, spec);
      row.vi_policy_return = native(*env, vi_eval.mean);
      row.vi_policy_se = vi_eval.standard_error;
      const auto pr = summarize(policy_returns);
      row.learned_policy_return = pr.mean;
      row.learned_policy_se = pr.standard_error;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (std::size_t k = 0; k < nx; ++k) rows[i * nx + k].wall_time_s = secs;
    log_line(log, name + " " + r.label + ": done in " + std::to_string(secs) + " s");
    std::ostringstream line;
    line.precision(8);
    for (std::size_t k = 0; k < nx; ++k) {
      const auto& row = rows[i * nx + k];
      line << r.label << " x0=" << row.x0 << " vi=" << row.vi_value << " learned=" << row.learned_mean << " +- "
           << row.learned_se << " gap=" << row.gap << '\n';
    }
    return line.str();
  });

  ExperimentSummary summary;
  summary.rows = rows;
  std::vector<double> axis, gaps;
  for (std::size_t i = 0; i < res.size(); ++i) {
    axis.push_back(rows[i * nx].resolution);
    gaps.push_back(rows[i * nx].gap);
  }
  if (res.size() >= 3) {
    const auto rc = spearman(axis, gaps);
    summary.spearman_rho = rc.rho;
    summary.spearman_p = rc.p_value;
  }

  {
    auto os = open_output(cfg, name + ".csv");
    write_experiment_csv(os, rows, cfg.output.timing);
  }
  {
    auto os = open_output(cfg, name + "_summary.csv");
    os.precision(17);
    const auto& last = rows[(res.size() - 1) * nx];
    os << "x0,points,spearman_rho,spearman_p,final_label,final_gap,final_se\n";
    os << last.x0 << ',' << res.size() << ',' << summary.spearman_rho << ',' << summary.spearman_p << ','
       << last.label << ',' << last.gap << ',' << last.learned_se << '\n';
  }
  if (cfg.output.plot) {
    std::vector<PlotSeries> series;
    PlotSeries vi{"value iteration", {}, true};
    for (std::size_t i = 0; i < res.size(); ++i) vi.y.push_back(rows[i * nx].vi_value);
    series.push_back(std::move(vi));
    for (std::size_t s = 0; s < cfg.learning.seeds.size(); ++s) {
      PlotSeries ls{"learned, run " + std::to_string(s + 1), {}, false};
      for (std::size_t i = 0; i < res.size(); ++i) ls.y.push_back(rows[i * nx].learned[s]);
      series.push_back(std::move(ls));
    }
    const bool reward = env->objective() == Objective::kMaximizeReward;
    const bool overflow = cfg.quantizer.kind == QuantizerConfig::Kind::kOverflow;
    std::ostringstream title;
    title << name << ": " << (reward ? "rewards" : "costs") << " at x0 = " << cfg.eval.x0.front();
    auto os = open_output(cfg, name + ".svg");
    write_line_plot_svg(os, {title.str(), overflow ? "schedule index n" : "number of grid points M",
                             reward ? "discounted reward" : "discounted cost"},
                        axis, series);
  }
  report << "spearman(resolution, gap) rho=" << summary.spearman_rho << " p=" << summary.spearman_p << '\n';
  return summary;
}

}  // namespace quantq
