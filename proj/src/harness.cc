#include "ilqgame/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "ilqgame/errors.h"
#include "json.hpp"

namespace ilqgame {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 6.283185307179586;

double uniform(std::mt19937_64& engine, double lo, double hi) {
  // 53 random mantissa bits; avoids the implementation-defined
  // std::uniform_real_distribution so draws match across standard libraries.
  const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Point2 position(const VectorXd& x, const MultiPlayerSystem& system,
                PlayerIndex i) {
  const Index o = system.state_offset(i);
  return Point2(x(o + PlayerModel::kPx), x(o + PlayerModel::kPy));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<VectorXd> sample_sinusoidal_strategy(
    std::uint64_t seed, PlayerIndex player, Index control_dim,
    const TimeDiscretization& discretization, const SinusoidRanges& ranges) {
  if (control_dim < 0) throw InvalidArgument("negative control dimension");
  std::mt19937_64 engine(derive_seed(seed, player));
  VectorXd a(control_dim), f(control_dim), phase(control_dim);
  for (Index c = 0; c < control_dim; ++c) {
    a(c) = uniform(engine, ranges.amplitude_min, ranges.amplitude_max);
    f(c) = uniform(engine, ranges.frequency_min, ranges.frequency_max);
    phase(c) = uniform(engine, ranges.phase_min, ranges.phase_max);
  }
  std::vector<VectorXd> u;
  for (std::size_t k = 0; k < discretization.num_steps(); ++k) {
    const Time t = discretization.time_at(k);
    VectorXd uk(control_dim);
    for (Index c = 0; c < control_dim; ++c)
      uk(c) = a(c) * std::sin(kTwoPi * f(c) * t + phase(c));
    u.push_back(std::move(uk));
  }
  return u;
}

double trajectory_distance(const OperatingPoint& a, const OperatingPoint& b) {
  if (a.num_steps() != b.num_steps())
    throw InvalidArgument("trajectories have different lengths");
  double sq = 0.0;
  for (std::size_t k = 0; k < a.num_steps(); ++k) {
    if (a.states[k].size() != b.states[k].size())
      throw InvalidArgument("trajectories have different state dimensions");
    sq += (a.states[k] - b.states[k]).squaredNorm();
  }
  return std::sqrt(sq);
}

Clustering cluster_trajectories(const std::vector<OperatingPoint>& trajectories,
                                double threshold, std::size_t min_size) {
  if (!(threshold > 0.0)) throw InvalidArgument("threshold must be positive");
  std::vector<Cluster> found;
  for (std::size_t s = 0; s < trajectories.size(); ++s) {
    bool placed = false;
    for (Cluster& c : found) {
      if (trajectory_distance(trajectories[s], trajectories[c.representative]) <=
          threshold) {
        c.members.push_back(s);
        placed = true;
        break;
      }
    }
    if (!placed) found.push_back(Cluster{{s}, s});
  }

  Clustering out;
  for (Cluster& c : found) {
    if (c.members.size() < min_size) {
      out.outliers.insert(out.outliers.end(), c.members.begin(),
                          c.members.end());
    } else {
      out.clusters.push_back(std::move(c));
    }
  }
  std::stable_sort(out.clusters.begin(), out.clusters.end(),
                   [](const Cluster& a, const Cluster& b) {
                     return a.members.size() > b.members.size();
                   });
  std::sort(out.outliers.begin(), out.outliers.end());
  return out;
}

std::string passing_signature(const OperatingPoint& trajectory,
                              const MultiPlayerSystem& system) {
  std::string sig;
  const std::size_t N = system.num_players();
  const std::size_t K = trajectory.num_steps();
  for (PlayerIndex i = 0; i < N; ++i) {
    for (PlayerIndex j = i + 1; j < N; ++j) {
      auto dx = [&](std::size_t k) {
        return position(trajectory.states[k], system, i).x() -
               position(trajectory.states[k], system, j).x();
      };
      if (K == 0 || dx(0) * dx(K - 1) >= 0.0) {
        sig += '.';
        continue;
      }
      std::size_t closest = 0;
      for (std::size_t k = 1; k < K; ++k)
        if (std::abs(dx(k)) < std::abs(dx(closest))) closest = k;
      const double dy = position(trajectory.states[closest], system, i).y() -
                        position(trajectory.states[closest], system, j).y();
      sig += dy >= 0.0 ? '+' : '-';
    }
  }
  return sig;
}

double min_pairwise_distance(const std::vector<VectorXd>& states,
                             const MultiPlayerSystem& system) {
  double best = std::numeric_limits<double>::infinity();
  for (const VectorXd& x : states)
    for (PlayerIndex i = 0; i < system.num_players(); ++i)
      for (PlayerIndex j = i + 1; j < system.num_players(); ++j)
        best = std::min(best,
                        (position(x, system, i) - position(x, system, j)).norm());
  return best;
}

// ---------------------------------------------------------------------------

std::size_t MonteCarloReport::converged_count() const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(),
                    [](const SampleRecord& s) { return s.converged; }));
}

std::size_t MonteCarloReport::first_attempt_converged_count() const {
  return static_cast<std::size_t>(std::count_if(
      samples.begin(), samples.end(),
      [](const SampleRecord& s) { return s.first_attempt_converged; }));
}

namespace {

SampleRecord solve_sample(const ScenarioSpec& spec, const Problem& problem,
                          std::uint64_t seed) {
  SampleRecord rec;
  rec.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  const std::size_t K = spec.time.num_steps();
  const std::size_t N = problem.system.num_players();
  std::vector<ControlSet> controls(K, ControlSet(N));
  for (PlayerIndex i = 0; i < N; ++i) {
    auto seq = sample_sinusoidal_strategy(seed, i, problem.system.control_dim(i),
                                          spec.time, spec.sampling);
    for (std::size_t k = 0; k < K; ++k) controls[k][i] = std::move(seq[k]);
  }
  try {
    SolveResult result = ilq_solve(
        problem.system, problem.costs, problem.x0,
        open_loop_strategies(controls, problem.system.state_dim()),
        problem.config);
    rec.converged = result.converged;
    rec.iterations = result.iterations;
    rec.final_max_alpha = result.final_max_alpha;
    rec.trajectory = std::move(result.operating_point);
    for (const IterationDiagnostics& d : result.diagnostics) {
      rec.costs.push_back(d.costs);
      rec.max_alpha.push_back(d.max_alpha);
    }
  } catch (const std::exception& e) {
    rec.failure = e.what();
  }
  rec.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return rec;
}

ClusterStats cluster_stats(const MonteCarloReport& report,
                           const std::vector<std::size_t>& members,
                           std::size_t representative,
                           const MultiPlayerSystem& system) {
  ClusterStats stats;
  stats.members = members;
  stats.representative = representative;
  stats.passing =
      passing_signature(report.samples[representative].trajectory, system);
  std::size_t length = 0;
  for (std::size_t id : members)
    length = std::max(length, report.samples[id].costs.size());
  const std::size_t N = system.num_players();
  stats.mean_cost.assign(length, std::vector<double>(N, 0.0));
  stats.stddev_cost.assign(length, std::vector<double>(N, 0.0));
  const double count = static_cast<double>(members.size());
  for (std::size_t k = 0; k < length; ++k) {
    for (std::size_t i = 0; i < N; ++i) {
      double sum = 0.0, sq = 0.0;
      for (std::size_t id : members) {
        const auto& c = report.samples[id].costs;
        const double v = c[std::min(k, c.size() - 1)][i];
        sum += v;
        sq += v * v;
      }
      const double mean = sum / count;
      stats.mean_cost[k][i] = mean;
      stats.stddev_cost[k][i] = std::sqrt(std::max(0.0, sq / count - mean * mean));
    }
  }
  return stats;
}

std::vector<std::size_t> histogram(const std::vector<SampleRecord>& samples,
                                   std::size_t max_iterations) {
  std::vector<std::size_t> bins((max_iterations + 9) / 10, 0);
  for (const SampleRecord& s : samples)
    if (s.converged && s.iterations > 0)
      ++bins[std::min(bins.size() - 1, (s.iterations - 1) / 10)];
  return bins;
}

}  // namespace

MonteCarloReport run_monte_carlo(const ScenarioSpec& spec,
                                 std::size_t num_samples, std::uint64_t seed,
                                 unsigned threads) {
  if (num_samples < 1) throw InvalidArgument("need at least one sample");
  validate_scenario(spec);
  const Problem problem = build_problem(spec);
  const auto start = std::chrono::steady_clock::now();

  MonteCarloReport report;
  report.num_samples = num_samples;
  report.master_seed = seed;
  report.samples.resize(num_samples);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t s = next++; s < num_samples; s = next++) {
      SampleRecord rec = solve_sample(spec, problem, derive_seed(seed, 2 * s));
      rec.first_attempt_converged = rec.converged;
      rec.first_attempt_iterations = rec.iterations;
      rec.first_attempt_failure = rec.failure;
      if (!rec.converged) {
        SampleRecord retry =
            solve_sample(spec, problem, derive_seed(seed, 2 * s + 1));
        retry.resampled = true;
        retry.first_attempt_iterations = rec.iterations;
        retry.first_attempt_failure = rec.failure;
        rec = std::move(retry);
      }
      rec.id = s;
      report.samples[s] = std::move(rec);
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, num_samples));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::vector<std::size_t> converged_ids;
  std::vector<OperatingPoint> trajectories;
  for (const SampleRecord& s : report.samples) {
    if (s.resampled) ++report.resample_count;
    if (s.converged) {
      converged_ids.push_back(s.id);
      trajectories.push_back(s.trajectory);
    }
  }
  if (!trajectories.empty()) {
    const Clustering clustering =
        cluster_trajectories(trajectories, spec.clustering.threshold,
                             spec.clustering.min_size);
    for (const Cluster& c : clustering.clusters) {
      std::vector<std::size_t> members;
      for (std::size_t m : c.members) members.push_back(converged_ids[m]);
      report.clusters.push_back(cluster_stats(
          report, members, converged_ids[c.representative], problem.system));
    }
    for (std::size_t m : clustering.outliers)
      report.outliers.push_back(converged_ids[m]);
  }
  report.iteration_histogram =
      histogram(report.samples, problem.config.max_iterations);
  report.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

// ---------------------------------------------------------------------------

bool RecedingHorizonLog::all_converged() const {
  return std::all_of(replans.begin(), replans.end(),
                     [](const ReplanRecord& r) { return r.converged; });
}

std::pair<OperatingPoint, StrategySet> shift_plan(
    const OperatingPoint& previous, const StrategySet& strategies, Time shift) {
  const std::size_t K = previous.num_steps();
  if (K == 0) throw InvalidArgument("empty plan");
  if (shift < 0.0) throw InvalidArgument("negative shift");
  OperatingPoint anchor;
  anchor.dt = previous.dt;
  StrategySet shifted(strategies.size());
  const double offset = shift / previous.dt;
  for (std::size_t k = 0; k < K; ++k) {
    const double sigma = offset + static_cast<double>(k);
    auto j = static_cast<std::size_t>(std::floor(sigma + 1e-9));
    double frac = std::max(0.0, sigma - static_cast<double>(j));
    if (j >= K - 1) {
      j = K - 1;
      frac = 0.0;
    }
    VectorXd x = previous.states[j];
    if (frac > 1e-9) x += frac * (previous.states[j + 1] - previous.states[j]);
    anchor.states.push_back(std::move(x));
    anchor.controls.push_back(previous.controls[j]);
    for (std::size_t i = 0; i < strategies.size(); ++i) {
      shifted[i].P.push_back(strategies[i].P[j]);
      shifted[i].alpha.push_back(
          VectorXd::Zero(strategies[i].alpha[j].size()));
    }
  }
  return {std::move(anchor), std::move(shifted)};
}

RecedingHorizonLog run_receding_horizon(const ScenarioSpec& spec,
                                        Time episode, Time replan_interval) {
  if (!(episode > 0.0) || !std::isfinite(episode))
    throw InvalidArgument("episode length must be positive");
  if (!(replan_interval > 0.0) || !std::isfinite(replan_interval))
    throw InvalidArgument("replan interval must be positive");
  validate_scenario(spec);
  const Problem problem = build_problem(spec);
  const MultiPlayerSystem& system = problem.system;
  const std::size_t N = system.num_players();
  const std::size_t K = problem.config.discretization.num_steps();
  const Time dt = problem.config.discretization.dt;
  const std::vector<Disturbance> disturbances =
      spec.receding ? spec.receding->disturbances : std::vector<Disturbance>{};

  RecedingHorizonLog log;
  log.episode = episode;
  log.replan_interval = replan_interval;
  VectorXd x = problem.x0;
  log.trace.states.push_back(x);

  std::optional<SolveResult> previous;
  for (std::size_t r = 0;; ++r) {
    const Time t0 = static_cast<double>(r) * replan_interval;
    if (t0 >= episode - 1e-9) break;

    SolveResult result;
    try {
      if (!previous) {
        StrategySet zeros;
        for (PlayerIndex i = 0; i < N; ++i)
          zeros.push_back(AffineStrategy::zeros(K, system.control_dim(i),
                                                system.state_dim()));
        result = ilq_solve(system, problem.costs, x, zeros, problem.config);
      } else {
        auto [anchor, strategies] =
            shift_plan(previous->operating_point, previous->strategies,
                       replan_interval);
        result = ilq_solve(system, problem.costs, x, strategies,
                           problem.config, anchor);
      }
    } catch (const std::exception& e) {
      throw EpisodeError(e.what(), r);
    }
    ReplanRecord record{r, t0, x, result.converged, result.iterations,
                        result.total_seconds, result.operating_point, {},
                        result.final_max_alpha};
    for (const IterationDiagnostics& d : result.diagnostics)
      record.max_alpha.push_back(d.max_alpha);
    log.replans.push_back(std::move(record));

    const Time t1 = std::min(t0 + replan_interval, episode);
    const OperatingPoint& plan = result.operating_point;
    for (std::size_t k = 0;; ++k) {
      const Time tau = t0 + static_cast<double>(k) * dt;
      if (t1 - tau <= 1e-9) break;
      const Time h = std::min(dt, t1 - tau);
      const std::size_t j = std::min(k, K - 1);
      ControlSet u(N);
      for (PlayerIndex i = 0; i < N; ++i)
        u[i] = plan.controls[j][i] -
               result.strategies[i].P[j] * (x - plan.states[j]);
      for (const Disturbance& d : disturbances)
        if (tau >= d.start - 1e-9 && tau < d.start + d.duration - 1e-9)
          u[d.player] = d.control;
      x = integrate_step(system, tau, x, u, h);
      log.trace.times.push_back(tau);
      log.trace.durations.push_back(h);
      log.trace.controls.push_back(std::move(u));
      log.trace.states.push_back(x);
    }
    previous = std::move(result);
  }
  log.min_distance = min_pairwise_distance(log.trace.states, system);
  return log;
}

// ---------------------------------------------------------------------------
// Export

namespace {

json vector_json(const VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

VectorXd vector_from(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const VectorXd>(values.data(),
                                    static_cast<Index>(values.size()));
}

json states_json(const std::vector<VectorXd>& states) {
  json a = json::array();
  for (const VectorXd& x : states) a.push_back(vector_json(x));
  return a;
}

std::vector<VectorXd> states_from(const json& j) {
  std::vector<VectorXd> out;
  for (const json& x : j) out.push_back(vector_from(x));
  return out;
}

json controls_json(const std::vector<ControlSet>& controls) {
  json a = json::array();
  for (const ControlSet& u : controls) {
    json step = json::array();
    for (const VectorXd& ui : u) step.push_back(vector_json(ui));
    a.push_back(step);
  }
  return a;
}

std::filesystem::path prepare(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory (" + ec.message() + ")",
                        dir);
  return std::filesystem::path(dir);
}

std::string write_file(const std::filesystem::path& path,
                       const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing", path.string());
  out << contents;
  out.close();
  if (!out) throw IoError("write failed", path.string());
  return path.string();
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report", path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed report: ") + e.what(), path);
  }
}

std::vector<std::string> component_names(const PlayerModel& m, bool control) {
  switch (m.kind) {
    case ModelKind::kUnicycle4D:
      return control ? std::vector<std::string>{"omega", "accel"}
                     : std::vector<std::string>{"px", "py", "theta", "v"};
    case ModelKind::kBicycle5D:
      return control ? std::vector<std::string>{"phi_rate", "accel"}
                     : std::vector<std::string>{"px", "py", "theta", "phi", "v"};
    case ModelKind::kDubinsConstantSpeed3D:
      return control ? std::vector<std::string>{"omega"}
                     : std::vector<std::string>{"px", "py", "theta"};
  }
  return {};
}

std::string format_number(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

// Rows of (time, per player: state block, control block).
std::string trajectory_csv(const ScenarioSpec& spec,
                           const std::vector<Time>& times,
                           const std::vector<VectorXd>& states,
                           const std::vector<ControlSet>& controls) {
  std::ostringstream out;
  out << "t";
  for (const std::string& c : csv_columns(spec)) out << ',' << c;
  out << '\n';
  for (std::size_t k = 0; k < times.size(); ++k) {
    out << format_number(times[k]);
    Index offset = 0;
    for (std::size_t i = 0; i < spec.players.size(); ++i) {
      const Index n = spec.players[i].model.state_dim();
      for (Index s = 0; s < n; ++s)
        out << ',' << format_number(states[k](offset + s));
      offset += n;
      for (Index c = 0; c < controls[k][i].size(); ++c)
        out << ',' << format_number(controls[k][i](c));
    }
    out << '\n';
  }
  return out.str();
}

std::string op_csv(const ScenarioSpec& spec, const OperatingPoint& op) {
  std::vector<Time> times;
  for (std::size_t k = 0; k < op.num_steps(); ++k) times.push_back(op.time_at(k));
  return trajectory_csv(spec, times, op.states, op.controls);
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

std::string svg_number(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << v;
  return s.str();
}

// Draws each trajectory's players as paths. `opacity` < 1 for fans of
// many samples.
std::string render_svg(const ScenarioSpec& spec,
                       const std::vector<std::vector<VectorXd>>& trajectories,
                       double opacity) {
  std::vector<Index> offsets;
  Index offset = 0;
  for (const PlayerSpec& p : spec.players) {
    offsets.push_back(offset);
    offset += p.model.state_dim();
  }

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto grow = [&](const Point2& p) {
    if (!p.allFinite()) return;
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y());
    ymax = std::max(ymax, p.y());
  };
  for (const auto& states : trajectories)
    for (const VectorXd& x : states)
      for (Index o : offsets) grow(Point2(x(o), x(o + 1)));
  for (const PlayerSpec& p : spec.players)
    if (p.goal) grow(*p.goal);
  if (spec.geometry.hall_half_width) {
    grow(Point2(xmin, *spec.geometry.hall_half_width));
    grow(Point2(xmin, -*spec.geometry.hall_half_width));
  }
  if (!std::isfinite(xmin)) xmin = ymin = -1.0, xmax = ymax = 1.0;
  const double margin = 0.1 * std::max({xmax - xmin, ymax - ymin, 1.0});
  xmin -= margin;
  xmax += margin;
  ymin -= margin;
  ymax += margin;
  const double width = xmax - xmin, height = ymax - ymin;
  const double stroke = 0.004 * std::max(width, height);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
      << svg_number(xmin) << ' ' << svg_number(-ymax) << ' '
      << svg_number(width) << ' ' << svg_number(height) << "\" width=\"800\" "
      << "height=\"" << static_cast<int>(800.0 * height / width) << "\">\n";
  svg << "<rect x=\"" << svg_number(xmin) << "\" y=\"" << svg_number(-ymax)
      << "\" width=\"" << svg_number(width) << "\" height=\""
      << svg_number(height) << "\" fill=\"white\"/>\n";

  if (spec.geometry.hall_half_width) {
    for (double side : {1.0, -1.0}) {
      const double y = -side * *spec.geometry.hall_half_width;
      svg << "<line class=\"wall\" x1=\"" << svg_number(xmin) << "\" y1=\""
          << svg_number(y) << "\" x2=\"" << svg_number(xmax) << "\" y2=\""
          << svg_number(y) << "\" stroke=\"black\" stroke-width=\""
          << svg_number(2 * stroke) << "\"/>\n";
    }
  }
  for (const NamedLane& lane : spec.geometry.lanes) {
    svg << "<polyline class=\"lane\" data-name=\"" << lane.name
        << "\" fill=\"none\" stroke=\"#999999\" stroke-dasharray=\""
        << svg_number(4 * stroke) << "\" stroke-width=\"" << svg_number(stroke)
        << "\" points=\"";
    for (const Point2& p : lane.centerline.points())
      svg << svg_number(p.x()) << ',' << svg_number(-p.y()) << ' ';
    svg << "\"/>\n";
  }
  for (std::size_t i = 0; i < spec.players.size(); ++i) {
    const char* color = kPalette[i % 6];
    if (spec.players[i].goal) {
      const Point2& g = *spec.players[i].goal;
      svg << "<circle class=\"goal\" cx=\"" << svg_number(g.x()) << "\" cy=\""
          << svg_number(-g.y()) << "\" r=\"" << svg_number(3 * stroke)
          << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
          << svg_number(stroke) << "\"/>\n";
    }
  }
  for (const auto& states : trajectories) {
    for (std::size_t i = 0; i < spec.players.size(); ++i) {
      if (states.empty()) continue;
      const Index o = offsets[i];
      svg << "<path data-player=\"" << spec.players[i].name
          << "\" fill=\"none\" stroke=\"" << kPalette[i % 6]
          << "\" stroke-opacity=\"" << svg_number(opacity)
          << "\" stroke-width=\"" << svg_number(stroke) << "\" d=\"";
      for (std::size_t k = 0; k < states.size(); ++k)
        svg << (k == 0 ? "M" : " L") << svg_number(states[k](o)) << ','
            << svg_number(-states[k](o + 1));
      svg << "\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

json diagnostics_json(const std::vector<IterationDiagnostics>& diagnostics) {
  json a = json::array();
  for (std::size_t k = 0; k < diagnostics.size(); ++k) {
    const IterationDiagnostics& d = diagnostics[k];
    a.push_back({{"iteration", k + 1},
                 {"costs", d.costs},
                 {"max_alpha", d.max_alpha},
                 {"trajectory_change", d.trajectory_change},
                 {"step_size", d.step_size},
                 {"regularization", d.regularization},
                 {"seconds", d.seconds}});
  }
  return a;
}

json config_echo(const ScenarioSpec& spec) {
  return json::parse(serialize_scenario(spec));
}

ScenarioSpec config_from(const json& report) {
  return parse_scenario(report.at("config").dump());
}

}  // namespace

SolveSummary summarize(const SolveResult& result, const Problem& problem) {
  SolveSummary s;
  s.converged = result.converged;
  s.iterations = result.iterations;
  s.num_steps = result.operating_point.num_steps();
  for (const PlayerCost& c : problem.costs)
    s.final_costs.push_back(evaluate_total_cost(c, result.operating_point,
                                                result.operating_point.dt));
  s.final_max_alpha = result.final_max_alpha;
  s.min_distance =
      min_pairwise_distance(result.operating_point.states, problem.system);
  s.total_seconds = result.total_seconds;
  return s;
}

MonteCarloSummary summarize(const MonteCarloReport& report) {
  MonteCarloSummary s;
  s.num_samples = report.num_samples;
  s.converged = report.converged_count();
  s.first_attempt_converged = report.first_attempt_converged_count();
  s.resample_count = report.resample_count;
  for (const ClusterStats& c : report.clusters) {
    s.cluster_sizes.push_back(c.members.size());
    s.cluster_passing.push_back(c.passing);
  }
  s.outliers = report.outliers.size();
  s.iteration_histogram = report.iteration_histogram;
  return s;
}

RecedingSummary summarize(const RecedingHorizonLog& log) {
  RecedingSummary s;
  s.replans = log.replans.size();
  for (const ReplanRecord& r : log.replans) {
    if (r.converged) ++s.converged;
    s.mean_solve_seconds += r.seconds;
    s.max_solve_seconds = std::max(s.max_solve_seconds, r.seconds);
  }
  if (s.replans > 0) s.mean_solve_seconds /= static_cast<double>(s.replans);
  s.min_distance = log.min_distance;
  return s;
}

std::vector<std::string> csv_columns(const ScenarioSpec& spec) {
  std::vector<std::string> cols;
  for (const PlayerSpec& p : spec.players) {
    for (const std::string& c : component_names(p.model, false))
      cols.push_back(p.name + "." + c);
    for (const std::string& c : component_names(p.model, true))
      cols.push_back(p.name + "." + c);
  }
  return cols;
}

std::string trajectory_svg(const ScenarioSpec& spec,
                           const std::vector<VectorXd>& states) {
  return render_svg(spec, {states}, 1.0);
}

std::vector<std::string> export_artifacts(const ScenarioSpec& spec,
                                          const SolveResult& result,
                                          const std::string& dir) {
  const auto root = prepare(dir);
  const Problem problem = build_problem(spec);
  const SolveSummary summary = summarize(result, problem);
  std::vector<double> per_iteration;
  for (const auto& d : result.diagnostics) per_iteration.push_back(d.seconds);

  json report;
  report["kind"] = "solve";
  report["config"] = config_echo(spec);
  report["converged"] = result.converged;
  report["iterations"] = result.iterations;
  report["final_costs"] = summary.final_costs;
  report["final_max_alpha"] = result.final_max_alpha;
  report["min_distance"] = summary.min_distance;
  report["timings"] = {{"total_seconds", result.total_seconds},
                       {"iteration_seconds", per_iteration}};
  report["diagnostics"] = diagnostics_json(result.diagnostics);
  report["trajectory"] = {
      {"dt", result.operating_point.dt},
      {"states", states_json(result.operating_point.states)},
      {"controls", controls_json(result.operating_point.controls)}};

  return {write_file(root / "trajectory.csv",
                     op_csv(spec, result.operating_point)),
          write_file(root / "report.json", report.dump(2) + "\n"),
          write_file(root / "trajectory.svg",
                     trajectory_svg(spec, result.operating_point.states))};
}

std::vector<std::string> export_artifacts(const ScenarioSpec& spec,
                                          const MonteCarloReport& report,
                                          const std::string& dir) {
  const auto root = prepare(dir);
  std::vector<std::string> written;

  json samples = json::array();
  std::vector<std::vector<VectorXd>> fan;
  for (const SampleRecord& s : report.samples) {
    samples.push_back({{"id", s.id},
                       {"seed", s.seed},
                       {"resampled", s.resampled},
                       {"converged", s.converged},
                       {"first_attempt_converged", s.first_attempt_converged},
                       {"first_attempt_iterations", s.first_attempt_iterations},
                       {"first_attempt_failure", s.first_attempt_failure},
                       {"iterations", s.iterations},
                       {"final_max_alpha", s.final_max_alpha},
                       {"seconds", s.seconds},
                       {"failure", s.failure},
                       {"costs", s.costs},
                       {"max_alpha", s.max_alpha}});
    if (s.converged) fan.push_back(s.trajectory.states);
  }
  json clusters = json::array();
  for (std::size_t c = 0; c < report.clusters.size(); ++c) {
    const ClusterStats& stats = report.clusters[c];
    clusters.push_back({{"members", stats.members},
                        {"representative", stats.representative},
                        {"passing", stats.passing},
                        {"mean_cost", stats.mean_cost},
                        {"stddev_cost", stats.stddev_cost}});
    const OperatingPoint& rep = report.samples[stats.representative].trajectory;
    const std::string stem = "cluster_" + std::to_string(c);
    written.push_back(write_file(root / (stem + ".csv"), op_csv(spec, rep)));
    written.push_back(
        write_file(root / (stem + ".svg"), trajectory_svg(spec, rep.states)));
  }

  json doc;
  doc["kind"] = "montecarlo";
  doc["config"] = config_echo(spec);
  doc["num_samples"] = report.num_samples;
  doc["master_seed"] = report.master_seed;
  doc["resample_count"] = report.resample_count;
  doc["converged"] = report.converged_count();
  doc["first_attempt_converged"] = report.first_attempt_converged_count();
  doc["iteration_histogram"] = report.iteration_histogram;
  doc["outliers"] = report.outliers;
  doc["clusters"] = clusters;
  doc["samples"] = samples;
  doc["timings"] = {{"total_seconds", report.seconds}};
  written.push_back(write_file(root / "report.json", doc.dump(2) + "\n"));
  written.push_back(
      write_file(root / "samples.svg", render_svg(spec, fan, 0.25)));
  return written;
}

std::vector<std::string> export_artifacts(const ScenarioSpec& spec,
                                          const RecedingHorizonLog& log,
                                          const std::string& dir) {
  const auto root = prepare(dir);
  json replans = json::array();
  for (const ReplanRecord& r : log.replans)
    replans.push_back({{"index", r.index},
                       {"time", r.time},
                       {"converged", r.converged},
                       {"iterations", r.iterations},
                       {"seconds", r.seconds},
                       {"state", vector_json(r.state)}});
  json doc;
  doc["kind"] = "receding";
  doc["config"] = config_echo(spec);
  doc["episode"] = log.episode;
  doc["replan_interval"] = log.replan_interval;
  doc["min_distance"] = log.min_distance;
  doc["replans"] = replans;
  doc["trace"] = {{"times", log.trace.times},
                  {"durations", log.trace.durations},
                  {"states", states_json(log.trace.states)},
                  {"controls", controls_json(log.trace.controls)}};

  std::vector<VectorXd> row_states(log.trace.states.begin(),
                                   log.trace.states.end() - 1);
  return {write_file(root / "trace.csv",
                     trajectory_csv(spec, log.trace.times, row_states,
                                    log.trace.controls)),
          write_file(root / "report.json", doc.dump(2) + "\n"),
          write_file(root / "trace.svg",
                     trajectory_svg(spec, log.trace.states))};
}

SolveSummary read_solve_summary(const std::string& report_path) {
  const json doc = read_json(report_path);
  try {
    const ScenarioSpec spec = config_from(doc);
    const Problem problem = build_problem(spec);
    SolveSummary s;
    s.converged = doc.at("converged").get<bool>();
    s.iterations = doc.at("iterations").get<std::size_t>();
    const auto states = states_from(doc.at("trajectory").at("states"));
    s.num_steps = states.size();
    s.final_costs = doc.at("final_costs").get<std::vector<double>>();
    s.final_max_alpha = doc.at("final_max_alpha").get<double>();
    s.min_distance = min_pairwise_distance(states, problem.system);
    s.total_seconds = doc.at("timings").at("total_seconds").get<double>();
    return s;
  } catch (const json::exception& e) {
    throw IoError(std::string("incomplete report: ") + e.what(), report_path);
  }
}

MonteCarloSummary read_monte_carlo_summary(const std::string& report_path) {
  const json doc = read_json(report_path);
  try {
    const ScenarioSpec spec = config_from(doc);
    MonteCarloSummary s;
    s.num_samples = doc.at("num_samples").get<std::size_t>();
    std::vector<SampleRecord> samples;
    for (const json& j : doc.at("samples")) {
      SampleRecord r;
      r.converged = j.at("converged").get<bool>();
      r.iterations = j.at("iterations").get<std::size_t>();
      if (r.converged) ++s.converged;
      if (j.at("first_attempt_converged").get<bool>()) ++s.first_attempt_converged;
      if (j.at("resampled").get<bool>()) ++s.resample_count;
      samples.push_back(std::move(r));
    }
    for (const json& c : doc.at("clusters")) {
      s.cluster_sizes.push_back(c.at("members").size());
      s.cluster_passing.push_back(c.at("passing").get<std::string>());
    }
    s.outliers = doc.at("outliers").size();
    s.iteration_histogram = histogram(samples, spec.solver.max_iterations);
    return s;
  } catch (const json::exception& e) {
    throw IoError(std::string("incomplete report: ") + e.what(), report_path);
  }
}

RecedingSummary read_receding_summary(const std::string& report_path) {
  const json doc = read_json(report_path);
  try {
    const ScenarioSpec spec = config_from(doc);
    const Problem problem = build_problem(spec);
    RecedingSummary s;
    for (const json& r : doc.at("replans")) {
      ++s.replans;
      if (r.at("converged").get<bool>()) ++s.converged;
      const double sec = r.at("seconds").get<double>();
      s.mean_solve_seconds += sec;
      s.max_solve_seconds = std::max(s.max_solve_seconds, sec);
    }
    if (s.replans > 0) s.mean_solve_seconds /= static_cast<double>(s.replans);
    s.min_distance = min_pairwise_distance(
        states_from(doc.at("trace").at("states")), problem.system);
    return s;
  } catch (const json::exception& e) {
    throw IoError(std::string("incomplete report: ") + e.what(), report_path);
  }
}

}  // namespace ilqgame
