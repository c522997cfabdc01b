#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ilqgame/errors.h"
#include "ilqgame/harness.h"
#include "ilqgame/lq_game.h"
#include "ilqgame/scenario.h"
#include "ilqgame/solver.h"

namespace py = pybind11;
using namespace ilqgame;

namespace {

MatrixXd stack_states(const std::vector<VectorXd>& states) {
  if (states.empty()) return MatrixXd();
  MatrixXd out(static_cast<Index>(states.size()), states.front().size());
  for (std::size_t k = 0; k < states.size(); ++k)
    out.row(static_cast<Index>(k)) = states[k].transpose();
  return out;
}

// One (num_steps x m_i) array per player.
std::vector<MatrixXd> stack_controls(const std::vector<ControlSet>& controls) {
  std::vector<MatrixXd> out;
  if (controls.empty()) return out;
  for (std::size_t i = 0; i < controls.front().size(); ++i) {
    MatrixXd u(static_cast<Index>(controls.size()),
               controls.front()[i].size());
    for (std::size_t k = 0; k < controls.size(); ++k)
      u.row(static_cast<Index>(k)) = controls[k][i].transpose();
    out.push_back(std::move(u));
  }
  return out;
}

py::dict diagnostics_dict(const std::vector<IterationDiagnostics>& diags) {
  std::vector<std::vector<double>> costs;
  std::vector<double> alpha, change, step, reg, seconds;
  for (const auto& d : diags) {
    costs.push_back(d.costs);
    alpha.push_back(d.max_alpha);
    change.push_back(d.trajectory_change);
    step.push_back(d.step_size);
    reg.push_back(d.regularization);
    seconds.push_back(d.seconds);
  }
  py::dict out;
  out["costs"] = costs;
  out["max_alpha"] = alpha;
  out["trajectory_change"] = change;
  out["step_size"] = step;
  out["regularization"] = reg;
  out["seconds"] = seconds;
  return out;
}

py::dict solve_scenario(const ScenarioSpec& spec,
                        std::optional<std::vector<MatrixXd>> initial_controls,
                        std::optional<std::string> out_dir) {
  const Problem problem = build_problem(spec);
  const std::size_t K = problem.config.discretization.num_steps();
  const std::size_t N = problem.system.num_players();
  StrategySet init;
  if (initial_controls) {
    if (initial_controls->size() != N)
      throw InvalidArgument("need one control array per player");
    std::vector<ControlSet> controls(K, ControlSet(N));
    for (std::size_t i = 0; i < N; ++i) {
      const MatrixXd& u = (*initial_controls)[i];
      if (u.rows() != static_cast<Index>(K) ||
          u.cols() != problem.system.control_dim(static_cast<PlayerIndex>(i)))
        throw InvalidArgument("initial control array has the wrong shape");
      for (std::size_t k = 0; k < K; ++k)
        controls[k][i] = u.row(static_cast<Index>(k)).transpose();
    }
    init = open_loop_strategies(controls, problem.system.state_dim());
  } else {
    for (PlayerIndex i = 0; i < N; ++i)
      init.push_back(AffineStrategy::zeros(K, problem.system.control_dim(i),
                                           problem.system.state_dim()));
  }
  SolveResult result;
  {
    py::gil_scoped_release release;
    result = ilq_solve(problem.system, problem.costs, problem.x0, init,
                       problem.config);
  }
  const SolveSummary summary = summarize(result, problem);
  py::dict out;
  out["converged"] = result.converged;
  out["iterations"] = result.iterations;
  out["states"] = stack_states(result.operating_point.states);
  out["controls"] = stack_controls(result.operating_point.controls);
  out["final_costs"] = summary.final_costs;
  out["final_max_alpha"] = result.final_max_alpha;
  out["min_distance"] = summary.min_distance;
  out["total_seconds"] = result.total_seconds;
  out["diagnostics"] = diagnostics_dict(result.diagnostics);
  if (out_dir) out["files"] = export_artifacts(spec, result, *out_dir);
  return out;
}

}  // namespace

PYBIND11_MODULE(_ilqgame, m) {
  m.doc() = "Iterative linear-quadratic game solver";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument",
                                          PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<ScenarioSpec>(m, "Scenario")
      .def_readonly("name", &ScenarioSpec::name)
      .def_property_readonly("num_players",
                             [](const ScenarioSpec& s) { return s.players.size(); })
      .def_property_readonly(
          "player_names",
          [](const ScenarioSpec& s) {
            std::vector<std::string> names;
            for (const auto& p : s.players) names.push_back(p.name);
            return names;
          })
      .def_property_readonly(
          "state_dim",
          [](const ScenarioSpec& s) {
            return build_problem(s).system.state_dim();
          })
      .def_property_readonly(
          "control_dims",
          [](const ScenarioSpec& s) {
            std::vector<Index> dims;
            for (const auto& p : s.players) dims.push_back(p.model.control_dim());
            return dims;
          })
      .def_property_readonly("num_steps",
                             [](const ScenarioSpec& s) { return s.time.num_steps(); })
      .def_property_readonly("dt", [](const ScenarioSpec& s) { return s.time.dt; })
      .def_property(
          "step_size", [](const ScenarioSpec& s) { return s.solver.step_size; },
          [](ScenarioSpec& s, double v) { s.solver.step_size = v; })
      .def_property(
          "tolerance", [](const ScenarioSpec& s) { return s.solver.tolerance; },
          [](ScenarioSpec& s, double v) { s.solver.tolerance = v; })
      .def_property(
          "max_iterations",
          [](const ScenarioSpec& s) { return s.solver.max_iterations; },
          [](ScenarioSpec& s, std::size_t v) { s.solver.max_iterations = v; })
      .def("csv_columns", &csv_columns)
      .def("__eq__", [](const ScenarioSpec& a, const ScenarioSpec& b) { return a == b; })
      .def("__repr__", [](const ScenarioSpec& s) {
        return "<Scenario '" + s.name + "' with " +
               std::to_string(s.players.size()) + " players>";
      });

  m.def("parse_scenario", &parse_scenario, py::arg("text"));
  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("serialize_scenario", &serialize_scenario, py::arg("scenario"));

  m.def("solve", &solve_scenario, py::arg("scenario"),
        py::arg("initial_controls") = py::none(), py::arg("out") = py::none(),
        "Solve from zero strategies, or replay the given open-loop controls "
        "(one (num_steps, m_i) array per player) as the initial iterate.");

  m.def(
      "sample_sinusoidal_strategy",
      [](std::uint64_t seed, PlayerIndex player, const ScenarioSpec& spec) {
        const auto seq = sample_sinusoidal_strategy(
            seed, player, spec.players.at(player).model.control_dim(),
            spec.time, spec.sampling);
        return stack_states(seq);
      },
      py::arg("seed"), py::arg("player"), py::arg("scenario"));

  m.def(
      "run_monte_carlo",
      [](const ScenarioSpec& spec, std::size_t samples, std::uint64_t seed,
         unsigned threads, std::optional<std::string> out_dir) {
        MonteCarloReport report;
        {
          py::gil_scoped_release release;
          report = run_monte_carlo(spec, samples, seed, threads);
        }
        const MonteCarloSummary s = summarize(report);
        py::list records;
        for (const SampleRecord& r : report.samples) {
          py::dict d;
          d["id"] = r.id;
          d["seed"] = r.seed;
          d["converged"] = r.converged;
          d["first_attempt_converged"] = r.first_attempt_converged;
          d["first_attempt_iterations"] = r.first_attempt_iterations;
          d["first_attempt_failure"] = r.first_attempt_failure;
          d["resampled"] = r.resampled;
          d["iterations"] = r.iterations;
          d["final_max_alpha"] = r.final_max_alpha;
          d["max_alpha"] = r.max_alpha;
          d["failure"] = r.failure;
          d["states"] = stack_states(r.trajectory.states);
          records.append(d);
        }
        py::dict out;
        out["num_samples"] = s.num_samples;
        out["converged"] = s.converged;
        out["first_attempt_converged"] = s.first_attempt_converged;
        out["resample_count"] = s.resample_count;
        out["cluster_sizes"] = s.cluster_sizes;
        out["cluster_passing"] = s.cluster_passing;
        out["outliers"] = report.outliers;
        out["iteration_histogram"] = s.iteration_histogram;
        out["samples"] = records;
        out["seconds"] = report.seconds;
        if (out_dir) out["files"] = export_artifacts(spec, report, *out_dir);
        return out;
      },
      py::arg("scenario"), py::arg("samples"), py::arg("seed"),
      py::arg("threads") = 0, py::arg("out") = py::none());

  m.def(
      "run_receding_horizon",
      [](const ScenarioSpec& spec, double episode, double replan,
         std::optional<std::string> out_dir) {
        RecedingHorizonLog log;
        {
          py::gil_scoped_release release;
          log = run_receding_horizon(spec, episode, replan);
        }
        const RecedingSummary s = summarize(log);
        std::vector<double> times, seconds;
        std::vector<std::size_t> iterations;
        std::vector<bool> converged;
        for (const ReplanRecord& r : log.replans) {
          times.push_back(r.time);
          seconds.push_back(r.seconds);
          iterations.push_back(r.iterations);
          converged.push_back(r.converged);
        }
        py::dict out;
        out["replans"] = s.replans;
        out["converged"] = s.converged;
        out["min_distance"] = s.min_distance;
        out["mean_solve_seconds"] = s.mean_solve_seconds;
        out["max_solve_seconds"] = s.max_solve_seconds;
        out["replan_times"] = times;
        out["replan_seconds"] = seconds;
        out["replan_iterations"] = iterations;
        out["replan_converged"] = converged;
        out["trace_states"] = stack_states(log.trace.states);
        out["trace_times"] = log.trace.times;
        if (out_dir) out["files"] = export_artifacts(spec, log, *out_dir);
        return out;
      },
      py::arg("scenario"), py::arg("episode"), py::arg("replan"),
      py::arg("out") = py::none());
}
