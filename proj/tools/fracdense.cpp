// fracdense: command-line front end for the density workbench.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fracdense/density.hpp"
#include "fracdense/errors.hpp"
#include "fracdense/fraclap.hpp"
#include "fracdense/io.hpp"
#include "fracdense/kernel_extension.hpp"
#include "fracdense/polyapprox.hpp"

namespace fs = std::filesystem;
using namespace fracdense;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct RunConfig {
  double s = 0.5;
  std::uint64_t seed = 0;
  double quad_tol = 1e-10;
  int grid = 101;
  std::string out_dir = ".";
  std::string method = "taylor-rescale";
  bool timing = false;

  [[nodiscard]] FracParams params() const { return FracParams{s, 1}; }
  [[nodiscard]] QuadSettings quad() const {
    QuadSettings q;
    q.abs_tol = quad_tol;
    q.rel_tol = quad_tol;
    return q;
  }
  void validate() const {
    params().validate();
    quad().validate();
    if (grid < 2) throw InputError("--grid must be at least 2");
  }
};

// Values from --config apply unless the flag was given explicitly.
void apply_config(RunConfig& cfg, const Json& j, const std::map<std::string, bool>& given) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  const auto take = [&](const char* key, auto& field) {
    if (!j.contains(key) || given.at(key)) return;
    try {
      field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    } catch (const nlohmann::json::exception&) {
      throw InputError(std::string("config: field '") + key + "' has the wrong type");
    }
  };
  take("s", cfg.s);
  take("seed", cfg.seed);
  take("quad_tol", cfg.quad_tol);
  take("grid", cfg.grid);
  take("out_dir", cfg.out_dir);
  take("method", cfg.method);
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size() || !std::isfinite(v)) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw InputError(what + ": cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw InputError(what + ": empty list");
  return out;
}

// Polynomial builtins stay exact; analytic ones are convolved first.
ApproxTarget builtin_target(const std::string& name) {
  if (name == "zero") return Polynomial{};
  if (name == "square") return Polynomial({0.0, 0.0, 1.0});
  if (name == "concave") return Polynomial({1.0, 0.0, -1.0});
  if (name == "cosine") return Target{[](double x) { return std::cos(x); }, 1.0, name};
  if (name == "exp") return Target{[](double x) { return std::exp(x); }, 1.0, name};
  if (name == "gaussian-bump") return Target{[](double x) { return std::exp(-x * x); }, 1.0, name};
  if (name == "runge") {
    return Target{[](double x) { return 1.0 / (1.0 + 25.0 * x * x); }, 1.0, name};
  }
  throw InputError("unknown target '" + name +
                   "' (expected zero, square, concave, cosine, exp, gaussian-bump, runge)");
}

ApproxTarget load_target(const std::string& name, const std::string& file) {
  if (!file.empty() && !name.empty()) throw InputError("give either --target or --target-file");
  if (!file.empty()) return polynomial_from_json(read_json_file(file));
  if (name.empty()) throw InputError("a target is required (--target or --target-file)");
  return builtin_target(name);
}

RealFn target_function(const ApproxTarget& t) {
  if (const auto* p = std::get_if<Polynomial>(&t)) {
    Polynomial poly = *p;
    return [poly](double x) { return poly(x); };
  }
  return std::get<Target>(t).f;
}

void emit(const RunConfig& cfg, const std::string& name, const std::string& content) {
  const fs::path path = fs::path(cfg.out_dir) / name;
  write_file_atomic(path, content);
  std::cout << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical workbench for approximation by s-harmonic functions"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string config_path;
  std::map<std::string, CLI::Option*> flags;
  flags["s"] = app.add_option("--s", cfg.s, "fractional order in (0, 1)");
  flags["seed"] = app.add_option("--seed", cfg.seed, "dictionary placement seed");
  flags["quad_tol"] = app.add_option("--quad-tol", cfg.quad_tol, "quadrature abs and rel tolerance");
  flags["grid"] = app.add_option("--grid", cfg.grid, "grid resolution (points on [-1, 1])");
  flags["out_dir"] = app.add_option("--out-dir", cfg.out_dir, "output directory");
  app.add_option("--config", config_path, "JSON config; explicit flags win");
  app.add_flag("--timing", cfg.timing, "include wall time in JSON reports");

  // extend
  auto* extend_cmd = app.add_subcommand("extend", "evaluate the extension of exterior data");
  std::string exterior_path;
  std::string points_text;
  double from = -3.0;
  double to = 3.0;
  extend_cmd->add_option("--exterior", exterior_path, "exterior data JSON")->required();
  extend_cmd->add_option("--points", points_text, "comma-separated evaluation points");
  extend_cmd->add_option("--from", from, "range start when --points is absent");
  extend_cmd->add_option("--to", to, "range end when --points is absent");

  // growth
  auto* growth_cmd = app.add_subcommand("growth", "boundary growth constant, direct and fitted");
  double amplitude = 1.0;
  growth_cmd->add_option("--amplitude", amplitude, "amplitude of the profile bump");

  // blowup
  auto* blowup_cmd = app.add_subcommand("blowup", "L1 distance of the blow-up family to its limit");
  std::string j_text = "1,4,8,16,32,64";
  int direction = 1;
  blowup_cmd->add_option("--j", j_text, "comma-separated blow-up indices");
  blowup_cmd->add_option("--e", direction, "direction, +1 or -1");

  // span
  auto* span_cmd = app.add_subcommand("span", "dictionary combination with a prescribed jet");
  int beta = 0;
  int count = 0;
  bool mirror = false;
  span_cmd->add_option("--beta", beta, "order of the prescribed derivative")->required();
  span_cmd->add_option("--count", count, "dictionary size (default 2(beta+1)+4)");
  span_cmd->add_flag("--mirror", mirror, "mirror-symmetric dictionary");

  // approx
  auto* approx_cmd = app.add_subcommand("approx", "approximate a target by an s-harmonic function");
  std::string target_name;
  std::string target_file;
  int k = 0;
  double eps = 0.1;
  int dict_size = 0;
  std::string method_flag;
  approx_cmd->add_option("--target", target_name, "builtin target name");
  approx_cmd->add_option("--target-file", target_file, "polynomial JSON target");
  approx_cmd->add_option("--k", k, "smoothness order of the error norm");
  approx_cmd->add_option("--eps", eps, "tolerance");
  approx_cmd->add_option("--method", method_flag, "taylor-rescale or global-lsq");
  approx_cmd->add_option("--dict-size", dict_size, "dictionary size override");
  approx_cmd->add_flag("--mirror", mirror, "mirror-symmetric dictionary");

  // residual
  auto* residual_cmd = app.add_subcommand("residual", "s-harmonicity residual of an extension");
  int residual_points = 9;
  residual_cmd->add_option("--exterior", exterior_path, "exterior data JSON")->required();
  residual_cmd->add_option("--points", residual_points, "grid points inside B_0.9r");

  // mollify
  auto* mollify_cmd = app.add_subcommand("mollify", "polynomial approximation by heat-kernel convolution");
  mollify_cmd->add_option("--target", target_name, "builtin target name");
  mollify_cmd->add_option("--k", k, "smoothness order");
  mollify_cmd->add_option("--eps", eps, "tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (!config_path.empty()) {
      std::map<std::string, bool> given;
      for (const auto& [key, opt] : flags) given[key] = opt->count() > 0;
      given["method"] = !method_flag.empty();
      apply_config(cfg, read_json_file(config_path), given);
    }
    if (!method_flag.empty()) cfg.method = method_flag;
    cfg.validate();
    const FracParams params = cfg.params();
    const QuadSettings quad = cfg.quad();

    if (*extend_cmd) {
      const ExteriorInput input = exterior_from_json(read_json_file(exterior_path));
      const SHarmonicFn fn(params, input.ball, input.data, quad);
      std::vector<double> xs;
      if (!points_text.empty()) {
        xs = parse_list(points_text, "--points");
      } else {
        if (!(from < to)) throw InputError("--from must be below --to");
        for (int i = 0; i < cfg.grid; ++i) xs.push_back(from + (to - from) * i / (cfg.grid - 1.0));
      }
      std::vector<std::vector<double>> rows;
      for (double x : xs) rows.push_back({x, fn(x)});
      emit(cfg, "extend.csv", csv_table({"x", "u"}, rows));
    } else if (*growth_cmd) {
      const Bump bump = standard_growth_bump(amplitude);
      const double kappa = boundary_growth_constant(bump, params, quad);
      const SHarmonicFn psi = growth_function(bump, params, quad);
      const std::vector<double> grid = default_growth_grid();
      const GrowthFit fit = fit_boundary_growth(psi, grid);
      Json out{{"s", cfg.s},
               {"amplitude", amplitude},
               {"kappa_direct", kappa},
               {"kappa_fit", fit.kappa},
               {"s_fit", fit.s},
               {"correction", fit.correction}};
      std::vector<std::vector<double>> rows;
      for (double e : grid) rows.push_back({e, psi(1.0 - e), kappa * std::pow(e, cfg.s)});
      emit(cfg, "growth.json", dump_json(out));
      emit(cfg, "growth.csv", csv_table({"eps", "psi", "kappa_eps_s"}, rows));
    } else if (*blowup_cmd) {
      if (direction != 1 && direction != -1) throw InputError("--e must be +1 or -1");
      const Bump bump = standard_growth_bump();
      const double kappa = boundary_growth_constant(bump, params, quad);
      const SHarmonicFn psi = growth_function(bump, params, quad);
      std::vector<std::vector<double>> rows;
      for (double jd : parse_list(j_text, "--j")) {
        if (jd < 1.0 || jd != std::floor(jd)) throw InputError("--j entries must be positive integers");
        const int j = static_cast<int>(jd);
        rows.push_back({jd, static_cast<double>(direction),
                        blowup_l1_error(direction, j, kappa, psi, quad)});
      }
      emit(cfg, "blowup.csv", csv_table({"j", "e", "l1_error"}, rows));
    } else if (*span_cmd) {
      if (beta < 0) throw InputError("--beta must be >= 0");
      const int size = count > 0 ? count : 2 * (beta + 1) + 4;
      const Dictionary dict = build_dictionary(params, size, Placement{cfg.seed, mirror}, quad);
      const SpanSolution sol = span_solve(dict, MultiIndex::scalar(beta));
      if (sol.ill_conditioned) {
        std::cerr << "warning: derivative matrix is ill-conditioned (condition number "
                  << sol.condition_number << ")\n";
      }
      const std::vector<double> grid = uniform_interior_grid(0.0, 0.9, 9);
      const ResidualReport rep = residual_report(sol.v, grid, params);
      std::vector<std::vector<double>> rows;
      for (const ResidualPoint& p : rep.points) rows.push_back({p.x, p.residual});
      emit(cfg, "span.json", dump_json(to_json(sol)));
      emit(cfg, "span_residual.csv", csv_table({"x", "residual"}, rows));
    } else if (*approx_cmd) {
      const ApproxTarget target = load_target(target_name, target_file);
      ApproxOptions opt;
      opt.params = params;
      opt.method = parse_method(cfg.method);
      opt.placement = Placement{cfg.seed, mirror};
      opt.dictionary_size = dict_size;
      opt.quad = quad;
      opt.grid.grid_points = cfg.grid;
      const Approximation result = approximate(target, k, eps, opt);
      const RealFn f = target_function(target);
      std::vector<std::vector<double>> rows;
      for (int i = 0; i < cfg.grid; ++i) {
        const double x = -1.0 + 2.0 * i / (cfg.grid - 1.0);
        const double u = result.u(x);
        const double fx = f(x);
        rows.push_back({x, u, fx, u - fx});
      }
      emit(cfg, "approx.json", dump_json(to_json(result.report, cfg.timing)));
      emit(cfg, "approx_profile.csv", csv_table({"x", "u", "f", "u_minus_f"}, rows));
    } else if (*residual_cmd) {
      const ExteriorInput input = exterior_from_json(read_json_file(exterior_path));
      const SHarmonicFn fn(params, input.ball, input.data, quad);
      const std::vector<double> grid =
          uniform_interior_grid(input.ball.center, 0.9 * input.ball.radius, residual_points);
      emit(cfg, "residual.json", dump_json(to_json(residual_report(fn, grid, params))));
    } else if (*mollify_cmd) {
      const ApproxTarget target = builtin_target(target_name.empty() ? "" : target_name);
      Target t;
      if (const auto* p = std::get_if<Polynomial>(&target)) {
        Polynomial poly = *p;
        t = Target{[poly](double x) { return poly(x); }, 1.0, target_name};
      } else {
        t = std::get<Target>(target);
      }
      const WeierstrassResult w = weierstrass_approx(t, k, eps, quad);
      Json out = to_json(w.polynomial);
      out["plan"] = to_json(w.plan);
      out["error"] = w.error;
      out["iterations"] = w.iterations;
      emit(cfg, "mollify.json", dump_json(out));
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
