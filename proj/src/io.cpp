#include "fracdense/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "fracdense/errors.hpp"

namespace fracdense {

namespace {

double number_field(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InputError(where + ": missing field '" + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number()) throw InputError(where + ": field '" + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw InputError(where + ": field '" + key + "' is not finite");
  return d;
}

// JSON has no representation for inf or NaN; emit null instead.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("malformed JSON in " + what + ": " + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path.string());
}

ExteriorInput exterior_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("exterior data must be a JSON object");
  ExteriorInput input;
  if (j.contains("ball")) {
    const Json& b = j.at("ball");
    if (!b.is_object()) throw InputError("exterior data: 'ball' must be an object");
    input.ball.center = number_field(b, "center", "ball");
    input.ball.radius = number_field(b, "radius", "ball");
    input.ball.validate();
  }
  if (!j.contains("bumps") || !j.at("bumps").is_array()) {
    throw InputError("exterior data: 'bumps' must be an array");
  }
  std::vector<Bump> bumps;
  for (const Json& b : j.at("bumps")) {
    if (!b.is_object()) throw InputError("exterior data: every bump must be an object");
    Bump bump;
    bump.center = number_field(b, "center", "bump");
    bump.half_width = number_field(b, "half_width", "bump");
    bump.amplitude = b.contains("amplitude") ? number_field(b, "amplitude", "bump") : 1.0;
    if (!(bump.half_width > 0.0)) throw InputError("bump: half_width must be positive");
    bumps.push_back(bump);
  }
  input.data = ExteriorData(std::move(bumps));
  return input;
}

Json to_json(const Ball& ball, const ExteriorData& data) {
  Json bumps = Json::array();
  for (const Bump& b : data.bumps()) {
    bumps.push_back(Json{{"center", b.center}, {"half_width", b.half_width}, {"amplitude", b.amplitude}});
  }
  return Json{{"ball", Json{{"center", ball.center}, {"radius", ball.radius}}}, {"bumps", bumps}};
}

Polynomial polynomial_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("polynomial must be a JSON object");
  if (j.contains("n") && (!j.at("n").is_number_integer() || j.at("n").get<int>() != 1)) {
    throw InputError("polynomial: only n = 1 is supported");
  }
  if (!j.contains("coeffs") || !j.at("coeffs").is_array()) {
    throw InputError("polynomial: 'coeffs' must be an array of [degree, value] pairs");
  }
  std::vector<double> c;
  for (const Json& term : j.at("coeffs")) {
    if (!term.is_array() || term.size() != 2 || !term[0].is_number_integer() || !term[1].is_number()) {
      throw InputError("polynomial: every term must be [degree, value]");
    }
    const int deg = term[0].get<int>();
    if (deg < 0 || deg > 64) throw InputError("polynomial: degree must lie in [0, 64]");
    const double v = term[1].get<double>();
    if (!std::isfinite(v)) throw InputError("polynomial: coefficient is not finite");
    if (static_cast<int>(c.size()) <= deg) c.resize(static_cast<std::size_t>(deg) + 1, 0.0);
    c[static_cast<std::size_t>(deg)] += v;
  }
  return Polynomial(std::move(c));
}

Json to_json(const Polynomial& p) {
  Json coeffs = Json::array();
  for (const auto& [alpha, c] : p.monomials()) coeffs.push_back(Json::array({alpha.order(), c}));
  return Json{{"n", 1}, {"coeffs", coeffs}};
}

Json to_json(const MollifierPlan& plan) {
  return Json{{"eta", plan.eta},
              {"J", plan.truncation},
              {"k", plan.k},
              {"R_gauss", plan.gauss_radius},
              {"epsilon", plan.epsilon}};
}

Json to_json(const ResidualReport& report) {
  Json pts = Json::array();
  for (const ResidualPoint& p : report.points) {
    pts.push_back(Json{{"x", p.x}, {"residual", number(p.residual)}});
  }
  return Json{{"points", pts},
              {"max_abs_residual", number(report.max_abs_residual)},
              {"scale", number(report.scale)},
              {"relative_max", number(report.relative_max)}};
}

Json to_json(const SpanSolution& sol) {
  Json achieved = Json::array();
  for (double v : sol.achieved.values()) achieved.push_back(number(v));
  Json coeffs = Json::array();
  for (double c : sol.coefficients) coeffs.push_back(number(c));
  return Json{{"beta", sol.beta.order()},
              {"point", sol.point},
              {"coefficients", coeffs},
              {"achieved", achieved},
              {"condition_number", number(sol.condition_number)},
              {"ill_conditioned", sol.ill_conditioned},
              {"rank", sol.rank},
              {"v", to_json(sol.v.ball(), sol.v.exterior())}};
}

Json to_json(const ApproximationReport& report, bool include_timing) {
  Json monomials = Json::array();
  for (const MonomialRecord& m : report.monomials) {
    Json rec{{"order", m.order},
             {"coefficient", number(m.coefficient)},
             {"eta", number(m.eta)},
             {"budget", number(m.budget)},
             {"error", number(m.error)},
             {"condition_number", number(m.condition_number)},
             {"support_radius", number(m.support_radius)}};
    monomials.push_back(rec);
  }
  Json errors = Json::array();
  for (double e : report.errors) errors.push_back(number(e));
  Json conds = Json::array();
  for (double c : report.condition_numbers) conds.push_back(number(c));
  Json outside = Json::array();
  for (const auto& [x, v] : report.outside_samples) outside.push_back(Json::array({x, number(v)}));
  Json out{{"method", report.method},
           {"s", report.params.s},
           {"n", report.params.n},
           {"k", report.k},
           {"epsilon", report.epsilon},
           {"error", number(report.error)},
           {"errors_by_order", errors},
           {"R_total", number(report.r_total)},
           {"support_ok", report.support_ok},
           {"outside_samples", outside},
           {"monomials", monomials},
           {"condition_numbers", conds},
           {"polynomial", to_json(report.polynomial)},
           {"polynomial_error", number(report.polynomial_error)}};
  if (report.plan) out["plan"] = to_json(*report.plan);
  if (report.residual) out["residual"] = to_json(*report.residual);
  if (include_timing) out["wall_time"] = report.wall_time;
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw InputError("csv_table: row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path dir = path.has_parent_path() ? path.parent_path() : ".";
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create directory " + dir.string() + ": " + ec.message());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InputError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw InputError("cannot move " + tmp.string() + " into place: " + ec.message());
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace fracdense
