#include "postlie/io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace postlie {

std::string format_double(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  return fmt::format("{:.16e}", v);
}

namespace {

void dump(const Json& j, int indent, int level, std::string& out) {
  const auto pad = [&](int l) { out.append(static_cast<std::size_t>(indent * l), ' '); };
  switch (j.type()) {
    case Json::value_t::number_float: out += format_double(j.get<double>()); return;
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        pad(level + 1);
        out += Json(key).dump();
        out += ": ";
        dump(value, indent, level + 1, out);
      }
      out += '\n';
      pad(level);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars stay on one line
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) {
          out += '\n';
          pad(level + 1);
        }
        dump(e, indent, level + 1, out);
      }
      if (!flat) {
        out += '\n';
        pad(level);
      }
      out += ']';
      return;
    }
    default: out += j.dump(); return;
  }
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) throw ParseError(std::string("expected an object with field '") + name + "'");
  const auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("missing field '") + name + "'");
  return *it;
}

std::size_t positive_dim(const Json& j) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) throw ParseError("'dim' must be a positive integer");
  return j.get<std::size_t>();
}

Rational rational_entry(const Json& e) {
  if (e.is_number_integer()) return Rational(e.get<long>());
  if (e.is_number_float()) return rational_from_double(e.get<double>());
  if (e.is_string()) return parse_rational(e.get<std::string>());
  throw ParseError("matrix entries must be numbers or \"p/q\" strings");
}

double real_entry(const Json& e) {
  if (e.is_number()) return e.get<double>();
  if (e.is_string()) return parse_rational(e.get<std::string>()).get_d();
  throw ParseError("matrix entries must be numbers or \"p/q\" strings");
}

template <class T, class Entry>
Matrix<T> matrix_from_json(const Json& j, Entry entry) {
  const Json& rows = j.is_array() ? j : field(j, "rows");
  if (!rows.is_array() || rows.empty()) throw ParseError("'rows' must be a non-empty array");
  const std::size_t n = rows.size();
  if (j.is_object() && j.contains("dim") && positive_dim(j["dim"]) != n)
    throw ParseError("'dim' does not match the number of rows");
  Matrix<T> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n) throw ParseError("matrix rows must all have length " + std::to_string(n));
    for (std::size_t k = 0; k < n; ++k) m(i, k) = entry(rows[i][k]);
  }
  return m;
}

Json rows_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.dim(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json rows_json(const RationalMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.dim(); ++k) row.push_back(to_string(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

double max_or_zero(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump(j, indent, 0, out);
  out += '\n';
  return out;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_json(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

Json to_json(const RealMatrix& m) { return Json{{"dim", m.dim()}, {"rows", rows_json(m)}}; }
Json to_json(const RationalMatrix& m) { return Json{{"dim", m.dim()}, {"rows", rows_json(m)}}; }

RealMatrix real_matrix_from_json(const Json& j) { return matrix_from_json<double>(j, real_entry); }
RationalMatrix rational_matrix_from_json(const Json& j) { return matrix_from_json<Rational>(j, rational_entry); }

Json to_json(const SplittingSpec& spec) {
  Json j{{"dim", spec.dim()}, {"kind", to_string(spec.kind())}};
  if (spec.kind() == SplittingKind::custom) j["matrix"] = rows_json(spec.coefficients());
  return j;
}

SplittingSpec spec_from_json(const Json& j) {
  const std::size_t n = positive_dim(field(j, "dim"));
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) throw ParseError("'kind' must be a string");
  switch (parse_splitting_kind(kind.get<std::string>())) {
    case SplittingKind::lower_triangular: return SplittingSpec::lower_triangular(n);
    case SplittingKind::qr_skew: return SplittingSpec::qr_skew(n);
    case SplittingKind::custom: {
      const RationalMatrix c = rational_matrix_from_json(field(j, "matrix"));
      if (c.dim() != n * n) throw ParseError("custom 'matrix' must be n^2 x n^2 with n = " + std::to_string(n));
      return SplittingSpec::custom(n, c);
    }
  }
  throw ParseError("unreachable splitting kind");
}

Json to_json(const ValidationReport& r) {
  Json j{{"dim", r.dim},
         {"kind", to_string(r.kind)},
         {"exact", r.exact},
         {"samples", r.sample_count},
         {"seed", r.seed ? Json(*r.seed) : Json(nullptr)},
         {"tolerance", r.tolerance},
         {"residuals",
          {{"mybe_plus", r.mybe_plus},
           {"mybe_minus", r.mybe_minus},
           {"mcybe", r.mcybe},
           {"closure_plus", r.closure_plus},
           {"closure_minus", r.closure_minus}}},
         {"max_residual", r.max_residual()},
         {"validated", r.validated}};
  return j;
}

template <class T>
Json to_json(const GradedSeries<T>& series) {
  Json coeffs = Json::array();
  for (std::size_t n = 1; n <= series.order; ++n) coeffs.push_back(Json{{"n", n}, {"value", to_json(series[n])}});
  return Json{{"order", series.order},
              {"splitting", to_json(series.spec)},
              {"base_point", to_json(series.base_point)},
              {"coefficients", coeffs}};
}

template Json to_json<double>(const GradedSeries<double>&);
template Json to_json<Rational>(const GradedSeries<Rational>&);

Json to_json(const StructureConstants& sc) {
  Json c = Json::array();
  for (std::size_t i = 0; i < sc.dim(); ++i)
    for (std::size_t k = i + 1; k < sc.dim(); ++k)
      for (std::size_t l = 0; l < sc.dim(); ++l)
        if (sgn(sc(i, k, l)) != 0) c.push_back(Json{i, k, l, to_string(sc(i, k, l))});
  return Json{{"dim", sc.dim()}, {"labels", sc.labels()}, {"c", c}};
}

AlgebraDocument algebra_from_json(const Json& j) {
  const std::size_t d = positive_dim(field(j, "dim"));
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    if (!j["labels"].is_array()) throw ParseError("'labels' must be an array of strings");
    for (const auto& l : j["labels"]) {
      if (!l.is_string()) throw ParseError("'labels' must be an array of strings");
      labels.push_back(l.get<std::string>());
    }
  }
  StructureConstants sc(d, labels);
  const Json& c = field(j, "c");
  if (!c.is_array()) throw ParseError("'c' must be an array of [i, j, k, \"p/q\"] entries");
  for (const auto& e : c) {
    if (!e.is_array() || e.size() != 4 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
        !e[2].is_number_integer())
      throw ParseError("'c' entries must be [i, j, k, \"p/q\"]");
    const auto i = e[0].get<long long>(), k = e[1].get<long long>(), l = e[2].get<long long>();
    const auto dd = static_cast<long long>(d);
    if (i < 0 || k < 0 || l < 0 || i >= dd || k >= dd || l >= dd) throw ParseError("structure constant index out of range");
    sc.set(static_cast<std::size_t>(i), static_cast<std::size_t>(k), static_cast<std::size_t>(l), rational_entry(e[3]));
  }
  sc.validate();
  AlgebraDocument doc{std::move(sc), std::nullopt};
  if (j.contains("pi_plus")) {
    doc.pi_plus = rational_matrix_from_json(j["pi_plus"]);
    if (doc.pi_plus->dim() != d) throw ParseError("'pi_plus' must be d x d");
  }
  return doc;
}

FlowProblem problem_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("flow problem must be a JSON object");
  FlowProblem p = j.contains("preset") ? preset(field(j, "preset").get<std::string>())
                                       : FlowProblem{spec_from_json(field(j, "spec")),
                                                     real_matrix_from_json(field(j, "a0")),
                                                     {},
                                                     FlowMethod::factorized,
                                                     {}};
  if (j.contains("spec") && j.contains("preset")) p.spec = spec_from_json(j["spec"]);
  if (j.contains("a0") && j.contains("preset")) p.a0 = real_matrix_from_json(j["a0"]);
  if (j.contains("t_grid")) {
    const Json& g = j["t_grid"];
    if (g.is_array()) {
      p.t_grid.clear();
      for (const auto& t : g) {
        if (!t.is_number()) throw ParseError("'t_grid' entries must be numbers");
        p.t_grid.push_back(t.get<double>());
      }
    } else if (g.is_object()) {
      p.t_grid = uniform_grid(field(g, "t_end").get<double>(), field(g, "step").get<double>());
    } else {
      throw ParseError("'t_grid' must be an array or {\"t_end\", \"step\"}");
    }
  } else if (!j.contains("preset")) {
    throw ParseError("missing field 't_grid'");
  }
  if (j.contains("method")) p.method = parse_flow_method(j["method"].get<std::string>());
  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    if (!t.is_object()) throw ParseError("'tolerances' must be an object");
    if (t.contains("chi_tol")) p.tol.chi_tol = t["chi_tol"].get<double>();
    if (t.contains("substep_norm_cap")) p.tol.substep_norm_cap = t["substep_norm_cap"].get<double>();
    if (t.contains("rk4_step")) p.tol.rk4_step = t["rk4_step"].get<double>();
    if (t.contains("magnus_order")) p.tol.magnus_order = t["magnus_order"].get<std::size_t>();
  }
  return p;
}

Json to_json(const FlowProblem& p) {
  return Json{{"spec", to_json(p.spec)},
              {"a0", to_json(p.a0)},
              {"t_grid", p.t_grid},
              {"method", to_string(p.method)},
              {"tolerances",
               {{"chi_tol", p.tol.chi_tol},
                {"substep_norm_cap", p.tol.substep_norm_cap},
                {"rk4_step", p.tol.rk4_step},
                {"magnus_order", p.tol.magnus_order}}}};
}

Json to_json(const FlowTrajectory& traj) {
  Json samples = Json::array();
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    Json entry{{"t", s.t}, {"a", rows_json(s.a)}, {"transporter", rows_json(s.transporter)}};
    if (i < traj.spectral_drift.size()) entry["spectral_drift"] = traj.spectral_drift[i];
    if (i < traj.lax_defect.size()) entry["lax_defect"] = traj.lax_defect[i];
    samples.push_back(std::move(entry));
  }
  return Json{{"method", to_string(traj.method)},
              {"substeps", traj.substeps},
              {"reorthogonalizations", traj.reorthogonalizations},
              {"max_spectral_drift", max_or_zero(traj.spectral_drift)},
              {"max_lax_defect", max_or_zero(traj.lax_defect)},
              {"samples", samples}};
}

std::string to_csv(const FlowTrajectory& traj) {
  std::string out = "t";
  const std::size_t n = traj.samples.empty() ? 0 : traj.samples.front().a.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) out += fmt::format(",a_{}_{}", i + 1, k + 1);
  out += ",spectral_drift,lax_defect\n";
  for (std::size_t s = 0; s < traj.samples.size(); ++s) {
    const auto& sample = traj.samples[s];
    out += fmt::format("{:.16e}", sample.t);
    for (double v : sample.a.values()) out += fmt::format(",{:.16e}", v);
    out += s < traj.spectral_drift.size() ? fmt::format(",{:.16e}", traj.spectral_drift[s]) : ",";
    out += s < traj.lax_defect.size() ? fmt::format(",{:.16e}", traj.lax_defect[s]) : ",";
    out += '\n';
  }
  return out;
}

}  // namespace postlie
