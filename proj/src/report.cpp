#include "hgeo/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

namespace hgeo {

namespace {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Emission. nlohmann's own float printer uses the shortest round-trip form;
// the report format asks for a fixed 17 significant digits, so numbers are
// written by hand and only strings/structure are delegated to the library.

void dump(const json& v, std::string& out, int indent);

bool is_flat_array(const json& v) {
  if (!v.is_array()) return false;
  for (const auto& e : v)
    if (e.is_array() || e.is_object()) return false;
  return true;
}

void newline(std::string& out, int indent) {
  out += '\n';
  out.append(static_cast<std::size_t>(indent), ' ');
}

void dump(const json& v, std::string& out, int indent) {
  switch (v.type()) {
    case json::value_t::number_float:
      out += format_number(v.get<double>());
      return;
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(out, indent + 2);
        out += json(it.key()).dump();
        out += ": ";
        dump(it.value(), out, indent + 2);
      }
      newline(out, indent);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      if (is_flat_array(v)) {
        out += '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out += ", ";
          dump(v[i], out, indent);
        }
        out += ']';
        return;
      }
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        newline(out, indent + 2);
        dump(v[i], out, indent + 2);
      }
      newline(out, indent);
      out += ']';
      return;
    }
    default:
      out += v.dump();
  }
}

// ordered_json would keep insertion order, but the emitter takes plain json
// whose keys are sorted; that is deterministic and easy to diff.

json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return json(x);
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

json rows_json(const Mat& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vec_json(m.row(r).transpose()));
  return a;
}

json columns_json(const Mat& m) {
  json a = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) a.push_back(vec_json(m.col(c)));
  return a;
}

json signature_json(const Signature& s) { return json::array({s.positive, s.negative, s.zero}); }

json algebra_json(const AlgebraSpec& spec) {
  json a;
  a["family"] = spec.family;
  if (spec.family == "so3" || spec.family == "sl2") {
    a["a"] = spec.a;
    a["b"] = spec.b;
    a["c"] = spec.c;
  } else if (spec.family == "heisenberg") {
    a["scale"] = spec.scale;
  } else {
    a["dim"] = spec.dim;
    json br = json::array();
    for (const auto& e : spec.brackets)
      br.push_back(json::array({static_cast<int>(e[0]), static_cast<int>(e[1]),
                                static_cast<int>(e[2]), e[3]}));
    a["brackets"] = br;
  }
  if (!spec.label.empty()) a["label"] = spec.label;
  return a;
}

json killing_json(const KillingData& k) {
  json j;
  j["matrix"] = rows_json(k.matrix);
  j["signature"] = signature_json(k.signature);
  j["radical_dim"] = static_cast<int>(k.radical_basis.cols());
  j["radical_basis"] = columns_json(k.radical_basis);
  j["tol"] = k.tol;
  return j;
}

// ---------------------------------------------------------------------------
// Parsing.

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorKind::input, "malformed report: " + what);
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) bad(std::string("missing field '") + key + "'");
  return obj.at(key);
}

double get_number(const json& v) {
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) bad("expected a number");
  return v.get<double>();
}

int get_int(const json& v) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) bad("expected an integer");
  return v.get<int>();
}

bool get_bool(const json& v) {
  if (!v.is_boolean()) bad("expected a boolean");
  return v.get<bool>();
}

std::string get_string(const json& v) {
  if (!v.is_string()) bad("expected a string");
  return v.get<std::string>();
}

Vec get_vec(const json& v) {
  if (!v.is_array()) bad("expected an array");
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = get_number(v[i]);
  return out;
}

Mat get_rows(const json& v, Eigen::Index cols_if_empty = 0) {
  if (!v.is_array()) bad("expected an array of rows");
  if (v.empty()) return Mat(0, cols_if_empty);
  const Eigen::Index cols = static_cast<Eigen::Index>(v[0].size());
  Mat out(static_cast<Eigen::Index>(v.size()), cols);
  for (std::size_t r = 0; r < v.size(); ++r) {
    const Vec row = get_vec(v[r]);
    if (row.size() != cols) bad("ragged matrix");
    out.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return out;
}

Signature get_signature(const json& v) {
  if (!v.is_array() || v.size() != 3) bad("signature must be [p, q, k]");
  return Signature{get_int(v[0]), get_int(v[1]), get_int(v[2])};
}

RayKind get_kind(const std::string& s) {
  if (s == to_string(RayKind::isolated)) return RayKind::isolated;
  if (s == to_string(RayKind::continuum_member)) return RayKind::continuum_member;
  bad("unknown ray kind '" + s + "'");
}

KillingSign get_sign(const std::string& s) {
  for (auto k : {KillingSign::positive, KillingSign::negative, KillingSign::null})
    if (s == to_string(k)) return k;
  bad("unknown k_sign '" + s + "'");
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

bool same(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (!same(a.data()[i], b.data()[i])) return false;
  return true;
}

}  // namespace

std::string format_number(double value) {
  if (!std::isfinite(value)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  std::string s(buf);
  // Keep floats recognizable as floats on re-read.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string report_to_json(const SolveReport& report, const ProblemConfig& config) {
  json doc;
  doc["version"] = kReportVersion;
  doc["algebra"] = algebra_json(config.algebra);
  {
    json metric;
    const int m = report.killing.matrix.rows() > 0 ? static_cast<int>(report.killing.matrix.rows())
                                                   : 0;
    metric["alpha"] = rows_json(config.alpha ? *config.alpha : Mat::Identity(m, m));
    metric["V"] = vec_json(config.drift ? *config.drift : Vec::Zero(m));
    doc["metric"] = metric;
  }
  doc["killing"] = killing_json(report.killing);

  json rays = json::array();
  for (const auto& r : report.rays) {
    json j;
    j["y"] = vec_json(r.y.y);
    j["killing_value"] = number(r.y.killing_value);
    j["isotropy"] = vec_json(r.isotropy);
    j["residual_norm"] = r.residual_norm;
    j["lambda"] = r.lambda;
    j["kind"] = to_string(r.kind);
    j["k_sign"] = to_string(r.k_sign);
    rays.push_back(j);
  }
  doc["rays"] = rays;
  doc["continuum_detected"] = report.continuum_detected;

  if (report.variational) {
    const auto& v = *report.variational;
    doc["variational"] = json{{"degenerate_plateau", v.degenerate_plateau},
                              {"critical_points", v.critical_points},
                              {"maxima", v.maxima},
                              {"minima", v.minima},
                              {"saddles", v.saddles}};
  } else {
    doc["variational"] = nullptr;
  }
  if (report.case1) {
    const auto& c = *report.case1;
    doc["case1"] = json{{"n1", vec_json(c.n1)},
                        {"n2", vec_json(c.n2)},
                        {"residual1", c.residual1},
                        {"residual2", c.residual2}};
  } else {
    doc["case1"] = nullptr;
  }

  {
    const auto& a = report.audit;
    json j;
    j["required_minimum"] = a.required_minimum;
    j["count"] = a.infinite ? json("infinity") : json(a.ray_count);
    j["ray_count"] = a.ray_count;
    j["signature"] = signature_json(a.signature);
    j["pass"] = a.pass;
    doc["audit"] = j;
  }
  {
    const auto& s = report.stats;
    doc["stats"] = json{{"seeds", s.seeds},
                        {"converged", s.converged},
                        {"extra_seeds", s.extra_seeds},
                        {"rejected", s.rejected},
                        {"max_iterations", s.max_iterations},
                        {"mean_iterations", s.mean_iterations},
                        {"elapsed_ms", s.elapsed_ms},
                        {"isa", s.isa}};
  }

  std::string out;
  dump(doc, out, 0);
  out += '\n';
  return out;
}

SolveReport report_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::input, std::string("report is not valid JSON: ") + e.what());
  }
  if (get_string(field(doc, "version")) != kReportVersion)
    bad("unsupported version (expected " + std::string(kReportVersion) + ")");

  SolveReport report;
  {
    const json& k = field(doc, "killing");
    report.killing.matrix = get_rows(field(k, "matrix"));
    report.killing.signature = get_signature(field(k, "signature"));
    const Mat cols = get_rows(field(k, "radical_basis"));
    report.killing.radical_basis =
        cols.size() == 0 ? Mat(report.killing.matrix.rows(), 0) : Mat(cols.transpose());
    report.killing.tol = get_number(field(k, "tol"));
    if (get_int(field(k, "radical_dim")) != report.killing.radical_basis.cols())
      bad("radical_dim disagrees with radical_basis");
  }
  for (const auto& j : field(doc, "rays")) {
    GeodesicRay r;
    r.y.y = get_vec(field(j, "y"));
    r.y.killing_value = get_number(field(j, "killing_value"));
    r.isotropy = get_vec(field(j, "isotropy"));
    r.residual_norm = get_number(field(j, "residual_norm"));
    r.lambda = get_number(field(j, "lambda"));
    r.kind = get_kind(get_string(field(j, "kind")));
    r.k_sign = get_sign(get_string(field(j, "k_sign")));
    report.rays.push_back(std::move(r));
  }
  report.continuum_detected = get_bool(field(doc, "continuum_detected"));

  if (const json& v = field(doc, "variational"); !v.is_null()) {
    VariationalSummary s;
    s.degenerate_plateau = get_bool(field(v, "degenerate_plateau"));
    s.critical_points = get_int(field(v, "critical_points"));
    s.maxima = get_int(field(v, "maxima"));
    s.minima = get_int(field(v, "minima"));
    s.saddles = get_int(field(v, "saddles"));
    report.variational = s;
  }
  if (const json& c = field(doc, "case1"); !c.is_null()) {
    SupportPoints p;
    p.n1 = get_vec(field(c, "n1"));
    p.n2 = get_vec(field(c, "n2"));
    p.residual1 = get_number(field(c, "residual1"));
    p.residual2 = get_number(field(c, "residual2"));
    report.case1 = p;
  }
  {
    const json& a = field(doc, "audit");
    report.audit.required_minimum = get_int(field(a, "required_minimum"));
    const json& count = field(a, "count");
    report.audit.infinite = count.is_string();
    if (count.is_string() && count.get<std::string>() != "infinity")
      bad("audit.count must be an integer or \"infinity\"");
    report.audit.ray_count = get_int(field(a, "ray_count"));
    if (!report.audit.infinite && get_int(count) != report.audit.ray_count)
      bad("audit.count disagrees with audit.ray_count");
    report.audit.signature = get_signature(field(a, "signature"));
    report.audit.pass = get_bool(field(a, "pass"));
  }
  {
    const json& s = field(doc, "stats");
    report.stats.seeds = get_int(field(s, "seeds"));
    report.stats.converged = get_int(field(s, "converged"));
    report.stats.extra_seeds = get_int(field(s, "extra_seeds"));
    report.stats.rejected = get_int(field(s, "rejected"));
    report.stats.max_iterations = get_int(field(s, "max_iterations"));
    report.stats.mean_iterations = get_number(field(s, "mean_iterations"));
    report.stats.elapsed_ms = get_number(field(s, "elapsed_ms"));
    report.stats.isa = get_string(field(s, "isa"));
  }
  return report;
}

bool reports_equal(const SolveReport& a, const SolveReport& b) {
  if (a.rays.size() != b.rays.size()) return false;
  for (std::size_t i = 0; i < a.rays.size(); ++i) {
    const auto& x = a.rays[i];
    const auto& y = b.rays[i];
    if (!same(x.y.y, y.y.y) || !same(x.y.killing_value, y.y.killing_value) ||
        !same(x.isotropy, y.isotropy) || !same(x.residual_norm, y.residual_norm) ||
        !same(x.lambda, y.lambda) || x.kind != y.kind || x.k_sign != y.k_sign)
      return false;
  }
  if (a.continuum_detected != b.continuum_detected) return false;
  if (!same(a.killing.matrix, b.killing.matrix) || !(a.killing.signature == b.killing.signature) ||
      !same(a.killing.radical_basis, b.killing.radical_basis) ||
      !same(a.killing.tol, b.killing.tol))
    return false;
  const auto& u = a.audit;
  const auto& v = b.audit;
  if (u.infinite != v.infinite || u.ray_count != v.ray_count || !(u.signature == v.signature) ||
      u.required_minimum != v.required_minimum || u.pass != v.pass)
    return false;
  const auto& s = a.stats;
  const auto& t = b.stats;
  if (s.seeds != t.seeds || s.converged != t.converged || s.extra_seeds != t.extra_seeds ||
      s.rejected != t.rejected || s.max_iterations != t.max_iterations ||
      !same(s.mean_iterations, t.mean_iterations) || !same(s.elapsed_ms, t.elapsed_ms) ||
      s.isa != t.isa)
    return false;
  if (a.case1.has_value() != b.case1.has_value()) return false;
  if (a.case1) {
    if (!same(a.case1->n1, b.case1->n1) || !same(a.case1->n2, b.case1->n2) ||
        !same(a.case1->residual1, b.case1->residual1) ||
        !same(a.case1->residual2, b.case1->residual2))
      return false;
  }
  if (a.variational.has_value() != b.variational.has_value()) return false;
  if (a.variational) {
    const auto& p = *a.variational;
    const auto& q = *b.variational;
    if (p.degenerate_plateau != q.degenerate_plateau || p.critical_points != q.critical_points ||
        p.maxima != q.maxima || p.minima != q.minima || p.saddles != q.saddles)
      return false;
  }
  return true;
}

std::string analysis_to_json(const Problem& problem, const ProblemConfig& config) {
  json doc;
  doc["version"] = kReportVersion;
  doc["algebra"] = algebra_json(config.algebra);
  doc["dim_g"] = problem.algebra.dim();
  doc["dim_m"] = problem.decomposition.m_dim();
  doc["killing"] = killing_json(problem.killing);
  const Signature& s = problem.killing.signature;
  doc["case"] = s.flat() ? "flat" : (s.indefinite() ? "indefinite" : "definite");
  doc["required_minimum"] = s.indefinite() ? 4 : 2;
  std::string out;
  dump(doc, out, 0);
  out += '\n';
  return out;
}

}  // namespace hgeo
