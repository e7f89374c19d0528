#include "hgeo/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

namespace hgeo {

namespace {

using json = nlohmann::json;

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"algebra", {"family", "a", "b", "c", "scale", "dim", "brackets", "label", "h_basis", "m_basis"}},
      {"metric", {"alpha", "V"}},
      {"solver", {"seeds", "newton_tol", "max_iter", "dedup_angle", "continuum_fraction",
                  "rng_seed", "threads", "case1_hyperplane"}},
      {"plot", {"plane", "axes", "resolution", "extent"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (!in_string && (line[i] == '#' || line[i] == ';')) return line.substr(0, i);
  }
  return line;
}

json parse_value(const std::string& raw) {
  try {
    return json::parse(raw);
  } catch (const json::exception&) {
    return json(raw);  // bare word
  }
}

double as_number(const json& v) {
  if (!v.is_number()) throw std::invalid_argument("expected a number");
  return v.get<double>();
}

int as_int(const json& v) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) throw std::invalid_argument("expected an integer");
  return v.get<int>();
}

Vec as_vector(const json& v) {
  if (!v.is_array()) throw std::invalid_argument("expected an array of numbers");
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = as_number(v[i]);
  return out;
}

// List of rows -> matrix.
Mat as_rows(const json& v) {
  if (!v.is_array() || v.empty()) throw std::invalid_argument("expected a nonempty array of rows");
  const size_t cols = v[0].is_array() ? v[0].size() : 0;
  Mat out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
  for (size_t r = 0; r < v.size(); ++r) {
    const Vec row = as_vector(v[r]);
    if (static_cast<size_t>(row.size()) != cols) throw std::invalid_argument("rows have unequal length");
    out.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return out;
}

// List of vectors -> matrix with those vectors as columns.
Mat as_columns(const json& v) {
  if (v.is_array() && v.empty()) return Mat(0, 0);
  return as_rows(v).transpose();
}

struct Located {
  json value;
  int line = 0;
};

}  // namespace

LieAlgebra build_algebra(const AlgebraSpec& spec) {
  if (spec.family == "so3") return families::so3(spec.a, spec.b, spec.c);
  if (spec.family == "sl2") return families::sl2(spec.a, spec.b, spec.c);
  if (spec.family == "heisenberg") return families::heisenberg(spec.scale);
  if (spec.family == "custom") {
    if (spec.dim <= 0) throw Error(ErrorKind::input, "custom algebra requires dim > 0");
    StructureBuilder builder(spec.dim);
    for (const auto& e : spec.brackets) {
      const int i = static_cast<int>(e[0]) - 1;
      const int j = static_cast<int>(e[1]) - 1;
      const int k = static_cast<int>(e[2]) - 1;
      builder.set(i, j, k, e[3]);
    }
    return builder.build(spec.label.empty() ? "custom" : spec.label);
  }
  throw Error(ErrorKind::input, "unknown algebra family '" + spec.family + "'");
}

ProblemConfig parse_config(const std::string& text) {
  std::vector<std::string> errors;
  auto fail = [&](int line, const std::string& msg) {
    errors.push_back("line " + std::to_string(line) + ": " + msg);
  };

  std::map<std::string, Located> entries;  // "section.key"
  std::istringstream in(text);
  std::string section;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos) {
      section = trim(line.substr(1, line.size() - 2));
      if (!allowed_keys().count(section)) fail(line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(line_no, "expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      fail(line_no, "key '" + key + "' outside of any section");
      continue;
    }
    const auto sec = allowed_keys().find(section);
    if (sec == allowed_keys().end()) continue;  // already reported
    if (!sec->second.count(key)) {
      fail(line_no, "unknown key '" + key + "' in section [" + section + "]");
      continue;
    }
    const std::string full = section + "." + key;
    if (entries.count(full)) {
      fail(line_no, "duplicate key '" + key + "' in section [" + section + "]");
      continue;
    }
    if (value.empty()) {
      fail(line_no, "missing value for '" + key + "'");
      continue;
    }
    entries[full] = Located{parse_value(value), line_no};
  }

  ProblemConfig cfg;
  auto with = [&](const std::string& key, auto&& apply) {
    const auto it = entries.find(key);
    if (it == entries.end()) return;
    try {
      apply(it->second.value);
    } catch (const std::exception& e) {
      fail(it->second.line, key + ": " + e.what());
    }
  };
  auto line_of = [&](const std::string& key) {
    const auto it = entries.find(key);
    return it == entries.end() ? 0 : it->second.line;
  };

  with("algebra.family", [&](const json& v) {
    if (!v.is_string()) throw std::invalid_argument("expected a family name");
    cfg.algebra.family = v.get<std::string>();
    if (cfg.algebra.family != "so3" && cfg.algebra.family != "sl2" &&
        cfg.algebra.family != "heisenberg" && cfg.algebra.family != "custom")
      throw std::invalid_argument("unknown family '" + cfg.algebra.family +
                                  "' (expected so3, sl2, heisenberg or custom)");
  });
  with("algebra.a", [&](const json& v) { cfg.algebra.a = as_number(v); });
  with("algebra.b", [&](const json& v) { cfg.algebra.b = as_number(v); });
  with("algebra.c", [&](const json& v) { cfg.algebra.c = as_number(v); });
  with("algebra.scale", [&](const json& v) { cfg.algebra.scale = as_number(v); });
  with("algebra.dim", [&](const json& v) { cfg.algebra.dim = as_int(v); });
  with("algebra.label", [&](const json& v) {
    cfg.algebra.label = v.is_string() ? v.get<std::string>() : v.dump();
  });
  with("algebra.brackets", [&](const json& v) {
    if (!v.is_array()) throw std::invalid_argument("expected a list of [i, j, k, value]");
    for (const auto& e : v) {
      const Vec entry = as_vector(e);
      if (entry.size() != 4) throw std::invalid_argument("bracket entries are [i, j, k, value]");
      cfg.algebra.brackets.push_back({entry(0), entry(1), entry(2), entry(3)});
    }
  });
  with("algebra.h_basis", [&](const json& v) { cfg.h_basis = as_columns(v); });
  with("algebra.m_basis", [&](const json& v) { cfg.m_basis = as_columns(v); });
  with("metric.alpha", [&](const json& v) { cfg.alpha = as_rows(v); });
  with("metric.V", [&](const json& v) { cfg.drift = as_vector(v); });
  with("solver.seeds", [&](const json& v) { cfg.solve.seeds = as_int(v); });
  with("solver.newton_tol", [&](const json& v) { cfg.solve.newton_tol = as_number(v); });
  with("solver.max_iter", [&](const json& v) { cfg.solve.max_iter = as_int(v); });
  with("solver.dedup_angle", [&](const json& v) { cfg.solve.dedup_angle = as_number(v); });
  with("solver.continuum_fraction",
       [&](const json& v) { cfg.solve.continuum_fraction = as_number(v); });
  with("solver.rng_seed", [&](const json& v) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      throw std::invalid_argument("expected a nonnegative integer");
    cfg.solve.rng_seed = v.get<std::uint64_t>();
  });
  with("solver.threads", [&](const json& v) { cfg.solve.threads = as_int(v); });
  with("solver.case1_hyperplane", [&](const json& v) { cfg.case1_hyperplane = as_columns(v); });
  with("plot.plane", [&](const json& v) {
    if (!v.is_string()) throw std::invalid_argument("expected a plane such as x3=0");
    cfg.plot.plane = v.get<std::string>();
  });
  with("plot.axes", [&](const json& v) { cfg.plot.axes = as_columns(v); });
  with("plot.resolution", [&](const json& v) { cfg.plot.resolution = as_int(v); });
  with("plot.extent", [&](const json& v) { cfg.plot.extent = as_number(v); });

  if (errors.empty()) {
    try {
      cfg.solve.validate();
    } catch (const Error& e) {
      fail(line_of("solver.seeds"), e.what());
    }
    if (cfg.plot.resolution < 8) fail(line_of("plot.resolution"), "plot.resolution must be >= 8");
    if (!(cfg.plot.extent > 0.0)) fail(line_of("plot.extent"), "plot.extent must be positive");
  }

  // Semantic checks that need the algebra.
  if (errors.empty()) {
    try {
      const LieAlgebra algebra = build_algebra(cfg.algebra);
      const int n = algebra.dim();
      const int h = cfg.h_basis ? static_cast<int>(cfg.h_basis->cols()) : 0;
      const int m = n - h;
      bool dims_ok = true;
      if (cfg.h_basis && cfg.h_basis->rows() != n) {
        fail(line_of("algebra.h_basis"), "dimension mismatch: h_basis vectors must have length " +
                                             std::to_string(n));
        dims_ok = false;
      }
      if (cfg.m_basis && (cfg.m_basis->rows() != n || cfg.m_basis->cols() != m)) {
        fail(line_of("algebra.m_basis"), "dimension mismatch: m_basis needs " + std::to_string(m) +
                                             " vectors of length " + std::to_string(n));
        dims_ok = false;
      }
      if (cfg.alpha && (cfg.alpha->rows() != m || cfg.alpha->cols() != m)) {
        fail(line_of("metric.alpha"), "dimension mismatch: alpha must be " + std::to_string(m) +
                                          "x" + std::to_string(m));
        dims_ok = false;
      }
      if (cfg.drift && cfg.drift->size() != m) {
        fail(line_of("metric.V"), "dimension mismatch: V must have " + std::to_string(m) +
                                      " entries, got " + std::to_string(cfg.drift->size()));
        dims_ok = false;
      }
      if (cfg.case1_hyperplane &&
          (cfg.case1_hyperplane->rows() != m || cfg.case1_hyperplane->cols() != m - 1)) {
        fail(line_of("solver.case1_hyperplane"),
             "dimension mismatch: case1_hyperplane needs " + std::to_string(m - 1) +
                 " vectors of length " + std::to_string(m));
        dims_ok = false;
      }
      if (cfg.plot.axes && (cfg.plot.axes->rows() != m || cfg.plot.axes->cols() != 2)) {
        fail(line_of("plot.axes"), "dimension mismatch: plot.axes needs 2 vectors of length " +
                                       std::to_string(m));
        dims_ok = false;
      }
      if (dims_ok && cfg.drift) {
        const Mat alpha = cfg.alpha ? *cfg.alpha : Mat::Identity(m, m);
        const double vv = cfg.drift->dot(alpha * *cfg.drift);
        if (!(vv < 1.0 - 1e-12)) {
          std::ostringstream os;
          os.precision(17);
          os << "Randers condition violated: alpha(V,V) = " << vv << " is not < 1";
          fail(line_of("metric.V"), os.str());
          dims_ok = false;
        }
      }
      if (dims_ok) (void)build_problem(cfg);
    } catch (const Error& e) {
      fail(line_of("algebra.family"), e.what());
    }
  }

  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw Error(ErrorKind::input, msg);
  }
  return cfg;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::input, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

Problem build_problem(const ProblemConfig& config) {
  LieAlgebra algebra = build_algebra(config.algebra);
  const int n = algebra.dim();
  ReductiveDecomposition decomposition = ReductiveDecomposition::trivial(algebra);
  if (config.h_basis && config.h_basis->cols() > 0) {
    Mat m_basis;
    if (config.m_basis) {
      m_basis = *config.m_basis;
    } else {
      // Euclidean orthogonal complement of h.
      Eigen::JacobiSVD<Mat> svd(config.h_basis->transpose(), Eigen::ComputeFullV);
      m_basis = svd.matrixV().rightCols(n - config.h_basis->cols());
    }
    decomposition = ReductiveDecomposition(algebra, m_basis, *config.h_basis);
  } else if (config.m_basis) {
    decomposition = ReductiveDecomposition(algebra, *config.m_basis, Mat(n, 0));
  }
  const int m = decomposition.m_dim();
  RandersStructure randers(config.alpha ? *config.alpha : Mat::Identity(m, m),
                           config.drift ? *config.drift : Vec::Zero(m));
  KillingData killing = killing_data(algebra, decomposition);
  return Problem{std::move(algebra), std::move(decomposition), std::move(randers),
                 std::move(killing)};
}

}  // namespace hgeo
