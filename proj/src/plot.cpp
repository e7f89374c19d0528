#include "hgeo/plot.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <regex>

#include <Eigen/Dense>

namespace hgeo {

namespace {

constexpr double kCanvas = 800.0;
constexpr double kMargin = 20.0;
constexpr double kClipFactor = 1.5;
constexpr double kPlaneTol = 1e-8;
constexpr double kRootTol = 1e-9;

Vec direction(const SliceSpec& spec, double theta) {
  return std::cos(theta) * spec.axes.col(0) + std::sin(theta) * spec.axes.col(1);
}

SlicePoint in_plane(const Vec& z, const SliceSpec& spec) {
  return SlicePoint{z, spec.axes.col(0).dot(z), spec.axes.col(1).dot(z)};
}

// Geodesic residual of a unit direction, scale-free (r is homogeneous of
// degree 2 in x after the alpha normalization).
double direction_residual(const Vec& d, const Problem& p) {
  const Vec x = d / p.randers.alpha_norm(d);
  return general_residual(p.decomposition.embed(x), p.decomposition, p.randers, p.algebra).norm;
}

double golden_min(double lo, double hi, const std::function<double(double)>& f) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  std::string s(buf);
  return s == "-0.0000" ? "0.0000" : s;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

SliceSpec make_slice(const PlotSettings& settings, int m_dim) {
  if (settings.resolution < 8) throw Error(ErrorKind::input, "plot resolution must be >= 8");
  if (!(settings.extent > 0.0)) throw Error(ErrorKind::input, "plot extent must be positive");
  SliceSpec spec;
  spec.resolution = settings.resolution;
  spec.extent = settings.extent;
  if (settings.axes) {
    const Mat& a = *settings.axes;
    if (a.rows() != m_dim || a.cols() != 2)
      throw Error(ErrorKind::input, "plot axes must be two vectors of length " +
                                        std::to_string(m_dim));
    Eigen::HouseholderQR<Mat> qr(a);
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    if (std::abs(r(1, 1)) <= 1e-10 * std::max(1.0, std::abs(r(0, 0))))
      throw Error(ErrorKind::input, "plot axes are linearly dependent");
    Mat q = qr.householderQ() * Mat::Identity(m_dim, 2);
    // Keep the orientation of the given vectors.
    for (int c = 0; c < 2; ++c)
      if (r(c, c) < 0.0) q.col(c) = -q.col(c);
    spec.axes = q;
    spec.label = "custom axes";
    return spec;
  }
  if (m_dim == 2) {
    spec.axes = Mat::Identity(2, 2);
    spec.label = "m";
    return spec;
  }
  static const std::regex pattern(R"(\s*x\s*([0-9]+)\s*=\s*0+(\.0*)?\s*)");
  std::smatch match;
  if (m_dim != 3 || !std::regex_match(settings.plane, match, pattern))
    throw Error(ErrorKind::input, "plane '" + settings.plane +
                                      "' is not supported: use xk=0 in dimension 3 or give "
                                      "explicit axes");
  const int fixed = std::stoi(match[1].str()) - 1;
  if (fixed < 0 || fixed >= 3)
    throw Error(ErrorKind::input, "plane '" + settings.plane + "': coordinate out of range");
  spec.axes = Mat::Zero(3, 2);
  int col = 0;
  for (int i = 0; i < 3; ++i)
    if (i != fixed) spec.axes(i, col++) = 1.0;
  spec.label = "x" + std::to_string(fixed + 1) + "=0";
  return spec;
}

SliceGeometry compute_slice(const Problem& problem, const SolveReport& report,
                            const SliceSpec& spec) {
  const int m = problem.decomposition.m_dim();
  if (spec.axes.rows() != m || spec.axes.cols() != 2)
    throw Error(ErrorKind::input, "slice axes do not match dim m");
  SliceGeometry g;
  g.spec = spec;
  const int n = spec.resolution;
  const double step = 2.0 * std::numbers::pi / n;
  const double clip = kClipFactor * spec.extent;
  const KillingData& k = problem.killing;

  // Indicatrix: z = d / F(d) solves F(z) = 1 exactly along each ray.
  for (int i = 0; i < n; ++i) {
    const Vec d = direction(spec, i * step);
    g.indicatrix.push_back(in_plane(d / randers_norm(d, problem.randers), spec));
  }

  // Killing (pseudo-)sphere: z = d / sqrt|K(d,d)| with sign of K(d,d).
  bool any_nonzero = false;
  KillingBranch current;
  int current_start = 0;
  bool wraps = false;  // the first branch starts at angle 0 and the last ends at 2 pi
  int first_start = -1;
  auto flush = [&] {
    if (current.points.size() >= 2) {
      if (g.killing.empty()) first_start = current_start;
      g.killing.push_back(std::move(current));
    }
    current = KillingBranch{};
  };
  for (int i = 0; i < n; ++i) {
    const Vec d = direction(spec, i * step);
    const double q = k.form(d, d);
    const int sign = q > 0.0 ? 1 : -1;
    const bool usable = std::abs(q) > k.tol;
    any_nonzero = any_nonzero || usable;
    SlicePoint p;
    bool inside = false;
    if (usable) {
      p = in_plane(d / std::sqrt(std::abs(q)), spec);
      inside = std::hypot(p.u, p.v) <= clip;
    }
    if (!inside || (!current.points.empty() && current.sign != sign)) flush();
    if (!inside) continue;
    if (current.points.empty()) current_start = i;
    current.sign = sign;
    current.points.push_back(p);
    if (i == n - 1) wraps = true;
  }
  const bool last_open = current.points.size() >= 2;
  flush();
  // Join the last and first polylines when the curve passes through angle 0.
  if (wraps && last_open && first_start == 0 && g.killing.size() >= 2 &&
      g.killing.front().sign == g.killing.back().sign) {
    auto& last = g.killing.back();
    last.points.insert(last.points.end(), g.killing.front().points.begin(),
                       g.killing.front().points.end());
    g.killing.erase(g.killing.begin());
  }
  if (!any_nonzero) {
    g.killing.clear();
    g.warnings.push_back("Killing form vanishes on this plane; S_K layer omitted");
  }

  // Report rays lying in the plane.
  for (std::size_t i = 0; i < report.rays.size(); ++i) {
    const Vec& y = report.rays[i].y.y;
    if (y.size() != m) continue;
    const Vec inside = spec.axes * (spec.axes.transpose() * y);
    if ((y - inside).norm() > kPlaneTol || inside.norm() <= kPlaneTol) continue;
    g.rays.push_back(SliceRay{in_plane(y, spec), static_cast<int>(i), report.rays[i].residual_norm});
  }

  // Intersection of a continuum with the plane.
  if (report.continuum_detected && problem.decomposition.is_trivial()) {
    std::vector<double> res(n);
    for (int i = 0; i < n; ++i) res[i] = direction_residual(direction(spec, i * step), problem);
    int below = 0;
    for (double r : res) below += r < kRootTol;
    if (below > n / 4) {
      g.warnings.push_back("plane lies inside a continuum of geodesic rays");
    } else {
      for (int i = 0; i < n; ++i) {
        const double prev = res[(i + n - 1) % n];
        const double next = res[(i + 1) % n];
        if (!(res[i] <= prev && res[i] < next)) continue;
        const double theta = golden_min((i - 1) * step, (i + 1) * step, [&](double t) {
          return direction_residual(direction(spec, t), problem);
        });
        const Vec d = direction(spec, theta);
        const double r = direction_residual(d, problem);
        if (!(r < kRootTol)) continue;
        const Vec y = d / randers_norm(d, problem.randers);
        bool known = false;
        for (const auto& ray : g.rays)
          if (ray_angle(ray.y.z, y, problem.randers) < 1e-6) known = true;
        if (!known) g.rays.push_back(SliceRay{in_plane(y, spec), -1, r});
      }
    }
  }
  return g;
}

std::string render_svg(const SliceGeometry& g) {
  const double scale = (0.5 * kCanvas - kMargin) / g.spec.extent;
  auto px = [&](double u) { return fmt(0.5 * kCanvas + scale * u); };
  auto py = [&](double v) { return fmt(0.5 * kCanvas - scale * v); };
  auto points = [&](const std::vector<SlicePoint>& pts) {
    std::string s;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) s += ' ';
      s += px(pts[i].u) + "," + py(pts[i].v);
    }
    return s;
  };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"800\" "
         "viewBox=\"0 0 800 800\">\n";
  out += "  <title>slice " + escape(g.spec.label) + "</title>\n";
  out += "  <rect id=\"background\" x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\"/>\n";
  out += "  <g id=\"axes\" stroke=\"#999999\" stroke-width=\"1\">\n";
  out += "    <line id=\"axis-u\" x1=\"" + fmt(kMargin) + "\" y1=\"400.0000\" x2=\"" +
         fmt(kCanvas - kMargin) + "\" y2=\"400.0000\"/>\n";
  out += "    <line id=\"axis-v\" x1=\"400.0000\" y1=\"" + fmt(kMargin) + "\" x2=\"400.0000\" y2=\"" +
         fmt(kCanvas - kMargin) + "\"/>\n";
  out += "  </g>\n";

  out += "  <g id=\"killing-sphere\" stroke=\"blue\" stroke-width=\"2\" fill=\"none\">\n";
  for (std::size_t i = 0; i < g.killing.size(); ++i) {
    const auto& b = g.killing[i];
    out += "    <polyline id=\"killing-sphere-" + std::to_string(i) + "\" data-k=\"" +
           (b.sign > 0 ? "+1" : "-1") + "\" points=\"" + points(b.points) + "\"/>\n";
  }
  out += "  </g>\n";

  out += "  <g id=\"indicatrix\" stroke=\"green\" stroke-width=\"2\" fill=\"none\">\n";
  out += "    <polygon id=\"indicatrix-0\" points=\"" + points(g.indicatrix) + "\"/>\n";
  out += "  </g>\n";

  out += "  <g id=\"geodesic-rays\" stroke=\"red\" stroke-width=\"2\" fill=\"red\">\n";
  for (std::size_t i = 0; i < g.rays.size(); ++i) {
    const auto& r = g.rays[i];
    const double len = std::hypot(r.y.u, r.y.v);
    const double reach = g.spec.extent * 1.05 / len;
    const std::string id = "geodesic-ray-" + std::to_string(i);
    out += "    <line id=\"" + id + "\" x1=\"400.0000\" y1=\"400.0000\" x2=\"" +
           px(reach * r.y.u) + "\" y2=\"" + py(reach * r.y.v) + "\"/>\n";
    out += "    <circle id=\"" + id + "-point\" cx=\"" + px(r.y.u) + "\" cy=\"" + py(r.y.v) +
           "\" r=\"4\"/>\n";
  }
  out += "  </g>\n";

  for (std::size_t i = 0; i < g.warnings.size(); ++i) {
    out += "  <text id=\"warning-" + std::to_string(i) + "\" x=\"30\" y=\"" +
           std::to_string(40 + 20 * static_cast<int>(i)) +
           "\" font-family=\"sans-serif\" font-size=\"14\" fill=\"black\">warning: " +
           escape(g.warnings[i]) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render_slice(const Problem& problem, const SolveReport& report,
                         const SliceSpec& spec) {
  return render_svg(compute_slice(problem, report, spec));
}

}  // namespace hgeo
