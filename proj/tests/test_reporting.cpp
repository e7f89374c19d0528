#include <regex>

#include <gtest/gtest.h>
#include <json.hpp>

#include "frozen_fixtures.hpp"
#include "hgeo/app.hpp"
#include "hgeo/config.hpp"
#include "hgeo/plot.hpp"
#include "hgeo/report.hpp"

namespace hgeo {
namespace {

std::string expect_config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::input);
    return e.what();
  }
  ADD_FAILURE() << "config was accepted:\n" << text;
  return {};
}

const char* kSo3Four = R"(
[algebra]
family = so3
a = 1
b = 2
c = 1
[metric]
V = [0.5, 0, 0]
)";

const char* kSl2Four = R"(
[algebra]
family = sl2
a = 1
b = 1
c = 1
[metric]
V = [0.5, 0, 0]
)";

ProblemConfig so3_ellipse() {
  return parse_config("[algebra]\nfamily = so3\na = 0.5\nb = 0.5\nc = 3\n[plot]\nplane = x3=0\n");
}

TEST(ParseConfig, AcceptsFixtures) {
  const ProblemConfig a = parse_config(kSo3Four);
  EXPECT_EQ(a.algebra.family, "so3");
  EXPECT_EQ(a.algebra.b, 2.0);
  ASSERT_TRUE(a.drift.has_value());
  EXPECT_EQ((*a.drift)(0), 0.5);
  const ProblemConfig b = parse_config(kSl2Four);
  EXPECT_EQ(b.algebra.family, "sl2");
  const Problem p = build_problem(b);
  EXPECT_EQ(p.killing.signature, (Signature{2, 1, 0}));
}

TEST(ParseConfig, CommentsQuotedStringsAndSolverKeys) {
  const ProblemConfig c = parse_config(R"(
# leading comment
[algebra]
family = "heisenberg"   ; trailing comment
scale = 2
[solver]
seeds = 50
rng_seed = 7
case1_hyperplane = [[0, 1, 0], [0, 0, 1]]
[plot]
plane = x1=0
resolution = 90
)");
  EXPECT_EQ(c.algebra.family, "heisenberg");
  EXPECT_EQ(c.algebra.scale, 2.0);
  EXPECT_EQ(c.solve.seeds, 50);
  EXPECT_EQ(c.solve.rng_seed, 7u);
  ASSERT_TRUE(c.case1_hyperplane.has_value());
  EXPECT_EQ(c.case1_hyperplane->cols(), 2);
  EXPECT_EQ(c.plot.plane, "x1=0");
}

TEST(ParseConfig, CustomStructureConstants) {
  const ProblemConfig c = parse_config(R"(
[algebra]
family = custom
dim = 3
brackets = [[1, 2, 3, 1.0]]
label = heis
)");
  const Problem p = build_problem(c);
  EXPECT_TRUE(p.killing.signature.flat());
  EXPECT_EQ(p.algebra.c(0, 1, 2), 1.0);
  EXPECT_EQ(p.algebra.c(1, 0, 2), -1.0);
}

TEST(ParseConfig, RandersBoundaryIsRejected) {
  const std::string msg = expect_config_error("[algebra]\nfamily = so3\n[metric]\nV = [1, 0, 0]\n");
  EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
  EXPECT_NE(msg.find("alpha(V,V) = 1 is not < 1"), std::string::npos) << msg;
}

TEST(ParseConfig, UnknownKeyIsReportedWithLine) {
  const std::string msg = expect_config_error("[algebra]\nfamily = so3\ncolour = red\n");
  EXPECT_NE(msg.find("line 3: unknown key 'colour'"), std::string::npos) << msg;
}

TEST(ParseConfig, DimensionMismatchIsReportedWithLine) {
  const std::string msg = expect_config_error("[algebra]\nfamily = sl2\n[metric]\nV = [0.1, 0.2]\n");
  EXPECT_NE(msg.find("line 4: dimension mismatch"), std::string::npos) << msg;
}

TEST(ParseConfig, DiagnosticsAreDistinctAndCollected) {
  const std::string msg = expect_config_error(
      "[algebra]\nfamily = so3\nshape = round\n[solver]\nseeds = many\n[nonsense]\n");
  EXPECT_NE(msg.find("line 3: unknown key"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 5: solver.seeds"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 6: unknown section"), std::string::npos) << msg;
}

TEST(ParseConfig, InvalidAlgebraIsRejected) {
  const std::string msg = expect_config_error(
      "[algebra]\nfamily = custom\ndim = 3\nbrackets = [[1, 2, 3, 1], [1, 3, 1, 1], [2, 3, 2, 1]]\n");
  EXPECT_NE(msg.find("Jacobi"), std::string::npos) << msg;
}

TEST(ParseConfig, UnknownFamilyIsRejected) {
  const std::string msg = expect_config_error("[algebra]\nfamily = so5\n");
  EXPECT_NE(msg.find("unknown family"), std::string::npos) << msg;
}

TEST(Report, JsonRoundTripForFixtures) {
  for (const char* text : {kSo3Four, kSl2Four}) {
    const ProblemConfig cfg = parse_config(text);
    const SolveReport rep = run_solve(cfg);
    const std::string json = report_to_json(rep, cfg);
    const SolveReport back = report_from_json(json);
    EXPECT_TRUE(reports_equal(rep, back));
    EXPECT_EQ(report_to_json(back, cfg), json);
  }
  // Continuum and Case 1 reports round-trip as well.
  for (const char* text : {"[algebra]\nfamily = so3\n",
                           "[algebra]\nfamily = heisenberg\n[metric]\nV = [0.5, 0, 0]\n"}) {
    const ProblemConfig cfg = parse_config(text);
    const SolveReport rep = run_solve(cfg);
    EXPECT_TRUE(reports_equal(rep, report_from_json(report_to_json(rep, cfg))));
  }
}

TEST(Report, SchemaFields) {
  const ProblemConfig cfg = parse_config(kSo3Four);
  const auto doc = nlohmann::json::parse(report_to_json(run_solve(cfg), cfg));
  EXPECT_EQ(doc["version"], "hgeo-report/1");
  EXPECT_EQ(doc["algebra"]["family"], "so3");
  EXPECT_EQ(doc["killing"]["signature"], nlohmann::json::array({0, 3, 0}));
  EXPECT_EQ(doc["killing"]["radical_dim"], 0);
  EXPECT_EQ(doc["audit"]["count"], 4);
  EXPECT_EQ(doc["audit"]["pass"], true);
  EXPECT_EQ(doc["continuum_detected"], false);
  ASSERT_EQ(doc["rays"].size(), 4u);
  for (const char* key : {"y", "residual_norm", "lambda", "kind", "k_sign", "isotropy"})
    EXPECT_TRUE(doc["rays"][0].contains(key)) << key;
  EXPECT_TRUE(doc["stats"].contains("converged"));
}

TEST(Report, ContinuumCountIsInfinity) {
  const ProblemConfig cfg = parse_config("[algebra]\nfamily = so3\n");
  const auto doc = nlohmann::json::parse(report_to_json(run_solve(cfg), cfg));
  EXPECT_EQ(doc["audit"]["count"], "infinity");
  EXPECT_EQ(doc["continuum_detected"], true);
}

TEST(Report, NumbersUseSeventeenDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(2.0), "2.0");
  EXPECT_EQ(format_number(std::nan("")), "null");
  const double third = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_number(third)), third);
}

TEST(Report, RejectsForeignDocuments) {
  EXPECT_THROW(report_from_json("{\"version\": \"other/2\"}"), Error);
  EXPECT_THROW(report_from_json("not json"), Error);
}

TEST(Solve, RunSolveAddsVariationalSummary) {
  const SolveReport rep = run_solve(parse_config(kSl2Four));
  ASSERT_TRUE(rep.variational.has_value());
  EXPECT_GE(rep.variational->critical_points, 4);
  EXPECT_EQ(rep.audit.ray_count, 4);
  EXPECT_FALSE(rep.case1.has_value());
}

TEST(Solve, FlatKillingDispatchesToCase1) {
  const ProblemConfig cfg = parse_config(
      "[algebra]\nfamily = heisenberg\n[metric]\nV = [0.5, 0, 0]\n[solver]\n"
      "case1_hyperplane = [[0, 1, 0], [0, 0, 1]]\n");
  const SolveReport rep = run_solve(cfg);
  ASSERT_TRUE(rep.case1.has_value());
  EXPECT_LT((rep.case1->n1 - frozen::kCase1N1).norm(), 1e-10);
  EXPECT_LT((rep.case1->n2 - frozen::kCase1N2).norm(), 1e-10);
  EXPECT_TRUE(rep.audit.pass);
  EXPECT_EQ(rep.audit.required_minimum, 2);
}

TEST(Solve, SeedChangesNothingOnIsolatedFixtures) {
  ProblemConfig cfg = parse_config(kSo3Four);
  const SolveReport a = run_solve(cfg);
  cfg.solve.rng_seed = 99;
  const SolveReport b = run_solve(cfg);
  ASSERT_EQ(a.rays.size(), b.rays.size());
  for (std::size_t i = 0; i < a.rays.size(); ++i)
    EXPECT_LT((a.rays[i].y.y - b.rays[i].y.y).norm(), 1e-10);
}

TEST(Plot, EllipseFigure) {
  const ProblemConfig cfg = so3_ellipse();
  const Problem p = build_problem(cfg);
  const SolveReport rep = run_solve(p, cfg);
  const SliceGeometry g = compute_slice(p, rep, make_slice(cfg.plot, 3));
  ASSERT_EQ(g.indicatrix.size(), 720u);
  for (const auto& pt : g.indicatrix) EXPECT_LT(std::abs(randers_norm(pt.z, p.randers) - 1.0), 1e-9);
  ASSERT_FALSE(g.killing.empty());
  for (const auto& b : g.killing) {
    EXPECT_EQ(b.sign, -1);
    for (const auto& pt : b.points) {
      EXPECT_LT(std::abs(p.killing.form(pt.z, pt.z) + 1.0), 1e-9);
      // 1/2 x1^2 + 3 x2^2 = 1 in plane coordinates.
      EXPECT_NEAR(0.5 * pt.u * pt.u + 3 * pt.v * pt.v, 1.0, 1e-9);
    }
  }
  ASSERT_EQ(g.rays.size(), 4u);
  for (const Eigen::Vector3d axis : {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(-1, 0, 0),
                                     Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(0, -1, 0)}) {
    int hits = 0;
    for (const auto& r : g.rays) hits += ray_angle(r.y.z, axis, p.randers) < 1e-8;
    EXPECT_EQ(hits, 1) << axis.transpose();
  }
}

TEST(Plot, HyperbolaFigure) {
  const ProblemConfig cfg = parse_config(std::string(kSl2Four) + "[plot]\nplane = x3=0\n");
  const Problem p = build_problem(cfg);
  const SolveReport rep = run_solve(p, cfg);
  const SliceGeometry g = compute_slice(p, rep, make_slice(cfg.plot, 3));
  int plus = 0, minus = 0;
  for (const auto& b : g.killing) {
    (b.sign > 0 ? plus : minus)++;
    for (const auto& pt : b.points) {
      EXPECT_LT(std::abs(p.killing.form(pt.z, pt.z) - b.sign), 1e-9);
      EXPECT_LE(std::hypot(pt.u, pt.v), 1.5 * cfg.plot.extent + 1e-12);
    }
  }
  EXPECT_EQ(plus, 2);
  EXPECT_EQ(minus, 2);
  ASSERT_EQ(g.rays.size(), 4u);
  for (const auto& r : g.rays) {
    ASSERT_GE(r.report_index, 0);  // no phantom rays
    EXPECT_GT(std::hypot(r.y.u, r.y.v), 1e-8);
  }
}

TEST(Plot, SvgIsDeterministicAndLayered) {
  const ProblemConfig cfg = parse_config(std::string(kSl2Four) + "[plot]\nplane = x3=0\n");
  const Problem p = build_problem(cfg);
  const SliceSpec spec = make_slice(cfg.plot, 3);
  const std::string a = render_slice(p, run_solve(p, cfg), spec);
  const std::string b = render_slice(p, run_solve(p, cfg), spec);
  EXPECT_EQ(a, b);
  const auto blue = a.find("id=\"killing-sphere\"");
  const auto green = a.find("id=\"indicatrix\"");
  const auto red = a.find("id=\"geodesic-rays\"");
  ASSERT_NE(blue, std::string::npos);
  EXPECT_LT(blue, green);
  EXPECT_LT(green, red);
  EXPECT_NE(a.find("width=\"800\" height=\"800\""), std::string::npos);
  EXPECT_NE(a.find("version=\"1.1\""), std::string::npos);
}

TEST(Plot, FlatPlaneOmitsKillingLayer) {
  const ProblemConfig cfg = parse_config("[algebra]\nfamily = heisenberg\n[solver]\nseeds = 200\n");
  const Problem p = build_problem(cfg);
  const SliceGeometry g = compute_slice(p, run_solve(p, cfg), make_slice(cfg.plot, 3));
  EXPECT_TRUE(g.killing.empty());
  ASSERT_FALSE(g.warnings.empty());
  EXPECT_NE(render_svg(g).find("warning"), std::string::npos);
}

TEST(Plot, RejectsBadPlanes) {
  PlotSettings s;
  s.plane = "x4=0";
  EXPECT_THROW(make_slice(s, 3), Error);
  s.plane = "x3=1";
  EXPECT_THROW(make_slice(s, 3), Error);
  s.plane = "x3=0";
  EXPECT_THROW(make_slice(s, 4), Error);
  s.axes = Mat::Zero(3, 2);
  s.axes->col(0) = Eigen::Vector3d(1, 1, 0);
  s.axes->col(1) = Eigen::Vector3d(2, 2, 0);
  EXPECT_THROW(make_slice(s, 3), Error);
  s.axes->col(1) = Eigen::Vector3d(0, 0, 3);
  const SliceSpec spec = make_slice(s, 3);
  EXPECT_LT((spec.axes.transpose() * spec.axes - Mat::Identity(2, 2)).norm(), 1e-14);
}

TEST(Sweep, SmallSweepsPass) {
  SolveConfig base;
  base.seeds = 300;
  for (const char* fam : {"so3", "sl2", "heisenberg", "mixed"}) {
    const SweepSummary s = run_audit_sweep(fam, 6, 5, base);
    EXPECT_EQ(s.failures, 0) << fam << "\n" << sweep_to_json(s);
    EXPECT_EQ(s.results.size(), 6u);
  }
  EXPECT_THROW(run_audit_sweep("so5", 3, 1, base), Error);
  EXPECT_THROW(run_audit_sweep("so3", 0, 1, base), Error);
}

TEST(Sweep, DeterministicSummary) {
  SolveConfig base;
  base.seeds = 200;
  base.threads = 2;
  const std::string a = sweep_to_json(run_audit_sweep("mixed", 4, 11, base));
  base.threads = 1;
  const std::string b = sweep_to_json(run_audit_sweep("mixed", 4, 11, base));
  EXPECT_EQ(a, b);
}

TEST(Verify, AcceptsGenuineAndRejectsTamperedReports) {
  const ProblemConfig cfg = parse_config(kSl2Four);
  SolveReport rep = run_solve(cfg);
  const VerifyOutcome ok = verify_report(report_from_json(report_to_json(rep, cfg)), cfg);
  EXPECT_TRUE(ok.pass);
  EXPECT_EQ(ok.rays_checked, 4);

  SolveReport moved = rep;
  moved.rays[0].y.y(1) += 1e-3;
  EXPECT_FALSE(verify_report(moved, cfg).pass);

  SolveReport short_list = rep;
  short_list.rays.pop_back();
  EXPECT_FALSE(verify_report(short_list, cfg).pass);

  // A report checked against a different problem fails.
  EXPECT_FALSE(verify_report(rep, parse_config(kSo3Four)).pass);
}

}  // namespace
}  // namespace hgeo
