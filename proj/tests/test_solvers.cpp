#include <cstdlib>
#include <thread>

#include <gtest/gtest.h>

#include "frozen_fixtures.hpp"
#include "hgeo/solvers.hpp"

namespace hgeo {
namespace {

struct Fixture3d {
  LieAlgebra algebra;
  ReductiveDecomposition decomposition;
  RandersStructure randers;
  KillingData killing;
};

Fixture3d setup(const LieAlgebra& alg, const Vec& drift) {
  const auto d = ReductiveDecomposition::trivial(alg);
  return {alg, d, RandersStructure::euclidean(alg.dim(), drift), killing_data(alg, d)};
}

Fixture3d fixture_setup(const frozen::Fixture& f) {
  const auto alg = f.family == std::string("so3") ? families::so3(f.a, f.b, f.c)
                                                  : families::sl2(f.a, f.b, f.c);
  return setup(alg, f.drift);
}

SolveReport enumerate(const Fixture3d& s, SolveConfig cfg = {}) {
  return enumerate_rays(s.algebra, s.randers, s.decomposition, cfg);
}

// Each expected ray matches exactly one reported ray and vice versa.
void expect_same_rays(const std::vector<GeodesicRay>& rays, const std::vector<Eigen::Vector3d>& expected,
                      const RandersStructure& r, double tol) {
  ASSERT_EQ(rays.size(), expected.size());
  for (const auto& e : expected) {
    int hits = 0;
    for (const auto& ray : rays) hits += ray_angle(ray.y.y, e, r) < tol;
    EXPECT_EQ(hits, 1) << "expected ray " << e.transpose();
  }
}

double multiplier_defect(const GeodesicRay& ray, const Fixture3d& s) {
  double worst = 0.0;
  for (int i = 0; i < ray.y.y.size(); ++i) {
    const Vec w = Vec::Unit(ray.y.y.size(), i);
    const double lhs = s.killing.form(ray.y.y, w);
    const double rhs = ray.lambda * fundamental_directional(ray.y.y, w, s.randers);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

TEST(Enumerate, FixturesMatchFrozenRays) {
  for (const auto& f : frozen::all()) {
    const Fixture3d s = fixture_setup(f);
    const SolveReport rep = enumerate(s);
    EXPECT_FALSE(rep.continuum_detected);
    expect_same_rays(rep.rays, f.rays, s.randers, 1e-8);
    for (const auto& ray : rep.rays) {
      EXPECT_EQ(ray.kind, RayKind::isolated);
      EXPECT_LT(std::abs(randers_norm(ray.y.y, s.randers) - 1.0), 1e-12);
    }
  }
}

TEST(Enumerate, EveryRayPassesIndependentCheck) {
  for (const auto& f : frozen::all()) {
    const Fixture3d s = fixture_setup(f);
    for (const auto& ray : enumerate(s).rays) {
      const RayCheck c = check_ray(ray, s.algebra, s.randers, s.decomposition, s.killing);
      EXPECT_LT(c.residual_norm, 1e-9);
      EXPECT_LT(c.indicatrix_error, 1e-12);
      EXPECT_LT(c.lambda_error, 1e-12);
      // Independent evaluation through the Randers form of the criterion.
      EXPECT_LT(randers_residual(ray.y.y, s.randers, s.algebra).norm, 1e-9);
    }
  }
}

TEST(Enumerate, BiInvariantMetricIsAContinuum) {
  const Fixture3d s = setup(families::so3(1, 1, 1), Vec::Zero(3));
  const SolveReport rep = enumerate(s);
  EXPECT_TRUE(rep.continuum_detected);
  EXPECT_TRUE(rep.audit.infinite);
  EXPECT_TRUE(rep.audit.pass);
  for (const auto& ray : rep.rays) EXPECT_EQ(ray.kind, RayKind::continuum_member);
}

TEST(Enumerate, HeisenbergHasContinuumAndIsolatedCentreRays) {
  const Fixture3d s = setup(families::heisenberg(), Eigen::Vector3d(0.5, 0, 0));
  const SolveReport rep = enumerate(s);
  EXPECT_TRUE(rep.continuum_detected);
  for (const double sign : {1.0, -1.0}) {
    const Eigen::Vector3d e3(0, 0, sign);
    const auto it = std::find_if(rep.rays.begin(), rep.rays.end(), [&](const GeodesicRay& r) {
      return ray_angle(r.y.y, e3, s.randers) < 1e-8;
    });
    ASSERT_NE(it, rep.rays.end());
    EXPECT_EQ(it->kind, RayKind::isolated);
  }
}

TEST(Enumerate, DeterministicForEqualSeeds) {
  const Fixture3d s = fixture_setup(frozen::sl2_four());
  SolveConfig cfg;
  cfg.rng_seed = 1234;
  const SolveReport a = enumerate(s, cfg);
  const SolveReport b = enumerate(s, cfg);
  ASSERT_EQ(a.rays.size(), b.rays.size());
  for (std::size_t i = 0; i < a.rays.size(); ++i) {
    EXPECT_EQ(a.rays[i].y.y, b.rays[i].y.y);
    EXPECT_EQ(a.rays[i].residual_norm, b.rays[i].residual_norm);
  }
}

TEST(Enumerate, ResultDoesNotDependOnThreadCount) {
  const Fixture3d s = fixture_setup(frozen::so3_four());
  SolveConfig one;
  one.threads = 1;
  SolveConfig four;
  four.threads = 4;
  const SolveReport a = enumerate(s, one);
  const SolveReport b = enumerate(s, four);
  ASSERT_EQ(a.rays.size(), b.rays.size());
  for (std::size_t i = 0; i < a.rays.size(); ++i) EXPECT_EQ(a.rays[i].y.y, b.rays[i].y.y);
}

TEST(Enumerate, ScalarAndSimdScansAgree) {
  const Fixture3d s = fixture_setup(frozen::sl2_four());
  setenv("HGEO_FORCE_SCALAR", "1", 1);
  const SolveReport scalar = enumerate(s);
  unsetenv("HGEO_FORCE_SCALAR");
  const SolveReport simd = enumerate(s);
  EXPECT_EQ(scalar.stats.isa, "scalar");
  expect_same_rays(simd.rays, frozen::sl2_four().rays, s.randers, 1e-8);
  expect_same_rays(scalar.rays, frozen::sl2_four().rays, s.randers, 1e-8);
}

TEST(Enumerate, SafeToCallConcurrently) {
  const Fixture3d s1 = fixture_setup(frozen::so3_four());
  const Fixture3d s2 = fixture_setup(frozen::sl2_four());
  SolveReport r1, r2;
  std::thread t1([&] { r1 = enumerate(s1); });
  std::thread t2([&] { r2 = enumerate(s2); });
  t1.join();
  t2.join();
  const SolveReport q1 = enumerate(s1);
  const SolveReport q2 = enumerate(s2);
  ASSERT_EQ(r1.rays.size(), q1.rays.size());
  ASSERT_EQ(r2.rays.size(), q2.rays.size());
  for (std::size_t i = 0; i < r1.rays.size(); ++i) EXPECT_EQ(r1.rays[i].y.y, q1.rays[i].y.y);
  for (std::size_t i = 0; i < r2.rays.size(); ++i) EXPECT_EQ(r2.rays[i].y.y, q2.rays[i].y.y);
}

TEST(Enumerate, NontrivialIsotropyOnTheSphere) {
  // S^2 = SO(3)/SO(2), round metric plus a drift: a geodesic vector needs
  // an isotropy component in general, and rays are still certified.
  const auto alg = families::so3(1, 1, 1);
  Mat m = Mat::Zero(3, 2);
  m(0, 0) = 1;
  m(1, 1) = 1;
  const ReductiveDecomposition d(alg, m, Vec::Unit(3, 2));
  const auto r = RandersStructure::euclidean(2, Eigen::Vector2d(0.3, 0.1));
  SolveConfig cfg;
  cfg.seeds = 300;
  const SolveReport rep = enumerate_rays(alg, r, d, cfg);
  EXPECT_TRUE(rep.audit.pass);
  const auto k = killing_data(alg, d);
  for (const auto& ray : rep.rays) {
    EXPECT_EQ(ray.isotropy.size(), 1);
    EXPECT_LT(check_ray(ray, alg, r, d, k).residual_norm, 1e-9);
  }
}

TEST(Enumerate, RejectsOneDimensionalM) {
  const auto alg = families::abelian(1);
  EXPECT_THROW(enumerate_rays(alg, RandersStructure::euclidean(1), ReductiveDecomposition::trivial(alg), {}),
               Error);
}

TEST(Config, ValidationRejectsBadFields) {
  SolveConfig c;
  c.seeds = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.continuum_fraction = 1.5;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.newton_tol = -1;
  EXPECT_THROW(c.validate(), Error);
  EXPECT_NO_THROW(SolveConfig{}.validate());
}

TEST(Seeds, DeterministicUnitVectors) {
  for (int dim : {2, 3, 5}) {
    const auto a = sphere_seeds(dim, 101, 9);
    const auto b = sphere_seeds(dim, 101, 9);
    ASSERT_EQ(a.size(), 101u);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i], b[i]);
      EXPECT_NEAR(a[i].norm(), 1.0, 1e-14);
    }
  }
}

TEST(RayAngle, OppositeVectorsAreDistinctRays) {
  const auto r = RandersStructure::euclidean(3, Eigen::Vector3d(0.5, 0, 0));
  const Eigen::Vector3d x(1, 0, 0);
  EXPECT_NEAR(ray_angle(x, -x, r), std::numbers::pi, 1e-15);
  EXPECT_NEAR(ray_angle(x, 5.0 * x, r), 0.0, 1e-15);
}

TEST(Variational, IndefiniteFixtureHasBothSigns) {
  const Fixture3d s = fixture_setup(frozen::sl2_four());
  const VariationalResult v = variational_critical_points(s.algebra, s.randers, s.decomposition, s.killing, {});
  ASSERT_GE(v.points.size(), 4u);
  int pos = 0, neg = 0;
  for (const auto& p : v.points) {
    pos += p.ray.lambda > 0;
    neg += p.ray.lambda < 0;
    EXPECT_LT(multiplier_defect(p.ray, s), 1e-8 * (1 + std::abs(p.ray.lambda)));
    EXPECT_LT(p.multiplier_residual, 1e-8 * (1 + std::abs(p.ray.lambda)));
  }
  EXPECT_GE(pos, 2);
  EXPECT_GE(neg, 2);
}

TEST(Variational, DefiniteFixtureHasNegativeMultipliers) {
  const Fixture3d s = fixture_setup(frozen::so3_four());
  const VariationalResult v = variational_critical_points(s.algebra, s.randers, s.decomposition, s.killing, {});
  ASSERT_GE(v.points.size(), 2u);
  for (const auto& p : v.points) EXPECT_LT(p.ray.lambda, 0.0);
  const auto sum = v.summary();
  EXPECT_GE(sum.maxima, 1);
  EXPECT_GE(sum.minima, 1);
}

TEST(Variational, AgreesWithEnumeration) {
  for (const auto& f : frozen::all()) {
    const Fixture3d s = fixture_setup(f);
    const VariationalResult v = variational_critical_points(s.algebra, s.randers, s.decomposition, s.killing, {});
    for (const auto& ray : enumerate(s).rays) {
      const bool found = std::any_of(v.points.begin(), v.points.end(), [&](const CriticalPoint& p) {
        return ray_angle(p.ray.y.y, ray.y.y, s.randers) < 1e-6;
      });
      EXPECT_TRUE(found) << f.family << " ray " << ray.y.y.transpose();
    }
  }
}

TEST(Variational, BiInvariantIsAPlateau) {
  const Fixture3d s = setup(families::so3(1, 1, 1), Vec::Zero(3));
  const VariationalResult v = variational_critical_points(s.algebra, s.randers, s.decomposition, s.killing, {});
  EXPECT_TRUE(v.degenerate_plateau);
  EXPECT_TRUE(v.points.empty());
}

TEST(Variational, FlatKillingIsTheWrongCase) {
  const Fixture3d s = setup(families::heisenberg(), Vec::Zero(3));
  try {
    variational_critical_points(s.algebra, s.randers, s.decomposition, s.killing, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::wrong_case);
  }
}

TEST(Variational, SaddleRegimeInDimensionSix) {
  // sl(2) + so(3) has Killing signature (2,4,0): p > 1 and q > 1.
  const auto alg = families::direct_sum(families::sl2(1, 1, 1), families::so3(1, 2, 3));
  Vec drift = Vec::Zero(6);
  drift(0) = 0.3;
  drift(4) = 0.2;
  const Fixture3d s = setup(alg, drift);
  EXPECT_EQ(s.killing.signature, (Signature{2, 4, 0}));
  SolveConfig cfg;
  cfg.seeds = 600;
  const VariationalResult v = variational_critical_points(s.algebra, s.randers, s.decomposition, s.killing, cfg);
  ASSERT_FALSE(v.points.empty());
  for (const auto& p : v.points) {
    EXPECT_LT(multiplier_defect(p.ray, s), 1e-8 * (1 + std::abs(p.ray.lambda)));
    EXPECT_LT(p.ray.residual_norm, 1e-9);
  }
  const SolveReport rep = enumerate(s, cfg);
  EXPECT_EQ(rep.audit.required_minimum, 4);
  EXPECT_TRUE(rep.audit.pass);
}

TEST(Case1, EuclideanNormalsWithoutDrift) {
  const auto alg = families::heisenberg();
  const Mat w = Mat::Identity(3, 3).rightCols(2);
  const auto p = case1_support_points(alg, RandersStructure::euclidean(3), w, {});
  EXPECT_LT((p.n1 - Eigen::Vector3d(1, 0, 0)).norm(), 1e-12);
  EXPECT_LT((p.n2 - Eigen::Vector3d(-1, 0, 0)).norm(), 1e-12);
}

TEST(Case1, DriftMakesSupportPointsAsymmetric) {
  const auto alg = families::heisenberg();
  const Mat w = Mat::Identity(3, 3).rightCols(2);
  const auto p = case1_support_points(alg, RandersStructure::euclidean(3, Eigen::Vector3d(0.5, 0, 0)), w, {});
  EXPECT_LT((p.n1 - frozen::kCase1N1).norm(), 1e-10);
  EXPECT_LT((p.n2 - frozen::kCase1N2).norm(), 1e-10);
  EXPECT_GT((p.n1 + p.n2).norm(), 1.0);
  EXPECT_LT(p.residual1, 1e-10);
  EXPECT_LT(p.residual2, 1e-10);
}

TEST(Case1, HyperplaneMustContainDerivedAlgebra) {
  const auto alg = families::heisenberg();
  const Mat w = Mat::Identity(3, 3).leftCols(2);  // span(E1, E2) misses E3
  try {
    case1_support_points(alg, RandersStructure::euclidean(3), w, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_hyperplane);
  }
}

TEST(Case1, SemisimpleIsTheWrongCase) {
  const auto alg = families::so3(1, 1, 1);
  try {
    case1_support_points(alg, RandersStructure::euclidean(3), Mat::Identity(3, 3).rightCols(2), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::wrong_case);
  }
}

TEST(Case1, DefaultHyperplaneContainsDerivedAlgebra) {
  const auto alg = families::heisenberg();
  const auto d = ReductiveDecomposition::trivial(alg);
  const Mat w = default_case1_hyperplane(alg, d);
  ASSERT_EQ(w.cols(), 2);
  const Vec e3 = Vec::Unit(3, 2);
  EXPECT_LT((e3 - w * (w.transpose() * e3)).norm(), 1e-12);
  const auto p = case1_support_points(alg, RandersStructure::euclidean(3, Eigen::Vector3d(0.1, 0.2, 0)), d, w, {});
  EXPECT_LT(p.residual1, 1e-10);
  EXPECT_LT(p.residual2, 1e-10);
}

TEST(Audit, FixtureVerdicts) {
  const Fixture3d a = fixture_setup(frozen::sl2_four());
  const auto va = enumerate(a).audit;
  EXPECT_EQ(va.signature, (Signature{2, 1, 0}));
  EXPECT_EQ(va.required_minimum, 4);
  EXPECT_EQ(va.ray_count, 4);
  EXPECT_TRUE(va.pass);
  const Fixture3d b = fixture_setup(frozen::so3_two());
  const auto vb = enumerate(b).audit;
  EXPECT_EQ(vb.required_minimum, 2);
  EXPECT_EQ(vb.ray_count, 2);
  EXPECT_TRUE(vb.pass);
}

TEST(Audit, FailsWhenTooFewRays) {
  const Fixture3d s = fixture_setup(frozen::sl2_four());
  SolveReport rep = enumerate(s);
  rep.rays.resize(3);
  const auto v = theorem_audit(s.algebra, s.randers, s.decomposition, rep);
  EXPECT_FALSE(v.pass);
  rep.continuum_detected = true;
  EXPECT_TRUE(theorem_audit(s.algebra, s.randers, s.decomposition, rep).pass);
}

}  // namespace
}  // namespace hgeo
