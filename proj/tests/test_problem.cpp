#include <catch2/catch_amalgamated.hpp>

#include "hyflexa/generator.hpp"
#include "hyflexa/problem.hpp"
#include "support/test_problems.hpp"

using namespace hyflexa;
using testsupport::identity_lasso;

TEST_CASE("block partition invariants") {
  auto p = BlockPartition::from_sizes({2, 3, 1});
  CHECK(p.n_blocks() == 3);
  CHECK(p.total_dim() == 6);
  CHECK(p.offset(0) == 0);
  CHECK(p.offset(1) == 2);
  CHECK(p.offset(2) == 5);

  CHECK_THROWS_AS(BlockPartition::from_sizes({}), config_error);
  CHECK_THROWS_AS(BlockPartition::from_sizes({2, 0}), config_error);
  CHECK_THROWS_AS(p.size(3), std::invalid_argument);

  auto s = BlockPartition::scalar(4);
  CHECK(s.n_blocks() == 4);
  CHECK(s.total_dim() == 4);
}

TEST_CASE("project_block unconstrained and box") {
  auto un = FeasibleBlock::unconstrained(2);
  Vec z(2);
  z << 3.0, -7.0;
  CHECK(project_block(un, z) == z);

  auto box = FeasibleBlock::box(Vec::Zero(2), Vec::Ones(2));
  Vec w(2);
  w << 2.0, -1.0;
  Vec pw = project_block(box, w);
  CHECK(pw[0] == 1.0);
  CHECK(pw[1] == 0.0);

  Vec inside(2);
  inside << 0.25, 0.75;
  CHECK(project_block(box, inside) == inside);

  CHECK_THROWS_AS(FeasibleBlock::box(Vec::Ones(2), Vec::Zero(2)), config_error);
  CHECK_THROWS_AS(project_block(box, Vec::Zero(3)), std::invalid_argument);
}

TEST_CASE("projection is idempotent on random inputs") {
  SplitMix64 rng(7);
  Vec lo(3), hi(3);
  lo << -0.5, 0.0, 1.0;
  hi << 0.5, 2.0, 1.0;
  auto box = FeasibleBlock::box(lo, hi);
  for (int t = 0; t < 1000; ++t) {
    Vec z(3);
    for (int j = 0; j < 3; ++j) z[j] = 8.0 * rng.next_double() - 4.0;
    const Vec once = project_block(box, z);
    const Vec twice = project_block(box, once);
    REQUIRE(once == twice);  // exact equality
  }
}

TEST_CASE("eval_objective on the identity lasso") {
  // A = I2, b = 0, c = 1, x = (1, -1): ||x||^2 + ||x||_1 = 2 + 2.
  auto lasso = identity_lasso(Vec::Zero(2), 1.0);
  auto p = as_composite(lasso);
  Vec x(2);
  x << 1.0, -1.0;
  CHECK(eval_objective(p, x) == Catch::Approx(4.0).margin(1e-14));

  CHECK_THROWS_AS(eval_objective(p, Vec::Zero(3)), std::invalid_argument);
}

TEST_CASE("eval_objective returns the generator certificate at the optimum") {
  auto lasso = generate_nesterov(40, 120, 40.0, 5.0, 11);
  auto p = as_composite(lasso);
  const double v = eval_objective(p, lasso.known_optimum->x_star);
  CHECK(std::abs(v - lasso.known_optimum->v_star) <= 1e-10 * std::abs(lasso.known_optimum->v_star));
}

TEST_CASE("eval_objective zero case and numeric errors") {
  CompositeProblem p;
  p.partition = BlockPartition::scalar(2);
  p.smooth_eval = [](const Vec&) { return 0.0; };
  p.gradient_eval = [](const Vec& x) { return Vec(Vec::Zero(x.size())); };
  attach_l1_term(p, 1.0);
  p.feasible = {FeasibleBlock::unconstrained(1), FeasibleBlock::unconstrained(1)};
  CHECK(eval_objective(p, Vec::Zero(2)) == 0.0);

  CompositeProblem bad = p;
  bad.smooth_eval = [](const Vec&) { return std::numeric_limits<double>::quiet_NaN(); };
  CHECK_THROWS_AS(eval_objective(bad, Vec::Zero(2)), numeric_error);
  CHECK_THROWS_WITH(eval_objective(bad, Vec::Zero(2)), Catch::Matchers::ContainsSubstring("smooth"));
}

TEST_CASE("eval_block_gradient slices the gradient") {
  // F = ||x||^2 on scalar blocks: gradient 2x.
  auto lasso = identity_lasso(Vec::Zero(2), 1.0);
  auto p = as_composite(lasso);
  Vec x(2);
  x << 1.0, 2.0;
  CHECK(eval_block_gradient(p, 0, x)[0] == Catch::Approx(2.0));
  CHECK(eval_block_gradient(p, 1, x)[0] == Catch::Approx(4.0));
  CHECK_THROWS_AS(eval_block_gradient(p, 2, x), std::invalid_argument);
}

TEST_CASE("gradient vanishes at an interior smooth optimum") {
  auto f = testsupport::QuadraticFixture::random(6, 3);
  auto p = testsupport::make_quadratic_problem(f, {2, 2, 2});
  const Vec xstar = f.minimizer();
  for (int i = 0; i < 3; ++i) {
    CHECK(eval_block_gradient(p, i, xstar).norm() <= 1e-8);
  }
}

TEST_CASE("gradient matches finite differences on a random lasso") {
  auto lasso = generate_nesterov(25, 60, 50.0, 10.0, 5);
  auto p = as_composite(lasso);
  SplitMix64 rng(17);
  CHECK(validate_gradient_consistency(p, rng, 100) <= 1e-5);
}

TEST_CASE("nonsmooth term is midpoint convex and separable values add up") {
  auto lasso = generate_nesterov(15, 30, 60.0, 10.0, 9);
  auto p = as_composite(lasso);
  SplitMix64 rng(23);
  CHECK(validate_nonsmooth_convexity(p, rng, 200) <= 1e-12);

  for (int t = 0; t < 20; ++t) {
    Vec x(30);
    for (int j = 0; j < 30; ++j) x[j] = 2.0 * rng.next_double() - 1.0;
    double sum = 0.0;
    for (int i = 0; i < p.partition.n_blocks(); ++i)
      sum += p.separable->block_value(i, x.segment(i, 1));
    CHECK(std::abs(sum - p.nonsmooth_eval(x)) <= 1e-12 * (1.0 + std::abs(sum)));
  }
}
