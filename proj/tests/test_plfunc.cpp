#include "doctest.h"

#include "support/pl_oracles.hpp"

using namespace tropcert;
using namespace tropcert::testing;

namespace {

TropicalCycle real_line() { return TropicalCycle::ambient(1); }

PLFunction abs_x(const Rational &s = 1) {
  return scale(PLFunction::max_of(real_line(), {{rv({1}), 0}, {rv({-1}), 0}}), s);
}

TropicalCycle point_at(const RatVector &p, const Rational &w) {
  return TropicalCycle::from_cells(p.size(), 0, {{Polyhedron::point(p), w}});
}

/// Random balanced base of dimension 1 or 2 in R^2 or R^3.
TropicalCycle random_base(std::mt19937_64 &rng, int kind) {
  switch (kind % 5) {
  case 0:
    return random_curve_fan(rng, 2, 3 + uniform(rng, 0, 2), random_int_vector(rng, 2, -2, 2));
  case 1:
    return random_curve_fan(rng, 3, 3 + uniform(rng, 0, 2), random_int_vector(rng, 3, -2, 2));
  case 2:
    return tropical_line(random_int_vector(rng, 2, -2, 2)) + tropical_line(random_int_vector(rng, 2, -2, 2));
  case 3:
    return tropical_hyperplane(3, random_int_vector(rng, 3, -2, 2));
  default:
    return TropicalCycle::ambient(2);
  }
}

PLFunction random_function_on(std::mt19937_64 &rng, const TropicalCycle &base) {
  return PLFunction::restrict_to(random_complete_pl(rng, base.ambient_rank()), base);
}

} // namespace

TEST_CASE("corner_locus examples") {
  auto cl = corner_locus(abs_x());
  CHECK(same_cycle(cl, point_at(rv({0}), 2)));

  // pieces x on x ≤ 0 and 2x on x ≥ 0: slope jump 1
  auto kink = PLFunction::from_pieces(real_line(), {{halfspace(rv({-1}), 0), {rv({1}), 0}},
                                                    {halfspace(rv({1}), 0), {rv({2}), 0}}});
  CHECK(same_cycle(corner_locus(kink), point_at(rv({0}), 1)));

  // tropical line with the conic function a, b, c: weight a + b + c at the apex
  auto phi = line_conic(2, Rational(-1, 3), 5);
  CHECK(same_cycle(corner_locus(phi), point_at(rv({0, 0}), Rational(2) - Rational(1, 3) + 5)));

  auto line = tropical_line(rv({1, 1}));
  CHECK(corner_locus(PLFunction::affine(line, {rv({3, -2}), 7})).is_empty());
  CHECK(corner_locus(PLFunction::affine(TropicalCycle::ambient(3), {rv({1, 1, 1}), 0})).is_empty());

  // max(0, x1, x2) on R^2: walls x1 = 0 ≥ x2, x2 = 0 ≥ x1 and x1 = x2 ≥ 0
  auto toric = PLFunction::max_of(TropicalCycle::ambient(2), {{rv({0, 0}), 0}, {rv({1, 0}), 0}, {rv({0, 1}), 0}});
  auto walls = TropicalCycle::from_cells(2, 1, {{ray(rv({1, 1})), 1}, {ray(rv({-1, 0})), 1}, {ray(rv({0, -1})), 1}});
  CHECK(same_cycle(corner_locus(toric), walls));
}

TEST_CASE("corner_locus rejects an unbalanced base") {
  auto skew = TropicalCycle::from_cells(2, 1, {{ray(rv({1, 0})), 1}, {ray(rv({0, 1})), 1}, {ray(rv({-1, -1})), 2}}, false);
  auto phi = PLFunction::affine(skew, {rv({0, 0}), 0});
  CHECK_THROWS_AS(corner_locus(phi), std::invalid_argument);
  CHECK_THROWS_AS(corner_locus(PLFunction::affine(point_at(rv({0}), 1), {rv({1}), 0})), std::invalid_argument);
}

TEST_CASE("construction validates continuity and coverage") {
  CHECK_THROWS_AS(PLFunction::from_pieces(real_line(), {{halfspace(rv({-1}), 0), {rv({1}), 0}},
                                                        {halfspace(rv({1}), 0), {rv({2}), 1}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PLFunction::from_pieces(real_line(), {{halfspace(rv({1}), 0), {rv({2}), 0}}}),
                  std::invalid_argument);
  auto split = PolyComplex::from_cells(1, {halfspace(rv({-1}), 0), halfspace(rv({1}), 0)});
  CHECK_THROWS_AS(PLFunction::make(real_line(), split, {{0, {rv({1}), 0}}}), std::invalid_argument);
  CHECK_THROWS_AS(PLFunction::affine(real_line(), {rv({1, 2}), 0}), std::invalid_argument);
}

TEST_CASE("linear parts are canonical modulo the cell") {
  auto diag = TropicalCycle::from_cells(2, 1, {{Polyhedron::make(2, {equal(rv({1, -1}), 0)}), 1}});
  auto f = PLFunction::affine(diag, {rv({3, 1}), 1});
  auto g = PLFunction::affine(diag, {rv({2, 2}), 1});
  REQUIRE(f.pieces().size() == 1);
  CHECK(f.pieces().begin()->second == g.pieces().begin()->second);
  CHECK(f(rv({5, 5})) == 21);
  // x-axis with φ = y + 4: linear part vanishes, constant 4
  auto axis = TropicalCycle::from_cells(2, 1, {{Polyhedron::make(2, {equal(rv({0, 1}), 3)}), 1}});
  auto h = PLFunction::affine(axis, {rv({0, 1}), 1});
  CHECK(h.pieces().begin()->second == AffinePiece{rv({0, 0}), 4});
}

TEST_CASE("is_convex_on_face examples") {
  auto line = real_line();
  size_t sigma = *line.complex().find(Polyhedron::whole_space(1));
  CHECK(is_convex_on_face(abs_x(), sigma, OpenRegion::everything(1)));

  auto rep = convexity_on_face(abs_x(-1), sigma, OpenRegion::everything(1));
  CHECK_FALSE(rep.convex);
  CHECK(abs_x(-1).subdivision().cell(rep.wall) == Polyhedron::point(rv({0})));
  CHECK(rep.jump == -2);

  auto kink = PLFunction::from_pieces(line, {{halfspace(rv({-1}), 0), {rv({1}), 0}},
                                             {halfspace(rv({1}), 0), {rv({2}), 0}}});
  CHECK(is_convex_on_face(kink, sigma, OpenRegion::open_box(rv({-1}), rv({1}))));

  // −|x| away from its kink is convex there
  CHECK(is_convex_on_face(abs_x(-1), sigma, OpenRegion::open_box(rv({1}), rv({3}))));
}

TEST_CASE("region modes for faces meeting several clauses") {
  OpenRegion two{1, {{greater(rv({1}), 1)}, {less(rv({1}), -1)}}};
  auto line = real_line();
  size_t sigma = *line.complex().find(Polyhedron::whole_space(1));
  CHECK_THROWS_AS(convexity_on_face(abs_x(-1), sigma, two, RegionMode::Strict), std::invalid_argument);
  CHECK(is_convex_on_face(abs_x(-1), sigma, two, RegionMode::Lenient));
  OpenRegion with_kink{1, {{greater(rv({1}), 1)}, {greater(rv({1}), -1), less(rv({1}), 1)}}};
  CHECK_FALSE(is_convex_on_face(abs_x(-1), sigma, with_kink, RegionMode::Lenient));
}

TEST_CASE("is_convex_global examples") {
  auto toric = PLFunction::max_of(TropicalCycle::ambient(2), {{rv({0, 0}), 0}, {rv({1, 0}), 0}, {rv({0, 1}), 0}});
  CHECK(is_convex_global(toric));
  CHECK(max_envelope_convex(toric));

  auto min0x = scale(PLFunction::max_of(real_line(), {{rv({0}), 0}, {rv({-1}), 0}}), -1);
  auto rep = convexity_global(min0x);
  CHECK_FALSE(rep.convex);
  CHECK(min0x.subdivision().cell(rep.wall) == Polyhedron::point(rv({0})));
  CHECK_FALSE(max_envelope_convex(min0x));

  CHECK_THROWS_AS(convexity_global(line_conic(1, 1, 1)), std::invalid_argument);
}

TEST_CASE("add, scale and add_affine examples") {
  CHECK(corner_locus(abs_x() + abs_x(-1)).is_empty());
  CHECK(same_cycle(corner_locus(scale(abs_x(), 3)), point_at(rv({0}), 6)));
  auto shifted = add_affine(abs_x(), {rv({1}), 0});
  CHECK(shifted(rv({-5})) == 0);
  CHECK(shifted(rv({5})) == 10);
  CHECK(same_cycle(corner_locus(shifted), point_at(rv({0}), 2)));
  CHECK_THROWS_AS(abs_x() + PLFunction::affine(TropicalCycle::ambient(1, 2), {rv({0}), 0}), std::invalid_argument);
}

TEST_CASE("conic family sign law") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    Rational a = random_rational(rng), b = random_rational(rng), c = random_rational(rng);
    auto cl = corner_locus(line_conic(a, b, c));
    CHECK(degree_zero_cycle(cl) == a + b + c);
    if (a + b + c != 0)
      CHECK(same_cycle(cl, point_at(rv({0, 0}), a + b + c)));
  }
}

TEST_CASE("corner loci are balanced and respect the linear structure") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    auto base = random_base(rng, trial);
    auto phi = random_function_on(rng, base);
    auto psi = random_function_on(rng, base);
    auto cphi = corner_locus(phi);
    CHECK(is_balanced(cphi));
    // affine invariance
    CHECK(same_cycle(corner_locus(add_affine(phi, random_affine(rng, base.ambient_rank()))), cphi));
    // additivity and scaling
    CHECK(same_cycle(corner_locus(phi + psi), cphi + corner_locus(psi)));
    Rational s(uniform(rng, 0, 5), uniform(rng, 1, 3));
    CHECK(same_cycle(corner_locus(scale(phi, s)), s * cphi));
    // refinement invariance
    Hyperplane h{random_nonzero_vector(rng, base.ambient_rank(), -2, 2), Rational(uniform(rng, -2, 2))};
    CHECK(same_cycle(corner_locus(phi.refined_along({h})), cphi));
  }
}

TEST_CASE("convexity equivalence for complete functions") {
  std::mt19937_64 rng(3);
  int convex = 0;
  for (int trial = 0; trial < 40; ++trial) {
    size_t r = 2 + trial % 2;
    auto phi = random_complete_pl(rng, r);
    bool wall = is_convex_global(phi);
    CHECK(wall == max_envelope_convex(phi));
    CHECK(wall == is_effective_on(corner_locus(phi), OpenRegion::everything(r)));
    convex += wall;
    auto cl = corner_locus(phi);
    for (size_t id : cl.support_cells())
      CHECK(cl.weight(id) == wall_weight_by_evaluation(phi, cl.complex().cell(id)));
  }
  CHECK(convex > 5);
  CHECK(convex < 35);
}
