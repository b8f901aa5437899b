#include "doctest.h"

#include "support/fourier_motzkin.hpp"
#include "tropcert/lattice.hpp"
#include "tropcert/lp.hpp"

#include <random>
#include <set>

using namespace tropcert;

namespace {

IntVector iv(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs)
    v.emplace_back(x);
  return v;
}

RatVector rv(std::initializer_list<long> xs) {
  RatVector v;
  for (long x : xs)
    v.emplace_back(x);
  return v;
}

// Brute-force: lattice points of span_Z(gens) inside the box [-box, box]^2,
// from coefficient vectors in [-coef, coef]^k.
std::set<std::pair<long, long>> points_in_box(const std::vector<IntVector> &gens, long coef,
                                              long box) {
  std::set<std::pair<long, long>> out;
  std::vector<long> c(gens.size(), -coef);
  for (;;) {
    long x = 0, y = 0;
    for (size_t i = 0; i < gens.size(); ++i) {
      x += c[i] * gens[i][0].convert_to<long>();
      y += c[i] * gens[i][1].convert_to<long>();
    }
    if (std::abs(x) <= box && std::abs(y) <= box)
      out.insert({x, y});
    size_t i = 0;
    while (i < c.size() && c[i] == coef)
      c[i++] = -coef;
    if (i == c.size())
      break;
    ++c[i];
  }
  return out;
}

// Coset count of span_Z(gens) in Z^2 by enumeration: points in [0,m)^2 up to
// membership by brute-force combination search.
long count_cosets(const std::vector<IntVector> &gens, long m) {
  auto lattice = points_in_box(gens, 12, 2 * m);
  std::vector<std::pair<long, long>> reps;
  for (long x = 0; x < m; ++x)
    for (long y = 0; y < m; ++y) {
      bool found = false;
      for (auto [rx, ry] : reps)
        if (lattice.count({x - rx, y - ry})) {
          found = true;
          break;
        }
      if (!found)
        reps.push_back({x, y});
    }
  return static_cast<long>(reps.size());
}

} // namespace

TEST_CASE("hermite_basis examples") {
  auto l = hermite_basis({iv({2, 0}), iv({0, 2}), iv({1, 1})}, 2);
  CHECK(l.basis() == std::vector<IntVector>{iv({1, 1}), iv({0, 2})});
  // Oracle: same lattice points in a box as the brute-force span.
  CHECK(points_in_box({iv({2, 0}), iv({0, 2}), iv({1, 1})}, 6, 5) ==
        points_in_box(l.basis(), 8, 5));

  CHECK(hermite_basis({iv({1, 0}), iv({0, 1})}, 2).basis() ==
        std::vector<IntVector>{iv({1, 0}), iv({0, 1})});
  auto empty = hermite_basis({}, 3);
  CHECK(empty.rank() == 0);
  CHECK(empty.ambient_rank() == 3);
  CHECK_THROWS_AS(hermite_basis({iv({1, 0}), iv({1})}, 2), std::invalid_argument);
}

TEST_CASE("hermite_basis is idempotent and span invariant") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    size_t r = 1 + trial % 3;
    size_t k = 1 + rng() % 4;
    std::vector<IntVector> gens;
    for (size_t i = 0; i < k; ++i) {
      IntVector g(r);
      for (auto &x : g)
        x = d(rng);
      gens.push_back(g);
    }
    auto l = hermite_basis(gens, r);
    CHECK(hermite_basis(l.basis(), r) == l);
    for (const auto &g : gens)
      CHECK(l.contains(g));
    // every basis vector lies in the span: adding it changes nothing
    auto extended = gens;
    extended.insert(extended.end(), l.basis().begin(), l.basis().end());
    CHECK(hermite_basis(extended, r) == l);
    CHECK(l.rank() == rank(gens, r));
  }
}

TEST_CASE("lattice_index examples") {
  auto z2 = Sublattice::full(2);
  auto b = hermite_basis({iv({1, 1}), iv({0, 2})}, 2);
  CHECK(count_cosets(b.basis(), 4) == 2);
  CHECK(lattice_index(z2, b) == 2);
  CHECK(lattice_index(b, b) == 1);
  CHECK(lattice_index(Sublattice::full(1), hermite_basis({iv({3})}, 1)) == 3);

  CHECK_THROWS_AS(lattice_index(b, z2), std::invalid_argument);
  CHECK_THROWS_AS(lattice_index(z2, hermite_basis({iv({1, 0})}, 2)), std::invalid_argument);
}

TEST_CASE("lattice_index is multiplicative along nested chains") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> d(-4, 4);
  int checked = 0;
  while (checked < 100) {
    size_t r = 2 + rng() % 2;
    IntegerMatrix m1(r, r), m2(r, r);
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < r; ++j) {
        m1(i, j) = d(rng);
        m2(i, j) = d(rng);
      }
    IntegerMatrix m21 = m2 * m1;
    auto a = Sublattice::full(r);
    auto b = hermite_basis(m1.row_vectors(), r);
    auto c = hermite_basis(m21.row_vectors(), r);
    if (b.rank() != r || c.rank() != r)
      continue;
    BigInt ab = lattice_index(a, b), bc = lattice_index(b, c), ac = lattice_index(a, c);
    CHECK(ab * bc == ac);
    RatMatrix q;
    for (const auto &row : m21.row_vectors())
      q.push_back(to_rational(row));
    CHECK(Rational(ac) == abs(determinant(q)));
    ++checked;
  }
}

TEST_CASE("smith_form certifies U A V = D") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> d(-9, 9);
  for (int trial = 0; trial < 100; ++trial) {
    size_t m = 1 + rng() % 4, n = 1 + rng() % 4;
    IntegerMatrix a(m, n);
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < n; ++j)
        a(i, j) = d(rng);
    auto s = smith_form(a);
    CHECK(s.u * a * s.v == s.d);
    CHECK(s.v * s.v_inverse == IntegerMatrix::identity(n));
    auto diag = s.diagonal();
    for (size_t i = 0; i < diag.size(); ++i) {
      CHECK(diag[i] > 0);
      if (i + 1 < diag.size())
        CHECK(diag[i + 1] % diag[i] == 0);
    }
  }
}

TEST_CASE("primitive_quotient_vector") {
  auto zero = hermite_basis({}, 2);
  CHECK(primitive_quotient_vector(iv({2, 0}), zero) == iv({1, 0}));
  CHECK(primitive_quotient_vector(iv({-2, -2}), zero) == iv({-1, -1}));

  auto tau = hermite_basis({iv({0, 1})}, 2);
  auto w = primitive_quotient_vector(iv({1, 3}), tau);
  QuotientMap q(tau);
  auto c = q.coordinates(w);
  REQUIRE(c.size() == 1);
  CHECK(abs(c[0]) == 1);
  // same direction as v in the quotient
  CHECK(c[0] * q.coordinates(iv({1, 3}))[0] > 0);
  CHECK(w[0] == 1);

  CHECK_THROWS_AS(primitive_quotient_vector(iv({0, 5}), tau), std::invalid_argument);
}

TEST_CASE("primitive_quotient_vector image has content one") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> d(-5, 5);
  int checked = 0;
  while (checked < 200) {
    size_t r = 2 + rng() % 2;
    std::vector<IntVector> gens;
    size_t k = rng() % r;
    for (size_t i = 0; i < k; ++i) {
      IntVector g(r);
      for (auto &x : g)
        x = d(rng);
      gens.push_back(g);
    }
    auto tau = hermite_basis(gens, r);
    IntVector v(r);
    for (auto &x : v)
      x = d(rng);
    QuotientMap q(tau);
    if (is_zero(q.coordinates(v)))
      continue;
    auto w = primitive_quotient_vector(v, tau);
    auto cw = q.coordinates(w);
    CHECK(content(cw) == 1);
    // cw is a positive multiple of the class of v
    auto cv = q.coordinates(v);
    BigInt g = content(cv);
    for (size_t i = 0; i < cv.size(); ++i)
      CHECK(cv[i] == g * cw[i]);
    ++checked;
  }
}

TEST_CASE("integer_kernel and saturation") {
  auto k = integer_kernel({iv({1, 1, 1})}, 3);
  CHECK(k.rank() == 2);
  for (const auto &b : k.basis())
    CHECK(b[0] + b[1] + b[2] == 0);
  CHECK(lattice_index(k, hermite_basis({iv({1, -1, 0}), iv({0, 1, -1})}, 3)) == 1);
  auto s = saturation(hermite_basis({iv({2, 4})}, 2));
  CHECK(s.basis() == std::vector<IntVector>{iv({1, 2})});
}

TEST_CASE("lp_feasible examples") {
  std::vector<Constraint> box{greater_equal(rv({1}), 0), less_equal(rv({1}), 1)};
  auto w = lp_feasible(box, 1);
  REQUIRE(w);
  CHECK((*w)[0] >= 0);
  CHECK((*w)[0] <= 1);

  CHECK_FALSE(lp_feasible({greater(rv({1}), 0), less(rv({1}), 0)}, 1));

  auto simplex = lp_feasible({equal(rv({1, 1}), 1), greater(rv({1, 0}), 0), greater(rv({0, 1}), 0)}, 2);
  REQUIRE(simplex);
  CHECK((*simplex)[0] + (*simplex)[1] == 1);
  CHECK((*simplex)[0] > 0);
  CHECK((*simplex)[1] > 0);

  auto none = lp_feasible({}, 3);
  REQUIRE(none);
  CHECK(*none == RatVector(3));

  // x ≥ 0, x ≤ 0 feasible, x > 0 with x ≤ 0 not.
  CHECK(lp_feasible({greater_equal(rv({1}), 0), less_equal(rv({1}), 0)}, 1));
  CHECK_FALSE(lp_feasible({greater(rv({1}), 0), less_equal(rv({1}), 0)}, 1));
  CHECK_THROWS_AS(lp_feasible({greater(rv({1, 0}), 0)}, 1), std::invalid_argument);
}

TEST_CASE("lp_feasible agrees with Fourier-Motzkin") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<long> d(-3, 3);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 600; ++trial) {
    size_t dim = 1 + trial % 4;
    size_t m = 1 + rng() % 7;
    std::vector<Constraint> cs;
    for (size_t i = 0; i < m; ++i) {
      RatVector a(dim);
      for (auto &x : a)
        x = d(rng);
      Rational b(d(rng), 1 + static_cast<long>(rng() % 3));
      int kind = static_cast<int>(rng() % 6);
      Relation rel = kind < 3 ? Relation::GreaterEqual
                              : (kind < 5 ? Relation::Greater : Relation::Equal);
      cs.push_back({a, b, rel});
    }
    auto w = lp_feasible(cs, dim);
    bool oracle = testing::fm_feasible(cs, dim);
    CHECK(w.has_value() == oracle);
    if (w) {
      ++feasible;
      for (const auto &c : cs)
        CHECK(c.satisfied_by(*w));
    } else {
      ++infeasible;
    }
  }
  CHECK(feasible > 50);
  CHECK(infeasible > 50);
}
