#include "tropcert/lp.hpp"

#include <stdexcept>

namespace tropcert {

bool Constraint::satisfied_by(const RatVector &x) const {
  Rational v = dot(a, x);
  switch (rel) {
  case Relation::GreaterEqual:
    return v >= b;
  case Relation::Greater:
    return v > b;
  case Relation::Equal:
    return v == b;
  }
  return false;
}

Constraint greater_equal(RatVector a, Rational b) {
  return {std::move(a), std::move(b), Relation::GreaterEqual};
}
Constraint greater(RatVector a, Rational b) { return {std::move(a), std::move(b), Relation::Greater}; }
Constraint equal(RatVector a, Rational b) { return {std::move(a), std::move(b), Relation::Equal}; }
Constraint less_equal(RatVector a, Rational b) {
  return {Rational(-1) * a, -b, Relation::GreaterEqual};
}
Constraint less(RatVector a, Rational b) { return {Rational(-1) * a, -b, Relation::Greater}; }

namespace {

// Dense tableau in equality standard form: rows·z = rhs, z ≥ 0.
struct Tableau {
  std::vector<RatVector> rows; // each of length ncols + 1, rhs last
  RatVector obj;               // reduced costs, length ncols + 1; obj[ncols] = -objective
  std::vector<size_t> basis;
  size_t ncols = 0;

  void pivot(size_t r, size_t c) {
    RatVector &pr = rows[r];
    Rational inv = 1 / pr[c];
    for (auto &x : pr)
      if (x != 0)
        x *= inv;
    auto eliminate = [&](RatVector &row) {
      if (row[c] == 0)
        return;
      Rational f = row[c];
      for (size_t j = 0; j <= ncols; ++j)
        if (pr[j] != 0)
          row[j] -= f * pr[j];
    };
    for (size_t i = 0; i < rows.size(); ++i)
      if (i != r)
        eliminate(rows[i]);
    eliminate(obj);
    basis[r] = c;
  }

  // Minimizes with Bland's rule over columns < limit. Returns false when
  // unbounded.
  bool minimize(size_t limit) {
    for (;;) {
      size_t enter = limit;
      for (size_t j = 0; j < limit; ++j)
        if (obj[j] < 0) {
          enter = j;
          break;
        }
      if (enter == limit)
        return true;
      size_t leave = rows.size();
      Rational best;
      for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][enter] <= 0)
          continue;
        Rational ratio = rows[i][ncols] / rows[i][enter];
        if (leave == rows.size() || ratio < best ||
            (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows.size())
        return false;
      pivot(leave, enter);
    }
  }
};

} // namespace

std::optional<RatVector> lp_feasible(const std::vector<Constraint> &constraints, size_t dim) {
  std::vector<const Constraint *> active;
  bool any_strict = false;
  for (const auto &c : constraints) {
    if (c.a.size() != dim)
      throw std::invalid_argument("lp_feasible: constraint of length " +
                                  std::to_string(c.a.size()) + " in dimension " +
                                  std::to_string(dim));
    if (is_zero(c.a)) {
      if (!c.satisfied_by(RatVector(dim)))
        return std::nullopt;
      continue;
    }
    active.push_back(&c);
    any_strict = any_strict || c.rel == Relation::Greater;
  }
  if (active.empty())
    return RatVector(dim);

  // Column layout: x+ [0,dim), x- [dim,2dim), t+ t- (if strict), slacks, artificials.
  const size_t xcols = 2 * dim;
  const size_t tcols = any_strict ? 2 : 0;
  size_t nslack = 0;
  for (auto *c : active)
    if (c->rel != Relation::Equal)
      ++nslack;
  if (any_strict)
    ++nslack; // t ≤ 1
  const size_t nrows = active.size() + (any_strict ? 1 : 0);
  const size_t structural = xcols + tcols + nslack;
  const size_t ncols = structural + nrows;

  Tableau tab;
  tab.ncols = ncols;
  tab.rows.assign(nrows, RatVector(ncols + 1));
  tab.basis.resize(nrows);
  size_t slack = xcols + tcols;
  for (size_t i = 0; i < active.size(); ++i) {
    const Constraint &c = *active[i];
    RatVector &row = tab.rows[i];
    for (size_t j = 0; j < dim; ++j) {
      row[j] = c.a[j];
      row[dim + j] = -c.a[j];
    }
    if (c.rel == Relation::Greater) {
      row[xcols] = -1;
      row[xcols + 1] = 1;
    }
    if (c.rel != Relation::Equal)
      row[slack++] = -1;
    row[ncols] = c.b;
  }
  if (any_strict) {
    RatVector &row = tab.rows[active.size()];
    row[xcols] = 1;
    row[xcols + 1] = -1;
    row[slack++] = 1;
    row[ncols] = 1;
  }
  for (size_t i = 0; i < nrows; ++i) {
    RatVector &row = tab.rows[i];
    if (row[ncols] < 0)
      for (auto &x : row)
        x = -x;
    row[structural + i] = 1;
    tab.basis[i] = structural + i;
  }

  // Phase 1: minimize the sum of artificials.
  tab.obj.assign(ncols + 1, Rational(0));
  for (size_t j = structural; j < ncols; ++j)
    tab.obj[j] = 1;
  for (const auto &row : tab.rows)
    for (size_t j = 0; j <= ncols; ++j)
      if (row[j] != 0)
        tab.obj[j] -= row[j];
  tab.minimize(ncols);
  if (tab.obj[ncols] != 0) // -(sum of artificials)
    return std::nullopt;

  // Drive zero-valued artificials out of the basis; drop redundant rows.
  for (size_t i = 0; i < tab.rows.size();) {
    if (tab.basis[i] < structural) {
      ++i;
      continue;
    }
    size_t col = structural;
    for (size_t j = 0; j < structural; ++j)
      if (tab.rows[i][j] != 0) {
        col = j;
        break;
      }
    if (col == structural) {
      tab.rows.erase(tab.rows.begin() + static_cast<std::ptrdiff_t>(i));
      tab.basis.erase(tab.basis.begin() + static_cast<std::ptrdiff_t>(i));
      continue;
    }
    tab.pivot(i, col);
    ++i;
  }

  auto value_of = [&](size_t col) -> Rational {
    for (size_t i = 0; i < tab.rows.size(); ++i)
      if (tab.basis[i] == col)
        return tab.rows[i][ncols];
    return 0;
  };

  if (any_strict) {
    // Phase 2: minimize -t = -t+ + t-.
    RatVector cost(ncols + 1);
    cost[xcols] = -1;
    cost[xcols + 1] = 1;
    tab.obj = cost;
    for (size_t i = 0; i < tab.rows.size(); ++i) {
      const Rational &cb = cost[tab.basis[i]];
      if (cb == 0)
        continue;
      for (size_t j = 0; j <= ncols; ++j)
        if (tab.rows[i][j] != 0)
          tab.obj[j] -= cb * tab.rows[i][j];
    }
    tab.minimize(structural);
    Rational t = value_of(xcols) - value_of(xcols + 1);
    if (t <= 0)
      return std::nullopt;
  }

  RatVector x(dim);
  for (size_t j = 0; j < dim; ++j)
    x[j] = value_of(j) - value_of(dim + j);
  for (const auto &c : constraints)
    if (!c.satisfied_by(x))
      throw std::logic_error("lp_feasible: witness check failed");
  return x;
}

std::optional<RatVector> nonnegative_solution(const std::vector<RatVector> &a, const RatVector &b, size_t dim) {
  if (a.size() != b.size())
    throw std::invalid_argument("nonnegative_solution: " + std::to_string(a.size()) + " rows but " +
                                std::to_string(b.size()) + " right-hand sides");
  const size_t nrows = a.size(), ncols = dim + nrows;
  Tableau tab;
  tab.ncols = ncols;
  tab.rows.assign(nrows, RatVector(ncols + 1));
  tab.basis.resize(nrows);
  for (size_t i = 0; i < nrows; ++i) {
    if (a[i].size() != dim)
      throw std::invalid_argument("nonnegative_solution: row of length " + std::to_string(a[i].size()) +
                                  " in dimension " + std::to_string(dim));
    RatVector &row = tab.rows[i];
    for (size_t j = 0; j < dim; ++j)
      row[j] = a[i][j];
    row[ncols] = b[i];
    if (b[i] < 0)
      for (auto &x : row)
        x = -x;
    row[dim + i] = 1;
    tab.basis[i] = dim + i;
  }
  tab.obj.assign(ncols + 1, Rational(0));
  for (size_t j = dim; j < ncols; ++j)
    tab.obj[j] = 1;
  for (const auto &row : tab.rows)
    for (size_t j = 0; j <= ncols; ++j)
      if (row[j] != 0)
        tab.obj[j] -= row[j];
  tab.minimize(ncols);
  if (tab.obj[ncols] != 0)
    return std::nullopt;
  RatVector x(dim);
  for (size_t i = 0; i < nrows; ++i)
    if (tab.basis[i] < dim)
      x[tab.basis[i]] = tab.rows[i][ncols];
  for (size_t i = 0; i < nrows; ++i)
    if (dot(a[i], x) != b[i])
      throw std::logic_error("nonnegative_solution: witness check failed");
  return x;
}

} // namespace tropcert
