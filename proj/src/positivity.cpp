#include "tropcert/positivity.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <stdexcept>

namespace tropcert {

namespace {

// Elements of the exterior algebra on 2r generators: bit i < r is d'x_i,
// bit r + i is d''x_i; monomials are stored in ascending generator order.
using Mask = uint64_t;
using Element = std::map<Mask, Rational>;

int merge_sign(Mask a, Mask b) {
  int inversions = 0;
  for (Mask rest = b; rest; rest &= rest - 1) {
    int g = std::countr_zero(rest);
    inversions += std::popcount(a >> (g + 1));
  }
  return inversions % 2 ? -1 : 1;
}

Element multiply(const Element &x, const Element &y) {
  Element out;
  for (const auto &[a, ca] : x)
    for (const auto &[b, cb] : y) {
      if (a & b)
        continue;
      out[a | b] += merge_sign(a, b) * ca * cb;
    }
  std::erase_if(out, [](const auto &kv) { return kv.second == 0; });
  return out;
}

Element generator(size_t g) { return {{Mask(1) << g, Rational(1)}}; }

Mask mask_of(const IndexSet &s, size_t shift) {
  Mask m = 0;
  for (size_t i : s)
    m |= Mask(1) << (i + shift);
  return m;
}

IndexSet indices_of(Mask m, size_t lo, size_t hi) {
  IndexSet out;
  for (size_t g = lo; g < hi; ++g)
    if (m >> g & 1)
      out.push_back(g - lo);
  return out;
}

Element to_element(const SuperformPoint &f) {
  Element out;
  for (const auto &[key, c] : f.coefficients())
    out[mask_of(key.first, 0) | mask_of(key.second, f.rank())] = c;
  return out;
}

SuperformPoint from_element(size_t r, size_t p, size_t q, const Element &e) {
  SuperformPoint out(r, p, q);
  for (const auto &[m, c] : e) {
    auto i = indices_of(m, 0, r), j = indices_of(m, r, 2 * r);
    if (i.size() != p || j.size() != q)
      throw std::logic_error("superform: bidegree mismatch in product");
    out.add(i, j, c);
  }
  return out;
}

// Product of the given generators in the given order.
Element ordered_product(const std::vector<size_t> &gens) {
  Element out{{0, Rational(1)}};
  for (size_t g : gens)
    out = multiply(out, generator(g));
  return out;
}

Element one_form(size_t r, const RatVector &gamma, bool second) {
  Element out;
  for (size_t i = 0; i < r; ++i)
    if (gamma[i] != 0)
      out[Mask(1) << (i + (second ? r : 0))] = gamma[i];
  return out;
}

Element involution(size_t r, const Element &e) {
  Element out;
  for (const auto &[m, c] : e) {
    std::vector<size_t> gens;
    for (size_t g = 0; g < 2 * r; ++g)
      if (m >> g & 1)
        gens.push_back(g < r ? g + r : g - r);
    for (const auto &[m2, c2] : ordered_product(gens))
      out[m2] += c * c2;
  }
  std::erase_if(out, [](const auto &kv) { return kv.second == 0; });
  return out;
}

Rational volume_coefficient(size_t r, const Element &e) {
  Mask full = r == 0 ? 0 : (Mask(1) << (2 * r)) - 1;
  auto it = e.find(full);
  if (it == e.end())
    return 0;
  std::vector<size_t> gens;
  for (size_t i = 0; i < r; ++i) {
    gens.push_back(i);
    gens.push_back(r + i);
  }
  return it->second * ordered_product(gens).at(full);
}

void check_index_set(const IndexSet &s, size_t r) {
  for (size_t k = 0; k < s.size(); ++k)
    if (s[k] >= r || (k > 0 && s[k] <= s[k - 1]))
      throw std::invalid_argument("superform: index set must be strictly increasing in [0, " +
                                  std::to_string(r) + ")");
}

void require_symmetric(const SuperformPoint &a) {
  if (!a.is_symmetric())
    throw std::invalid_argument("positivity: form is not a symmetric (p,p)-form");
}

// Wedge of 2k one-forms γ_1 ∧ Jγ_1 ∧ ... ∧ γ_k ∧ Jγ_k.
Element paired_product(size_t r, const std::vector<RatVector> &gammas) {
  Element out{{0, Rational(1)}};
  for (const auto &g : gammas) {
    out = multiply(out, one_form(r, g, false));
    out = multiply(out, one_form(r, g, true));
  }
  return out;
}

Rational weak_value(const SuperformPoint &alpha, const std::vector<RatVector> &gammas) {
  return volume_coefficient(alpha.rank(), multiply(to_element(alpha), paired_product(alpha.rank(), gammas)));
}

// The (k,0)-form with coefficients beta over subsets(r, k).
Element k_form(size_t r, size_t k, const RatVector &beta) {
  Element out;
  auto ks = subsets(r, k);
  for (size_t i = 0; i < ks.size(); ++i)
    if (beta[i] != 0)
      out[mask_of(ks[i], 0)] = beta[i];
  return out;
}

// γ_1, ..., γ_k with β = γ_1 ∧ ... ∧ γ_k, when β is decomposable.
std::optional<std::vector<RatVector>> decompose(size_t r, size_t k, const RatVector &beta) {
  if (k == 0)
    return std::vector<RatVector>{};
  Element b = k_form(r, k, beta);
  if (b.empty())
    return std::nullopt;
  // γ with γ ∧ β = 0
  std::map<Mask, size_t> rows;
  std::vector<Element> images;
  for (size_t i = 0; i < r; ++i)
    images.push_back(multiply(generator(i), b));
  for (const auto &img : images)
    for (const auto &[m, c] : img)
      rows.emplace(m, rows.size());
  RatMatrix m(rows.size(), RatVector(r));
  for (size_t i = 0; i < r; ++i)
    for (const auto &[mk, c] : images[i])
      m[rows.at(mk)][i] = c;
  RatMatrix kernel = rows.empty() ? RatMatrix{} : null_space(m, r);
  if (rows.empty())
    for (size_t i = 0; i < r; ++i) {
      RatVector e(r);
      e[i] = 1;
      kernel.push_back(e);
    }
  if (kernel.size() != k)
    return std::nullopt;
  Element prod{{0, Rational(1)}};
  for (const auto &g : kernel)
    prod = multiply(prod, one_form(r, g, false));
  const auto &[mask, c] = *b.begin();
  auto it = prod.find(mask);
  if (it == prod.end())
    return std::nullopt;
  Rational scale = c / it->second;
  kernel[0] = scale * kernel[0];
  return kernel;
}

// Q(β) = coefficient of d'x_{0123} in β ∧ β for 2-forms in rank 4.
RatMatrix plucker_quadric(size_t r) {
  auto ks = subsets(r, 2);
  RatMatrix q(ks.size(), RatVector(ks.size()));
  Mask full = (Mask(1) << r) - 1;
  for (size_t a = 0; a < ks.size(); ++a)
    for (size_t b = 0; b < ks.size(); ++b) {
      auto prod = multiply(Element{{mask_of(ks[a], 0), 1}}, Element{{mask_of(ks[b], 0), 1}});
      auto it = prod.find(full);
      if (it != prod.end())
        q[a][b] = it->second;
    }
  return q;
}

RatMatrix combine(const RatMatrix &g, const Rational &t, const RatMatrix &q) {
  RatMatrix out = g;
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t j = 0; j < g.size(); ++j)
      out[i][j] += t * q[i][j];
  return out;
}

// A t with G + tQ ⪰ 0 certifies G ≥ 0 on decomposable 2-forms in rank 4.
std::optional<Rational> finsler_multiplier(const RatMatrix &g, const RatMatrix &q) {
  for (long n = 0; n <= 64; ++n)
    for (int s : {1, -1}) {
      Rational t(s * n, 4);
      if (psd_test(combine(g, t, q)).psd)
        return t;
      if (n == 0)
        break;
    }
  return std::nullopt;
}

RatVector random_gamma(std::mt19937_64 &rng, size_t r) {
  std::uniform_int_distribution<int> d(-3, 3);
  RatVector g(r);
  do
    for (auto &x : g)
      x = d(rng);
  while (is_zero(g));
  return g;
}

// Deterministic 1-forms e_i, e_i + e_j, e_i - e_j.
std::vector<RatVector> basic_gammas(size_t r) {
  std::vector<RatVector> out;
  for (size_t i = 0; i < r; ++i) {
    RatVector e(r);
    e[i] = 1;
    out.push_back(e);
  }
  for (size_t i = 0; i < r; ++i)
    for (size_t j = i + 1; j < r; ++j)
      for (int s : {1, -1}) {
        RatVector e(r);
        e[i] = 1;
        e[j] = s;
        out.push_back(e);
      }
  return out;
}

// k-element tuples drawn from the basic 1-forms, then random tuples.
std::vector<std::vector<RatVector>> gamma_tuples(size_t r, size_t k, const PositivityOptions &opts) {
  std::vector<std::vector<RatVector>> out;
  auto basic = basic_gammas(r);
  for (const auto &idx : subsets(basic.size(), k)) {
    if (out.size() >= opts.samples)
      break;
    std::vector<RatVector> t;
    for (size_t i : idx)
      t.push_back(basic[i]);
    out.push_back(std::move(t));
  }
  std::mt19937_64 rng(opts.seed);
  for (size_t s = 0; s < opts.samples; ++s) {
    std::vector<RatVector> t;
    for (size_t i = 0; i < k; ++i)
      t.push_back(random_gamma(rng, r));
    out.push_back(std::move(t));
  }
  return out;
}

// Inverse of the Gram map on symmetric (p,p)-forms: each coefficient pair
// (I,J), (J,I) lands on the single Gram entry (I^c, J^c) with a unit factor.
struct GramInverse {
  struct Entry {
    IndexSet i, j;
    size_t a, b;
    Rational unit;
  };
  size_t r, p;
  std::vector<Entry> entries;

  GramInverse(size_t r_, size_t p_) : r(r_), p(p_) {
    auto ps = subsets(r, p), ks = subsets(r, r - p);
    auto complement_index = [&](const IndexSet &s) {
      IndexSet c;
      for (size_t i = 0; i < r; ++i)
        if (!std::binary_search(s.begin(), s.end(), i))
          c.push_back(i);
      return size_t(std::find(ks.begin(), ks.end(), c) - ks.begin());
    };
    for (size_t x = 0; x < ps.size(); ++x)
      for (size_t y = x; y < ps.size(); ++y) {
        auto sym = SuperformPoint::elementary(r, ps[x], ps[y]);
        if (x != y)
          sym = sym + SuperformPoint::elementary(r, ps[y], ps[x]);
        size_t a = complement_index(ps[x]), b = complement_index(ps[y]);
        entries.push_back({ps[x], ps[y], a, b, positivity_gram(sym)[a][b]});
      }
  }

  SuperformPoint operator()(const RatMatrix &h) const {
    SuperformPoint out(r, p, p);
    for (const auto &e : entries) {
      Rational c = h[e.a][e.b] / e.unit;
      out.add(e.i, e.j, c);
      if (e.i != e.j)
        out.add(e.j, e.i, c);
    }
    return out;
  }
};

PositivityVerdict exact_weak(const SuperformPoint &alpha) {
  auto v = positivity_report(alpha);
  v.method = "degree equality: " + v.method;
  if (v.verdict == Tri::No) {
    size_t k = alpha.rank() - alpha.p();
    auto gammas = decompose(alpha.rank(), k, v.beta);
    if (!gammas)
      throw std::logic_error("positivity: Gram witness is not decomposable in an exact degree");
    Rational value = weak_value(alpha, *gammas);
    if (value >= 0)
      throw std::logic_error("positivity: decomposed witness does not violate the defining wedge");
    v.gammas = std::move(*gammas);
    v.value = value;
  }
  return v;
}

} // namespace

std::vector<IndexSet> subsets(size_t n, size_t k) {
  std::vector<IndexSet> out;
  if (k > n)
    return out;
  IndexSet cur(k);
  for (size_t i = 0; i < k; ++i)
    cur[i] = i;
  while (true) {
    out.push_back(cur);
    size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + i - 1)
      --i;
    if (i == 0)
      break;
    ++cur[i - 1];
    for (size_t j = i; j < k; ++j)
      cur[j] = cur[j - 1] + 1;
  }
  return out;
}

SuperformPoint::SuperformPoint(size_t r, size_t p, size_t q) : r_(r), p_(p), q_(q) {
  if (2 * r > 64)
    throw std::invalid_argument("superform: rank " + std::to_string(r) + " exceeds 32");
}

SuperformPoint SuperformPoint::scalar(size_t r, const Rational &c) {
  SuperformPoint out(r, 0, 0);
  out.add({}, {}, c);
  return out;
}

SuperformPoint SuperformPoint::from_matrix(size_t r, size_t p, const RatMatrix &m) {
  auto ps = subsets(r, p);
  if (m.size() != ps.size())
    throw std::invalid_argument("superform: coefficient matrix must be " + std::to_string(ps.size()) + " square");
  SuperformPoint out(r, p, p);
  for (size_t a = 0; a < ps.size(); ++a) {
    if (m[a].size() != ps.size())
      throw std::invalid_argument("superform: coefficient matrix must be square");
    for (size_t b = 0; b < ps.size(); ++b)
      out.add(ps[a], ps[b], m[a][b]);
  }
  return out;
}

SuperformPoint SuperformPoint::elementary(size_t r, const IndexSet &i, const IndexSet &j, const Rational &c) {
  SuperformPoint out(r, i.size(), j.size());
  out.add(i, j, c);
  return out;
}

SuperformPoint SuperformPoint::volume(size_t r) {
  std::vector<size_t> gens;
  for (size_t i = 0; i < r; ++i) {
    gens.push_back(i);
    gens.push_back(r + i);
  }
  return from_element(r, r, r, ordered_product(gens));
}

Rational SuperformPoint::coefficient(const IndexSet &i, const IndexSet &j) const {
  auto it = coeffs_.find({i, j});
  return it == coeffs_.end() ? Rational(0) : it->second;
}

void SuperformPoint::add(const IndexSet &i, const IndexSet &j, const Rational &c) {
  check_index_set(i, r_);
  check_index_set(j, r_);
  if (i.size() != p_ || j.size() != q_)
    throw std::invalid_argument("superform: index sets of sizes " + std::to_string(i.size()) + ", " +
                                std::to_string(j.size()) + " in a (" + std::to_string(p_) + "," +
                                std::to_string(q_) + ")-form");
  if (c == 0)
    return;
  auto &slot = coeffs_[{i, j}];
  slot += c;
  if (slot == 0)
    coeffs_.erase({i, j});
}

bool SuperformPoint::is_symmetric() const {
  if (p_ != q_)
    return false;
  for (const auto &[key, c] : coeffs_)
    if (coefficient(key.second, key.first) != c)
      return false;
  return true;
}

SuperformPoint SuperformPoint::involution() const {
  return from_element(r_, q_, p_, tropcert::involution(r_, to_element(*this)));
}

Rational SuperformPoint::volume_coefficient() const {
  if (p_ != r_ || q_ != r_)
    throw std::invalid_argument("superform: volume coefficient needs an (r,r)-form");
  return tropcert::volume_coefficient(r_, to_element(*this));
}

SuperformPoint SuperformPoint::pullback(const IntegerMatrix &c) const {
  if (c.cols() != r_)
    throw std::invalid_argument("superform: pullback matrix has " + std::to_string(c.cols()) +
                                " columns, expected " + std::to_string(r_));
  const size_t e = c.rows();
  std::vector<Element> images(2 * r_);
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < e; ++j)
      if (c(j, i) != 0) {
        images[i][Mask(1) << j] = Rational(c(j, i));
        images[r_ + i][Mask(1) << (e + j)] = Rational(c(j, i));
      }
  Element out;
  for (const auto &[m, coef] : to_element(*this)) {
    Element prod{{0, coef}};
    for (size_t g = 0; g < 2 * r_; ++g)
      if (m >> g & 1)
        prod = multiply(prod, images[g]);
    for (const auto &[m2, c2] : prod)
      out[m2] += c2;
  }
  std::erase_if(out, [](const auto &kv) { return kv.second == 0; });
  return from_element(e, p_, q_, out);
}

SuperformPoint SuperformPoint::operator+(const SuperformPoint &o) const {
  if (o.r_ != r_ || o.p_ != p_ || o.q_ != q_)
    throw std::invalid_argument("superform: sum of forms of different type");
  SuperformPoint out = *this;
  for (const auto &[key, c] : o.coeffs_)
    out.add(key.first, key.second, c);
  return out;
}

SuperformPoint SuperformPoint::operator*(const Rational &s) const {
  SuperformPoint out(r_, p_, q_);
  if (s != 0)
    for (const auto &[key, c] : coeffs_)
      out.coeffs_[key] = s * c;
  return out;
}

SuperformPoint wedge(const SuperformPoint &a, const SuperformPoint &b) {
  if (a.rank() != b.rank())
    throw std::invalid_argument("superform: wedge of forms on different ranks");
  return from_element(a.rank(), a.p() + b.p(), a.q() + b.q(), multiply(to_element(a), to_element(b)));
}

RatMatrix positivity_gram(const SuperformPoint &alpha) {
  require_symmetric(alpha);
  const size_t r = alpha.rank(), k = r - alpha.p();
  auto ks = subsets(r, k);
  Rational sign = (k * (k - 1) / 2) % 2 ? -1 : 1;
  Element a = to_element(alpha);
  RatMatrix g(ks.size(), RatVector(ks.size()));
  for (size_t i = 0; i < ks.size(); ++i)
    for (size_t j = 0; j < ks.size(); ++j) {
      Element bb{{mask_of(ks[i], 0) | mask_of(ks[j], r), Rational(1)}};
      // d'x_K ∧ d''x_L in canonical order is already d'x_K ∧ J(d'x_L)
      g[i][j] = sign * volume_coefficient(r, multiply(a, bb));
    }
  for (size_t i = 0; i < ks.size(); ++i)
    for (size_t j = i + 1; j < ks.size(); ++j)
      g[i][j] = g[j][i] = (g[i][j] + g[j][i]) / 2;
  return g;
}

PsdResult psd_test(const RatMatrix &g) {
  const size_t n = g.size();
  RatMatrix m = g;
  std::vector<RatVector> t(n, RatVector(n));
  for (size_t i = 0; i < n; ++i)
    t[i][i] = 1;
  std::vector<size_t> active(n);
  for (size_t i = 0; i < n; ++i)
    active[i] = i;
  while (!active.empty()) {
    for (size_t i : active)
      if (m[i][i] < 0)
        return {false, t[i]};
    auto piv = std::find_if(active.begin(), active.end(), [&](size_t i) { return m[i][i] > 0; });
    if (piv == active.end()) {
      for (size_t i : active)
        for (size_t j : active)
          if (m[i][j] != 0) {
            Rational s = m[i][j] > 0 ? -1 : 1;
            return {false, t[i] + s * t[j]};
          }
      return {true, {}};
    }
    size_t p = *piv;
    active.erase(piv);
    for (size_t j : active) {
      Rational f = m[p][j] / m[p][p];
      if (f == 0)
        continue;
      t[j] = t[j] - f * t[p];
    }
    RatMatrix next = m;
    for (size_t i : active)
      for (size_t j : active)
        next[i][j] = m[i][j] - m[i][p] * m[p][j] / m[p][p];
    m = std::move(next);
  }
  return {true, {}};
}

std::string to_string(Tri t) {
  switch (t) {
  case Tri::Yes:
    return "yes";
  case Tri::No:
    return "no";
  default:
    return "unknown";
  }
}

bool is_exact_degree(size_t r, size_t p) { return p <= 1 || p + 1 >= r; }

PositivityVerdict positivity_report(const SuperformPoint &alpha) {
  auto g = positivity_gram(alpha);
  auto psd = psd_test(g);
  PositivityVerdict v;
  v.method = "gram psd";
  if (!psd.psd) {
    v.verdict = Tri::No;
    v.beta = psd.witness;
    Rational value = 0;
    for (size_t i = 0; i < g.size(); ++i)
      for (size_t j = 0; j < g.size(); ++j)
        value += psd.witness[i] * g[i][j] * psd.witness[j];
    v.value = value;
  }
  return v;
}

PositivityVerdict is_weakly_positive(const SuperformPoint &alpha, const PositivityOptions &opts) {
  require_symmetric(alpha);
  const size_t r = alpha.rank(), k = r - alpha.p();
  if (is_exact_degree(r, alpha.p()))
    return exact_weak(alpha);
  auto pos = positivity_report(alpha);
  if (pos.verdict == Tri::Yes) {
    pos.method = "positive";
    return pos;
  }
  PositivityVerdict v;
  if (auto g = decompose(r, k, pos.beta)) {
    Rational value = weak_value(alpha, *g);
    if (value < 0)
      return {Tri::No, "gram witness", std::move(*g), {}, value};
  }
  for (auto &tuple : gamma_tuples(r, k, opts)) {
    Rational value = weak_value(alpha, tuple);
    if (value < 0)
      return {Tri::No, "sampled decomposables (seed " + std::to_string(opts.seed) + ")", std::move(tuple), {},
              value};
  }
  if (r == 4 && k == 2)
    if (auto t = finsler_multiplier(positivity_gram(alpha), plucker_quadric(r)))
      return {Tri::Yes, "gram plus " + to_string(*t) + " times the Pluecker quadric is psd", {}, {}, *t};
  return {Tri::Unknown, "no violation among " + std::to_string(opts.samples) + " samples (seed " +
                            std::to_string(opts.seed) + ")", {}, {}, 0};
}

PositivityVerdict is_strongly_positive(const SuperformPoint &alpha, const PositivityOptions &opts) {
  require_symmetric(alpha);
  const size_t r = alpha.rank(), p = alpha.p();
  if (is_exact_degree(r, p)) {
    auto v = exact_weak(alpha);
    return v;
  }
  auto pos = positivity_report(alpha);
  if (pos.verdict == Tri::No) {
    pos.method = "not positive";
    return pos;
  }
  // nonnegative combination of sampled products γ_1 ∧ Jγ_1 ∧ ... ∧ γ_p ∧ Jγ_p
  std::vector<Element> gens;
  for (const auto &tuple : gamma_tuples(r, p, opts)) {
    auto e = paired_product(r, tuple);
    if (!e.empty())
      gens.push_back(std::move(e));
  }
  std::map<Mask, size_t> rows;
  Element a = to_element(alpha);
  for (const auto &[m, c] : a)
    rows.emplace(m, rows.size());
  for (const auto &e : gens)
    for (const auto &[m, c] : e)
      rows.emplace(m, rows.size());
  RatMatrix lhs(rows.size(), RatVector(gens.size()));
  RatVector rhs(rows.size());
  for (size_t j = 0; j < gens.size(); ++j)
    for (const auto &[m, c] : gens[j])
      lhs[rows.at(m)][j] = c;
  for (const auto &[m, c] : a)
    rhs[rows.at(m)] = c;
  if (auto lambda = nonnegative_solution(lhs, rhs, gens.size())) {
    size_t used = std::count_if(lambda->begin(), lambda->end(), [](const Rational &x) { return x != 0; });
    return {Tri::Yes, "nonnegative combination of " + std::to_string(gens.size()) + " decomposable products", {},
            {}, Rational(used)};
  }
  if (r == 4 && p == 2) {
    // weakly positive β with Gram matrix P - tQ, P ⪰ 0, pairing negatively
    auto q = plucker_quadric(r);
    std::mt19937_64 rng(opts.seed ^ 0x5eedULL);
    std::uniform_int_distribution<int> d(-2, 2), terms(1, 3), tt(-8, 8);
    GramInverse form_from_gram(r, r - p);
    for (size_t s = 0; s < opts.samples; ++s) {
      RatMatrix h(q.size(), RatVector(q.size()));
      for (int n = terms(rng); n > 0; --n) {
        RatVector u(q.size());
        for (auto &x : u)
          x = d(rng);
        for (size_t i = 0; i < q.size(); ++i)
          for (size_t j = 0; j < q.size(); ++j)
            h[i][j] += u[i] * u[j];
      }
      Rational t(tt(rng), 2);
      auto beta = form_from_gram(combine(h, -t, q));
      if (!psd_test(combine(positivity_gram(beta), t, q)).psd)
        throw std::logic_error("positivity: separating form is not certified weakly positive");
      Rational pairing = wedge(alpha, beta).volume_coefficient();
      if (pairing < 0)
        return {Tri::No, "pairs negatively with a weakly positive form", {}, {}, pairing};
    }
  }
  return {Tri::Unknown, "no certificate among " + std::to_string(opts.samples) + " samples (seed " +
                            std::to_string(opts.seed) + ")", {}, {}, 0};
}

FacewiseForm FacewiseForm::make(TropicalCycle carrier, std::map<size_t, SuperformPoint> forms, size_t p,
                                size_t q) {
  FacewiseForm out;
  for (size_t id : carrier.support_cells()) {
    auto it = forms.find(id);
    if (it == forms.end())
      throw std::invalid_argument("preform: no form on cell " + std::to_string(id));
    size_t d = carrier.complex().cell(id).dim();
    if (it->second.rank() != d)
      throw std::invalid_argument("preform: form on cell " + std::to_string(id) + " has rank " +
                                  std::to_string(it->second.rank()) + ", expected " + std::to_string(d));
    if (it->second.p() != p || it->second.q() != q)
      throw std::invalid_argument("preform: form on cell " + std::to_string(id) + " has the wrong bidegree");
    out.forms_.emplace(id, it->second);
  }
  out.carrier_ = std::move(carrier);
  out.p_ = p;
  out.q_ = q;
  return out;
}

FacewiseForm FacewiseForm::current_of(const TropicalCycle &carrier) {
  std::map<size_t, SuperformPoint> forms;
  for (size_t id : carrier.support_cells())
    forms.emplace(id, SuperformPoint::scalar(carrier.dim(), 1));
  return make(carrier, std::move(forms), 0, 0);
}

FacewiseForm FacewiseForm::ambient(const SuperformPoint &form) {
  auto c = TropicalCycle::ambient(form.rank());
  std::map<size_t, SuperformPoint> forms;
  for (size_t id : c.support_cells())
    forms.emplace(id, form);
  return make(c, std::move(forms), form.p(), form.q());
}

SuperformPoint FacewiseForm::effective_form(size_t cell) const {
  return forms_.at(cell) * carrier_.weight(cell);
}

PreformVerdict preform_is_positive(const FacewiseForm &a, const OpenRegion &omega, PositivityMode mode,
                                   const PositivityOptions &opts) {
  PreformVerdict out;
  for (size_t id : a.carrier().support_cells()) {
    if (!cell_meets_region(a.carrier().complex().cell(id), omega))
      continue;
    auto form = a.effective_form(id);
    PositivityVerdict v;
    switch (mode) {
    case PositivityMode::Weak:
      v = is_weakly_positive(form, opts);
      break;
    case PositivityMode::Positive:
      v = positivity_report(form);
      break;
    default:
      v = is_strongly_positive(form, opts);
    }
    if (v.verdict == Tri::No)
      return {Tri::No, id, std::move(v)};
    if (v.verdict == Tri::Unknown && out.verdict == Tri::Yes)
      out = {Tri::Unknown, id, std::move(v)};
  }
  return out;
}

namespace {

// Rows: coordinates of the lattice basis of `inner` in that of `outer`.
IntegerMatrix basis_change(const Polyhedron &inner, const Polyhedron &outer) {
  auto in = inner.lattice(), out = outer.lattice();
  std::vector<IntVector> rows;
  for (const auto &b : in.basis()) {
    auto c = out.coordinates(b);
    if (!c)
      throw std::logic_error("preform: cell lattice is not contained in the face lattice");
    rows.push_back(std::move(*c));
  }
  return IntegerMatrix::from_rows(rows, out.rank());
}

} // namespace

FacewiseForm wedge(const FacewiseForm &a, const FacewiseForm &b, const std::optional<RatVector> &given) {
  const auto &ca = a.carrier(), &cb = b.carrier();
  if (ca.ambient_rank() != cb.ambient_rank())
    throw std::invalid_argument("preform wedge: ambient ranks differ");
  if (ca.dim() + cb.dim() < ca.ambient_rank())
    throw std::invalid_argument("preform wedge: carrier dimensions " + std::to_string(ca.dim()) + " + " +
                                std::to_string(cb.dim()) + " are below the ambient rank");
  RatVector v = given ? *given : generic_displacement(ca, cb);
  auto pieces = stable_intersection_pieces(ca, cb, v);
  std::vector<std::pair<Polyhedron, Rational>> cells;
  for (const auto &piece : pieces)
    cells.emplace_back(piece.cell, piece.multiplicity);
  const size_t d = ca.dim() + cb.dim() - ca.ambient_rank();
  auto carrier = assemble_cycle(ca.ambient_rank(), d, cells);
  const size_t p = a.p() + b.p(), q = a.q() + b.q();
  std::map<size_t, SuperformPoint> forms;
  for (size_t id : carrier.support_cells()) {
    const auto &kappa = carrier.complex().cell(id);
    SuperformPoint sum(d, p, q);
    for (const auto &piece : pieces) {
      if (!piece.cell.contains(kappa))
        continue;
      const auto &da = ca.complex().cell(piece.first);
      const auto &db = cb.complex().cell(piece.second);
      auto fa = a.forms().at(piece.first).pullback(basis_change(kappa, da));
      auto fb = b.forms().at(piece.second).pullback(basis_change(kappa, db));
      sum = sum + wedge(fa, fb) * piece.multiplicity;
    }
    forms.emplace(id, sum * (Rational(1) / carrier.weight(id)));
  }
  return FacewiseForm::make(std::move(carrier), std::move(forms), p, q);
}

} // namespace tropcert
