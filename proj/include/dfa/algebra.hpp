#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <stdexcept>
#include <variant>
#include <vector>

#include "dfa/model.hpp"

namespace dfa {

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Intermediate-expansion cap for products (number of live terms).
inline std::size_t& term_cap() {
  static std::size_t cap = 1'000'000;
  return cap;
}

/// Exact exponent vector over the declared zeta basis. Exponents add under
/// multiplication of displacement factors; the zero vector is the identity.
struct DisplacementExponent {
  std::vector<Rational> coeffs;

  DisplacementExponent() = default;
  explicit DisplacementExponent(std::size_t num_zetas) : coeffs(num_zetas) {}

  static DisplacementExponent unit(std::size_t num_zetas, std::size_t m,
                                   Rational k = Rational(1)) {
    DisplacementExponent e(num_zetas);
    e.coeffs[m] = k;
    return e;
  }

  bool is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(),
                       [](const Rational& r) { return r.is_zero(); });
  }

  /// Canonical representation: no trailing zero exponents, so vectors of
  /// different declared lengths compare equal when they denote the same
  /// displacement.
  void normalize() {
    while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
  }

  DisplacementExponent operator+(const DisplacementExponent& o) const {
    DisplacementExponent r = *this;
    if (o.coeffs.size() > r.coeffs.size()) r.coeffs.resize(o.coeffs.size());
    for (std::size_t m = 0; m < o.coeffs.size(); ++m) r.coeffs[m] += o.coeffs[m];
    return r;
  }
  DisplacementExponent operator-() const {
    DisplacementExponent r = *this;
    for (auto& c : r.coeffs) c = -c;
    return r;
  }

  friend bool operator==(const DisplacementExponent&,
                         const DisplacementExponent&) = default;
  friend auto operator<=>(const DisplacementExponent& a,
                          const DisplacementExponent& b) {
    return a.coeffs <=> b.coeffs;
  }
};

/// Canonical word key: creators (ascending), one merged displacement,
/// annihilators (ascending). The coefficient lives in the Polynomial map.
struct WordKey {
  std::vector<int> creators;
  DisplacementExponent displacement;
  std::vector<int> annihilators;

  bool is_identity() const {
    return creators.empty() && annihilators.empty() && displacement.is_zero();
  }
  int degree() const { return int(creators.size() + annihilators.size()); }

  friend bool operator==(const WordKey&, const WordKey&) = default;
  friend auto operator<=>(const WordKey& a, const WordKey& b) {
    if (auto c = a.creators <=> b.creators; c != 0) return c;
    if (auto c = a.displacement <=> b.displacement; c != 0) return c;
    return a.annihilators <=> b.annihilators;
  }
};

/// One generator of the algebra, as fed to normal_form.
struct Generator {
  enum class Kind { create, annihilate, displace, scale } kind;
  int index = -1;                    // test-function index (create/annihilate)
  DisplacementExponent exponent;     // displace
};

inline Generator gen_a(int f) { return {Generator::Kind::annihilate, f, {}}; }
inline Generator gen_ad(int f) { return {Generator::Kind::create, f, {}}; }
inline Generator gen_d(DisplacementExponent e) {
  return {Generator::Kind::displace, -1, std::move(e)};
}

/// Finite complex-linear combination of canonical words.
template <typename S>
class Polynomial {
 public:
  using traits = scalar_traits<S>;
  using term_map = std::map<WordKey, S>;

  Polynomial() = default;

  static Polynomial zero() { return {}; }
  static Polynomial unit() { return scalar(traits::one()); }
  static Polynomial scalar(const S& c) {
    Polynomial p;
    p.add_term(WordKey{}, c);
    return p;
  }
  static Polynomial word(WordKey key, const S& c) {
    Polynomial p;
    p.add_term(std::move(key), c);
    return p;
  }

  const term_map& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  S coefficient(const WordKey& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? traits::zero() : it->second;
  }

  void add_term(WordKey key, const S& c) {
    if (traits::is_negligible(c)) return;
    key.displacement.normalize();
    auto [it, inserted] = terms_.try_emplace(std::move(key), c);
    if (!inserted) {
      it->second += c;
      if (traits::is_negligible(it->second)) terms_.erase(it);
    }
    if (terms_.size() > term_cap())
      throw ResourceError("term cap exceeded during expansion");
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

  Polynomial scaled(const S& c) const {
    Polynomial r;
    for (const auto& [k, v] : terms_) r.add_term(k, v * c);
    return r;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  int max_degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k.degree());
    return d;
  }

 private:
  term_map terms_;
};

/// Max absolute coefficient difference; the numeric-mode equality check.
template <typename S>
double max_coeff_distance(const Polynomial<S>& p, const Polynomial<S>& q) {
  double m = 0;
  for (const auto& [k, c] : p.terms()) m = std::max(m, std::abs(c - q.coefficient(k)));
  for (const auto& [k, c] : q.terms()) m = std::max(m, std::abs(c - p.coefficient(k)));
  return m;
}

namespace detail {

/// K(f) = sum_m k_m zeta_m(f), as the scalar field's real type.
template <typename S>
typename scalar_traits<S>::real disp_functional_value(const DisplacementExponent& e,
                                                      int f,
                                                      const ModelContext<S>& model) {
  using traits = scalar_traits<S>;
  typename traits::real v{};
  for (std::size_t m = 0; m < e.coeffs.size(); ++m) {
    if (e.coeffs[m].is_zero()) continue;
    v += traits::from_rational(e.coeffs[m]) * model.zeta_values[m][f];
  }
  return v;
}

template <typename S>
void insert_sorted(std::vector<int>& v, int x) {
  v.insert(std::upper_bound(v.begin(), v.end(), x), x);
}

}  // namespace detail

/// p * a_f. Appending an annihilator keeps words canonical directly.
template <typename S>
Polynomial<S> mul_annihilator(const Polynomial<S>& p, int f) {
  Polynomial<S> r;
  for (const auto& [key, c] : p.terms()) {
    WordKey k = key;
    detail::insert_sorted<S>(k.annihilators, f);
    r.add_term(std::move(k), c);
  }
  return r;
}

/// p * a_g^dag. The creator is moved left through the annihilators (Wick
/// contractions [a_f, a_g^dag] = (g,f)) and then through the displacement
/// (d_K a_g^dag = (a_g^dag + K(g)) d_K).
template <typename S>
Polynomial<S> mul_creator(const Polynomial<S>& p, int g,
                          const ModelContext<S>& model) {
  using traits = scalar_traits<S>;
  Polynomial<S> r;
  for (const auto& [key, c] : p.terms()) {
    // creator survives to the left of the displacement
    WordKey through = key;
    detail::insert_sorted<S>(through.creators, g);
    r.add_term(std::move(through), c);
    // scalar picked up crossing d_K
    auto kg = detail::disp_functional_value(key.displacement, g, model);
    r.add_term(key, c * traits::from_real(kg));
    // one contraction per annihilator slot
    for (std::size_t i = 0; i < key.annihilators.size(); ++i) {
      WordKey contracted = key;
      contracted.annihilators.erase(contracted.annihilators.begin() + i);
      r.add_term(std::move(contracted), c * model.inner(g, key.annihilators[i]));
    }
  }
  return r;
}

/// p * d_K. Moving d_K left through each annihilator a_f produces
/// (a_f - K(f)) d_K; the displacement exponents then merge additively.
template <typename S>
Polynomial<S> mul_displacement(const Polynomial<S>& p,
                               const DisplacementExponent& exp,
                               const ModelContext<S>& model) {
  using traits = scalar_traits<S>;
  Polynomial<S> r;
  for (const auto& [key, c] : p.terms()) {
    // expand the subset sum over kept/dropped annihilators
    std::vector<std::pair<std::vector<int>, S>> partial{{{}, c}};
    for (int f : key.annihilators) {
      auto kf = traits::from_real(detail::disp_functional_value(exp, f, model));
      std::vector<std::pair<std::vector<int>, S>> next;
      next.reserve(partial.size() * 2);
      for (auto& [kept, coeff] : partial) {
        auto with = kept;
        with.push_back(f);
        next.emplace_back(std::move(with), coeff);
        S dropped = coeff * (-kf);
        if (!traits::is_negligible(dropped))
          next.emplace_back(kept, dropped);
      }
      partial = std::move(next);
      if (partial.size() > term_cap())
        throw ResourceError("term cap exceeded during expansion");
    }
    for (auto& [kept, coeff] : partial) {
      WordKey k;
      k.creators = key.creators;
      k.displacement = key.displacement + exp;
      k.annihilators = std::move(kept);
      r.add_term(std::move(k), coeff);
    }
  }
  return r;
}

template <typename S>
Polynomial<S> mul_generator(const Polynomial<S>& p, const Generator& g,
                            const ModelContext<S>& model) {
  switch (g.kind) {
    case Generator::Kind::annihilate:
      return mul_annihilator(p, g.index);
    case Generator::Kind::create:
      return mul_creator(p, g.index, model);
    case Generator::Kind::displace:
      return mul_displacement(p, g.exponent, model);
    default:
      throw std::logic_error("scale generators are not pushed");
  }
}

/// Canonical normal form of a raw generator word with coefficient.
template <typename S>
Polynomial<S> normal_form(const S& coeff, const std::vector<Generator>& word,
                          const ModelContext<S>& model) {
  for (const auto& g : word) {
    if (g.kind != Generator::Kind::displace && g.index >= 0 &&
        std::size_t(g.index) >= model.num_functions())
      throw ModelError("generator references undeclared test function");
    if (g.kind == Generator::Kind::displace &&
        g.exponent.coeffs.size() > model.num_zetas())
      throw ModelError("generator references undeclared functional");
  }
  auto p = Polynomial<S>::scalar(coeff);
  for (const auto& g : word) p = mul_generator(p, g, model);
  return p;
}

template <typename S>
Polynomial<S> multiply(const Polynomial<S>& p, const Polynomial<S>& q,
                       const ModelContext<S>& model) {
  Polynomial<S> result;
  for (const auto& [key, c] : q.terms()) {
    Polynomial<S> t = p.scaled(c);
    for (int g : key.creators) t = mul_creator(t, g, model);
    if (!key.displacement.is_zero())
      t = mul_displacement(t, key.displacement, model);
    for (int f : key.annihilators) t = mul_annihilator(t, f);
    result += t;
  }
  return result;
}

/// Antilinear involution. The reversed word of a canonical word is again
/// canonical (a <-> a^dag, displacement exponent negated).
template <typename S>
Polynomial<S> adjoint(const Polynomial<S>& p) {
  using traits = scalar_traits<S>;
  Polynomial<S> r;
  for (const auto& [key, c] : p.terms()) {
    WordKey k;
    k.creators = key.annihilators;
    k.displacement = -key.displacement;
    k.annihilators = key.creators;
    r.add_term(std::move(k), traits::conj(c));
  }
  return r;
}

template <typename S>
Polynomial<S> commutator(const Polynomial<S>& p, const Polynomial<S>& q,
                         const ModelContext<S>& model) {
  return multiply(p, q, model) - multiply(q, p, model);
}

template <typename S>
Polynomial<S> power(const Polynomial<S>& p, int n, const ModelContext<S>& model) {
  if (n < 0) throw std::invalid_argument("power: negative exponent");
  auto r = Polynomial<S>::unit();
  for (int i = 0; i < n; ++i) r = multiply(r, p, model);
  return r;
}

/// Sum_{j<=order} p^j / j!.
template <typename S>
Polynomial<S> exp_truncated(const Polynomial<S>& p, int order,
                            const ModelContext<S>& model) {
  using traits = scalar_traits<S>;
  auto result = Polynomial<S>::unit();
  auto term = Polynomial<S>::unit();
  for (int j = 1; j <= order; ++j) {
    term = multiply(term, p, model);
    Polynomial<S> scaled;
    for (const auto& [k, c] : term.terms()) scaled.add_term(k, traits::div_int(c, j));
    term = scaled;
    result += term;
  }
  return result;
}

enum class FieldKind { free_field, def_one, def_one_power, def_two_power };

/// The Hermitian field polynomials under study:
///   free_field     a_f + a_f^dag
///   def_one        i(a_f - a_f^dag) + alpha d + alpha* d^dag
///   def_one_power  i(a_f - a_f^dag) + alpha (d + d^dag)^k
///   def_two_power  i(a_f - a_f^dag) (d + d^dag)^k
template <typename S>
Polynomial<S> build_field(FieldKind kind, int f, const ModelContext<S>& model,
                          int k = 1, std::size_t zeta = 0) {
  using traits = scalar_traits<S>;
  const S i = traits::i();
  WordKey creator_key, annihilator_key;
  creator_key.creators = {f};
  annihilator_key.annihilators = {f};

  if (kind == FieldKind::free_field) {
    auto p = Polynomial<S>::word(annihilator_key, traits::one());
    p += Polynomial<S>::word(creator_key, traits::one());
    return p;
  }

  auto antihermitian = Polynomial<S>::word(annihilator_key, i);
  antihermitian += Polynomial<S>::word(creator_key, -i);

  auto e = DisplacementExponent::unit(model.num_zetas(), zeta);
  WordKey dk, dmk;
  dk.displacement = e;
  dmk.displacement = -e;

  switch (kind) {
    case FieldKind::def_one: {
      const S a = model.alpha_at(f);
      auto p = antihermitian;
      p += Polynomial<S>::word(dk, a);
      p += Polynomial<S>::word(dmk, traits::conj(a));
      return p;
    }
    case FieldKind::def_one_power: {
      const S a = model.alpha_at(f);
      auto sum = Polynomial<S>::word(dk, traits::one());
      sum += Polynomial<S>::word(dmk, traits::one());
      return antihermitian + power(sum, k, model).scaled(a);
    }
    case FieldKind::def_two_power: {
      auto sum = Polynomial<S>::word(dk, traits::one());
      sum += Polynomial<S>::word(dmk, traits::one());
      return multiply(antihermitian, power(sum, k, model), model);
    }
    default:
      throw std::logic_error("unreachable");
  }
}

/// Difference of the two reductions of n_zeta a_f a_g^dag, tracking the
/// formal central symbol n_zeta as a separate component. The n-component
/// cancels identically; the remainder is (g,f)(zeta(g)-zeta(f)) and
/// vanishes iff zeta(f) = zeta(g).
template <typename S>
Polynomial<S> number_op_discrepancy(int f, int g, const ModelContext<S>& model,
                                    std::size_t zeta = 0) {
  using traits = scalar_traits<S>;
  const S zf = traits::from_real(model.zeta_values[zeta][f]);
  const S zg = traits::from_real(model.zeta_values[zeta][g]);
  const S shift = zg - zf;  // n_zeta a_f a_g^dag = (...)(n_zeta + shift) routes

  // a_g^dag a_f + (g,f)
  auto ordered = normal_form(traits::one(), {gen_a(f), gen_ad(g)}, model);
  auto bare = Polynomial<S>::word(
      WordKey{{g}, DisplacementExponent{}, {f}}, traits::one());

  // route 1: contract first, then move n through the whole product:
  //   (a_g^dag a_f + (g,f))(n + shift)
  auto r1_n = ordered;
  auto r1_c = ordered.scaled(shift);
  // route 2: move n through a_g^dag a_f only, keep (g,f) n as is:
  //   a_g^dag a_f (n + shift) + (g,f) n
  auto r2_n = ordered;
  auto r2_c = bare.scaled(shift);

  auto n_component = r1_n - r2_n;
  if (!n_component.empty())
    throw std::logic_error("number-operator component failed to cancel");
  return r1_c - r2_c;
}

}  // namespace dfa
