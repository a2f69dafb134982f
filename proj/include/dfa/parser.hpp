#pragma once

#include <cctype>
#include <memory>
#include <sstream>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "dfa/algebra.hpp"

namespace dfa {

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at line " + std::to_string(line_) +
                           ", column " + std::to_string(col_)),
        line(line_),
        column(col_) {}
};

// ---------------------------------------------------------------------------
// AST

struct ExprAST;
using ExprPtr = std::shared_ptr<ExprAST>;

struct ExprAST {
  struct Sum {
    std::vector<std::pair<int, ExprPtr>> terms;  // sign, term
  };
  struct Product {
    std::vector<ExprPtr> factors;
  };
  struct Scalar {
    Complex value;
  };
  struct Power {
    ExprPtr base;
    int exponent;
  };
  struct Dag {
    ExprPtr inner;
  };
  struct GenA {
    std::string name;
  };
  struct GenAd {
    std::string name;
  };
  struct GenD {
    // components (k, zeta-name); empty name means the model's sole functional
    std::vector<std::pair<Rational, std::string>> components;
  };

  std::variant<Sum, Product, Scalar, Power, Dag, GenA, GenAd, GenD> node;
};

// ---------------------------------------------------------------------------
// recursive-descent parser
//
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := primary ('^' uint)*
//   primary:= scalar | 'i' | generator | '(' expr ')' | 'dag(' expr ')'

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    auto e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  ExprPtr parse_expr() {
    ExprAST::Sum sum;
    int sign = 1;
    skip_ws();
    if (peek() == '+' || peek() == '-') sign = (get() == '-') ? -1 : 1;
    sum.terms.emplace_back(sign, parse_term());
    while (true) {
      skip_ws();
      if (peek() == '+' || peek() == '-') {
        sign = (get() == '-') ? -1 : 1;
        sum.terms.emplace_back(sign, parse_term());
      } else {
        break;
      }
    }
    if (sum.terms.size() == 1 && sum.terms[0].first == 1)
      return sum.terms[0].second;
    auto n = std::make_shared<ExprAST>();
    n->node = std::move(sum);
    return n;
  }

  ExprPtr parse_term() {
    ExprAST::Product prod;
    prod.factors.push_back(parse_factor());
    while (true) {
      skip_ws();
      if (peek() == '*') {
        get();
        prod.factors.push_back(parse_factor());
      } else {
        break;
      }
    }
    if (prod.factors.size() == 1) return prod.factors[0];
    auto n = std::make_shared<ExprAST>();
    n->node = std::move(prod);
    return n;
  }

  ExprPtr parse_factor() {
    ExprPtr base = parse_primary();
    while (true) {
      skip_ws();
      if (peek() != '^') break;
      get();
      skip_ws();
      int exp = parse_uint();
      auto n = std::make_shared<ExprAST>();
      n->node = ExprAST::Power{base, exp};
      base = n;
    }
    return base;
  }

  ExprPtr parse_primary() {
    skip_ws();
    const char c = peek();
    if (c == '(') {
      get();
      auto e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(c) || c == '.') return parse_scalar();
    if (std::isalpha(c) || c == '_') {
      std::string word = parse_ident();
      skip_ws();
      if (word == "i" && peek() != '(') {
        auto n = std::make_shared<ExprAST>();
        n->node = ExprAST::Scalar{Complex(0, 1)};
        return n;
      }
      if (word == "dag") {
        expect('(');
        auto e = parse_expr();
        expect(')');
        auto n = std::make_shared<ExprAST>();
        n->node = ExprAST::Dag{e};
        return n;
      }
      if (word == "a" || word == "ad") {
        expect('(');
        std::string name = parse_ident();
        expect(')');
        auto n = std::make_shared<ExprAST>();
        if (word == "a")
          n->node = ExprAST::GenA{name};
        else
          n->node = ExprAST::GenAd{name};
        return n;
      }
      if (word == "d") return parse_displacement();
      fail("unknown symbol '" + word + "'");
    }
    fail("expected a scalar, generator, or parenthesized expression");
  }

  ExprPtr parse_displacement() {
    expect('(');
    ExprAST::GenD gen;
    while (true) {
      Rational k = parse_rational();
      std::string name;
      skip_ws();
      if (peek() == ',') {
        get();
        name = parse_ident();
      }
      gen.components.emplace_back(k, name);
      skip_ws();
      if (peek() == ';') {
        get();
        continue;
      }
      break;
    }
    expect(')');
    auto n = std::make_shared<ExprAST>();
    n->node = std::move(gen);
    return n;
  }

  ExprPtr parse_scalar() {
    double v = parse_decimal();
    Complex value(v, 0);
    if (peek() == 'i') {
      get();
      value = Complex(0, v);
    }
    auto n = std::make_shared<ExprAST>();
    n->node = ExprAST::Scalar{value};
    return n;
  }

  Rational parse_rational() {
    skip_ws();
    long long sign = 1;
    if (peek() == '+' || peek() == '-') sign = (get() == '-') ? -1 : 1;
    long long num = parse_uint();
    skip_ws();
    if (peek() == '/') {
      get();
      skip_ws();
      long long den = parse_uint();
      return Rational(sign * num, den);
    }
    return Rational(sign * num);
  }

  double parse_decimal() {
    skip_ws();
    std::size_t start = pos_;
    while (std::isdigit(peek())) get();
    if (peek() == '.') {
      get();
      while (std::isdigit(peek())) get();
    }
    if (peek() == 'e' || peek() == 'E') {
      get();
      if (peek() == '+' || peek() == '-') get();
      if (!std::isdigit(peek())) fail("malformed exponent");
      while (std::isdigit(peek())) get();
    }
    if (pos_ == start) fail("expected a number");
    try {
      return std::stod(std::string(text_.substr(start, pos_ - start)));
    } catch (const std::exception&) {
      fail("malformed number");
    }
  }

  long long parse_uint() {
    skip_ws();
    std::size_t start = pos_;
    while (std::isdigit(peek())) get();
    if (pos_ == start) fail("expected an unsigned integer");
    try {
      return std::stoll(std::string(text_.substr(start, pos_ - start)));
    } catch (const std::exception&) {
      fail("integer out of range");
    }
  }

  std::string parse_ident() {
    skip_ws();
    std::size_t start = pos_;
    while (std::isalnum(peek()) || peek() == '_') get();
    if (pos_ == start) fail("expected an identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char get() {
    const char c = peek();
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
    return c;
  }
  void skip_ws() {
    while (std::isspace(peek())) get();
  }
  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

}  // namespace detail

inline ExprPtr parse_expr(std::string_view text) {
  return detail::ExprParser(text).parse();
}

// ---------------------------------------------------------------------------
// elaboration

inline Polynomial<Complex> elaborate(const ExprPtr& ast,
                                     const ModelContext<Complex>& model) {
  using P = Polynomial<Complex>;
  return std::visit(
      [&](const auto& node) -> P {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ExprAST::Sum>) {
          P sum;
          for (const auto& [sign, term] : node.terms) {
            auto p = elaborate(term, model);
            if (sign < 0)
              sum -= p;
            else
              sum += p;
          }
          return sum;
        } else if constexpr (std::is_same_v<T, ExprAST::Product>) {
          P prod = P::unit();
          for (const auto& f : node.factors)
            prod = multiply(prod, elaborate(f, model), model);
          return prod;
        } else if constexpr (std::is_same_v<T, ExprAST::Scalar>) {
          return P::scalar(node.value);
        } else if constexpr (std::is_same_v<T, ExprAST::Power>) {
          return power(elaborate(node.base, model), node.exponent, model);
        } else if constexpr (std::is_same_v<T, ExprAST::Dag>) {
          return adjoint(elaborate(node.inner, model));
        } else if constexpr (std::is_same_v<T, ExprAST::GenA>) {
          return normal_form(Complex{1, 0},
                             {gen_a(model.function_index(node.name))}, model);
        } else if constexpr (std::is_same_v<T, ExprAST::GenAd>) {
          return normal_form(Complex{1, 0},
                             {gen_ad(model.function_index(node.name))}, model);
        } else {
          static_assert(std::is_same_v<T, ExprAST::GenD>);
          DisplacementExponent e(model.num_zetas());
          for (const auto& [k, name] : node.components) {
            int m;
            if (name.empty()) {
              if (model.num_zetas() != 1)
                throw ModelError(
                    "displacement component needs a functional name (model "
                    "declares more than one)");
              m = 0;
            } else {
              m = model.zeta_index(name);
            }
            e.coeffs[m] += k;
          }
          WordKey key;
          key.displacement = std::move(e);
          return P::word(std::move(key), Complex{1, 0});
        }
      },
      ast->node);
}

// ---------------------------------------------------------------------------
// canonical printing; parse(format(p)) elaborates back to p

namespace detail {

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline std::string format_word(const WordKey& key,
                               const ModelContext<Complex>& model) {
  std::vector<std::string> parts;
  for (int g : key.creators) parts.push_back("ad(" + model.test_functions[g] + ")");
  if (!key.displacement.is_zero()) {
    std::string d = "d(";
    bool first = true;
    for (std::size_t m = 0; m < key.displacement.coeffs.size(); ++m) {
      const auto& k = key.displacement.coeffs[m];
      if (k.is_zero()) continue;
      if (!first) d += ";";
      first = false;
      d += k.str() + "," + model.zeta_basis[m];
    }
    parts.push_back(d + ")");
  }
  for (int f : key.annihilators) parts.push_back("a(" + model.test_functions[f] + ")");
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i)
    s += (i ? "*" : "") + parts[i];
  return s;
}

}  // namespace detail

inline std::string format_canonical(const Polynomial<Complex>& p,
                                    const ModelContext<Complex>& model) {
  if (p.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [key, c] : p.terms()) {
    std::string word = detail::format_word(key, model);
    std::string coeff;
    bool negative = false;
    if (std::abs(c.imag()) <= 1e-15 * std::max(1.0, std::abs(c.real()))) {
      double re = c.real();
      negative = re < 0;
      double mag = std::abs(re);
      if (std::abs(mag - 1.0) > 1e-15 || word.empty())
        coeff = detail::format_double(mag);
    } else {
      std::string im = detail::format_double(std::abs(c.imag()));
      coeff = "(" + detail::format_double(c.real()) +
              (c.imag() < 0 ? "-" : "+") + im + "i)";
    }
    if (first) {
      out += negative ? "-" : "";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (!coeff.empty() && !word.empty())
      out += coeff + "*" + word;
    else
      out += coeff.empty() ? word : coeff;
  }
  return out;
}

// ---------------------------------------------------------------------------
// model files (JSON)

namespace detail {

inline Complex json_complex(const nlohmann::json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw ModelError("expected a number or [re, im] pair in model file");
}

}  // namespace detail

/// Model file schema:
/// {
///   "test_functions": ["f1", "f2"],
///   "gram": [[1, [0.5, 0.2]], [[0.5, -0.2], 2]],
///   "zeta": {"names": ["z1"], "values": [[0.5, 1.0]]},
///   "alpha": {"f1": [1, 0]}            // optional
/// }
inline ModelContext<Complex> parse_model(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(std::string("model file is not valid JSON: ") + e.what());
  }
  ModelContext<Complex> m;
  if (!j.contains("test_functions") || !j["test_functions"].is_array())
    throw ModelError("model file: missing test_functions array");
  for (const auto& name : j["test_functions"])
    m.test_functions.push_back(name.get<std::string>());
  if (!j.contains("gram") || !j["gram"].is_array())
    throw ModelError("model file: missing gram matrix");
  for (const auto& row : j["gram"]) {
    std::vector<Complex> r;
    for (const auto& e : row) r.push_back(detail::json_complex(e));
    m.gram.push_back(std::move(r));
  }
  if (j.contains("zeta")) {
    const auto& z = j["zeta"];
    for (const auto& name : z.at("names")) m.zeta_basis.push_back(name.get<std::string>());
    for (const auto& row : z.at("values")) {
      std::vector<double> r;
      for (const auto& e : row) r.push_back(e.get<double>());
      m.zeta_values.push_back(std::move(r));
    }
  }
  m.alpha.assign(m.test_functions.size(), std::nullopt);
  if (j.contains("alpha")) {
    for (const auto& [name, value] : j["alpha"].items())
      m.alpha[m.function_index(name)] = detail::json_complex(value);
  }
  m.validate();
  return m;
}

}  // namespace dfa
