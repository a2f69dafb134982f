#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfa/scalar.hpp"

namespace dfa {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finite declared model: test-function symbols with their Hermitian Gram
/// matrix, a basis of displacement functionals given by value tables, and
/// optional per-symbol deformation parameters alpha.
template <typename S>
struct ModelContext {
  using traits = scalar_traits<S>;
  using real = typename traits::real;

  std::vector<std::string> test_functions;
  std::vector<std::vector<S>> gram;               // gram[i][j] = (f_i, f_j)
  std::vector<std::string> zeta_basis;
  std::vector<std::vector<real>> zeta_values;     // zeta_values[m][i] = zeta_m(f_i)
  std::vector<std::optional<S>> alpha;            // alpha[i], when declared

  std::size_t num_functions() const { return test_functions.size(); }
  std::size_t num_zetas() const { return zeta_basis.size(); }

  int function_index(const std::string& name) const {
    for (std::size_t i = 0; i < test_functions.size(); ++i)
      if (test_functions[i] == name) return int(i);
    throw ModelError("undeclared test function: " + name);
  }
  int zeta_index(const std::string& name) const {
    for (std::size_t i = 0; i < zeta_basis.size(); ++i)
      if (zeta_basis[i] == name) return int(i);
    throw ModelError("undeclared displacement functional: " + name);
  }

  const S& inner(int i, int j) const { return gram[i][j]; }  // (f_i, f_j)

  S alpha_at(int i) const {
    if (!alpha[i]) throw ModelError("alpha not declared for " + test_functions[i]);
    return *alpha[i];
  }

  /// Enforces Hermiticity and a real, strictly positive diagonal.
  void validate() const {
    const std::size_t n = test_functions.size();
    if (gram.size() != n) throw ModelError("gram dimension mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      if (gram[i].size() != n) throw ModelError("gram row length mismatch");
      for (std::size_t j = 0; j < n; ++j) {
        if (!traits::is_negligible(gram[i][j] - traits::conj(gram[j][i])))
          throw ModelError("gram is not Hermitian");
      }
      if (!diag_positive(gram[i][i]))
        throw ModelError("gram diagonal must be real and strictly positive");
    }
    if (zeta_values.size() != zeta_basis.size())
      throw ModelError("zeta table dimension mismatch");
    for (const auto& row : zeta_values)
      if (row.size() != n) throw ModelError("zeta row length mismatch");
    if (!alpha.empty() && alpha.size() != n)
      throw ModelError("alpha table dimension mismatch");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (test_functions[i] == test_functions[j])
          throw ModelError("duplicate test function name: " + test_functions[i]);
    for (std::size_t i = 0; i < zeta_basis.size(); ++i)
      for (std::size_t j = i + 1; j < zeta_basis.size(); ++j)
        if (zeta_basis[i] == zeta_basis[j])
          throw ModelError("duplicate functional name: " + zeta_basis[i]);
  }

 private:
  static bool diag_positive(const Complex& z) {
    return std::abs(z.imag()) <= 1e-12 && z.real() > 0;
  }
  static bool diag_positive(const RationalComplex& z) {
    return z.im.is_zero() && z.re > Rational(0);
  }
};

/// Builds a minimal model: one test function f1 with (f1,f1)=ff and one
/// functional z1 with z1(f1)=zf. Convenient for tests and examples.
template <typename S>
ModelContext<S> make_simple_model(typename scalar_traits<S>::real ff,
                                  typename scalar_traits<S>::real zf) {
  ModelContext<S> m;
  m.test_functions = {"f1"};
  m.gram = {{scalar_traits<S>::from_real(ff)}};
  m.zeta_basis = {"z1"};
  m.zeta_values = {{zf}};
  m.alpha = {std::nullopt};
  m.validate();
  return m;
}

}  // namespace dfa
