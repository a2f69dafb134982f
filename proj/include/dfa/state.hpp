#pragma once

#include <Eigen/Dense>

#include "dfa/algebra.hpp"

namespace dfa {

struct StateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Coefficient of the identity word: phi_0(1) = 1, zero on every word with
/// creators, annihilators, or a nonzero net displacement exponent.
template <typename S>
S vacuum_expect(const Polynomial<S>& p) {
  return p.coefficient(WordKey{});
}

/// The vacuum or a conjugated variant phi(A) = phi_0(Xi A Xi^dag)/N with
/// Xi a combination of displacement operators. N is computed from Xi,
/// never trusted from input.
template <typename S>
class StateFunctional {
 public:
  static StateFunctional vacuum() { return StateFunctional{}; }

  static StateFunctional conjugated(Polynomial<S> xi, const ModelContext<S>& model) {
    for (const auto& [key, c] : xi.terms())
      if (!key.creators.empty() || !key.annihilators.empty())
        throw StateError("conjugating element must contain displacement operators only");
    StateFunctional s;
    s.xi_ = std::move(xi);
    s.norm_ = vacuum_expect(multiply(*s.xi_, adjoint(*s.xi_), model));
    if (scalar_traits<S>::is_negligible(s.norm_))
      throw StateError("conjugating element has zero norm");
    return s;
  }

  bool is_vacuum() const { return !xi_.has_value(); }

  S operator()(const Polynomial<S>& p, const ModelContext<S>& model) const {
    if (!xi_) return vacuum_expect(p);
    auto conj = multiply(multiply(*xi_, p, model), adjoint(*xi_), model);
    return vacuum_expect(conj) / norm_;
  }

 private:
  StateFunctional() = default;
  std::optional<Polynomial<S>> xi_;
  S norm_{};
};

template <typename S>
bool is_hermitian(const Polynomial<S>& p) {
  return adjoint(p) == p;
}

struct MomentResult {
  Complex value;
  bool hermitian_warning = false;  // set when the field was not Hermitian
};

/// expect(s, field^order). For Hermitian fields the imaginary part must be
/// numerical noise; a non-Hermitian input only flags the result.
inline MomentResult moment(const StateFunctional<Complex>& s,
                           const Polynomial<Complex>& field, int order,
                           const ModelContext<Complex>& model) {
  MomentResult r;
  r.value = s(power(field, order, model), model);
  if (max_coeff_distance(adjoint(field), field) > 1e-9) {
    r.hermitian_warning = true;
  } else if (std::abs(r.value.imag()) > 1e-9 * std::abs(r.value.real()) + 1e-12) {
    throw StateError("Hermitian field produced a non-real moment");
  }
  return r;
}

struct PsdReport {
  bool psd = false;
  double min_eigenvalue = 0;
  double spectral_radius = 0;
};

/// Builds M[i][j] = expect(s, adjoint(b_i) b_j) over the given basis and
/// checks Hermitian positive semidefiniteness via a dense eigensolver.
inline PsdReport gram_psd_check(const StateFunctional<Complex>& s,
                                const std::vector<Polynomial<Complex>>& basis,
                                const ModelContext<Complex>& model,
                                double tol = 1e-9) {
  const int n = int(basis.size());
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = s(multiply(adjoint(basis[i]), basis[j], model), model);
  // symmetrize away roundoff before the self-adjoint solve
  Eigen::MatrixXcd h = (m + m.adjoint()) / 2.0;
  if ((m - h).norm() > 1e-8 * std::max(1.0, m.norm()))
    return {false, 0, 0};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  PsdReport r;
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  r.spectral_radius = es.eigenvalues().cwiseAbs().maxCoeff();
  r.psd = r.min_eigenvalue >= -tol * std::max(1.0, r.spectral_radius);
  return r;
}

/// All canonical words over the model with degree (creators + annihilators
/// + |net displacement power|) at most max_degree, integer exponents.
/// The degree-<=2 word basis of the positivity checks.
template <typename S>
std::vector<Polynomial<S>> word_basis(const ModelContext<S>& model, int max_degree) {
  using traits = scalar_traits<S>;
  const int nf = int(model.num_functions());
  const int nz = int(model.num_zetas());

  std::vector<std::vector<int>> multisets;  // sorted index multisets
  std::vector<std::vector<int>> frontier{{}};
  multisets.push_back({});
  for (int d = 1; d <= max_degree; ++d) {
    std::vector<std::vector<int>> next;
    for (const auto& ms : frontier)
      for (int f = ms.empty() ? 0 : ms.back(); f < nf; ++f) {
        auto ext = ms;
        ext.push_back(f);
        next.push_back(ext);
      }
    multisets.insert(multisets.end(), next.begin(), next.end());
    frontier = std::move(next);
  }

  // integer exponent vectors with sum of |k_m| <= max_degree
  std::vector<std::pair<DisplacementExponent, int>> exps;
  {
    std::vector<std::pair<DisplacementExponent, int>> acc{
        {DisplacementExponent(nz), 0}};
    for (int m = 0; m < nz; ++m) {
      std::vector<std::pair<DisplacementExponent, int>> next;
      for (const auto& [e, deg] : acc)
        for (int k = -(max_degree - deg); k <= max_degree - deg; ++k) {
          auto ext = e;
          ext.coeffs[m] = Rational(k);
          next.emplace_back(std::move(ext), deg + std::abs(k));
        }
      acc = std::move(next);
    }
    exps = std::move(acc);
  }

  std::vector<Polynomial<S>> basis;
  for (const auto& cr : multisets)
    for (const auto& [e, edeg] : exps)
      for (const auto& an : multisets) {
        if (int(cr.size() + an.size()) + edeg > max_degree) continue;
        WordKey k{cr, e, an};
        basis.push_back(Polynomial<S>::word(std::move(k), traits::one()));
      }
  return basis;
}

}  // namespace dfa
