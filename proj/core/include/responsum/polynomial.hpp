#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "responsum/errors.hpp"
#include "responsum/types.hpp"

namespace responsum {

/// Sparse multivariate polynomial with coefficients of type Scalar.
/// Terms are keyed by exponent vectors (one entry per variable); zero
/// coefficients are never stored, so term maps compare canonically.
template <typename Scalar>
class BasicPolynomial {
 public:
  using Exponent = std::vector<int>;
  using TermMap = std::map<Exponent, Scalar>;

  BasicPolynomial() = default;
  explicit BasicPolynomial(int nvars) : nvars_(nvars) {
    if (nvars < 1) throw ValidationError("polynomial needs at least one variable");
  }

  int nvars() const { return nvars_; }
  bool empty() const { return terms_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  void add_term(const Exponent& expo, Scalar coeff) {
    if (static_cast<int>(expo.size()) != nvars_)
      throw ValidationError("exponent length does not match variable count");
    for (int k : expo) {
      if (k < 0) throw ValidationError("negative exponent");
    }
    auto it = terms_.find(expo);
    if (it == terms_.end()) {
      if (coeff != Scalar(0)) terms_.emplace(expo, coeff);
    } else {
      it->second += coeff;
      if (it->second == Scalar(0)) terms_.erase(it);
    }
  }

  Scalar coeff(const Exponent& expo) const {
    auto it = terms_.find(expo);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  const TermMap& terms() const { return terms_; }

  /// Evaluate at a point given as an Eigen vector; mixed scalar types promote
  /// (real polynomial at a complex point yields a complex value).
  template <typename Derived>
  auto evaluate(const Eigen::MatrixBase<Derived>& x) const {
    using R = decltype(Scalar(0) * typename Derived::Scalar(0));
    if (x.size() != nvars_) throw ValidationError("evaluation point has wrong dimension");
    R total(0);
    for (const auto& [e, c] : terms_) {
      R term(c);
      for (int j = 0; j < nvars_; ++j) {
        for (int k = 0; k < e[j]; ++k) term *= x[j];
      }
      total += term;
    }
    return total;
  }

  BasicPolynomial derivative(int var) const {
    BasicPolynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponent d = e;
      d[var] -= 1;
      out.add_term(d, c * Scalar(e[var]));
    }
    return out;
  }

  /// Polynomial q(y) = p(c + y), expanded via binomials per term.
  BasicPolynomial shifted(const Vec& c) const {
    if (c.size() != nvars_) throw ValidationError("shift point has wrong dimension");
    BasicPolynomial out(nvars_);
    for (const auto& [e, coeffv] : terms_) {
      // Expand coeff * prod_j (c_j + y_j)^{e_j} one variable at a time.
      std::map<Exponent, Scalar> partial{{Exponent(nvars_, 0), coeffv}};
      for (int j = 0; j < nvars_; ++j) {
        if (e[j] == 0) continue;
        std::map<Exponent, Scalar> next;
        // Binomial weights C(e_j, a) * c_j^{e_j - a} for y_j^a.
        std::vector<Scalar> w(e[j] + 1);
        double binom = 1.0;
        for (int a = e[j]; a >= 0; --a) {
          Scalar p(1);
          for (int k = 0; k < e[j] - a; ++k) p *= Scalar(c[j]);
          w[a] = Scalar(binom) * p;
          if (a > 0) binom = binom * a / (e[j] - a + 1);
        }
        for (const auto& [pe, pc] : partial) {
          for (int a = 0; a <= e[j]; ++a) {
            if (w[a] == Scalar(0)) continue;
            Exponent ne = pe;
            ne[j] += a;
            next[ne] += pc * w[a];
          }
        }
        partial = std::move(next);
      }
      for (const auto& [pe, pc] : partial) out.add_term(pe, pc);
    }
    return out;
  }

  BasicPolynomial& operator+=(const BasicPolynomial& other) {
    if (other.nvars_ != nvars_) throw ValidationError("variable count mismatch");
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
  }

  BasicPolynomial& operator*=(Scalar s) {
    if (s == Scalar(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend BasicPolynomial operator+(BasicPolynomial a, const BasicPolynomial& b) {
    a += b;
    return a;
  }
  friend BasicPolynomial operator*(BasicPolynomial p, Scalar s) {
    p *= s;
    return p;
  }

  bool operator==(const BasicPolynomial& other) const {
    return nvars_ == other.nvars_ && terms_ == other.terms_;
  }

 private:
  int nvars_ = 1;
  TermMap terms_;
};

using Polynomial = BasicPolynomial<double>;
using CPolynomial = BasicPolynomial<cplx>;

template <typename Scalar>
std::vector<BasicPolynomial<Scalar>> gradient(const BasicPolynomial<Scalar>& p) {
  std::vector<BasicPolynomial<Scalar>> g;
  g.reserve(p.nvars());
  for (int j = 0; j < p.nvars(); ++j) g.push_back(p.derivative(j));
  return g;
}

CPolynomial conjugate(const CPolynomial& p);
CPolynomial to_complex(const Polynomial& p);
std::string to_string(const Polynomial& p);

}  // namespace responsum
