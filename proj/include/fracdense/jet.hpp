#pragma once

// Truncated Taylor series arithmetic. A Jet holds the coefficients c_k of
// f(x0 + t) = sum_k c_k t^k up to a fixed degree; derivatives are k! c_k.

#include <cmath>
#include <cstddef>
#include <vector>

namespace fracdense {

class Jet {
 public:
  explicit Jet(std::size_t degree, double constant = 0.0) : c_(degree + 1, 0.0) {
    c_[0] = constant;
  }
  static Jet variable(std::size_t degree, double x0) {
    Jet j(degree, x0);
    if (degree >= 1) j.c_[1] = 1.0;
    return j;
  }
  static Jet from_coefficients(std::vector<double> c) {
    Jet j(c.empty() ? 0 : c.size() - 1);
    if (!c.empty()) j.c_ = std::move(c);
    return j;
  }

  [[nodiscard]] std::size_t degree() const { return c_.size() - 1; }
  [[nodiscard]] double operator[](std::size_t k) const { return c_[k]; }
  double& operator[](std::size_t k) { return c_[k]; }
  [[nodiscard]] const std::vector<double>& coefficients() const { return c_; }

  /// k-th derivative at the expansion point.
  [[nodiscard]] double derivative(std::size_t k) const {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return f * c_[k];
  }

  Jet& operator+=(const Jet& o) {
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(double a) {
    for (double& v : c_) v *= a;
    return *this;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double b, Jet a) { return a *= b; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet out(a.degree());
    for (std::size_t k = 0; k < out.c_.size(); ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j <= k; ++j) acc += a.c_[j] * b.c_[k - j];
      out.c_[k] = acc;
    }
    return out;
  }

  /// Real power b = a^p of a jet with positive constant term. Matching
  /// coefficients in a b' = p a' b gives
  /// a0 k b_k = sum_{j>=1} (p j - (k - j)) a_j b_{k-j}.
  friend Jet pow(const Jet& a, double p) {
    Jet b(a.degree());
    const double a0 = a.c_[0];
    b.c_[0] = std::pow(a0, p);
    for (std::size_t k = 1; k < b.c_.size(); ++k) {
      double acc = 0.0;
      for (std::size_t j = 1; j <= k; ++j) {
        acc += (p * static_cast<double>(j) - static_cast<double>(k - j)) * a.c_[j] * b.c_[k - j];
      }
      b.c_[k] = acc / (static_cast<double>(k) * a0);
    }
    return b;
  }

 private:
  std::vector<double> c_;
};

}  // namespace fracdense
