#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sqseq/errors.hpp"
#include "sqseq/rational.hpp"

namespace sqseq {

/// Dense univariate polynomial over Q, coefficients lowest degree first.
/// The highest stored coefficient is nonzero unless the polynomial is zero,
/// in which case nothing is stored.
class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<Rational> coefficients)
      : coeffs_(std::move(coefficients)) {
    trim();
  }

  /// -1 for the zero polynomial.
  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }

  [[nodiscard]] Rational coefficient(std::size_t i) const {
    return i < coeffs_.size() ? coeffs_[i] : Rational(0);
  }
  [[nodiscard]] const std::vector<Rational>& coefficients() const { return coeffs_; }

  [[nodiscard]] Rational operator()(const Rational& x) const {
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  RationalPolynomial& operator+=(const RationalPolynomial& other) {
    if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
    for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    trim();
    return *this;
  }

  friend RationalPolynomial operator*(const RationalPolynomial& lhs,
                                      const RationalPolynomial& rhs) {
    if (lhs.is_zero() || rhs.is_zero()) return {};
    std::vector<Rational> out(lhs.coeffs_.size() + rhs.coeffs_.size() - 1);
    for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
    return RationalPolynomial(std::move(out));
  }

  friend RationalPolynomial operator*(const Rational& s, const RationalPolynomial& poly) {
    std::vector<Rational> out = poly.coeffs_;
    for (auto& c : out) c *= s;
    return RationalPolynomial(std::move(out));
  }

  friend bool operator==(const RationalPolynomial&, const RationalPolynomial&) = default;

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<Rational> coeffs_;
};

using RationalPoint2 = std::pair<Rational, Rational>;

/// Unique polynomial of degree <= `degree` through the first degree+1 samples
/// (Newton divided differences). Any further samples must lie on it.
inline RationalPolynomial interpolate(std::span<const RationalPoint2> samples, int degree) {
  if (degree < 0) throw InvalidArgument("interpolation degree must be non-negative");
  const auto n = static_cast<std::size_t>(degree) + 1;
  if (samples.size() < n)
    throw InvalidArgument("interpolation needs " + std::to_string(n) + " samples, got " +
                          std::to_string(samples.size()));
  {
    std::set<Rational> seen;
    for (const auto& s : samples)
      if (!seen.insert(s.first).second)
        throw InvalidArgument("duplicate abscissa " + to_string(s.first));
  }

  std::vector<Rational> dd(n);
  for (std::size_t i = 0; i < n; ++i) dd[i] = samples[i].second;
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i)
      dd[i] = (dd[i] - dd[i - 1]) / (samples[i].first - samples[i - level].first);

  // Expand the Newton form into monomials.
  RationalPolynomial result(std::vector<Rational>{dd[n - 1]});
  for (std::size_t k = n - 1; k-- > 0;) {
    result = result * RationalPolynomial(std::vector<Rational>{-samples[k].first, Rational(1)});
    result += RationalPolynomial(std::vector<Rational>{dd[k]});
  }

  for (std::size_t i = n; i < samples.size(); ++i)
    if (result(samples[i].first) != samples[i].second)
      throw InconsistentData("sample at x = " + to_string(samples[i].first) +
                             " is off the degree-" + std::to_string(degree) + " interpolant");
  return result;
}

}  // namespace sqseq
