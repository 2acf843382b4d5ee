#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace pcqkd {

/// Multivariate Taylor polynomial in eight formal variables, truncated at a
/// total-degree bound and at a per-variable exponent cap. Products and
/// exponentials silently drop every monomial outside the retained box, so the
/// retained coefficients are exact.
///
/// Variable slots are used as (u1, v1, u2, v2, tau1, sigma1, tau2, sigma2) by
/// the catalysis code, but the class itself is agnostic.
class TruncatedSeries {
 public:
  static constexpr int kVars = 8;
  using Exponents = std::array<int, kVars>;
  using Scalar = std::complex<double>;

  /// Caps every variable at `degree_bound`.
  explicit TruncatedSeries(int degree_bound);
  TruncatedSeries(int degree_bound, const Exponents& caps);

  static TruncatedSeries constant(int degree_bound, const Exponents& caps, Scalar c);
  static TruncatedSeries variable(int degree_bound, const Exponents& caps, int var);

  int degree_bound() const { return degree_bound_; }
  const Exponents& caps() const { return caps_; }

  bool retains(const Exponents& e) const;

  /// Coefficient of the monomial; throws IntegrityError if `e` lies outside
  /// the retained box (the value there is unknown, not zero).
  Scalar coefficient(const Exponents& e) const;

  /// Adds `c` to the coefficient of `e`; throws IntegrityError if not retained.
  void add_term(const Exponents& e, Scalar c);

  /// Largest total degree with a nonzero coefficient (-1 for the zero series).
  int max_stored_degree() const;
  std::size_t nonzero_count() const;

  TruncatedSeries& operator+=(const TruncatedSeries& other);
  TruncatedSeries& operator*=(Scalar s);
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator*(TruncatedSeries a, Scalar s) { return a *= s; }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);

  /// exp(Q) = e^{Q(0)} sum_k (Q - Q(0))^k / k!, truncated.
  TruncatedSeries exp() const;

  /// Visits every nonzero (exponents, coefficient) pair.
  template <typename F>
  void for_each_nonzero(F&& f) const {
    Exponents e{};
    for (std::size_t idx = 0; idx < coeffs_.size(); ++idx) {
      if (coeffs_[idx] == Scalar{}) continue;
      decode(idx, e);
      f(e, coeffs_[idx]);
    }
  }

 private:
  void check_compatible(const TruncatedSeries& other) const;
  std::size_t encode(const Exponents& e) const;
  void decode(std::size_t idx, Exponents& e) const;

  int degree_bound_;
  Exponents caps_;
  std::array<std::size_t, kVars> stride_{};
  std::vector<Scalar> coeffs_;
};

}  // namespace pcqkd
