#include "pcqkd/truncated_series.hpp"

#include "pcqkd/errors.hpp"

#include <numeric>

namespace pcqkd {

namespace {

struct Term {
  TruncatedSeries::Exponents e;
  int degree;
  TruncatedSeries::Scalar c;
};

std::vector<Term> terms_of(const TruncatedSeries& s) {
  std::vector<Term> out;
  s.for_each_nonzero([&](const TruncatedSeries::Exponents& e, TruncatedSeries::Scalar c) {
    out.push_back({e, std::accumulate(e.begin(), e.end(), 0), c});
  });
  return out;
}

}  // namespace

TruncatedSeries::TruncatedSeries(int degree_bound)
    : TruncatedSeries(degree_bound, [degree_bound] {
        Exponents caps;
        caps.fill(degree_bound);
        return caps;
      }()) {}

TruncatedSeries::TruncatedSeries(int degree_bound, const Exponents& caps)
    : degree_bound_(degree_bound), caps_(caps) {
  if (degree_bound < 0) throw DomainError("TruncatedSeries: negative degree bound");
  std::size_t size = 1;
  for (int v = kVars - 1; v >= 0; --v) {
    if (caps_[v] < 0) throw DomainError("TruncatedSeries: negative exponent cap");
    if (caps_[v] > degree_bound_) caps_[v] = degree_bound_;
    stride_[v] = size;
    size *= static_cast<std::size_t>(caps_[v] + 1);
  }
  coeffs_.assign(size, Scalar{});
}

TruncatedSeries TruncatedSeries::constant(int degree_bound, const Exponents& caps, Scalar c) {
  TruncatedSeries s(degree_bound, caps);
  s.add_term(Exponents{}, c);
  return s;
}

TruncatedSeries TruncatedSeries::variable(int degree_bound, const Exponents& caps, int var) {
  TruncatedSeries s(degree_bound, caps);
  Exponents e{};
  e.at(static_cast<std::size_t>(var)) = 1;
  if (s.retains(e)) s.add_term(e, 1.0);
  return s;
}

bool TruncatedSeries::retains(const Exponents& e) const {
  int total = 0;
  for (int v = 0; v < kVars; ++v) {
    if (e[v] < 0 || e[v] > caps_[v]) return false;
    total += e[v];
  }
  return total <= degree_bound_;
}

std::size_t TruncatedSeries::encode(const Exponents& e) const {
  std::size_t idx = 0;
  for (int v = 0; v < kVars; ++v) idx += stride_[v] * static_cast<std::size_t>(e[v]);
  return idx;
}

void TruncatedSeries::decode(std::size_t idx, Exponents& e) const {
  for (int v = 0; v < kVars; ++v) {
    e[v] = static_cast<int>(idx / stride_[v]);
    idx %= stride_[v];
  }
}

TruncatedSeries::Scalar TruncatedSeries::coefficient(const Exponents& e) const {
  if (!retains(e)) throw IntegrityError("TruncatedSeries: coefficient requested outside the degree bound");
  return coeffs_[encode(e)];
}

void TruncatedSeries::add_term(const Exponents& e, Scalar c) {
  if (!retains(e)) throw IntegrityError("TruncatedSeries: term outside the degree bound");
  coeffs_[encode(e)] += c;
}

int TruncatedSeries::max_stored_degree() const {
  int best = -1;
  for_each_nonzero([&](const Exponents& e, Scalar) {
    best = std::max(best, std::accumulate(e.begin(), e.end(), 0));
  });
  return best;
}

std::size_t TruncatedSeries::nonzero_count() const {
  std::size_t n = 0;
  for (const auto& c : coeffs_) n += (c != Scalar{}) ? 1 : 0;
  return n;
}

void TruncatedSeries::check_compatible(const TruncatedSeries& other) const {
  if (degree_bound_ != other.degree_bound_ || caps_ != other.caps_) {
    throw DomainError("TruncatedSeries: operands have different truncation");
  }
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(Scalar s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  a.check_compatible(b);
  TruncatedSeries out(a.degree_bound_, a.caps_);
  const auto ta = terms_of(a);
  const auto tb = terms_of(b);
  for (const auto& x : ta) {
    for (const auto& y : tb) {
      if (x.degree + y.degree > out.degree_bound_) continue;
      TruncatedSeries::Exponents e;
      bool inside = true;
      for (int v = 0; v < TruncatedSeries::kVars && inside; ++v) {
        e[v] = x.e[v] + y.e[v];
        inside = e[v] <= out.caps_[v];
      }
      if (inside) out.coeffs_[out.encode(e)] += x.c * y.c;
    }
  }
  return out;
}

TruncatedSeries TruncatedSeries::exp() const {
  const Scalar c0 = coeffs_[0];
  TruncatedSeries q = *this;
  q.coeffs_[0] = Scalar{};

  TruncatedSeries sum = constant(degree_bound_, caps_, 1.0);
  TruncatedSeries term = sum;
  // Every monomial of q has degree >= 1, so q^k vanishes once k > degree_bound.
  for (int k = 1; k <= degree_bound_; ++k) {
    term = term * q;
    term *= 1.0 / k;
    if (term.nonzero_count() == 0) break;
    sum += term;
  }
  sum *= std::exp(c0);
  return sum;
}

}  // namespace pcqkd
