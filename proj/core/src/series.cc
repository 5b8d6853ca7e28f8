#include "twistvan/series.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>

#include "twistvan/error.h"

namespace twistvan {
namespace {

uint32_t Encode(const Exponents& e) {
  return static_cast<uint32_t>(e[0]) | static_cast<uint32_t>(e[1]) << 8 |
         static_cast<uint32_t>(e[2]) << 16 | static_cast<uint32_t>(e[3]) << 24;
}

// Monomials of exact degree `left` in variables var..vars-1, in lexicographic order
// (higher power of the earlier variable first).
void Enumerate(int vars, int var, int left, Exponents& cur, std::vector<Exponents>& out) {
  if (var == vars - 1) {
    cur[var] = static_cast<uint8_t>(left);
    out.push_back(cur);
    cur[var] = 0;
    return;
  }
  for (int e = left; e >= 0; --e) {
    cur[var] = static_cast<uint8_t>(e);
    Enumerate(vars, var + 1, left - e, cur, out);
  }
  cur[var] = 0;
}

struct IndexMaps {
  std::mutex mu;
  std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> bases;
  std::map<const MonomialBasis*, std::unordered_map<uint32_t, int>> index;
};

IndexMaps& Registry() {
  static IndexMaps maps;
  return maps;
}

}  // namespace

MonomialBasis::MonomialBasis(int vars, int degree) : vars_(vars), degree_(degree) {
  for (int t = 0; t <= degree; ++t) {
    Exponents cur{};
    Enumerate(vars, 0, t, cur, exps_);
    while (total_.size() < exps_.size()) total_.push_back(t);
  }
}

std::shared_ptr<const MonomialBasis> MonomialBasis::Get(int vars, int degree) {
  if (vars < 1 || vars > kMaxSeriesVars || degree < 0 || degree > 60)
    Fail(ErrorKind::kDomain, "unsupported series shape");
  IndexMaps& reg = Registry();
  std::lock_guard lock(reg.mu);
  auto& slot = reg.bases[{vars, degree}];
  if (slot) return slot;
  std::shared_ptr<MonomialBasis> b(new MonomialBasis(vars, degree));
  auto& idx = reg.index[b.get()];
  for (size_t i = 0; i < b->exps_.size(); ++i) idx[Encode(b->exps_[i])] = static_cast<int>(i);
  for (size_t i = 0; i < b->exps_.size(); ++i) {
    for (size_t j = 0; j < b->exps_.size(); ++j) {
      if (b->total_[i] + b->total_[j] > degree) continue;
      Exponents s{};
      for (int v = 0; v < vars; ++v)
        s[v] = static_cast<uint8_t>(b->exps_[i][v] + b->exps_[j][v]);
      b->products_.push_back({static_cast<uint32_t>(i), static_cast<uint32_t>(j),
                              static_cast<uint32_t>(idx.at(Encode(s)))});
    }
  }
  slot = b;
  return slot;
}

int MonomialBasis::IndexOf(const Exponents& e) const {
  int total = 0;
  for (int v = 0; v < kMaxSeriesVars; ++v) {
    if (v >= vars_ && e[v] != 0) return -1;
    total += e[v];
  }
  if (total > degree_) return -1;
  IndexMaps& reg = Registry();
  std::lock_guard lock(reg.mu);
  const auto& idx = reg.index.at(this);
  auto it = idx.find(Encode(e));
  return it == idx.end() ? -1 : it->second;
}

TruncatedSeries::TruncatedSeries(std::shared_ptr<const MonomialBasis> basis)
    : basis_(std::move(basis)), coeffs_(basis_->size(), 0.0) {}

TruncatedSeries TruncatedSeries::Constant(std::shared_ptr<const MonomialBasis> basis, double c) {
  TruncatedSeries s(std::move(basis));
  s.coeffs_[0] = c;
  return s;
}

TruncatedSeries TruncatedSeries::Variable(std::shared_ptr<const MonomialBasis> basis, int var) {
  TruncatedSeries s(std::move(basis));
  if (var < 0 || var >= s.basis_->vars()) Fail(ErrorKind::kDomain, "series variable out of range");
  if (s.basis_->degree() >= 1) {
    Exponents e{};
    e[var] = 1;
    s.coeffs_[s.basis_->IndexOf(e)] = 1.0;
  }
  return s;
}

TruncatedSeries TruncatedSeries::Univariate(std::shared_ptr<const MonomialBasis> basis, int var,
                                            std::span<const double> coeffs) {
  TruncatedSeries s(std::move(basis));
  if (var < 0 || var >= s.basis_->vars()) Fail(ErrorKind::kDomain, "series variable out of range");
  for (size_t n = 0; n < coeffs.size() && static_cast<int>(n) <= s.basis_->degree(); ++n) {
    Exponents e{};
    e[var] = static_cast<uint8_t>(n);
    s.coeffs_[s.basis_->IndexOf(e)] = coeffs[n];
  }
  return s;
}

double TruncatedSeries::coefficient(const Exponents& e) const {
  int i = basis_->IndexOf(e);
  return i < 0 ? 0.0 : coeffs_[i];
}

void TruncatedSeries::set_coefficient(const Exponents& e, double value) {
  int i = basis_->IndexOf(e);
  if (i < 0) Fail(ErrorKind::kDomain, "monomial outside the truncation");
  coeffs_[i] = value;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
  if (basis_ != o.basis_) Fail(ErrorKind::kInternal, "series bases differ");
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
  if (basis_ != o.basis_) Fail(ErrorKind::kInternal, "series bases differ");
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.basis_ != b.basis_) Fail(ErrorKind::kInternal, "series bases differ");
  TruncatedSeries out(a.basis_);
  for (const auto& p : a.basis_->products())
    out.coeffs_[p.out] += a.coeffs_[p.lhs] * b.coeffs_[p.rhs];
  return out;
}

TruncatedSeries TruncatedSeries::Compose(std::span<const double> coeffs, const TruncatedSeries& s) {
  if (s.constant() != 0.0) Fail(ErrorKind::kDomain, "Compose needs a zero constant term");
  TruncatedSeries out(s.basis_);
  if (coeffs.empty()) return out;
  size_t top = std::min<size_t>(coeffs.size() - 1, static_cast<size_t>(s.basis_->degree()));
  out.coeffs_[0] = coeffs[top];
  for (size_t n = top; n-- > 0;) {
    out = out * s;
    out.coeffs_[0] += coeffs[n];
  }
  return out;
}

TruncatedSeries TruncatedSeries::Exp() const {
  TruncatedSeries x = *this;
  double c0 = x.coeffs_[0];
  x.coeffs_[0] = 0.0;
  std::vector<double> c(basis_->degree() + 1);
  double f = 1.0;
  for (size_t n = 0; n < c.size(); ++n) {
    c[n] = 1.0 / f;
    f *= static_cast<double>(n + 1);
  }
  return Compose(c, x) * std::exp(c0);
}

TruncatedSeries TruncatedSeries::Log() const {
  double c0 = coeffs_[0];
  if (!(c0 > 0.0)) Fail(ErrorKind::kDomain, "series log needs a positive constant term");
  TruncatedSeries x = *this * (1.0 / c0);
  x.coeffs_[0] = 0.0;
  std::vector<double> c(basis_->degree() + 1, 0.0);
  for (size_t n = 1; n < c.size(); ++n) c[n] = (n % 2 ? 1.0 : -1.0) / static_cast<double>(n);
  TruncatedSeries out = Compose(c, x);
  out.coeffs_[0] += std::log(c0);
  return out;
}

TruncatedSeries TruncatedSeries::Inverse() const {
  double c0 = coeffs_[0];
  if (c0 == 0.0) Fail(ErrorKind::kDomain, "series inverse needs a nonzero constant term");
  TruncatedSeries x = *this * (1.0 / c0);
  x.coeffs_[0] = 0.0;
  std::vector<double> c(basis_->degree() + 1);
  for (size_t n = 0; n < c.size(); ++n) c[n] = n % 2 ? -1.0 : 1.0;
  return Compose(c, x) * (1.0 / c0);
}

TruncatedSeries TruncatedSeries::Pow(double k) const {
  double c0 = coeffs_[0];
  if (!(c0 > 0.0)) Fail(ErrorKind::kDomain, "series power needs a positive constant term");
  TruncatedSeries x = *this * (1.0 / c0);
  x.coeffs_[0] = 0.0;
  std::vector<double> c(basis_->degree() + 1);
  double binom = 1.0;
  for (size_t n = 0; n < c.size(); ++n) {
    c[n] = binom;
    binom *= (k - static_cast<double>(n)) / static_cast<double>(n + 1);
  }
  return Compose(c, x) * std::pow(c0, k);
}

double TruncatedSeries::MaxAbsDifference(const TruncatedSeries& o) const {
  if (basis_ != o.basis_) Fail(ErrorKind::kInternal, "series bases differ");
  double m = 0.0;
  for (size_t i = 0; i < coeffs_.size(); ++i) m = std::max(m, std::fabs(coeffs_[i] - o.coeffs_[i]));
  return m;
}

IntPolynomial IntPolynomial::Monomial(const Exponents& e, int64_t c) {
  IntPolynomial p;
  if (c != 0) p.terms_.emplace_back(e, c);
  return p;
}

int64_t IntPolynomial::coefficient(const Exponents& e) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                             [](const auto& t, const Exponents& x) { return t.first < x; });
  return it != terms_.end() && it->first == e ? it->second : 0;
}

void IntPolynomial::Normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<Exponents, int64_t>> merged;
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().first == t.first)
      merged.back().second += t.second;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const auto& t) { return t.second == 0; });
  terms_ = std::move(merged);
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  IntPolynomial out;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e{};
      for (int v = 0; v < kMaxSeriesVars; ++v) e[v] = static_cast<uint8_t>(ea[v] + eb[v]);
      out.terms_.emplace_back(e, ca * cb);
    }
  }
  out.Normalize();
  return out;
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
  IntPolynomial out;
  out.terms_ = a.terms_;
  out.terms_.insert(out.terms_.end(), b.terms_.begin(), b.terms_.end());
  out.Normalize();
  return out;
}

bool operator==(const IntPolynomial& a, const IntPolynomial& b) { return a.terms_ == b.terms_; }

}  // namespace twistvan
