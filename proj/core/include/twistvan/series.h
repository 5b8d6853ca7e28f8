#ifndef TWISTVAN_SERIES_H_
#define TWISTVAN_SERIES_H_

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace twistvan {

inline constexpr int kMaxSeriesVars = 4;
using Exponents = std::array<uint8_t, kMaxSeriesVars>;

// Monomials z^e in `vars` variables with total degree <= `degree`, graded
// (degree 0 first), plus the product table of the truncated ring.
class MonomialBasis {
 public:
  static std::shared_ptr<const MonomialBasis> Get(int vars, int degree);

  int vars() const { return vars_; }
  int degree() const { return degree_; }
  size_t size() const { return exps_.size(); }
  const Exponents& exponents(size_t i) const { return exps_[i]; }
  int total_degree(size_t i) const { return total_[i]; }
  // Index of a monomial, or -1 when its degree exceeds the bound.
  int IndexOf(const Exponents& e) const;

  struct Product {
    uint32_t lhs, rhs, out;
  };
  std::span<const Product> products() const { return products_; }

 private:
  MonomialBasis(int vars, int degree);
  int vars_;
  int degree_;
  std::vector<Exponents> exps_;
  std::vector<int> total_;
  std::vector<Product> products_;
};

// Multivariate Maclaurin series truncated at total degree D, real
// coefficients. All arithmetic is exact in the quotient ring by the ideal of
// monomials of degree > D.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(std::shared_ptr<const MonomialBasis> basis);

  static TruncatedSeries Constant(std::shared_ptr<const MonomialBasis> basis, double c);
  static TruncatedSeries Variable(std::shared_ptr<const MonomialBasis> basis, int var);
  // sum_n coeffs[n] * z_var^n
  static TruncatedSeries Univariate(std::shared_ptr<const MonomialBasis> basis, int var,
                                    std::span<const double> coeffs);

  const MonomialBasis& basis() const { return *basis_; }
  const std::shared_ptr<const MonomialBasis>& basis_ptr() const { return basis_; }
  std::span<const double> coefficients() const { return coeffs_; }
  double constant() const { return coeffs_[0]; }
  double coefficient(const Exponents& e) const;
  void set_coefficient(const Exponents& e, double value);

  TruncatedSeries& operator+=(const TruncatedSeries& o);
  TruncatedSeries& operator-=(const TruncatedSeries& o);
  TruncatedSeries& operator*=(double s);
  TruncatedSeries& operator+=(double s) {
    coeffs_[0] += s;
    return *this;
  }
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, double s) { return a *= s; }
  friend TruncatedSeries operator*(double s, TruncatedSeries a) { return a *= s; }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);

  // sum_n coeffs[n] * S^n for S with zero constant term.
  static TruncatedSeries Compose(std::span<const double> coeffs, const TruncatedSeries& s);

  TruncatedSeries Exp() const;
  TruncatedSeries Log() const;  // constant term must be > 0
  TruncatedSeries Inverse() const;  // constant term must be nonzero
  TruncatedSeries Pow(double k) const;  // constant term must be > 0

  double MaxAbsDifference(const TruncatedSeries& o) const;

 private:
  std::shared_ptr<const MonomialBasis> basis_;
  std::vector<double> coeffs_;
};

// Exact integer polynomial in up to kMaxSeriesVars variables (sparse).
class IntPolynomial {
 public:
  IntPolynomial() = default;
  static IntPolynomial Monomial(const Exponents& e, int64_t c);
  const std::vector<std::pair<Exponents, int64_t>>& terms() const { return terms_; }
  int64_t coefficient(const Exponents& e) const;
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
  friend bool operator==(const IntPolynomial& a, const IntPolynomial& b);

 private:
  void Normalize();
  std::vector<std::pair<Exponents, int64_t>> terms_;  // sorted, nonzero
};

}  // namespace twistvan

#endif  // TWISTVAN_SERIES_H_
