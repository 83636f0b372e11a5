#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace acsos {

// Exponent vector relative to an ordered variable list. Kept dense; the
// variable count at desk scale is small (n + d <= ~110).
using Exponents = std::vector<int>;

// Sparse multivariate polynomial over named indeterminates. Terms map
// exponent vectors to coefficients; zero coefficients are never stored.
class MultiPoly {
 public:
  MultiPoly() = default;
  explicit MultiPoly(std::vector<std::string> var_names)
      : vars_(std::move(var_names)) {}

  static MultiPoly constant(double c);
  static MultiPoly var(const std::string& name);

  const std::vector<std::string>& var_names() const { return vars_; }
  const std::map<Exponents, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // max total degree, -1 for the zero polynomial

  void add_term(const Exponents& exps, double coef);

  // point must provide a value for every variable; missing names throw
  double eval(const std::map<std::string, double>& point) const;

  MultiPoly& operator+=(const MultiPoly& rhs);
  MultiPoly& operator-=(const MultiPoly& rhs);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);

  MultiPoly scale(double c) const;
  MultiPoly pow(int k) const;

  // substitute one variable by a polynomial, expanding powers
  MultiPoly substitute(const std::string& name, const MultiPoly& repl) const;

  // every exponent >= 1 on a boolean variable is replaced by 1
  MultiPoly reduce_boolean(const std::vector<std::string>& bool_vars) const;

  double coeff_norm_sq() const;

  std::string to_json() const;
  static MultiPoly from_json(const std::string& text);

 private:
  // align both polynomials to the union variable list
  static void merge_vars(MultiPoly& a, MultiPoly& b);
  MultiPoly remapped(const std::vector<std::string>& new_vars) const;

  std::vector<std::string> vars_;
  std::map<Exponents, double> terms_;
};

inline MultiPoly operator*(MultiPoly a, double c) { return a.scale(c); }
inline MultiPoly operator*(double c, const MultiPoly& a) { return a.scale(c); }

// Chebyshev polynomial of the first kind by the three-term recurrence.
double chebyshev_T(int d, double x);

}  // namespace acsos
