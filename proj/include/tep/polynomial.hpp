#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace tep {

// Sorted (variable, exponent) pairs with positive exponents.
using Monomial = std::vector<std::pair<int, int>>;

Monomial mono_mul(const Monomial& a, const Monomial& b);
int mono_degree(const Monomial& m);
double mono_eval(const Monomial& m, std::span<const double> x);

// Sparse real-coefficient multivariate polynomial. Zero coefficients are
// never stored.
class Polynomial {
 public:
  Polynomial() = default;
  static Polynomial constant(double c);
  static Polynomial variable(int var);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;
  Polynomial operator-() const;

  void add_term(const Monomial& m, double coef);
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  double eval(std::span<const double> x) const;
  std::set<int> support() const;
  // Substitute variables by constants (map var -> value); others untouched.
  Polynomial substitute(const std::map<int, double>& assign) const;
  // Rewrite variable indices.
  Polynomial remap(const std::map<int, int>& to_new) const;

  const std::map<Monomial, double>& terms() const { return terms_; }
  double coeff(const Monomial& m) const;

 private:
  std::map<Monomial, double> terms_;
};

// min objective over g_i(x) >= 0, h_j(x) = 0; binary-marked variables carry
// x^2 - x = 0 among the equalities.
struct PolyProblem {
  std::vector<std::string> var_names;
  Polynomial objective;
  std::vector<Polynomial> inequalities;
  std::vector<Polynomial> equalities;
  std::vector<int> binaries;

  int num_vars() const { return static_cast<int>(var_names.size()); }
  int max_degree() const;
  void check() const;  // declared-variable and binary-equality invariants

  // one monomial per line: "<coeff> v^e v^e ..."
  std::string serialize() const;
};

}  // namespace tep
