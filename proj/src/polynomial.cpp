#include "tep/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tep {

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first))
      out.push_back(a[i++]);
    else if (i == a.size() || b[j].first < a[i].first)
      out.push_back(b[j++]);
    else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

int mono_degree(const Monomial& m) {
  int d = 0;
  for (const auto& [v, e] : m) d += e;
  return d;
}

double mono_eval(const Monomial& m, std::span<const double> x) {
  double p = 1.0;
  for (const auto& [v, e] : m) p *= std::pow(x[v], e);
  return p;
}

Polynomial Polynomial::constant(double c) {
  Polynomial p;
  p.add_term({}, c);
  return p;
}

Polynomial Polynomial::variable(int var) {
  Polynomial p;
  p.add_term({{var, 1}}, 1.0);
  return p;
}

void Polynomial::add_term(const Monomial& m, double coef) {
  if (coef == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(m, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  r += o;
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r = *this;
  r -= o;
  return r;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial r = *this;
  r *= s;
  return r;
}

Polynomial Polynomial::operator-() const { return *this * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(mono_mul(ma, mb), ca * cb);
  return r;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, mono_degree(m));
  return d;
}

double Polynomial::eval(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& [m, c] : terms_) s += c * mono_eval(m, x);
  return s;
}

std::set<int> Polynomial::support() const {
  std::set<int> s;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m) s.insert(v);
  return s;
}

Polynomial Polynomial::substitute(const std::map<int, double>& assign) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    double coef = c;
    Monomial rest;
    for (const auto& [v, e] : m) {
      auto it = assign.find(v);
      if (it == assign.end())
        rest.emplace_back(v, e);
      else
        coef *= std::pow(it->second, e);
    }
    out.add_term(rest, coef);
  }
  return out;
}

Polynomial Polynomial::remap(const std::map<int, int>& to_new) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    Monomial mm;
    for (const auto& [v, e] : m) mm.emplace_back(to_new.at(v), e);
    std::sort(mm.begin(), mm.end());
    out.add_term(mm, c);
  }
  return out;
}

double Polynomial::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

int PolyProblem::max_degree() const {
  int d = objective.degree();
  for (const auto& g : inequalities) d = std::max(d, g.degree());
  for (const auto& h : equalities) d = std::max(d, h.degree());
  return d;
}

void PolyProblem::check() const {
  const int n = num_vars();
  auto in_range = [&](const Polynomial& p) {
    for (int v : p.support())
      if (v < 0 || v >= n) throw std::runtime_error("polynomial uses undeclared variable");
  };
  in_range(objective);
  for (const auto& g : inequalities) in_range(g);
  for (const auto& h : equalities) in_range(h);
  for (int b : binaries) {
    // x^2 - x must be among the equalities
    Polynomial sq = Polynomial::variable(b) * Polynomial::variable(b) -
                    Polynomial::variable(b);
    bool found = false;
    for (const auto& h : equalities) {
      if (h.terms() == sq.terms() || h.terms() == (-sq).terms()) {
        found = true;
        break;
      }
    }
    if (!found)
      throw std::runtime_error("binary variable " + var_names[b] +
                               " lacks its x^2 - x = 0 equality");
  }
}

std::string PolyProblem::serialize() const {
  std::ostringstream out;
  out.precision(17);
  out << "variables";
  for (const auto& n : var_names) out << " " << n;
  out << "\n";
  auto dump = [&](const Polynomial& p) {
    for (const auto& [m, c] : p.terms()) {
      out << "  " << c;
      for (const auto& [v, e] : m) {
        out << " " << var_names[v];
        if (e > 1) out << "^" << e;
      }
      out << "\n";
    }
  };
  out << "objective\n";
  dump(objective);
  for (const auto& g : inequalities) {
    out << "ineq\n";
    dump(g);
  }
  for (const auto& h : equalities) {
    out << "eq\n";
    dump(h);
  }
  out << "binaries";
  for (int b : binaries) out << " " << var_names[b];
  out << "\n";
  return out.str();
}

}  // namespace tep
