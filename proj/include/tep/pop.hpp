#pragma once

#include <complex>
#include <optional>

#include "tep/network.hpp"
#include "tep/polynomial.hpp"

namespace tep {

// Complex scalar affine in the line-use variables o (indexed by candidate
// position): c0 + sum coef_k * o_k.
struct AffineComplex {
  std::complex<double> c0{0.0, 0.0};
  std::vector<std::pair<int, std::complex<double>>> terms;

  std::complex<double> eval(std::span<const double> o) const {
    auto v = c0;
    for (const auto& [k, c] : terms) v += c * o[k];
    return v;
  }
  AffineComplex& operator+=(const AffineComplex& other);
};

// Configuration-dependent admittance data: the full bus matrix Y(o) plus the
// per-bus and per-line power matrices derived from it. Candidate-line terms
// enter through the availability 1 - o_ij (o = 1 means open), so that at any
// binary o the matrix equals the bus admittance of the reduced network.
struct AdmittanceSet {
  std::size_t n = 0;                       // bus count
  std::vector<std::vector<AffineComplex>> ybus;  // n x n, affine in o

  // Realified 2n x 2n matrices with Polynomial entries over the o variables
  // (o variable indices as used in the owning PolyProblem).
  std::vector<std::vector<Polynomial>> realified(int o_var_base) const;
};

AdmittanceSet build_admittance(const Network& net);

struct IvPopOptions {
  double big_m = 0.0;  // 0: derive from instance data
};

// Big-M valid for the line voltage-drop rows, from instance data.
double default_big_m(const Network& net);

// IV formulation, eqs. (1)-(11), with big-M'd implications and o^2 = o.
// With fix given the problem is built on the reduced network (no binaries).
PolyProblem build_iv_pop(const Network& net, double big_m = 0.0,
                         const std::optional<Configuration>& fix = std::nullopt);

enum class PqvThermalForm {
  paper,    // disjunction-multiplied squared power traces, total degree 9
  current,  // |y (V_i - V_j)|^2 <= zbar^2, degree <= 4, used by the solvers
};

// PQV formulation over rectangular voltages (and o when free).
PolyProblem build_pqv_pop(const Network& net,
                          const std::optional<Configuration>& fix = std::nullopt,
                          PqvThermalForm thermal = PqvThermalForm::paper);

// Relax the binary equalities of unfixed o variables to box localizers
// 0 <= o <= 1; variables listed in keep_binary stay binary.
PolyProblem relax_binaries(const PolyProblem& pp, const std::vector<int>& keep_binary = {});

// Standard annuity amortization to USD per hour; rate = 0 degenerates to
// straight-line capital/years.
double amortize(double capital_usd, int years, double rate_per_year);

// Index helpers for the IV variable layout (buses ascending with v,u,z,w,
// then per-line zl,wl, then o).
struct IvLayout {
  int n, L, K;
  int v(int i) const { return 4 * i; }
  int u(int i) const { return 4 * i + 1; }
  int zb(int i) const { return 4 * i + 2; }
  int wb(int i) const { return 4 * i + 3; }
  int zl(int k) const { return 4 * n + 2 * k; }
  int wl(int k) const { return 4 * n + 2 * k + 1; }
  int o(int c) const { return 4 * n + 2 * L + c; }
  int nvar() const { return 4 * n + 2 * L + K; }
};
IvLayout iv_layout(const Network& net);

struct PqvLayout {
  int n, K;
  int v(int i) const { return i; }
  int u(int i) const { return n + i; }
  int o(int c) const { return 2 * n + c; }
  int nvar() const { return 2 * n + K; }
};
PqvLayout pqv_layout(const Network& net);

}  // namespace tep
