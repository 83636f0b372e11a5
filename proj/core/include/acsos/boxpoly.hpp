#pragma once

#include <vector>

#include "acsos/poly.hpp"

namespace acsos {

class SampleSet;

// Chebyshev box-indicator polynomial p(x) = eta * T_d((x-zeta)^2/L^2 - 1 - delta^2).
// Evaluation goes through the recurrence (numerically stable); the expanded
// monomial-basis coefficients are kept for norm reporting and serialization.
struct BoxPoly {
  double eta = 0.0;
  double zeta = 0.0;
  double delta = 0.0;
  double L = 1.0;
  int cheb_degree = 0;
  std::vector<double> coeffs;  // monomial basis in x, degree 2*cheb_degree
  double coeff_growth_C = 0.0;  // max |coef| <= 2^(C * cheb_degree)

  double eval(double x) const;           // recurrence form
  double eval_coeffs(double x) const;    // Horner on the expanded coefficients
  double coeff_norm_sq() const;
  int degree() const { return 2 * cheb_degree; }
};

// Validating constructor. cheb_degree must be even and positive, delta in
// (0,1), L >= 1, eta > 0. Verifies the coefficient expansion against the
// recurrence at 64 random points before returning.
BoxPoly make_box_poly(double eta, double zeta, double delta, double L,
                      int cheb_degree);

struct Lemma219Params {
  double eta;
  double zeta;  // shift the box approximates; the polynomial itself is
                // centered at its own zeta field (0 for this preset)
  double delta;
  double L;
  int cheb_degree;
};

// Shifted Gaussian anti-concentration preset: L = 1/delta + zeta,
// eta = delta / L, degree = smallest even integer >=
// 0.5 * log(1/(eta*delta) + zeta/delta) * (delta^2 + zeta^2).
Lemma219Params lemma219_params(double delta, double zeta);

BoxPoly make_box_poly(const Lemma219Params& p);

// E_{x~N(0,1)}[ p^2(x - shift) ] by Gauss-Hermite quadrature with
// 2*deg(p^2)+1 nodes (exact for the polynomial integrand up to tail
// truncation of the recurrence evaluation).
double gaussian_mean_p2(const BoxPoly& bp, double shift);

// same quadrature for an arbitrary dense univariate polynomial (monomial
// coefficients); used by tests and for degenerate inputs like the zero poly
double gaussian_mean_sq(const std::vector<double>& coeffs, double shift);

// (1/n) sum_i p^2(<x_i, v>); v must be unit up to 1e-9
double empirical_mean_p2(const BoxPoly& bp, const SampleSet& samples,
                         const std::vector<double>& v);

// Gauss-Hermite nodes/weights for E_{x~N(0,1)} f(x) = sum w_i f(t_i)
void gauss_hermite_prob(int n, std::vector<double>& nodes,
                        std::vector<double>& weights);

}  // namespace acsos
