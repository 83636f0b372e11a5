#include "acsos/boxpoly.hpp"

#include <cmath>
#include <stdexcept>

#include "acsos/dist.hpp"
#include "acsos/rng.hpp"

namespace acsos {

double BoxPoly::eval(double x) const {
  const double u = (x - zeta) * (x - zeta) / (L * L) - 1.0 - delta * delta;
  return eta * chebyshev_T(cheb_degree, u);
}

double BoxPoly::eval_coeffs(double x) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double BoxPoly::coeff_norm_sq() const {
  double s = 0.0;
  for (double c : coeffs) s += c * c;
  return s;
}

namespace {

// dense univariate product
std::vector<double> poly_mul(const std::vector<double>& a,
                             const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<double> poly_axpy(double alpha, std::vector<double> a,
                              const std::vector<double>& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0.0);
  for (size_t i = 0; i < a.size(); ++i) a[i] *= alpha;
  for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

}  // namespace

BoxPoly make_box_poly(double eta, double zeta, double delta, double L,
                      int cheb_degree) {
  if (cheb_degree <= 0 || (cheb_degree % 2) != 0)
    throw std::invalid_argument("make_box_poly: cheb_degree must be even and positive");
  if (!(delta >= 0.0 && delta < 1.0))
    throw std::invalid_argument("make_box_poly: delta must lie in [0,1)");
  if (!(L >= 1.0)) throw std::invalid_argument("make_box_poly: L must be >= 1");
  if (!(eta > 0.0)) throw std::invalid_argument("make_box_poly: eta must be > 0");

  BoxPoly bp;
  bp.eta = eta;
  bp.zeta = zeta;
  bp.delta = delta;
  bp.L = L;
  bp.cheb_degree = cheb_degree;

  // u(x) = (x - zeta)^2 / L^2 - 1 - delta^2, expanded in x
  const std::vector<double> u = {zeta * zeta / (L * L) - 1.0 - delta * delta,
                                 -2.0 * zeta / (L * L), 1.0 / (L * L)};
  std::vector<double> t_prev = {1.0};  // T_0(u)
  std::vector<double> t_cur = u;       // T_1(u)
  for (int k = 1; k < cheb_degree; ++k) {
    // T_{k+1} = 2 u T_k - T_{k-1}
    std::vector<double> nxt = poly_mul(u, t_cur);
    for (double& c : nxt) c *= 2.0;
    nxt = poly_axpy(1.0, nxt, poly_axpy(-1.0, t_prev, {}));
    t_prev = std::move(t_cur);
    t_cur = std::move(nxt);
  }
  bp.coeffs.assign(t_cur.begin(), t_cur.end());
  for (double& c : bp.coeffs) c *= eta;

  double max_abs = 0.0;
  for (double c : bp.coeffs) max_abs = std::max(max_abs, std::abs(c));
  bp.coeff_growth_C = max_abs > 0.0
                          ? std::max(0.0, std::log2(max_abs) / cheb_degree)
                          : 0.0;

  // expansion must agree with the recurrence on the analytic window
  Rng rng(0x626f7870ULL + static_cast<std::uint64_t>(cheb_degree));
  const double half = 1.1 * std::sqrt(2.0 + delta * delta) * L;
  for (int i = 0; i < 64; ++i) {
    const double x = zeta + rng.uniform(-half, half);
    const double a = bp.eval(x);
    const double b = bp.eval_coeffs(x);
    if (std::abs(a - b) > 1e-8 * std::max(1.0, std::abs(a)))
      throw std::runtime_error("make_box_poly: expansion/recurrence mismatch");
  }
  return bp;
}

Lemma219Params lemma219_params(double delta, double zeta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("lemma219_params: delta must lie in (0,1)");
  if (zeta < 0.0) throw std::invalid_argument("lemma219_params: zeta must be >= 0");
  Lemma219Params p;
  p.delta = delta;
  p.zeta = zeta;
  p.L = 1.0 / delta + zeta;
  p.eta = delta / p.L;
  const double raw =
      0.5 * std::log(1.0 / (p.eta * delta) + zeta / delta) *
      (delta * delta + zeta * zeta);
  int d = static_cast<int>(std::ceil(raw));
  if (d % 2 != 0) ++d;
  p.cheb_degree = std::max(2, d);
  return p;
}

BoxPoly make_box_poly(const Lemma219Params& p) {
  // the polynomial is centered at the origin; the approximated box sits at
  // p.zeta via the shift argument of gaussian_mean_p2
  return make_box_poly(p.eta, 0.0, p.delta, p.L, p.cheb_degree);
}

void gauss_hermite_prob(int n, std::vector<double>& nodes,
                        std::vector<double>& weights) {
  // physicists' Gauss-Hermite via Newton on the normalized recurrence,
  // then rescaled to the N(0,1) weight
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pim4 = 0.7511255444649425;  // pi^(-1/4)
  const int m = (n + 1) / 2;
  double z = 0.0, pp = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * nodes[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * nodes[1];
    else
      z = 2.0 * z - nodes[i - 2];
    for (int it = 0; it < 64; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
             std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-14) break;
    }
    nodes[i] = z;
    nodes[n - 1 - i] = -z;
    weights[i] = 2.0 / (pp * pp);
    weights[n - 1 - i] = weights[i];
  }
  const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
  for (int i = 0; i < n; ++i) {
    nodes[i] *= std::sqrt(2.0);      // e^{-t^2} -> N(0,1)
    weights[i] *= inv_sqrt_pi;
  }
}

double gaussian_mean_p2(const BoxPoly& bp, double shift) {
  const int deg_p2 = 2 * bp.degree();
  const int n = 2 * deg_p2 + 1;
  std::vector<double> t, w;
  gauss_hermite_prob(n, t, w);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double p = bp.eval(t[i] - shift);
    acc += w[i] * p * p;
  }
  return acc;
}

double gaussian_mean_sq(const std::vector<double>& coeffs, double shift) {
  int deg = -1;
  for (size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0.0) deg = static_cast<int>(i);
  if (deg < 0) return 0.0;
  const int n = 2 * (2 * deg) + 1;
  std::vector<double> t, w;
  gauss_hermite_prob(n, t, w);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = t[i] - shift;
    double p = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) p = p * x + *it;
    acc += w[i] * p * p;
  }
  return acc;
}

double empirical_mean_p2(const BoxPoly& bp, const SampleSet& samples,
                         const std::vector<double>& v) {
  const int n = samples.n();
  const int d = samples.dim();
  if (static_cast<int>(v.size()) != d)
    throw std::invalid_argument("empirical_mean_p2: direction dimension mismatch");
  double nrm = 0.0;
  for (double c : v) nrm += c * c;
  if (std::abs(std::sqrt(nrm) - 1.0) > 1e-9)
    throw std::invalid_argument("empirical_mean_p2: direction must be unit norm");
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double proj = 0.0;
    for (int j = 0; j < d; ++j) proj += samples.points()(i, j) * v[j];
    const double p = bp.eval(proj);
    acc += p * p;
  }
  return acc / n;
}

}  // namespace acsos
