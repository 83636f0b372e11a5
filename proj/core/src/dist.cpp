#include "acsos/dist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "acsos/rng.hpp"
#include "json.hpp"

namespace acsos {

void SampleSet::set_responses(Eigen::VectorXd y) {
  if (y.size() != points_.rows())
    throw std::invalid_argument("SampleSet: response length mismatch");
  responses_ = std::move(y);
}

void SampleSet::set_labels(std::vector<int> labels, int k) {
  if (static_cast<int>(labels.size()) != n())
    throw std::invalid_argument("SampleSet: label length mismatch");
  for (int l : labels)
    if (l < 0 || l >= k)
      throw std::invalid_argument("SampleSet: label outside [k]");
  labels_ = std::move(labels);
}

namespace {
std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

void SampleSet::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (int j = 0; j < dim(); ++j) out << (j ? "," : "") << "x" << (j + 1);
  if (responses_) out << ",y";
  if (labels_) out << ",label";
  out << "\n";
  for (int i = 0; i < n(); ++i) {
    for (int j = 0; j < dim(); ++j)
      out << (j ? "," : "") << fmt_double(points_(i, j));
    if (responses_) out << "," << fmt_double((*responses_)(i));
    if (labels_) out << "," << (*labels_)[i];
    out << "\n";
  }
  nlohmann::json meta;
  meta["dist"] = dist_name_;
  meta["params"] = params_;
  meta["seed"] = seed_;
  meta["n"] = n();
  meta["d"] = dim();
  std::ofstream ms(path + ".meta.json");
  ms << meta.dump(2) << "\n";
}

SampleSet SampleSet::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error(path + ": empty file");
  std::vector<std::string> cols;
  {
    std::stringstream ss(header);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  int d = 0;
  bool has_y = false, has_label = false;
  for (size_t j = 0; j < cols.size(); ++j) {
    if (cols[j] == "y") {
      has_y = true;
    } else if (cols[j] == "label") {
      has_label = true;
    } else if (cols[j].size() >= 2 && cols[j][0] == 'x') {
      ++d;
    } else {
      throw std::runtime_error(path + ": unrecognized column '" + cols[j] +
                               "' (row 1, column " + std::to_string(j + 1) + ")");
    }
  }
  if (d == 0) throw std::runtime_error(path + ": no coordinate columns");

  std::vector<std::vector<double>> rows;
  std::vector<double> ys;
  std::vector<int> labels;
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    int colno = 0;
    while (std::getline(ss, cell, ',')) {
      ++colno;
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error(path + ": parse error at row " +
                                 std::to_string(lineno) + ", column " +
                                 std::to_string(colno));
      }
    }
    const size_t expect = cols.size();
    if (vals.size() != expect)
      throw std::runtime_error(path + ": row " + std::to_string(lineno) +
                               " has " + std::to_string(vals.size()) +
                               " cells, expected " + std::to_string(expect));
    rows.push_back(std::vector<double>(vals.begin(), vals.begin() + d));
    size_t at = d;
    if (has_y) ys.push_back(vals[at++]);
    if (has_label) labels.push_back(static_cast<int>(vals[at++]));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no data rows");

  Eigen::MatrixXd pts(rows.size(), d);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < d; ++j) pts(i, j) = rows[i][j];
  SampleSet s(std::move(pts), "file", path, 0);
  if (has_y) {
    Eigen::VectorXd y(ys.size());
    for (size_t i = 0; i < ys.size(); ++i) y(i) = ys[i];
    s.set_responses(std::move(y));
  }
  if (has_label) {
    int k = 0;
    for (int l : labels) k = std::max(k, l + 1);
    s.set_labels(std::move(labels), std::max(k, 1));
  }
  return s;
}

int DistSpec::dim() const {
  if (const auto* g = std::get_if<GaussianSpec>(&kind))
    return static_cast<int>(g->mean.size());
  if (const auto* l = std::get_if<LpBallSpec>(&kind)) return l->dim;
  if (const auto* p = std::get_if<ProductSpec>(&kind))
    return static_cast<int>(p->marginals.size());
  const auto& m = std::get<MixtureSpec>(kind);
  return static_cast<int>(m.components.at(0).gaussian.mean.size());
}

std::string DistSpec::name() const {
  if (std::holds_alternative<GaussianSpec>(kind)) return "gaussian";
  if (std::holds_alternative<LpBallSpec>(kind)) return "lp_ball";
  if (std::holds_alternative<ProductSpec>(kind)) return "product";
  return "mixture";
}

std::string DistSpec::params_json() const {
  nlohmann::json j;
  j["dist"] = name();
  if (const auto* l = std::get_if<LpBallSpec>(&kind)) j["p"] = l->p;
  j["d"] = dim();
  return j.dump();
}

void DistSpec::validate() const {
  if (const auto* g = std::get_if<GaussianSpec>(&kind)) {
    if (g->cov.rows() != g->cov.cols() || g->cov.rows() != g->mean.size())
      throw std::invalid_argument("gaussian spec: shape mismatch");
    if (!g->cov.isApprox(g->cov.transpose(), 1e-10))
      throw std::invalid_argument("gaussian spec: covariance not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g->cov);
    if (es.eigenvalues().minCoeff() < -1e-10 * (1.0 + es.eigenvalues().maxCoeff()))
      throw std::invalid_argument("gaussian spec: covariance not PSD");
  } else if (const auto* l = std::get_if<LpBallSpec>(&kind)) {
    if (!(l->p > 1.0))
      throw std::invalid_argument("lp_ball spec: p must exceed 1");
    if (l->dim < 1) throw std::invalid_argument("lp_ball spec: dim >= 1");
  } else if (const auto* pr = std::get_if<ProductSpec>(&kind)) {
    if (pr->marginals.empty())
      throw std::invalid_argument("product spec: empty marginal list");
  } else {
    const auto& m = std::get<MixtureSpec>(kind);
    if (m.weights.size() != m.components.size() || m.components.empty())
      throw std::invalid_argument("mixture spec: weights/components mismatch");
    double sum = 0.0;
    for (double w : m.weights) {
      if (w < 0.0) throw std::invalid_argument("mixture spec: negative weight");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("mixture spec: weights must sum to 1");
  }
}

namespace {

Eigen::MatrixXd cov_sqrt(const Eigen::MatrixXd& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

// density proportional to exp(-|t|^p): Gamma(1/p) magnitude to the 1/p power
double sample_exp_power(Rng& rng, double p) {
  const double g = rng.gamma(1.0 / p);
  const double mag = std::pow(g, 1.0 / p);
  return rng.flip() ? mag : -mag;
}

}  // namespace

SampleSet sample(const DistSpec& spec, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  spec.validate();
  Rng rng(seed);
  const int d = spec.dim();
  Eigen::MatrixXd pts(n, d);
  std::vector<int> labels;

  if (const auto* g = std::get_if<GaussianSpec>(&spec.kind)) {
    const Eigen::MatrixXd s = cov_sqrt(g->cov);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd z(d);
      for (int j = 0; j < d; ++j) z(j) = rng.normal();
      pts.row(i) = (g->mean + s * z).transpose();
    }
  } else if (const auto* l = std::get_if<LpBallSpec>(&spec.kind)) {
    // radial construction: g_i ~ exp(-|t|^p) i.i.d., e ~ Exp(1),
    // x = g / (||g||_p^p + e)^{1/p} is uniform on the unit l_p ball
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd gvec(d);
      double norm_p = 0.0;
      for (int j = 0; j < d; ++j) {
        gvec(j) = sample_exp_power(rng, l->p);
        norm_p += std::pow(std::abs(gvec(j)), l->p);
      }
      const double e = rng.exponential();
      pts.row(i) = (gvec / std::pow(norm_p + e, 1.0 / l->p)).transpose();
    }
  } else if (const auto* pr = std::get_if<ProductSpec>(&spec.kind)) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) {
        const auto& m = pr->marginals[j];
        switch (m.kind) {
          case MarginalSpec::kRademacher:
            pts(i, j) = rng.flip() ? 1.0 : -1.0;
            break;
          case MarginalSpec::kUniform:
            pts(i, j) = rng.uniform(m.a, m.b);
            break;
          case MarginalSpec::kGaussian:
            pts(i, j) = m.a + m.b * rng.normal();
            break;
        }
      }
    }
  } else {
    const auto& mix = std::get<MixtureSpec>(spec.kind);
    labels.resize(n);
    std::vector<Eigen::MatrixXd> sqrts;
    for (const auto& c : mix.components) sqrts.push_back(cov_sqrt(c.gaussian.cov));
    for (int i = 0; i < n; ++i) {
      double u = rng.uniform();
      int c = 0;
      for (size_t j = 0; j < mix.weights.size(); ++j) {
        if (u < mix.weights[j] || j + 1 == mix.weights.size()) {
          c = static_cast<int>(j);
          break;
        }
        u -= mix.weights[j];
      }
      labels[i] = c;
      Eigen::VectorXd z(d);
      for (int j = 0; j < d; ++j) z(j) = rng.normal();
      pts.row(i) = (mix.components[c].gaussian.mean + sqrts[c] * z).transpose();
    }
  }

  SampleSet s(std::move(pts), spec.name(), spec.params_json(), seed);
  if (!labels.empty())
    s.set_labels(std::move(labels),
                 static_cast<int>(std::get<MixtureSpec>(spec.kind).components.size()));
  return s;
}

double lp_moment_exact(int d, double p, int k) {
  if (k > d) throw std::invalid_argument("lp_moment_exact: k must be <= d");
  if (k < 1 || p < 1.0)
    throw std::invalid_argument("lp_moment_exact: need k >= 1 and p >= 1");
  const double lg = std::lgamma(3.0 / p) * k + std::lgamma(d / p + 1.0) -
                    std::lgamma(1.0 / p) * k -
                    std::lgamma((d + 2.0 * k) / p + 1.0);
  return std::exp(lg);
}

namespace {
Eigen::VectorXd random_unit(Rng& rng, int d) {
  Eigen::VectorXd v(d);
  double nrm = 0.0;
  do {
    for (int j = 0; j < d; ++j) v(j) = rng.normal();
    nrm = v.norm();
  } while (nrm < 1e-12);
  return v / nrm;
}
}  // namespace

AnticoncentrationCheck check_anticoncentration(const SampleSet& s, double delta,
                                               int n_dirs, std::uint64_t seed) {
  const int n = s.n(), d = s.dim();
  const Eigen::MatrixXd sigma = s.points().transpose() * s.points() / n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);

  std::vector<Eigen::VectorXd> dirs;
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXd u = es.eigenvectors().col(j);
    if (u.norm() > 0.5) dirs.push_back(u);
  }
  Rng rng(seed);
  for (int t = 0; t < n_dirs; ++t) dirs.push_back(random_unit(rng, d));

  AnticoncentrationCheck out;
  out.argmax_direction = dirs.front();
  for (const auto& v : dirs) {
    const double scale = delta * delta * (v.dot(sigma * v));
    int cnt = 0;
    for (int i = 0; i < n; ++i) {
      const double proj = s.points().row(i).dot(v);
      if (proj * proj <= scale) ++cnt;
    }
    const double frac = static_cast<double>(cnt) / n;
    if (frac > out.max_fraction) {
      out.max_fraction = frac;
      out.argmax_direction = v;
    }
  }
  return out;
}

double check_hypercontractivity_linear(const SampleSet& s, int h, int n_dirs,
                                       std::uint64_t seed) {
  if (h < 2 || h % 2 != 0)
    throw std::invalid_argument("check_hypercontractivity_linear: h must be even >= 2");
  Rng rng(seed);
  const int n = s.n();
  double worst = 0.0;
  for (int t = 0; t < n_dirs; ++t) {
    const Eigen::VectorXd v = random_unit(rng, s.dim());
    double m2 = 0.0, m2h = 0.0;
    for (int i = 0; i < n; ++i) {
      const double proj = s.points().row(i).dot(v);
      m2 += proj * proj;
      m2h += std::pow(proj, 2 * h);
    }
    m2 /= n;
    m2h /= n;
    if (m2 <= 1e-14) continue;  // degenerate direction, skipped
    const double ratio = m2h / std::pow(m2, h);
    worst = std::max(worst, std::pow(ratio, 1.0 / (2.0 * h)));
  }
  return worst;
}

double check_hypercontractivity_quadratic(const SampleSet& s, int h,
                                          int n_matrices, std::uint64_t seed) {
  if (h < 2 || h % 2 != 0)
    throw std::invalid_argument("check_hypercontractivity_quadratic: h must be even >= 2");
  Rng rng(seed);
  const int n = s.n(), d = s.dim();
  double worst = 0.0;
  for (int t = 0; t < n_matrices; ++t) {
    Eigen::MatrixXd q(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b <= a; ++b) q(a, b) = q(b, a) = rng.normal();
    const double fn = q.norm();
    if (fn <= 1e-14) continue;  // Q = 0, skipped
    q /= fn;
    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd x = s.points().row(i).transpose();
      f(i) = x.dot(q * x);
    }
    f.array() -= f.mean();
    double m2 = 0.0, m2h = 0.0;
    for (int i = 0; i < n; ++i) {
      m2 += f(i) * f(i);
      m2h += std::pow(f(i), 2 * h);
    }
    m2 /= n;
    m2h /= n;
    if (m2 <= 1e-14) continue;
    const double ratio = m2h / std::pow(m2, h);
    worst = std::max(worst, std::pow(ratio, 1.0 / (2.0 * h)));
  }
  return worst;
}

std::vector<TailRow> check_subexp_tail(const SampleSet& s,
                                       const Eigen::VectorXd& v, double eps) {
  const int n = s.n();
  Eigen::VectorXd proj(n);
  for (int i = 0; i < n; ++i) proj(i) = s.points().row(i).dot(v);
  const double mean = proj.mean();
  proj.array() -= mean;
  const double sd = std::sqrt(proj.squaredNorm() / n);
  std::vector<TailRow> rows;
  for (int t = 1; t <= 6; ++t) {
    int cnt = 0;
    for (int i = 0; i < n; ++i)
      if (std::abs(proj(i)) >= t * sd) ++cnt;
    TailRow r;
    r.t = t;
    r.empirical_tail = static_cast<double>(cnt) / n;
    r.c_min = r.empirical_tail > 0.0
                  ? std::pow(static_cast<double>(t), 1.0 + eps) /
                        (-std::log(r.empirical_tail))
                  : 0.0;
    rows.push_back(r);
  }
  return rows;
}

std::pair<SampleSet, AffineMap> isotropize(const SampleSet& s) {
  const int n = s.n(), d = s.dim();
  const Eigen::VectorXd mean = s.points().colwise().mean().transpose();
  Eigen::MatrixXd centered = s.points().rowwise() - mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  const Eigen::VectorXd lam = es.eigenvalues();
  const double lmax = std::max(lam.maxCoeff(), 0.0);
  const double cutoff = std::max(1e-12 * std::max(lmax, 1.0), 0.0);

  std::vector<int> keep;
  for (int j = 0; j < d; ++j)
    if (lam(j) > cutoff) keep.push_back(j);
  const int r = static_cast<int>(keep.size());
  if (r == 0) throw std::invalid_argument("isotropize: zero covariance");

  Eigen::MatrixXd u(d, r);
  Eigen::VectorXd scale(r);
  for (int j = 0; j < r; ++j) {
    u.col(j) = es.eigenvectors().col(keep[j]);
    scale(j) = 1.0 / std::sqrt(lam(keep[j]));
  }

  AffineMap map;
  map.mean = mean;
  map.rank = r;
  map.forward = scale.asDiagonal() * u.transpose();
  map.backward = u * scale.cwiseInverse().asDiagonal();

  Eigen::MatrixXd out(n, r);
  for (int i = 0; i < n; ++i)
    out.row(i) = (map.forward * centered.row(i).transpose()).transpose();
  SampleSet iso(std::move(out), s.dist_name() + "+iso", s.params(), s.seed());
  if (s.responses()) iso.set_responses(*s.responses());
  if (s.labels()) {
    int k = 0;
    for (int l : *s.labels()) k = std::max(k, l + 1);
    iso.set_labels(*s.labels(), k);
  }
  return {std::move(iso), std::move(map)};
}

}  // namespace acsos
