#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace acsos {

// n x d point matrix with optional responses / ground-truth labels and
// provenance metadata. Immutable after construction.
class SampleSet {
 public:
  SampleSet(Eigen::MatrixXd points, std::string dist_name, std::string params,
            std::uint64_t seed)
      : points_(std::move(points)),
        dist_name_(std::move(dist_name)),
        params_(std::move(params)),
        seed_(seed) {
    if (points_.rows() < 1 || points_.cols() < 1)
      throw std::invalid_argument("SampleSet: need n >= 1 and d >= 1");
    if (!points_.allFinite())
      throw std::invalid_argument("SampleSet: non-finite coordinates");
  }

  int n() const { return static_cast<int>(points_.rows()); }
  int dim() const { return static_cast<int>(points_.cols()); }
  const Eigen::MatrixXd& points() const { return points_; }
  Eigen::RowVectorXd row(int i) const { return points_.row(i); }

  const std::optional<Eigen::VectorXd>& responses() const { return responses_; }
  const std::optional<std::vector<int>>& labels() const { return labels_; }
  void set_responses(Eigen::VectorXd y);
  void set_labels(std::vector<int> labels, int k);

  const std::string& dist_name() const { return dist_name_; }
  const std::string& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }

  void write_csv(const std::string& path) const;  // meta sidecar at path+".meta.json"
  static SampleSet read_csv(const std::string& path);

 private:
  Eigen::MatrixXd points_;
  std::optional<Eigen::VectorXd> responses_;
  std::optional<std::vector<int>> labels_;
  std::string dist_name_;
  std::string params_;
  std::uint64_t seed_ = 0;
};

struct GaussianSpec {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

struct LpBallSpec {
  double p = 2.0;
  int dim = 1;
};

struct MarginalSpec {
  enum Kind { kRademacher, kUniform, kGaussian } kind = kRademacher;
  double a = -1.0, b = 1.0;  // uniform bounds or gaussian (mean, sd)
};

struct ProductSpec {
  std::vector<MarginalSpec> marginals;
};

struct MixtureComponent {
  struct GaussianSpec gaussian;  // component base distribution
};

struct MixtureSpec {
  std::vector<double> weights;
  std::vector<MixtureComponent> components;
};

// One of the paper-relevant distribution families plus its dimension.
struct DistSpec {
  std::variant<GaussianSpec, LpBallSpec, ProductSpec, MixtureSpec> kind;
  int dim() const;
  std::string name() const;
  std::string params_json() const;
  void validate() const;
};

// i.i.d. sampler; deterministic given (spec, n, seed). Mixture samples carry
// component labels.
SampleSet sample(const DistSpec& spec, int n, std::uint64_t seed);

// E[prod_{i in S} x_i^2] for |S| = k under the uniform distribution on the
// unit l_p ball in dimension d:
//   Gamma(3/p)^k Gamma(d/p + 1) / (Gamma(1/p)^k Gamma((d + 2k)/p + 1))
double lp_moment_exact(int d, double p, int k);

// max over candidate unit directions (n_dirs random + covariance
// eigenvectors) of (1/n) #{i : <x_i, v>^2 <= delta^2 v^T Sigma v},
// Sigma = (1/n) X^T X (uncentered).
struct AnticoncentrationCheck {
  double max_fraction = 0.0;
  Eigen::VectorXd argmax_direction;
};
AnticoncentrationCheck check_anticoncentration(const SampleSet& s, double delta,
                                               int n_dirs, std::uint64_t seed);

// max over random unit directions of (E<x,v>^{2h} / (E<x,v>^2)^h)^{1/2h};
// degenerate directions with E<x,v>^2 = 0 are skipped
double check_hypercontractivity_linear(const SampleSet& s, int h, int n_dirs,
                                       std::uint64_t seed);

// quadratic-form version with f(x) = x^T Q x - mean over random symmetric Q
double check_hypercontractivity_quadratic(const SampleSet& s, int h,
                                          int n_matrices, std::uint64_t seed);

struct TailRow {
  double t;
  double empirical_tail;  // two-sided, against sqrt(v^T Sigma v)
  double c_min;           // smallest c with tail <= exp(-t^{1+eps}/c); 0 if tail = 0
};
std::vector<TailRow> check_subexp_tail(const SampleSet& s,
                                       const Eigen::VectorXd& v, double eps);

// Affine recentering/rescaling to empirical mean 0 and covariance I (1/n
// convention). Rank-deficient covariances reduce the output dimension.
struct AffineMap {
  Eigen::MatrixXd forward;   // y = forward * (x - mean)
  Eigen::MatrixXd backward;  // x = backward * y + mean (embedding for rank < d)
  Eigen::VectorXd mean;
  int rank = 0;
};
std::pair<SampleSet, AffineMap> isotropize(const SampleSet& s);

}  // namespace acsos
