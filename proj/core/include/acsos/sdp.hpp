#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <string>
#include <vector>

namespace acsos {

struct SdpTriplet {
  int row = 0;
  int col = 0;
  double value = 0.0;  // symmetric entry; (row, col) and (col, row) both set
};

// Single-PSD-block conic program
//   optimize <C, X>  s.t.  <A_j, X> = b_j,  X >= 0 (PSD),
// with block-diagonal sub-blocks detected automatically from the aggregate
// sparsity pattern (projection onto the PSD cone then factors per block).
class SdpProblem {
 public:
  enum class Sense { kMinimize, kMaximize };

  explicit SdpProblem(int block_dim, Sense sense = Sense::kMinimize);

  int block_dim() const { return m_; }
  Sense sense() const { return sense_; }
  int num_constraints() const { return static_cast<int>(b_.size()); }

  void set_objective(std::vector<SdpTriplet> entries);
  void set_objective_dense(const Eigen::MatrixXd& c);  // errors if not symmetric
  void add_constraint(std::vector<SdpTriplet> entries, double b);
  void add_constraint_dense(const Eigen::MatrixXd& a, double b);

  const std::vector<std::vector<SdpTriplet>>& constraints() const { return rows_; }
  const std::vector<double>& rhs() const { return b_; }
  const std::vector<SdpTriplet>& objective() const { return obj_; }

  // sparse text dump, one line per nonzero: constraint_index row col value
  // (constraint_index 0 is the objective)
  void dump(std::ostream& os) const;

 private:
  static void canonicalize(std::vector<SdpTriplet>& entries, int m);

  int m_;
  Sense sense_;
  std::vector<SdpTriplet> obj_;
  std::vector<std::vector<SdpTriplet>> rows_;
  std::vector<double> b_;
};

enum class SdpStatus { kOptimal, kMaxIters, kInfeasibleSuspected };

std::string to_string(SdpStatus s);

struct SdpSolution {
  SdpStatus status = SdpStatus::kMaxIters;
  // PSD iterate stored per detected block; index maps into the original
  std::vector<Eigen::MatrixXd> blocks;
  std::vector<std::vector<int>> block_indices;  // block -> original indices
  Eigen::VectorXd y;                            // dual multipliers, user sense
  std::vector<Eigen::MatrixXd> dual_blocks;     // S per block, PSD
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  int dropped_rows = 0;

  double X(int p, int q) const;       // entry lookup (0 if cross-block)
  Eigen::MatrixXd X_dense(int m) const;
  Eigen::MatrixXd S_dense(int m) const;
};

struct SdpOptions {
  double tol = 1e-6;
  int max_iters = 50000;
  bool scaling = true;
  double rho = 1.0;
  int check_every = 25;
  bool verbose = false;
};

SdpSolution solve(const SdpProblem& p, const SdpOptions& opts = {});

struct KktReport {
  double primal_res = 0.0;
  double dual_res = 0.0;
  double complementarity = 0.0;
  double eigmin_X = 0.0;
  double eigmin_S = 0.0;
};

KktReport check_kkt(const SdpProblem& p, const SdpSolution& sol);

// projection onto the PSD cone by symmetric eigendecomposition
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m);

}  // namespace acsos
