#include "acsos/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iostream>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/SparseCholesky>

namespace acsos {

SdpProblem::SdpProblem(int block_dim, Sense sense) : m_(block_dim), sense_(sense) {
  if (block_dim < 1) throw std::invalid_argument("SdpProblem: block_dim >= 1");
}

void SdpProblem::canonicalize(std::vector<SdpTriplet>& entries, int m) {
  for (auto& t : entries) {
    if (t.row < 0 || t.col < 0 || t.row >= m || t.col >= m)
      throw std::invalid_argument("SdpProblem: entry out of range");
    if (t.row > t.col) std::swap(t.row, t.col);
  }
  std::sort(entries.begin(), entries.end(), [](const SdpTriplet& a, const SdpTriplet& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  std::vector<SdpTriplet> merged;
  for (const auto& t : entries) {
    if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col)
      merged.back().value += t.value;
    else
      merged.push_back(t);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const SdpTriplet& t) { return t.value == 0.0; }),
               merged.end());
  entries = std::move(merged);
}

void SdpProblem::set_objective(std::vector<SdpTriplet> entries) {
  canonicalize(entries, m_);
  obj_ = std::move(entries);
}

void SdpProblem::set_objective_dense(const Eigen::MatrixXd& c) {
  if (c.rows() != m_ || c.cols() != m_ || !c.isApprox(c.transpose(), 1e-12))
    throw std::invalid_argument("SdpProblem: objective must be symmetric m x m");
  std::vector<SdpTriplet> e;
  for (int i = 0; i < m_; ++i)
    for (int j = i; j < m_; ++j)
      if (c(i, j) != 0.0) e.push_back({i, j, c(i, j)});
  set_objective(std::move(e));
}

void SdpProblem::add_constraint(std::vector<SdpTriplet> entries, double b) {
  if (!std::isfinite(b)) throw std::invalid_argument("SdpProblem: non-finite rhs");
  canonicalize(entries, m_);
  rows_.push_back(std::move(entries));
  b_.push_back(b);
}

void SdpProblem::add_constraint_dense(const Eigen::MatrixXd& a, double b) {
  if (a.rows() != m_ || a.cols() != m_ || !a.isApprox(a.transpose(), 1e-12))
    throw std::invalid_argument("SdpProblem: constraint must be symmetric m x m");
  std::vector<SdpTriplet> e;
  for (int i = 0; i < m_; ++i)
    for (int j = i; j < m_; ++j)
      if (a(i, j) != 0.0) e.push_back({i, j, a(i, j)});
  add_constraint(std::move(e), b);
}

void SdpProblem::dump(std::ostream& os) const {
  for (const auto& t : obj_) os << 0 << ' ' << t.row << ' ' << t.col << ' ' << t.value << '\n';
  for (size_t j = 0; j < rows_.size(); ++j) {
    for (const auto& t : rows_[j])
      os << (j + 1) << ' ' << t.row << ' ' << t.col << ' ' << t.value << '\n';
    os << (j + 1) << " rhs " << b_[j] << '\n';
  }
}

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::kOptimal: return "optimal";
    case SdpStatus::kMaxIters: return "max_iters";
    case SdpStatus::kInfeasibleSuspected: return "infeasible_suspected";
  }
  return "unknown";
}

double SdpSolution::X(int p, int q) const {
  for (size_t k = 0; k < block_indices.size(); ++k) {
    const auto& idx = block_indices[k];
    auto ip = std::find(idx.begin(), idx.end(), p);
    if (ip == idx.end()) continue;
    auto iq = std::find(idx.begin(), idx.end(), q);
    if (iq == idx.end()) return 0.0;
    return blocks[k](ip - idx.begin(), iq - idx.begin());
  }
  return 0.0;
}

Eigen::MatrixXd SdpSolution::X_dense(int m) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (size_t k = 0; k < block_indices.size(); ++k) {
    const auto& idx = block_indices[k];
    for (size_t a = 0; a < idx.size(); ++a)
      for (size_t b = 0; b < idx.size(); ++b)
        out(idx[a], idx[b]) = blocks[k](a, b);
  }
  return out;
}

Eigen::MatrixXd SdpSolution::S_dense(int m) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (size_t k = 0; k < block_indices.size(); ++k) {
    const auto& idx = block_indices[k];
    for (size_t a = 0; a < idx.size(); ++a)
      for (size_t b = 0; b < idx.size(); ++b)
        out(idx[a], idx[b]) = dual_blocks[k](a, b);
  }
  return out;
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

namespace {

// union-find over matrix indices to split the PSD cone into blocks
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[b] = a;
  }
};

struct BlockLayout {
  std::vector<std::vector<int>> indices;      // block -> original indices
  std::vector<int> of_index;                  // original index -> block
  std::vector<int> pos_in_block;              // original index -> position
  std::vector<int> svec_offset;               // block -> offset into svec
  int svec_dim = 0;

  int svec_pos(int p, int q) const {  // p, q in the same block, any order
    const int k = of_index[p];
    int a = pos_in_block[p], b = pos_in_block[q];
    if (a > b) std::swap(a, b);
    const int n = static_cast<int>(indices[k].size());
    // packed upper triangle, row-major: (a, b) with a <= b
    return svec_offset[k] + a * n - a * (a - 1) / 2 + (b - a);
  }
};

BlockLayout detect_blocks(const SdpProblem& p) {
  const int m = p.block_dim();
  UnionFind uf(m);
  for (const auto& t : p.objective()) uf.unite(t.row, t.col);
  for (const auto& row : p.constraints())
    for (const auto& t : row) uf.unite(t.row, t.col);

  std::map<int, int> root_to_block;
  BlockLayout bl;
  bl.of_index.resize(m);
  bl.pos_in_block.resize(m);
  for (int i = 0; i < m; ++i) {
    const int r = uf.find(i);
    auto it = root_to_block.find(r);
    int k;
    if (it == root_to_block.end()) {
      k = static_cast<int>(bl.indices.size());
      root_to_block[r] = k;
      bl.indices.emplace_back();
    } else {
      k = it->second;
    }
    bl.of_index[i] = k;
    bl.pos_in_block[i] = static_cast<int>(bl.indices[k].size());
    bl.indices[k].push_back(i);
  }
  bl.svec_offset.resize(bl.indices.size());
  int off = 0;
  for (size_t k = 0; k < bl.indices.size(); ++k) {
    bl.svec_offset[k] = off;
    const int n = static_cast<int>(bl.indices[k].size());
    off += n * (n + 1) / 2;
  }
  bl.svec_dim = off;
  return bl;
}

constexpr double kSqrt2 = 1.4142135623730951;

// svec convention: off-diagonals scaled by sqrt(2) so the matrix inner
// product is the Euclidean dot product
Eigen::SparseVector<double> to_svec(const std::vector<SdpTriplet>& entries,
                                    const BlockLayout& bl) {
  Eigen::SparseVector<double> v(bl.svec_dim);
  for (const auto& t : entries) {
    const double s = (t.row == t.col) ? t.value : kSqrt2 * t.value;
    v.coeffRef(bl.svec_pos(t.row, t.col)) += s;
  }
  return v;
}

void svec_to_blocks(const Eigen::VectorXd& x, const BlockLayout& bl,
                    std::vector<Eigen::MatrixXd>& blocks) {
  blocks.resize(bl.indices.size());
  for (size_t k = 0; k < bl.indices.size(); ++k) {
    const int n = static_cast<int>(bl.indices[k].size());
    blocks[k].resize(n, n);
    int pos = bl.svec_offset[k];
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b, ++pos) {
        const double v = (a == b) ? x(pos) : x(pos) / kSqrt2;
        blocks[k](a, b) = v;
        blocks[k](b, a) = v;
      }
  }
}

void blocks_to_svec(const std::vector<Eigen::MatrixXd>& blocks, const BlockLayout& bl,
                    Eigen::VectorXd& x) {
  for (size_t k = 0; k < blocks.size(); ++k) {
    const int n = static_cast<int>(bl.indices[k].size());
    int pos = bl.svec_offset[k];
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b, ++pos)
        x(pos) = (a == b) ? blocks[k](a, b) : kSqrt2 * blocks[k](a, b);
  }
}

}  // namespace

SdpSolution solve(const SdpProblem& p, const SdpOptions& opts) {
  const BlockLayout bl = detect_blocks(p);
  const int nsv = bl.svec_dim;
  const bool maximize = p.sense() == SdpProblem::Sense::kMaximize;

  // objective in svec coordinates (internal sense: minimize)
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nsv);
  {
    const auto cv = to_svec(p.objective(), bl);
    for (Eigen::SparseVector<double>::InnerIterator it(cv); it; ++it)
      c(it.index()) = maximize ? -it.value() : it.value();
  }

  // assemble constraint matrix with presolve: drop zero and duplicate rows
  std::vector<Eigen::SparseVector<double>> rows;
  std::vector<double> rhs;
  std::vector<int> row_origin;
  int dropped = 0;
  {
    std::unordered_map<std::uint64_t, std::vector<int>> seen;
    for (int j = 0; j < p.num_constraints(); ++j) {
      auto rv = to_svec(p.constraints()[j], bl);
      if (rv.nonZeros() == 0) {
        ++dropped;  // vacuous (or inconsistent, caught by residuals elsewhere)
        continue;
      }
      std::uint64_t h = 1469598103934665603ULL;
      for (Eigen::SparseVector<double>::InnerIterator it(rv); it; ++it) {
        h ^= static_cast<std::uint64_t>(it.index());
        h *= 1099511628211ULL;
        std::uint64_t bits;
        const double val = it.value();
        std::memcpy(&bits, &val, sizeof(bits));
        h ^= bits;
        h *= 1099511628211ULL;
      }
      bool dup = false;
      for (int prev : seen[h]) {
        if (rhs[prev] == p.rhs()[j] && rows[prev].nonZeros() == rv.nonZeros()) {
          bool same = true;
          Eigen::SparseVector<double>::InnerIterator a(rows[prev]), bI(rv);
          for (; a && bI; ++a, ++bI)
            if (a.index() != bI.index() || a.value() != bI.value()) {
              same = false;
              break;
            }
          if (same) {
            dup = true;
            break;
          }
        }
      }
      if (dup) {
        ++dropped;
        continue;
      }
      seen[h].push_back(static_cast<int>(rows.size()));
      rows.push_back(std::move(rv));
      rhs.push_back(p.rhs()[j]);
      row_origin.push_back(j);
    }
  }
  const int ncons = static_cast<int>(rows.size());
  if (ncons == 0) throw std::invalid_argument("solve: no usable constraints");

  // row scaling (Ruiz-style single pass: unit row norms)
  Eigen::VectorXd row_scale = Eigen::VectorXd::Ones(ncons);
  if (opts.scaling) {
    for (int j = 0; j < ncons; ++j) {
      const double nrm = rows[j].norm();
      if (nrm > 0) row_scale(j) = 1.0 / nrm;
    }
  }

  Eigen::SparseMatrix<double, Eigen::RowMajor> A(ncons, nsv);
  {
    std::vector<Eigen::Triplet<double>> trips;
    for (int j = 0; j < ncons; ++j)
      for (Eigen::SparseVector<double>::InnerIterator it(rows[j]); it; ++it)
        trips.emplace_back(j, it.index(), it.value() * row_scale(j));
    A.setFromTriplets(trips.begin(), trips.end());
  }
  Eigen::VectorXd b(ncons);
  for (int j = 0; j < ncons; ++j) b(j) = rhs[j] * row_scale(j);

  // objective scaling keeps rho in a good range
  const double c_norm = c.norm();
  const double obj_scale = (opts.scaling && c_norm > 0) ? 1.0 / c_norm : 1.0;
  Eigen::VectorXd c_s = c * obj_scale;

  // Gram matrix of the constraints, factored once
  Eigen::SparseMatrix<double> AAt = (A * A.transpose()).pruned();
  {
    const double reg = 1e-12;
    for (int j = 0; j < ncons; ++j) AAt.coeffRef(j, j) += reg;
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol;
  chol.compute(AAt);
  if (chol.info() != Eigen::Success)
    throw std::runtime_error("solve: Gram matrix factorization failed");

  auto project_affine = [&](const Eigen::VectorXd& w, Eigen::VectorXd& lam) {
    lam = chol.solve(A * w - b);
    return Eigen::VectorXd(w - A.transpose() * lam);
  };

  double rho = opts.rho;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(nsv);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(nsv);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(nsv);
  Eigen::VectorXd lam = Eigen::VectorXd::Zero(ncons);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(nsv);
  Eigen::VectorXd z_prev = z;

  SdpSolution sol;
  sol.dropped_rows = dropped;
  int it = 0;
  double feas_p = 1e30, feas_d = 1e30, gap_rel = 1e30;
  double best_feas = 1e30;
  int best_feas_iter = 0;
  bool stalled = false;

  std::vector<Eigen::MatrixXd> zblocks;
  for (it = 1; it <= opts.max_iters; ++it) {
    // affine step: minimize <c,x> + rho/2 |x - (z-u)|^2 over A x = b
    x = project_affine(z - u - c_s / rho, lam);
    // cone step with exact dual slack from the Moreau decomposition
    z_prev = z;
    Eigen::VectorXd v = x + u;
    svec_to_blocks(v, bl, zblocks);
    std::vector<Eigen::MatrixXd> sblocks(zblocks.size());
    for (size_t k = 0; k < zblocks.size(); ++k) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(zblocks[k]);
      const Eigen::VectorXd pos = es.eigenvalues().cwiseMax(0.0);
      const Eigen::VectorXd neg = (-es.eigenvalues()).cwiseMax(0.0);
      zblocks[k] = es.eigenvectors() * pos.asDiagonal() * es.eigenvectors().transpose();
      sblocks[k] =
          es.eigenvectors() * (rho * neg).asDiagonal() * es.eigenvectors().transpose();
    }
    blocks_to_svec(zblocks, bl, z);
    Eigen::VectorXd s_tmp(nsv);
    blocks_to_svec(sblocks, bl, s_tmp);
    s = s_tmp;
    u += x - z;

    if (it % opts.check_every == 0 || it == opts.max_iters) {
      const Eigen::VectorXd y = -rho * lam;  // scaled-problem dual
      feas_p = (A * z - b).cwiseAbs().maxCoeff() / (1.0 + b.cwiseAbs().maxCoeff());
      feas_d = (c_s - A.transpose() * y - s).cwiseAbs().maxCoeff() /
               (1.0 + c_s.cwiseAbs().maxCoeff());
      const double pobj = c_s.dot(z);
      const double dobj = b.dot(y);
      gap_rel = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
      if (opts.verbose)
        std::cerr << "iter " << it << " feas_p " << feas_p << " feas_d " << feas_d
                  << " gap " << gap_rel << " rho " << rho << "\n";
      if (feas_p < best_feas * 0.98) {
        best_feas = feas_p;
        best_feas_iter = it;
      }
      if (feas_p <= opts.tol && feas_d <= opts.tol && gap_rel <= opts.tol) break;
      // infeasibility heuristic: primal residual plateau well above tol
      if (it - best_feas_iter > 4000 && feas_p > 1e-4 && it > 6000) {
        stalled = true;
        break;
      }
      // residual balancing
      const double rnorm = (x - z).norm();
      const double snorm = rho * (z - z_prev).norm();
      if (rnorm > 10.0 * snorm && rho < 1e6) {
        rho *= 2.0;
        u *= 0.5;
      } else if (snorm > 10.0 * rnorm && rho > 1e-6) {
        rho *= 0.5;
        u *= 2.0;
      }
    }
  }

  // report in user coordinates: X from the PSD iterate, duals unscaled
  sol.iterations = std::min(it, opts.max_iters);
  sol.block_indices = bl.indices;
  svec_to_blocks(z, bl, sol.blocks);
  {
    std::vector<Eigen::MatrixXd> sb;
    svec_to_blocks(s, bl, sb);
    sol.dual_blocks.resize(sb.size());
    for (size_t k = 0; k < sb.size(); ++k)
      sol.dual_blocks[k] = sb[k] / obj_scale;  // undo objective scaling
  }
  // dual vector for the ORIGINAL rows (zeros for dropped ones); the slack
  // S_user = S_internal / obj_scale is PSD in both senses
  sol.y = Eigen::VectorXd::Zero(p.num_constraints());
  {
    const Eigen::VectorXd y = -rho * lam;
    for (int j = 0; j < ncons; ++j) {
      double yj = y(j) * row_scale(j) / obj_scale;
      if (maximize) yj = -yj;
      sol.y(row_origin[j]) = yj;
    }
  }
  // primal/dual objectives in user sense
  {
    double pobj = 0.0;
    for (const auto& t : p.objective()) {
      const double xv = sol.X(t.row, t.col);
      pobj += (t.row == t.col) ? t.value * xv : 2.0 * t.value * xv;
    }
    sol.primal_obj = pobj;
    double dobj = 0.0;
    for (int j = 0; j < p.num_constraints(); ++j) dobj += p.rhs()[j] * sol.y(j);
    sol.dual_obj = dobj;
    sol.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
  }
  sol.primal_residual = feas_p;
  sol.dual_residual = feas_d;
  if (feas_p <= opts.tol && feas_d <= opts.tol && gap_rel <= opts.tol)
    sol.status = SdpStatus::kOptimal;
  else if (stalled)
    sol.status = SdpStatus::kInfeasibleSuspected;
  else
    sol.status = SdpStatus::kMaxIters;
  return sol;
}

KktReport check_kkt(const SdpProblem& p, const SdpSolution& sol) {
  KktReport r;
  double bmax = 0.0;
  for (double v : p.rhs()) bmax = std::max(bmax, std::abs(v));
  for (int j = 0; j < p.num_constraints(); ++j) {
    double ax = 0.0;
    for (const auto& t : p.constraints()[j]) {
      const double xv = sol.X(t.row, t.col);
      ax += (t.row == t.col) ? t.value * xv : 2.0 * t.value * xv;
    }
    r.primal_res = std::max(r.primal_res, std::abs(ax - p.rhs()[j]) / (1.0 + bmax));
  }

  // S_raw = +/- (C - A^T y) depending on the sense; eigmin and complementarity
  const bool maximize = p.sense() == SdpProblem::Sense::kMaximize;
  const int m = p.block_dim();
  Eigen::MatrixXd s_raw = Eigen::MatrixXd::Zero(m, m);
  for (const auto& t : p.objective()) {
    s_raw(t.row, t.col) += t.value;
    if (t.row != t.col) s_raw(t.col, t.row) += t.value;
  }
  for (int j = 0; j < p.num_constraints(); ++j) {
    const double yj = sol.y(j);
    if (yj == 0.0) continue;
    for (const auto& t : p.constraints()[j]) {
      s_raw(t.row, t.col) -= yj * t.value;
      if (t.row != t.col) s_raw(t.col, t.row) -= yj * t.value;
    }
  }
  if (maximize) s_raw = -s_raw;  // certifies <C,X> <= b^T y

  double cnorm = 0.0;
  for (const auto& t : p.objective())
    cnorm += (t.row == t.col ? 1.0 : 2.0) * t.value * t.value;
  cnorm = std::sqrt(cnorm);

  const Eigen::MatrixXd x = sol.X_dense(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esx(x);
  r.eigmin_X = esx.eigenvalues().minCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ess(s_raw);
  r.eigmin_S = ess.eigenvalues().minCoeff();
  r.dual_res = (s_raw - project_psd(s_raw)).norm() / (1.0 + cnorm);
  r.complementarity =
      std::abs((x.array() * s_raw.array()).sum()) / (1.0 + std::abs(sol.primal_obj));
  return r;
}

}  // namespace acsos
