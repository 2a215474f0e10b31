#pragma once

// Primal-dual interior-point method for
//   maximise  b^T y   s.t.  C_j - sum_i y_i A_ij >= 0  (PSD blocks)
//                           g_r - sum_i a_ri y_i >= 0   (linear rows)
// with its dual
//   minimise  <C, X> + g^T x   s.t.  <A_i, X> + a_i^T x = b_i,  X, x >= 0.
// Search direction HKM, Mehrotra predictor-corrector, infeasible start.
// SdpProblem maps onto this with C = F0, A_i = -F_i, b = objective; 1x1
// blocks and the nonnegativity constraints become linear rows.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "mixedsdp/errors.hpp"
#include "mixedsdp/rational.hpp"
#include "mixedsdp/sdp_model.hpp"

namespace mixedsdp {

struct SolverOptions {
  double tol = 1e-8;
  int max_iterations = 500;
  std::ostream* log = nullptr;  // one line per iteration when set
};

struct Solution {
  double objective = 0.0;       // b^T y
  double dual_objective = 0.0;  // <C, X> + g^T x, an upper bound when X is feasible
  double gap = 0.0;             // |objective - dual_objective|
  double relative_gap = 0.0;
  std::vector<double> y;
  double primal_infeasibility = 0.0;  // equality residual of the (X, x) side
  double dual_infeasibility = 0.0;    // residual of the slack equations
  double min_block_eigenvalue = 0.0;  // at y, normalised per block
  double min_variable = 0.0;
  int iterations = 0;
  bool converged = false;
  double seconds = 0.0;
  std::size_t inexact_coefficients = 0;  // coefficients needing more than 53 bits
  std::vector<std::string> log;

  // Largest violation among the residuals and the block eigenvalues.
  double feasibility_residual() const {
    return std::max({primal_infeasibility, dual_infeasibility, -min_block_eigenvalue,
                     -min_variable, 0.0});
  }
};

// Carries the last iterate when the iteration limit or a stall stops the solve.
class IterationLimitError : public NonConvergenceError {
 public:
  IterationLimitError(const std::string& what, Solution last)
      : NonConvergenceError(what), last_iterate(std::move(last)) {}
  Solution last_iterate;
};

struct NumericBlock {
  int n = 0;
  Eigen::MatrixXd C;
  std::vector<int> vars;
  Eigen::MatrixXd A;  // column k is vec(A_{vars[k]}), n*n rows
};

struct LinearRow {
  double g = 0.0;
  std::vector<std::pair<int, double>> a;
};

// Scaled floating-point copy of an SdpProblem. With y = var_scale .* yhat and
// block j multiplied by block_scale[j], the scaled objective is
// b^T yhat = (c^T y) / objective_scale.
struct NumericProblem {
  int m = 0;
  std::vector<NumericBlock> blocks;
  std::vector<LinearRow> rows;
  Eigen::VectorXd b;
  Eigen::VectorXd var_scale;
  double objective_scale = 1.0;
  std::size_t inexact_coefficients = 0;
};

namespace detail {

struct RawTerm {
  int var;  // -1 for the constant
  int i, j;
  double value;
};

struct RawBlock {
  int n = 0;
  std::vector<RawTerm> terms;
};

}  // namespace detail

inline NumericProblem to_numeric(const SdpProblem& p) {
  NumericProblem np;
  np.m = static_cast<int>(p.variable_count());
  std::vector<detail::RawBlock> raw;
  auto convert = [&](const Rational& q) {
    if (exact_bits(q) > 53) ++np.inexact_coefficients;
    return to_double(q);
  };
  for (const auto& b : p.blocks) {
    detail::RawBlock rb;
    rb.n = b.dim();
    for (int i = 0; i < rb.n; ++i)
      for (int j = 0; j < rb.n; ++j)
        if (b.constant(i, j) != 0) rb.terms.push_back({-1, i, j, convert(b.constant(i, j))});
    for (const auto& [var, f] : b.coeffs)
      for (int i = 0; i < rb.n; ++i)
        for (int j = 0; j < rb.n; ++j)
          if (f(i, j) != 0) rb.terms.push_back({var, i, j, convert(f(i, j))});
    raw.push_back(std::move(rb));
  }
  for (int v : p.nonneg) raw.push_back({1, {{v, 0, 0, 1.0}}});

  // Ruiz-style equilibration of block and variable scales
  const int nb = static_cast<int>(raw.size());
  std::vector<double> bs(nb, 1.0);
  Eigen::VectorXd vs = Eigen::VectorXd::Ones(np.m);
  for (int round = 0; round < 12; ++round) {
    std::vector<double> bmax(nb, 0.0);
    Eigen::VectorXd vmax = Eigen::VectorXd::Zero(np.m);
    for (int k = 0; k < nb; ++k)
      for (const auto& t : raw[k].terms) {
        const double v = std::abs(t.value) * bs[k] * (t.var >= 0 ? vs[t.var] : 1.0);
        bmax[k] = std::max(bmax[k], v);
        if (t.var >= 0) vmax[t.var] = std::max(vmax[t.var], v);
      }
    for (int k = 0; k < nb; ++k)
      if (bmax[k] > 0) bs[k] /= std::sqrt(bmax[k]);
    for (int i = 0; i < np.m; ++i)
      if (vmax[i] > 0) vs[i] /= std::sqrt(vmax[i]);
  }
  np.var_scale = vs;

  np.b = Eigen::VectorXd::Zero(np.m);
  for (int i = 0; i < np.m; ++i) np.b[i] = to_double(p.objective[i]) * vs[i];
  np.objective_scale = np.b.cwiseAbs().maxCoeff();
  if (np.objective_scale <= 0) np.objective_scale = 1.0;
  np.b /= np.objective_scale;

  for (int k = 0; k < nb; ++k) {
    const auto& rb = raw[k];
    if (rb.n == 1) {
      LinearRow row;
      std::map<int, double> a;
      for (const auto& t : rb.terms) {
        if (t.var < 0)
          row.g += bs[k] * t.value;
        else
          a[t.var] -= bs[k] * vs[t.var] * t.value;
      }
      for (const auto& [v, c] : a)
        if (c != 0) row.a.emplace_back(v, c);
      np.rows.push_back(std::move(row));
      continue;
    }
    NumericBlock blk;
    blk.n = rb.n;
    blk.C = Eigen::MatrixXd::Zero(rb.n, rb.n);
    std::map<int, int> local;
    for (const auto& t : rb.terms)
      if (t.var >= 0 && !local.count(t.var)) {
        local.emplace(t.var, 0);
      }
    for (auto& [v, idx] : local) {
      idx = static_cast<int>(blk.vars.size());
      blk.vars.push_back(v);
    }
    blk.A = Eigen::MatrixXd::Zero(rb.n * rb.n, static_cast<int>(blk.vars.size()));
    for (const auto& t : rb.terms) {
      if (t.var < 0)
        blk.C(t.i, t.j) = bs[k] * t.value;
      else
        blk.A(t.i + t.j * rb.n, local[t.var]) = -bs[k] * vs[t.var] * t.value;
    }
    np.blocks.push_back(std::move(blk));
  }
  return np;
}

namespace detail {

inline void symmetrize(Eigen::MatrixXd& m) {
  const Eigen::MatrixXd t = m.transpose();
  m = 0.5 * (m + t);
}

// Largest alpha such that M + alpha dM stays PSD, given
// the Cholesky factor of M; infinity when the direction never leaves the cone.
inline double max_step(const Eigen::LLT<Eigen::MatrixXd>& chol, const Eigen::MatrixXd& dM) {
  const Eigen::MatrixXd half = chol.matrixL().solve(dM);
  const Eigen::MatrixXd halfT = half.transpose();
  Eigen::MatrixXd w = chol.matrixL().solve(halfT);
  symmetrize(w);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  return lmin < 0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

inline Eigen::Map<const Eigen::VectorXd> vec(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

}  // namespace detail

struct NumericSolution {
  Eigen::VectorXd y;
  std::vector<Eigen::MatrixXd> X, Z;
  Eigen::VectorXd x, z;
  double pobj = 0, dobj = 0, pinf = 0, dinf = 0, relgap = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> log;
};

inline NumericSolution solve_numeric(const NumericProblem& np, const SolverOptions& opt) {
  const int m = np.m;
  const int nblk = static_cast<int>(np.blocks.size());
  const int nrow = static_cast<int>(np.rows.size());
  int total_dim = nrow;
  for (const auto& b : np.blocks) total_dim += b.n;

  double norm_c = 0.0;
  for (const auto& b : np.blocks) norm_c = std::max(norm_c, b.C.cwiseAbs().maxCoeff());
  for (const auto& r : np.rows) norm_c = std::max(norm_c, std::abs(r.g));
  const double norm_b = np.b.cwiseAbs().maxCoeff();

  NumericSolution s;
  const double xi = 10.0, eta = 10.0;
  s.y = Eigen::VectorXd::Zero(m);
  for (const auto& b : np.blocks) {
    s.X.push_back(xi * Eigen::MatrixXd::Identity(b.n, b.n));
    s.Z.push_back(eta * Eigen::MatrixXd::Identity(b.n, b.n));
  }
  s.x = Eigen::VectorXd::Constant(nrow, xi);
  s.z = Eigen::VectorXd::Constant(nrow, eta);

  auto log_line = [&](const std::string& line) {
    s.log.push_back(line);
    if (opt.log) *opt.log << line << '\n';
  };

  std::vector<Eigen::MatrixXd> Rd(nblk), Zinv(nblk);
  Eigen::VectorXd rd(nrow), rp(m);
  for (int iter = 0; iter <= opt.max_iterations; ++iter) {
    // residuals
    rp = np.b;
    double dinf = 0.0;
    for (int j = 0; j < nblk; ++j) {
      const auto& b = np.blocks[j];
      Eigen::VectorXd ax = b.A.transpose() * detail::vec(s.X[j]);
      for (std::size_t k = 0; k < b.vars.size(); ++k) rp[b.vars[k]] -= ax[k];
      Eigen::VectorXd ay(b.vars.size());
      for (std::size_t k = 0; k < b.vars.size(); ++k) ay[k] = s.y[b.vars[k]];
      Eigen::VectorXd sum = b.A * ay;
      Rd[j] = b.C - Eigen::Map<const Eigen::MatrixXd>(sum.data(), b.n, b.n) - s.Z[j];
      dinf = std::max(dinf, Rd[j].cwiseAbs().maxCoeff());
    }
    for (int r = 0; r < nrow; ++r) {
      double v = np.rows[r].g - s.z[r];
      for (const auto& [i, a] : np.rows[r].a) {
        v -= a * s.y[i];
        rp[i] -= a * s.x[r];
      }
      rd[r] = v;
      dinf = std::max(dinf, std::abs(v));
    }
    s.pobj = np.b.dot(s.y);
    double dobj = 0.0;
    for (int j = 0; j < nblk; ++j) dobj += np.blocks[j].C.cwiseProduct(s.X[j]).sum();
    for (int r = 0; r < nrow; ++r) dobj += np.rows[r].g * s.x[r];
    s.dobj = dobj;
    s.pinf = rp.cwiseAbs().maxCoeff() / (1.0 + norm_b);
    s.dinf = dinf / (1.0 + norm_c);
    s.relgap = std::abs(s.dobj - s.pobj) / std::max(1.0, 0.5 * (std::abs(s.pobj) + std::abs(s.dobj)));
    double xz = s.x.dot(s.z);
    for (int j = 0; j < nblk; ++j) xz += s.X[j].cwiseProduct(s.Z[j]).sum();
    const double mu = xz / total_dim;
    s.iterations = iter;
    {
      char buf[200];
      std::snprintf(buf, sizeof buf, "iter %3d  pobj %+.12e  dobj %+.12e  gap %.2e  pinf %.2e  dinf %.2e  mu %.2e",
                    iter, s.pobj * np.objective_scale, s.dobj * np.objective_scale, s.relgap, s.pinf,
                    s.dinf, mu);
      log_line(buf);
    }
    if (s.relgap <= opt.tol && s.pinf <= opt.tol && s.dinf <= opt.tol) {
      s.converged = true;
      return s;
    }
    if (iter == opt.max_iterations) break;

    // Schur complement
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
    std::vector<Eigen::LLT<Eigen::MatrixXd>> cholX(nblk), cholZ(nblk);
    for (int j = 0; j < nblk; ++j) {
      const auto& b = np.blocks[j];
      cholX[j].compute(s.X[j]);
      cholZ[j].compute(s.Z[j]);
      if (cholX[j].info() != Eigen::Success || cholZ[j].info() != Eigen::Success)
        throw ConditioningError("iterate left the PSD cone at iteration " + std::to_string(iter));
      Zinv[j] = cholZ[j].solve(Eigen::MatrixXd::Identity(b.n, b.n));
      detail::symmetrize(Zinv[j]);
      const int mj = static_cast<int>(b.vars.size());
      Eigen::MatrixXd G(b.n * b.n, mj);
      for (int k = 0; k < mj; ++k) {
        Eigen::Map<const Eigen::MatrixXd> Ak(b.A.col(k).data(), b.n, b.n);
        Eigen::MatrixXd g = s.X[j] * Ak * Zinv[j];
        G.col(k) = Eigen::Map<const Eigen::VectorXd>(g.data(), g.size());
      }
      Eigen::MatrixXd local = b.A.transpose() * G;
      for (int k = 0; k < mj; ++k)
        for (int l = 0; l < mj; ++l) M(b.vars[k], b.vars[l]) += local(k, l);
    }
    for (int r = 0; r < nrow; ++r) {
      const double d = s.x[r] / s.z[r];
      for (const auto& [i, ai] : np.rows[r].a)
        for (const auto& [k, ak] : np.rows[r].a) M(i, k) += d * ai * ak;
    }
    detail::symmetrize(M);
    Eigen::LLT<Eigen::MatrixXd> cholM(M);
    // near a degenerate optimum M loses definiteness in floating point; retry
    // with a growing diagonal shift, the residual test still decides convergence
    const double diag_max = M.diagonal().cwiseAbs().maxCoeff();
    for (double shift = 1e-14; cholM.info() != Eigen::Success; shift *= 100) {
      if (shift > 1e-6)
        throw ConditioningError("Schur complement is singular at iteration " + std::to_string(iter));
      Eigen::MatrixXd shifted = M;
      shifted.diagonal().array() += shift * diag_max;
      cholM.compute(shifted);
    }

    std::vector<Eigen::MatrixXd> dX(nblk), dZ(nblk);
    Eigen::VectorXd dy, dx, dz;
    auto direction = [&](const std::vector<Eigen::MatrixXd>& R, const Eigen::VectorXd& rl) {
      Eigen::VectorXd rhs = rp;
      for (int j = 0; j < nblk; ++j) {
        const auto& b = np.blocks[j];
        Eigen::MatrixXd t = (R[j] - s.X[j] * Rd[j]) * Zinv[j];
        Eigen::VectorXd at = b.A.transpose() * detail::vec(t);
        for (std::size_t k = 0; k < b.vars.size(); ++k) rhs[b.vars[k]] -= at[k];
      }
      for (int r = 0; r < nrow; ++r) {
        const double t = (rl[r] - s.x[r] * rd[r]) / s.z[r];
        for (const auto& [i, a] : np.rows[r].a) rhs[i] -= a * t;
      }
      dy = cholM.solve(rhs);
      if (!dy.allFinite())
        throw ConditioningError("non-finite search direction at iteration " + std::to_string(iter));
      for (int j = 0; j < nblk; ++j) {
        const auto& b = np.blocks[j];
        Eigen::VectorXd ay(b.vars.size());
        for (std::size_t k = 0; k < b.vars.size(); ++k) ay[k] = dy[b.vars[k]];
        Eigen::VectorXd sum = b.A * ay;
        dZ[j] = Rd[j] - Eigen::Map<const Eigen::MatrixXd>(sum.data(), b.n, b.n);
        detail::symmetrize(dZ[j]);
        dX[j] = (R[j] - s.X[j] * dZ[j]) * Zinv[j];
        detail::symmetrize(dX[j]);
      }
      dz.resize(nrow);
      dx.resize(nrow);
      for (int r = 0; r < nrow; ++r) {
        double v = rd[r];
        for (const auto& [i, a] : np.rows[r].a) v -= a * dy[i];
        dz[r] = v;
        dx[r] = (rl[r] - s.x[r] * v) / s.z[r];
      }
    };
    auto step_lengths = [&](double& ap, double& ad) {
      ap = std::numeric_limits<double>::infinity();
      ad = ap;
      for (int j = 0; j < nblk; ++j) {
        ap = std::min(ap, detail::max_step(cholX[j], dX[j]));
        ad = std::min(ad, detail::max_step(cholZ[j], dZ[j]));
      }
      for (int r = 0; r < nrow; ++r) {
        if (dx[r] < 0) ap = std::min(ap, -s.x[r] / dx[r]);
        if (dz[r] < 0) ad = std::min(ad, -s.z[r] / dz[r]);
      }
    };

    // predictor
    std::vector<Eigen::MatrixXd> R(nblk);
    for (int j = 0; j < nblk; ++j) R[j] = -s.X[j] * s.Z[j];
    Eigen::VectorXd rl = -s.x.cwiseProduct(s.z);
    direction(R, rl);
    double ap, ad;
    step_lengths(ap, ad);
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double xz_aff = 0.0;
    for (int j = 0; j < nblk; ++j)
      xz_aff += (s.X[j] + ap * dX[j]).cwiseProduct(s.Z[j] + ad * dZ[j]).sum();
    xz_aff += (s.x + ap * dx).dot(s.z + ad * dz);
    const double mu_aff = xz_aff / total_dim;
    double sigma = std::pow(std::max(0.0, mu_aff) / mu, 3);
    sigma = std::clamp(sigma, 0.0, 1.0);

    // corrector
    for (int j = 0; j < nblk; ++j)
      R[j] = sigma * mu * Eigen::MatrixXd::Identity(np.blocks[j].n, np.blocks[j].n) -
             s.X[j] * s.Z[j] - dX[j] * dZ[j];
    rl = Eigen::VectorXd::Constant(nrow, sigma * mu) - s.x.cwiseProduct(s.z) - dx.cwiseProduct(dz);
    direction(R, rl);
    step_lengths(ap, ad);
    const double gamma = 0.95;
    ap = std::min(1.0, gamma * ap);
    ad = std::min(1.0, gamma * ad);

    for (int j = 0; j < nblk; ++j) {
      s.X[j] += ap * dX[j];
      s.Z[j] += ad * dZ[j];
    }
    s.x += ap * dx;
    s.z += ad * dz;
    s.y += ad * dy;
  }
  return s;
}

inline Solution solve(const SdpProblem& p, const SolverOptions& opt = {}) {
  if (!(opt.tol > 0)) throw DomainError("solve: tolerance must be positive");
  const auto start = std::chrono::steady_clock::now();
  const NumericProblem np = to_numeric(p);
  Solution out;
  out.inexact_coefficients = np.inexact_coefficients;
  if (np.inexact_coefficients > 0) {
    out.log.push_back(std::to_string(np.inexact_coefficients) +
                      " coefficients rounded to double precision");
    if (opt.log) *opt.log << out.log.back() << '\n';
  }
  const NumericSolution ns = solve_numeric(np, opt);
  out.log.insert(out.log.end(), ns.log.begin(), ns.log.end());
  out.y.resize(np.m);
  for (int i = 0; i < np.m; ++i) out.y[i] = ns.y[i] * np.var_scale[i];
  out.objective = ns.pobj * np.objective_scale;
  out.dual_objective = ns.dobj * np.objective_scale;
  out.gap = std::abs(out.dual_objective - out.objective);
  out.relative_gap = ns.relgap;
  out.primal_infeasibility = ns.pinf;
  out.dual_infeasibility = ns.dinf;
  const auto feas = check_feasibility(p, out.y);
  out.min_block_eigenvalue = feas.min_block_eigenvalue;
  out.min_variable = feas.min_variable;
  out.iterations = ns.iterations;
  out.converged = ns.converged;
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.converged)
    throw IterationLimitError("solver did not reach tolerance within " +
                                  std::to_string(opt.max_iterations) + " iterations",
                              out);
  return out;
}

enum class Provenance { Solver, ExternalFile };

inline const char* to_string(Provenance p) {
  return p == Provenance::Solver ? "solver" : "external-file";
}

struct CertifiedBound {
  long long value = 0;
  double guard = 0.0;
  Provenance provenance = Provenance::Solver;
};

// floor(dual objective + guard), guard = max(gap, 10 * feasibility * scale).
inline CertifiedBound certify_values(double objective, double dual_objective,
                                     double feasibility_residual,
                                     Provenance provenance = Provenance::Solver) {
  const double gap = std::abs(dual_objective - objective);
  const double scale = std::max(1.0, std::abs(objective));
  const double guard = std::max(gap, 10.0 * feasibility_residual * scale);
  if (!std::isfinite(guard) || guard >= 0.5)
    throw CertificationError("guard " + std::to_string(guard) +
                             " too large to certify an integer bound (objective " +
                             std::to_string(objective) + ")");
  return {static_cast<long long>(std::floor(dual_objective + guard)), guard, provenance};
}

inline CertifiedBound certify(const SdpProblem&, const Solution& s) {
  if (!s.converged) throw CertificationError("cannot certify an unconverged solution");
  return certify_values(s.objective, s.dual_objective, s.feasibility_residual());
}

}  // namespace mixedsdp
