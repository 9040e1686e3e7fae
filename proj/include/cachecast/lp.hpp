#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace cachecast {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Linear program over named nonnegative (more generally, boxed) reals.
struct LinearProgram {
  enum class Sense { LE, GE, EQ };

  struct Row {
    std::vector<std::pair<int, double>> terms;
    Sense sense = Sense::LE;
    double rhs = 0.0;
    std::string name;
  };

  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> var_names;
  std::vector<std::pair<int, double>> objective;  // minimized
  std::vector<Row> rows;

  int add_variable(double lo = 0.0, double up = kInf, std::string name = {}) {
    if (!(lo <= up)) throw std::invalid_argument("add_variable: empty bound interval");
    if (!std::isfinite(lo)) throw std::invalid_argument("add_variable: lower bound must be finite");
    lower.push_back(lo);
    upper.push_back(up);
    var_names.push_back(std::move(name));
    return static_cast<int>(lower.size()) - 1;
  }

  void add_constraint(std::vector<std::pair<int, double>> terms, Sense sense, double rhs,
                      std::string name = {}) {
    for (const auto& [v, coef] : terms) {
      if (v < 0 || v >= static_cast<int>(lower.size())) {
        throw std::invalid_argument("add_constraint: unknown variable index");
      }
      if (!std::isfinite(coef)) throw std::invalid_argument("add_constraint: non-finite coefficient");
    }
    if (!std::isfinite(rhs)) throw std::invalid_argument("add_constraint: non-finite rhs");
    rows.push_back({std::move(terms), sense, rhs, std::move(name)});
  }

  void set_objective(std::vector<std::pair<int, double>> terms) { objective = std::move(terms); }

  int var_count() const { return static_cast<int>(lower.size()); }
};

// Largest violation of any row or bound at the candidate point.
inline double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (int i = 0; i < lp.var_count(); ++i) {
    worst = std::max(worst, lp.lower[i] - x[i]);
    if (std::isfinite(lp.upper[i])) worst = std::max(worst, x[i] - lp.upper[i]);
  }
  for (const auto& row : lp.rows) {
    double a = 0.0;
    for (const auto& [v, coef] : row.terms) a += coef * x[v];
    switch (row.sense) {
      case LinearProgram::Sense::LE: worst = std::max(worst, a - row.rhs); break;
      case LinearProgram::Sense::GE: worst = std::max(worst, row.rhs - a); break;
      case LinearProgram::Sense::EQ: worst = std::max(worst, std::abs(a - row.rhs)); break;
    }
  }
  return worst;
}

namespace detail {

// Equality standard form: min c'x s.t. Ax = b, 0 <= x, x_i <= u_i where u_i
// may be infinite. Original variables are shifted by their lower bounds.
// Variables fixed by equal bounds carry no column: the interior-point method
// needs a strictly interior box, so their value is folded into the rhs and
// restored on recovery.
struct StandardForm {
  Eigen::SparseMatrix<double> A;  // m x n
  Eigen::VectorXd b, c, u;        // u_i = +inf when unbounded above
  int orig_vars = 0;
  std::vector<double> shift;      // original lower bounds
  std::vector<int> col_of;        // original var -> column, -1 when fixed
};

inline StandardForm build_standard(const LinearProgram& lp) {
  StandardForm sf;
  sf.orig_vars = lp.var_count();
  sf.shift.assign(lp.lower.begin(), lp.lower.end());
  sf.col_of.assign(sf.orig_vars, -1);
  int cols = 0;
  for (int i = 0; i < sf.orig_vars; ++i) {
    if (!(std::isfinite(lp.upper[i]) && lp.upper[i] == lp.lower[i])) sf.col_of[i] = cols++;
  }
  int slacks = 0;
  for (const auto& row : lp.rows) {
    if (row.sense != LinearProgram::Sense::EQ) ++slacks;
  }
  const int n = cols + slacks;
  const int m = static_cast<int>(lp.rows.size());
  sf.c = Eigen::VectorXd::Zero(n);
  for (const auto& [v, coef] : lp.objective) {
    if (sf.col_of[v] >= 0) sf.c[sf.col_of[v]] += coef;
  }
  sf.u = Eigen::VectorXd::Constant(n, kInf);
  for (int i = 0; i < sf.orig_vars; ++i) {
    if (sf.col_of[i] >= 0 && std::isfinite(lp.upper[i])) {
      sf.u[sf.col_of[i]] = lp.upper[i] - lp.lower[i];
    }
  }
  sf.b = Eigen::VectorXd::Zero(m);
  std::vector<Eigen::Triplet<double>> trips;
  int next_slack = cols;
  for (int r = 0; r < m; ++r) {
    const auto& row = lp.rows[r];
    double rhs = row.rhs;
    for (const auto& [v, coef] : row.terms) {
      if (sf.col_of[v] >= 0) trips.emplace_back(r, sf.col_of[v], coef);
      rhs -= coef * lp.lower[v];
    }
    if (row.sense == LinearProgram::Sense::LE) {
      trips.emplace_back(r, next_slack++, 1.0);
    } else if (row.sense == LinearProgram::Sense::GE) {
      trips.emplace_back(r, next_slack++, -1.0);
    }
    sf.b[r] = rhs;
  }
  sf.A.resize(m, n);
  sf.A.setFromTriplets(trips.begin(), trips.end());
  return sf;
}

struct IpmResult {
  Eigen::VectorXd x;
  bool converged = false;
  int iterations = 0;
};

// Mehrotra predictor-corrector with upper bounds, normal-equation form.
inline IpmResult ipm_solve(const StandardForm& sf) {
  const int m = static_cast<int>(sf.A.rows());
  const int n = static_cast<int>(sf.A.cols());
  IpmResult res;
  if (n == 0) {
    res.x = Eigen::VectorXd();
    res.converged = (sf.b.size() == 0 || sf.b.lpNorm<Eigen::Infinity>() < 1e-12);
    return res;
  }

  // Ruiz-style equilibration on A.
  Eigen::VectorXd row_s = Eigen::VectorXd::Ones(m), col_s = Eigen::VectorXd::Ones(n);
  Eigen::SparseMatrix<double> A = sf.A;
  for (int pass = 0; pass < 3; ++pass) {
    Eigen::VectorXd rmax = Eigen::VectorXd::Zero(m), cmax = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < A.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
        rmax[it.row()] = std::max(rmax[it.row()], std::abs(it.value()));
      }
    }
    for (int i = 0; i < m; ++i) rmax[i] = rmax[i] > 0 ? 1.0 / std::sqrt(rmax[i]) : 1.0;
    for (int k = 0; k < A.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
        it.valueRef() *= rmax[it.row()];
      }
    }
    row_s = row_s.cwiseProduct(rmax);
    for (int k = 0; k < A.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
        cmax[it.col()] = std::max(cmax[it.col()], std::abs(it.value()));
      }
    }
    for (int j = 0; j < n; ++j) cmax[j] = cmax[j] > 0 ? 1.0 / std::sqrt(cmax[j]) : 1.0;
    for (int k = 0; k < A.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
        it.valueRef() *= cmax[it.col()];
      }
    }
    col_s = col_s.cwiseProduct(cmax);
  }
  Eigen::VectorXd b = sf.b.cwiseProduct(row_s);
  Eigen::VectorXd c = sf.c.cwiseProduct(col_s);
  Eigen::VectorXd u(n);
  for (int j = 0; j < n; ++j) u[j] = std::isfinite(sf.u[j]) ? sf.u[j] / col_s[j] : kInf;

  Eigen::SparseMatrix<double> AT = A.transpose();

  auto bounded = [&](int j) { return std::isfinite(u[j]); };
  Eigen::VectorXd x(n), w(n), z(n), v(n);
  for (int j = 0; j < n; ++j) {
    if (bounded(j)) {
      x[j] = 0.5 * u[j];
      if (x[j] <= 0) x[j] = 1e-8;
      w[j] = u[j] - x[j];
      v[j] = 1.0;
    } else {
      x[j] = 1.0;
      w[j] = 1.0;  // unused
      v[j] = 0.0;
    }
    z[j] = 1.0;
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  bool analyzed = false;
  const double bnorm = 1.0 + b.lpNorm<Eigen::Infinity>();
  const double cnorm = 1.0 + c.lpNorm<Eigen::Infinity>();
  int nU = 0;
  for (int j = 0; j < n; ++j) nU += bounded(j) ? 1 : 0;
  const double denom = static_cast<double>(n + nU);

  auto max_step = [&](const Eigen::VectorXd& p, const Eigen::VectorXd& dp,
                      const Eigen::VectorXd& q, const Eigen::VectorXd& dq,
                      bool use_q) {
    double a = 1.0;
    for (int j = 0; j < n; ++j) {
      if (dp[j] < 0) a = std::min(a, -p[j] / dp[j]);
      if (use_q && bounded(j) && dq[j] < 0) a = std::min(a, -q[j] / dq[j]);
    }
    return a;
  };

  int stall = 0;
  for (int iter = 0; iter < 200; ++iter) {
    res.iterations = iter;
    Eigen::VectorXd vb = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
      if (bounded(j)) vb[j] = v[j];
    }
    Eigen::VectorXd r_p = b - A * x;
    Eigen::VectorXd r_d = c - AT * y - z + vb;
    Eigen::VectorXd r_u = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
      if (bounded(j)) r_u[j] = u[j] - x[j] - w[j];
    }
    double gap = x.dot(z);
    for (int j = 0; j < n; ++j) {
      if (bounded(j)) gap += w[j] * v[j];
    }
    const double mu = gap / denom;
    const double prim = r_p.lpNorm<Eigen::Infinity>() / bnorm;
    const double dual = r_d.lpNorm<Eigen::Infinity>() / cnorm;
    const double obj = c.dot(x);
    if (prim <= 1e-10 && dual <= 1e-10 && mu <= 1e-11 * (1.0 + std::abs(obj))) {
      res.converged = true;
      break;
    }
    if (std::abs(obj) > 1e13) break;

    Eigen::VectorXd d(n);
    for (int j = 0; j < n; ++j) {
      double diag = z[j] / x[j];
      if (bounded(j)) diag += v[j] / w[j];
      d[j] = 1.0 / (diag + 1e-12);
    }
    Eigen::SparseMatrix<double> M = A * d.asDiagonal() * AT;
    for (int i = 0; i < m; ++i) M.coeffRef(i, i) += 1e-10;
    if (!analyzed) {
      ldlt.analyzePattern(M);
      analyzed = true;
    }
    ldlt.factorize(M);
    if (ldlt.info() != Eigen::Success) break;

    auto solve_newton = [&](const Eigen::VectorXd& r_xz, const Eigen::VectorXd& r_wv,
                            Eigen::VectorXd& dx, Eigen::VectorXd& dy, Eigen::VectorXd& dz,
                            Eigen::VectorXd& dw, Eigen::VectorXd& dv) {
      Eigen::VectorXd rhs_d = r_d - r_xz.cwiseQuotient(x);
      for (int j = 0; j < n; ++j) {
        if (bounded(j)) rhs_d[j] += r_wv[j] / w[j] - (v[j] / w[j]) * r_u[j];
      }
      Eigen::VectorXd rhs_y = r_p + A * d.cwiseProduct(rhs_d);
      dy = ldlt.solve(rhs_y);
      dx = d.cwiseProduct(AT * dy - rhs_d);
      dz = (r_xz - z.cwiseProduct(dx)).cwiseQuotient(x);
      dw = Eigen::VectorXd::Zero(n);
      dv = Eigen::VectorXd::Zero(n);
      for (int j = 0; j < n; ++j) {
        if (bounded(j)) {
          dw[j] = r_u[j] - dx[j];
          dv[j] = (r_wv[j] - v[j] * dw[j]) / w[j];
        }
      }
    };

    // Affine predictor.
    Eigen::VectorXd r_xz = -x.cwiseProduct(z);
    Eigen::VectorXd r_wv = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
      if (bounded(j)) r_wv[j] = -w[j] * v[j];
    }
    Eigen::VectorXd dx, dy, dz, dw, dv;
    solve_newton(r_xz, r_wv, dx, dy, dz, dw, dv);
    const double ap_aff = max_step(x, dx, w, dw, true);
    const double ad_aff = max_step(z, dz, v, dv, true);
    double gap_aff = (x + ap_aff * dx).dot(z + ad_aff * dz);
    for (int j = 0; j < n; ++j) {
      if (bounded(j)) gap_aff += (w[j] + ap_aff * dw[j]) * (v[j] + ad_aff * dv[j]);
    }
    const double mu_aff = gap_aff / denom;
    double sigma = mu > 0 ? std::pow(mu_aff / mu, 3) : 0.0;
    sigma = std::clamp(sigma, 1e-8, 1.0 - 1e-8);

    // Corrector.
    for (int j = 0; j < n; ++j) {
      r_xz[j] = sigma * mu - x[j] * z[j] - dx[j] * dz[j];
      if (bounded(j)) r_wv[j] = sigma * mu - w[j] * v[j] - dw[j] * dv[j];
    }
    solve_newton(r_xz, r_wv, dx, dy, dz, dw, dv);
    const double ap = std::min(1.0, 0.9995 * max_step(x, dx, w, dw, true));
    const double ad = std::min(1.0, 0.9995 * max_step(z, dz, v, dv, true));
    x += ap * dx;
    y += ad * dy;
    z += ad * dz;
    for (int j = 0; j < n; ++j) {
      if (bounded(j)) {
        w[j] += ap * dw[j];
        v[j] += ad * dv[j];
      }
    }
    if (ap < 1e-9 && ad < 1e-9) {
      if (++stall >= 3) break;
    } else {
      stall = 0;
    }
  }
  res.x = x.cwiseProduct(col_s);
  return res;
}

inline std::vector<double> recover_point(const StandardForm& sf, const IpmResult& r) {
  std::vector<double> x(static_cast<std::size_t>(sf.orig_vars), 0.0);
  for (int j = 0; j < sf.orig_vars; ++j) {
    x[j] = sf.col_of[j] >= 0 ? r.x[sf.col_of[j]] + sf.shift[j] : sf.shift[j];
  }
  return x;
}

}  // namespace detail

struct LpSolution {
  enum class Status { Optimal, Infeasible, Stalled };
  Status status = Status::Stalled;
  std::vector<double> x;
  double objective = 0.0;
};

// Minimize the objective. Intended for feasible, bounded programs; callers
// screen infeasible systems with check_feasible first.
inline LpSolution optimize(const LinearProgram& lp) {
  LpSolution sol;
  if (lp.rows.empty()) {
    sol.x.resize(lp.var_count());
    Eigen::VectorXd c = Eigen::VectorXd::Zero(lp.var_count());
    for (const auto& [v, coef] : lp.objective) c[v] += coef;
    for (int j = 0; j < lp.var_count(); ++j) {
      if (c[j] > 0) {
        sol.x[j] = lp.lower[j];
      } else if (c[j] < 0) {
        if (!std::isfinite(lp.upper[j])) throw std::runtime_error("optimize: unbounded program");
        sol.x[j] = lp.upper[j];
      } else {
        sol.x[j] = lp.lower[j];
      }
      sol.objective += c[j] * sol.x[j];
    }
    sol.status = LpSolution::Status::Optimal;
    return sol;
  }
  detail::StandardForm sf = detail::build_standard(lp);
  detail::IpmResult r = detail::ipm_solve(sf);
  sol.x = detail::recover_point(sf, r);
  for (const auto& [v, coef] : lp.objective) sol.objective += coef * sol.x[v];
  const double viol = max_violation(lp, sol.x);
  if (viol > 1e-7) {
    sol.status = r.converged ? LpSolution::Status::Infeasible : LpSolution::Status::Stalled;
    if (!r.converged && viol > 1e-4) sol.status = LpSolution::Status::Infeasible;
  } else {
    sol.status = LpSolution::Status::Optimal;
  }
  return sol;
}

struct FeasibilityResult {
  bool feasible = false;
  std::vector<double> point;
  double violation = 0.0;  // exact maximum violation of the original program
};

// Elastic feasibility: minimize the total relaxation over per-row elastic
// slacks, then judge the returned point by its exactly evaluated violation.
// One slack per row (two for equalities) keeps each elastic column local to
// its row, so the normal equations stay as sparse as the original program;
// a single shared slack would couple every row pair and densify them.
// Equality rows pin the elastic optimum at zero, so the recovered point
// carries plain interior-point convergence residue; the acceptance cutoff
// matches the optimality cutoff in optimize rather than demanding exact
// zero slack.
inline FeasibilityResult check_feasible(const LinearProgram& lp) {
  LinearProgram relaxed;
  relaxed.lower = lp.lower;
  relaxed.upper = lp.upper;
  relaxed.var_names.resize(lp.lower.size());
  std::vector<std::pair<int, double>> elastic_obj;
  for (const auto& row : lp.rows) {
    auto terms = row.terms;
    const int p = relaxed.add_variable(0.0, kInf, "elastic");
    elastic_obj.emplace_back(p, 1.0);
    if (row.sense == LinearProgram::Sense::LE) {
      terms.emplace_back(p, -1.0);
      relaxed.add_constraint(terms, LinearProgram::Sense::LE, row.rhs);
    } else if (row.sense == LinearProgram::Sense::GE) {
      terms.emplace_back(p, 1.0);
      relaxed.add_constraint(terms, LinearProgram::Sense::GE, row.rhs);
    } else {
      const int q = relaxed.add_variable(0.0, kInf, "elastic");
      elastic_obj.emplace_back(q, 1.0);
      terms.emplace_back(p, 1.0);
      terms.emplace_back(q, -1.0);
      relaxed.add_constraint(terms, LinearProgram::Sense::EQ, row.rhs);
    }
  }
  relaxed.set_objective(std::move(elastic_obj));
  detail::StandardForm sf = detail::build_standard(relaxed);
  detail::IpmResult r = detail::ipm_solve(sf);
  std::vector<double> full = detail::recover_point(sf, r);
  FeasibilityResult out;
  out.point.assign(full.begin(), full.begin() + lp.var_count());
  out.violation = max_violation(lp, out.point);
  out.feasible = out.violation <= 1e-7;
  return out;
}

struct BisectionConfig {
  double alpha_low = 0.0;
  double alpha_high = 0.0;
  double rel_tol = 1e-6;
  int max_iters = 60;
};

struct BisectionResult {
  double alpha = 0.0;
  std::vector<double> point;  // feasible point at the returned alpha
  int iterations = 0;
};

// Minimal alpha with a feasible program, assuming monotone feasibility in
// alpha. The returned alpha is feasible; one tolerance step below is not.
inline BisectionResult bisect_min_alpha(
    const std::function<LinearProgram(double)>& family, const BisectionConfig& cfg) {
  if (!(cfg.alpha_low <= cfg.alpha_high)) {
    throw std::invalid_argument("bisect_min_alpha: empty bracket");
  }
  BisectionResult out;
  FeasibilityResult lo_res = check_feasible(family(cfg.alpha_low));
  if (lo_res.feasible) {
    out.alpha = cfg.alpha_low;
    out.point = std::move(lo_res.point);
    return out;
  }
  FeasibilityResult hi_res = check_feasible(family(cfg.alpha_high));
  if (!hi_res.feasible) {
    throw std::runtime_error(
        "bisect_min_alpha: infeasible at alpha_high; raise the bracket upper end");
  }
  double lo = cfg.alpha_low, hi = cfg.alpha_high;
  out.point = std::move(hi_res.point);
  int iters = 0;
  while (iters < cfg.max_iters && (hi - lo) > cfg.rel_tol * std::max(hi, 1e-300)) {
    const double mid = 0.5 * (lo + hi);
    FeasibilityResult mid_res = check_feasible(family(mid));
    if (mid_res.feasible) {
      hi = mid;
      out.point = std::move(mid_res.point);
    } else {
      lo = mid;
    }
    ++iters;
  }
  out.alpha = hi;
  out.iterations = iters;
  return out;
}

// Text dump in the common LP interchange format.
inline void write_lp_format(const LinearProgram& lp, std::ostream& os) {
  auto var_name = [&](int v) {
    return lp.var_names[v].empty() ? "x" + std::to_string(v) : lp.var_names[v];
  };
  os << "Minimize\n obj:";
  if (lp.objective.empty()) os << " 0 x0";
  for (const auto& [v, coef] : lp.objective) {
    os << (coef >= 0 ? " + " : " - ") << std::abs(coef) << " " << var_name(v);
  }
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& row = lp.rows[i];
    os << " " << (row.name.empty() ? "c" + std::to_string(i) : row.name) << ":";
    for (const auto& [v, coef] : row.terms) {
      os << (coef >= 0 ? " + " : " - ") << std::abs(coef) << " " << var_name(v);
    }
    switch (row.sense) {
      case LinearProgram::Sense::LE: os << " <= "; break;
      case LinearProgram::Sense::GE: os << " >= "; break;
      case LinearProgram::Sense::EQ: os << " = "; break;
    }
    os << row.rhs << "\n";
  }
  os << "Bounds\n";
  for (int v = 0; v < lp.var_count(); ++v) {
    os << " " << lp.lower[v] << " <= " << var_name(v);
    if (std::isfinite(lp.upper[v])) os << " <= " << lp.upper[v];
    os << "\n";
  }
  os << "End\n";
}

}  // namespace cachecast
