#include "goamp/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace goamp {

Vector soft_threshold(const Vector& x, double tau) {
  require(tau >= 0.0, "soft_threshold: tau must be non-negative");
  return x.unaryExpr([tau](double v) {
    const double m = std::abs(v) - tau;
    return m > 0.0 ? std::copysign(m, v) : 0.0;
  });
}

double lasso_objective(const LinearMap& a, const Vector& y, const Vector& x, double lambda) {
  const double m = static_cast<double>(a.rows());
  return (y - a.apply(x)).squaredNorm() / (2.0 * m) + lambda * x.lpNorm<1>();
}

FistaResult fista(const LinearMap& a, const Vector& y, const LassoConfig& cfg) {
  require(cfg.lambda >= 0.0, "fista: lambda must be non-negative");
  require(cfg.initial_step > 0.0 && cfg.growth > 1.0, "fista: need L0 > 0 and eta > 1");
  require(y.size() == a.rows(), "fista: length mismatch");
  const double m = static_cast<double>(a.rows());
  const Index n = a.cols();

  Vector x = Vector::Zero(n);
  Vector ax = Vector::Zero(a.rows());
  Vector x_prev = x;
  Vector ax_prev = ax;
  Vector yk = x;
  Vector ayk = ax;
  double t = 1.0;
  double lip = cfg.initial_step;

  FistaResult out;
  out.x = x;
  double best = y.squaredNorm() / (2.0 * m);
  // Residuals cancel against y, so rounding in f scales with ||y||^2.
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * best;
  out.objective.reserve(cfg.max_iters);
  out.best_objective.reserve(cfg.max_iters);

  for (int it = 0; it < cfg.max_iters; ++it) {
    const Vector res = ayk - y;
    const double f_y = res.squaredNorm() / (2.0 * m);
    const Vector grad = a.adjoint(res) / m;

    Vector p;
    Vector ap;
    double f_p = 0.0;
    for (;;) {
      p = soft_threshold(yk - grad / lip, cfg.lambda / lip);
      ap = a.apply(p);
      f_p = (ap - y).squaredNorm() / (2.0 * m);
      const Vector d = p - yk;
      const double model = f_y + d.dot(grad) + 0.5 * lip * d.squaredNorm();
      if (f_p <= model + slack || d.squaredNorm() == 0.0 || !std::isfinite(lip * cfg.growth)) break;
      lip *= cfg.growth;
    }

    x_prev = std::move(x);
    ax_prev = std::move(ax);
    x = std::move(p);
    ax = std::move(ap);

    const double obj = f_p + cfg.lambda * x.lpNorm<1>();
    out.objective.push_back(obj);
    if (obj < best) {
      best = obj;
      out.x = x;
    }
    out.best_objective.push_back(best);

    if (cfg.restart && (yk - x).dot(x - x_prev) > 0.0) {
      t = 1.0;
      yk = x;
      ayk = ax;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    t = t_next;
    yk = x + beta * (x - x_prev);
    ayk = ax + beta * (ax - ax_prev);
  }
  return out;
}

FistaResult glasso(const LinearMap& a, const Vector& y, const LassoConfig& cfg) { return fista(a, y, cfg); }

std::vector<double> lambda_grid(const LinearMap& a, const Vector& y, int count) {
  require(count >= 1, "lambda_grid: count must be positive");
  const double top = a.adjoint(y).cwiseAbs().maxCoeff() / static_cast<double>(a.rows());
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double e = count == 1 ? 0.0 : -4.0 + 4.0 * i / (count - 1);
    grid[static_cast<std::size_t>(i)] = top * std::pow(10.0, e);
  }
  return grid;
}

OmpResult omp(const LinearMap& a, const Vector& y, Index k) {
  const Index m = a.rows();
  const Index n = a.cols();
  require(k >= 1 && k <= m, "omp: need 1 <= k <= M");
  require(y.size() == m, "omp: length mismatch");

  OmpResult out;
  out.x = Vector::Zero(n);
  Matrix cols(m, k);
  Matrix q(m, k);
  Matrix r = Matrix::Zero(k, k);
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  Vector residual = y;
  Index rank = 0;

  for (Index step = 0; step < k; ++step) {
    const Vector c = a.adjoint(residual);
    Index best = -1;
    double best_val = -1.0;
    for (Index j = 0; j < n; ++j) {
      if (chosen[static_cast<std::size_t>(j)]) continue;
      const double v = std::abs(c[j]);
      if (v > best_val) {
        best_val = v;
        best = j;
      }
    }
    chosen[static_cast<std::size_t>(best)] = true;
    out.support.push_back(best);
    cols.col(step) = a.column(best);

    // Modified Gram-Schmidt, applied twice.
    Vector v = cols.col(step);
    const double col_norm = v.norm();
    Vector coef = Vector::Zero(rank);
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < rank; ++i) {
        const double h = q.col(i).dot(v);
        coef[i] += h;
        v -= h * q.col(i);
      }
    }
    const double nv = v.norm();
    if (out.rank_deficient || !(nv > 1e-12 * col_norm)) {
      out.rank_deficient = true;
    } else {
      r.col(rank).head(rank) = coef;
      r(rank, rank) = nv;
      q.col(rank) = v / nv;
      ++rank;
    }

    const Index s = step + 1;
    Vector xs;
    if (!out.rank_deficient) {
      xs = r.topLeftCorner(rank, rank).triangularView<Eigen::Upper>().solve(q.leftCols(rank).transpose() * y);
      residual = y - q.leftCols(rank) * (q.leftCols(rank).transpose() * y);
    } else {
      const auto b = cols.leftCols(s);
      Matrix gram = b.transpose() * b;
      gram.diagonal().array() += 1e-10 * std::max(gram.diagonal().maxCoeff(), 1.0);
      xs = gram.ldlt().solve(b.transpose() * y);
      residual = y - b * xs;
    }
    out.x.setZero();
    for (Index i = 0; i < s; ++i) out.x[out.support[static_cast<std::size_t>(i)]] = xs[i];
  }
  return out;
}

std::vector<Index> top_k_indices(const Vector& x, Index k) {
  require(k >= 1 && k <= x.size(), "top_k: need 1 <= k <= n");
  std::vector<Index> idx(static_cast<std::size_t>(x.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  auto before = [&x](Index i, Index j) {
    const double ai = std::abs(x[i]);
    const double aj = std::abs(x[j]);
    return ai > aj || (ai == aj && i < j);
  };
  std::nth_element(idx.begin(), idx.begin() + (k - 1), idx.end(), before);
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

Vector top_k(const Vector& x, Index k) {
  Vector out = Vector::Zero(x.size());
  for (Index i : top_k_indices(x, k)) out[i] = x[i];
  return out;
}

namespace {

Vector normalized(const Vector& x) {
  const double nrm = x.norm();
  return nrm > 0.0 ? Vector(x / nrm) : x;
}

Vector sign_of(const Vector& v) {
  return v.unaryExpr([](double s) { return s >= 0.0 ? 1.0 : -1.0; });
}

}  // namespace

Vector biht(const LinearMap& a, const Vector& y, const GreedyConfig& cfg, const Vector* x0) {
  require(cfg.k >= 1 && cfg.k <= a.cols(), "biht: need 1 <= k <= N");
  require(y.size() == a.rows(), "biht: length mismatch");
  const double m = static_cast<double>(a.rows());
  Vector x = x0 ? normalized(top_k(*x0, cfg.k)) : normalized(top_k(a.adjoint(y), cfg.k));
  for (int it = 0; it < cfg.max_iters; ++it) {
    const Vector mismatch = y - sign_of(a.apply(x));
    if (mismatch.isZero(0.0)) break;
    x = normalized(top_k(x + (cfg.step / m) * a.adjoint(mismatch), cfg.k));
  }
  return x;
}

}  // namespace goamp
