#include "vecbias/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "vecbias/error.hpp"
#include "vecbias/relations.hpp"
#include "vecbias/rng.hpp"

namespace vecbias {

SyntheticFactorization make_synthetic(int n, int d, double lambda, std::uint64_t seed) {
  if (d < 1 || d > n) raise(ErrorCode::invalid_argument, "need 1 <= d <= n");
  if (!(lambda > 0.0)) raise(ErrorCode::invalid_argument, "lambda must be positive");
  Rng rng(seed);
  Matrix W(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) W(i, j) = rng.next_normal();
  }
  return from_word_matrix(W, lambda);
}

SyntheticFactorization from_word_matrix(const Matrix& W, double lambda) {
  if (W.rows() < 1 || W.cols() < 1) raise(ErrorCode::invalid_argument, "empty word matrix");
  if (W.cols() > W.rows()) raise(ErrorCode::invalid_argument, "need 1 <= d <= n");
  if (!(lambda > 0.0)) raise(ErrorCode::invalid_argument, "lambda must be positive");
  SyntheticFactorization f;
  f.W = W;
  f.lambda = lambda;
  f.C = lambda * W;
  f.M = f.W * f.C.transpose();
  return f;
}

namespace {

void check_pairs(const PairIndexList& S, int n) {
  if (S.empty()) raise(ErrorCode::invalid_argument, "empty pair list");
  for (const auto& [x, y] : S) {
    if (x < 0 || x >= n || y < 0 || y >= n) {
      raise(ErrorCode::invalid_argument, "pair index out of range");
    }
    if (x == y) raise(ErrorCode::invalid_argument, "pair with identical indices");
  }
}

std::unordered_set<int> pair_members(const PairIndexList& S) {
  std::unordered_set<int> members;
  for (const auto& [x, y] : S) {
    members.insert(x);
    members.insert(y);
  }
  return members;
}

}  // namespace

double bias_residual(const Eigen::MatrixXd& M, const PairIndexList& S, int w) {
  check_pairs(S, static_cast<int>(M.cols()));
  if (w < 0 || w >= M.rows()) raise(ErrorCode::invalid_argument, "word index out of range");
  if (pair_members(S).count(w)) {
    raise(ErrorCode::invalid_argument, "word belongs to a defining pair");
  }
  double worst = 0.0;
  for (const auto& [x, y] : S) {
    worst = std::max(worst, std::abs(M(w, x) - M(w, y)));
  }
  return worst;
}

double bias_residual(const SyntheticFactorization& f, const PairIndexList& S, int w) {
  return bias_residual(f.M, S, w);
}

Eigen::MatrixXd debias_and_reconstruct(const SyntheticFactorization& f, const PairIndexList& S) {
  check_pairs(S, f.n());
  std::vector<Vector> diffs;
  diffs.reserve(S.size());
  for (const auto& [x, y] : S) {
    diffs.push_back(Vector(f.W.row(x) - f.W.row(y)));
  }
  const BiasSubspace subspace = span_basis(diffs);
  const auto members = pair_members(S);

  Matrix W_d = f.W;
  for (int i = 0; i < f.n(); ++i) {
    if (members.count(i)) continue;
    const Vector row = f.W.row(i);
    W_d.row(i) = row - project_onto(row, subspace);
  }
  return W_d * f.C.transpose();
}

Prop1Result prop1_check(double p_x, double p_y, double alpha1, double alpha2,
                        std::uint64_t seed) {
  if (!(p_x > 0.0) || p_x > 1.0 || !(p_y > 0.0) || p_y > 1.0) {
    raise(ErrorCode::invalid_argument, "probabilities must lie in (0, 1]");
  }
  const double sq_x = alpha1 * std::log(p_x) + alpha2;
  const double sq_y = alpha1 * std::log(p_y) + alpha2;
  if (!(sq_x > 0.0) || !(sq_y > 0.0)) {
    raise(ErrorCode::invalid_argument, "alpha1 * ln p + alpha2 must be positive");
  }

  const int dim = 8;
  Rng rng(seed);
  auto draw_unit = [&] {
    for (;;) {
      Vector v(dim);
      for (int i = 0; i < dim; ++i) v(i) = rng.next_normal();
      const double norm = v.norm();
      if (norm > 1e-8) return Vector(v / norm);
    }
  };

  Vector xhat = draw_unit();
  Vector yhat = draw_unit();
  while (std::abs(xhat.dot(yhat)) > 0.99) yhat = draw_unit();

  Prop1Result out;
  out.equal_freq = p_x == p_y;
  out.x = std::sqrt(sq_x) * xhat;
  out.y = std::sqrt(sq_y) * yhat;

  // w orthogonal to x - y makes <w,x> = <w,y>; redraw until the shared inner
  // product is comfortably nonzero so the cosines do not degenerate.
  const Vector sep = out.x - out.y;
  const double sep_norm = sep.norm();
  for (;;) {
    Vector w = draw_unit();
    if (sep_norm > 1e-12) {
      w -= (w.dot(sep) / (sep_norm * sep_norm)) * sep;
    }
    const double w_norm = w.norm();
    if (w_norm < 1e-6) continue;
    if (std::abs(w.dot(out.x)) < 0.05 * w_norm * out.x.norm()) continue;
    out.w = w;
    break;
  }

  const double cos_x = out.w.dot(out.x) / (out.w.norm() * out.x.norm());
  const double cos_y = out.w.dot(out.y) / (out.w.norm() * out.y.norm());
  out.cos_diff = cos_x - cos_y;
  return out;
}

namespace {

InstanceResult run_instance(int n, int d, const PairIndexList& S, double lambda,
                            std::uint64_t seed, bool tamper) {
  const SyntheticFactorization f = make_synthetic(n, d, lambda, seed);

  Eigen::MatrixXd M_d;
  if (!tamper) {
    M_d = debias_and_reconstruct(f, S);
  } else {
    std::vector<Vector> diffs;
    for (const auto& [x, y] : S) diffs.push_back(Vector(f.W.row(x) - f.W.row(y)));
    const BiasSubspace subspace = span_basis(diffs);
    const auto members = pair_members(S);
    Matrix W_d = f.W;
    for (int i = 0; i < n; ++i) {
      if (members.count(i)) continue;
      const Vector row = f.W.row(i);
      W_d.row(i) = row - 0.5 * project_onto(row, subspace);
    }
    M_d = W_d * f.C.transpose();
  }

  InstanceResult r;
  r.n = n;
  r.d = d;
  r.pairs = static_cast<int>(S.size());
  r.lambda = lambda;
  r.tolerance = 1e-8 * f.M.cwiseAbs().maxCoeff();

  const auto members = pair_members(S);
  for (int w = 0; w < n; ++w) {
    if (members.count(w)) {
      r.max_s_row_delta =
          std::max(r.max_s_row_delta, (M_d.row(w) - f.M.row(w)).cwiseAbs().maxCoeff());
    } else {
      r.max_residual = std::max(r.max_residual, bias_residual(M_d, S, w));
    }
  }
  r.pass = r.max_residual <= r.tolerance && r.max_s_row_delta <= 1e-10 * f.M.cwiseAbs().maxCoeff();
  return r;
}

// Distinct pair endpoints drawn from [0, n); keeps at least one word outside S.
PairIndexList draw_pairs(Rng& rng, int n, int n_pairs) {
  std::vector<int> indices(n);
  for (int i = 0; i < n; ++i) indices[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(indices[i], indices[j]);
  }
  PairIndexList S;
  for (int p = 0; p < n_pairs; ++p) S.emplace_back(indices[2 * p], indices[2 * p + 1]);
  return S;
}

Prop1GridPoint prop1_grid_point(double ratio, std::uint64_t seed) {
  const double p_y = 0.01;
  const double p_x = ratio * p_y;
  const Prop1Result res = prop1_check(p_x, p_y, -1.0, 10.0, seed);
  Prop1GridPoint point;
  point.ratio = ratio;
  point.cos_diff = res.cos_diff;
  point.equal_freq = res.equal_freq;
  const bool expects_zero = ratio == 1.0;
  point.pass = expects_zero ? std::abs(res.cos_diff) <= 1e-12 && res.equal_freq
                            : std::abs(res.cos_diff) > 1e-6 && !res.equal_freq;
  return point;
}

}  // namespace

VerifyReport run_verification(const VerifyOptions& opts) {
  if (opts.instances < 1) raise(ErrorCode::invalid_argument, "need at least one instance");
  VerifyReport report;
  report.pass = true;

  for (int i = 0; i < opts.instances; ++i) {
    Rng rng(mix_seed(opts.seed, static_cast<std::uint64_t>(i)));
    const int n_pairs = 1 + static_cast<int>(rng.next_below(4));
    const int min_n = 2 * n_pairs + 1;
    const int n = min_n + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(33 - min_n)));
    const int d = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(std::min(16, n))));
    const double lambda = rng.uniform(0.5, 4.0);
    const PairIndexList S = draw_pairs(rng, n, n_pairs);
    report.theorem_instances.push_back(
        run_instance(n, d, S, lambda, rng.next_u64(), opts.tamper));
    report.pass = report.pass && report.theorem_instances.back().pass;
  }

  const double lambda_grid[] = {0.5, 1.0, 2.0, 3.5};
  for (std::size_t i = 0; i < std::size(lambda_grid); ++i) {
    Rng rng(mix_seed(opts.seed, 1000 + i));
    const PairIndexList S = draw_pairs(rng, 8, 2);
    report.lambda_grid.push_back(run_instance(8, 4, S, lambda_grid[i], rng.next_u64(), opts.tamper));
    report.pass = report.pass && report.lambda_grid.back().pass;
  }

  const double ratios[] = {std::exp(-2.0), std::exp(-1.0), 1.0, std::exp(1.0), std::exp(2.0)};
  for (std::size_t i = 0; i < std::size(ratios); ++i) {
    report.prop1_grid.push_back(prop1_grid_point(ratios[i], mix_seed(opts.seed, 2000 + i)));
    report.pass = report.pass && report.prop1_grid.back().pass;
  }
  return report;
}

}  // namespace vecbias
