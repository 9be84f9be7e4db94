#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "vecbias/types.hpp"

namespace vecbias {

// Exact factorization M = W * C^T with C = lambda * W, the setting in which
// subspace debiasing provably removes bias.
struct SyntheticFactorization {
  Eigen::MatrixXd M;  // n x n, symmetric
  Matrix W;           // n x d
  Matrix C;           // n x d, lambda * W
  double lambda = 1.0;

  int n() const { return static_cast<int>(W.rows()); }
  int d() const { return static_cast<int>(W.cols()); }
};

// W with seeded standard-normal entries, C = lambda * W, M = W * C^T.
SyntheticFactorization make_synthetic(int n, int d, double lambda, std::uint64_t seed);

// Same construction from a given word matrix.
SyntheticFactorization from_word_matrix(const Matrix& W, double lambda);

using PairIndexList = std::vector<std::pair<int, int>>;

// max over (x, y) in S of |M[w][x] - M[w][y]|; w must sit outside S.
double bias_residual(const Eigen::MatrixXd& M, const PairIndexList& S, int w);
double bias_residual(const SyntheticFactorization& f, const PairIndexList& S, int w);

// Debiases every W row outside S against span{W[x] - W[y]} and reconstructs
// with the ORIGINAL context matrix. Rows of S are copied unchanged.
Eigen::MatrixXd debias_and_reconstruct(const SyntheticFactorization& f, const PairIndexList& S);

struct Prop1Result {
  double cos_diff = 0.0;  // cos(w, x) - cos(w, y)
  bool equal_freq = false;
  Vector x, y, w;
};

// Attribute vectors with ||v||^2 = alpha1 * ln p(v) + alpha2 and a word w
// built unbiased (<w,x> = <w,y>); cos_diff vanishes iff p_x = p_y.
Prop1Result prop1_check(double p_x, double p_y, double alpha1, double alpha2, std::uint64_t seed);

struct VerifyOptions {
  int instances = 200;
  std::uint64_t seed = 0;
  bool tamper = false;  // negative control: leaves half of each projection behind
};

struct InstanceResult {
  int n = 0;
  int d = 0;
  int pairs = 0;
  double lambda = 0.0;
  double max_residual = 0.0;     // worst bias_residual over words outside S
  double tolerance = 0.0;        // 1e-8 * max|M|
  double max_s_row_delta = 0.0;  // worst change of a row inside S
  bool pass = false;
};

struct Prop1GridPoint {
  double ratio = 0.0;  // p_x / p_y
  double cos_diff = 0.0;
  bool equal_freq = false;
  bool pass = false;
};

struct VerifyReport {
  std::vector<InstanceResult> theorem_instances;
  std::vector<InstanceResult> lambda_grid;
  std::vector<Prop1GridPoint> prop1_grid;
  bool pass = false;
};

// Randomized theorem suite (n <= 32, d <= 16, |S| <= 4, lambda in [0.5, 4]),
// a fixed lambda grid, and the Proposition 1 dichotomy over probability
// ratios {e^-2, e^-1, 1, e, e^2}.
VerifyReport run_verification(const VerifyOptions& opts);

}  // namespace vecbias
