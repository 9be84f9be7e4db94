#include "vecbias/relations.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <fstream>

#include "vecbias/error.hpp"

namespace vecbias {

WordPairSet WordPairSet::from_pairs(std::vector<std::pair<std::string, std::string>> pairs) {
  if (pairs.empty()) raise(ErrorCode::invalid_argument, "word pair set is empty");
  for (const auto& [x, y] : pairs) {
    if (x.empty() || y.empty()) raise(ErrorCode::invalid_argument, "word pair with empty token");
    if (x == y) raise(ErrorCode::invalid_argument, "word pair ('" + x + "', '" + y + "') repeats a token");
  }
  WordPairSet set;
  set.pairs = std::move(pairs);
  return set;
}

WordPairSet load_word_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io, "cannot open pair file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      raise(ErrorCode::parse,
            path + ":" + std::to_string(line_no) + ": expected exactly 'x<TAB>y'");
    }
    pairs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  if (pairs.empty()) raise(ErrorCode::parse, path + ": no word pairs found");
  return WordPairSet::from_pairs(std::move(pairs));
}

WordPairSet default_gender_pairs() {
  return WordPairSet::from_pairs({
      {"woman", "man"},
      {"girl", "boy"},
      {"she", "he"},
      {"mother", "father"},
      {"daughter", "son"},
      {"gal", "guy"},
      {"female", "male"},
      {"her", "his"},
      {"herself", "himself"},
      {"mary", "john"},
  });
}

std::vector<Vector> difference_vectors(const EmbeddingSet& set, const WordPairSet& pairs) {
  std::vector<Vector> diffs;
  diffs.reserve(pairs.size());
  for (const auto& [x, y] : pairs.pairs) {
    diffs.push_back(set.vector_for(x) - set.vector_for(y));
  }
  return diffs;
}

RelationVector first_principal_component(const std::vector<Vector>& vectors) {
  if (vectors.empty()) raise(ErrorCode::invalid_argument, "no vectors given");
  const Eigen::Index d = vectors.front().size();
  Eigen::MatrixXd stacked(static_cast<Eigen::Index>(vectors.size()), d);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != d) raise(ErrorCode::invalid_argument, "mixed vector dimensions");
    stacked.row(static_cast<Eigen::Index>(i)) = vectors[i].transpose();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(0) <= 0.0) raise(ErrorCode::numeric, "all input vectors are zero");
  if (sv.size() >= 2 && (sv(0) - sv(1)) <= 1e-9 * sv(0)) {
    raise(ErrorCode::numeric, "ambiguous principal direction (top singular values tie)");
  }

  Vector direction = svd.matrixV().col(0);
  direction.normalize();

  Vector mean = Vector::Zero(d);
  for (const auto& v : vectors) mean += v;
  mean /= static_cast<double>(vectors.size());

  double align = direction.dot(mean);
  if (align < 0.0) {
    direction = -direction;
  } else if (align == 0.0) {
    // Mean carries no sign information; make the largest component positive.
    Eigen::Index imax = 0;
    direction.cwiseAbs().maxCoeff(&imax);
    if (direction(imax) < 0.0) direction = -direction;
  }
  return RelationVector{std::move(direction)};
}

BiasSubspace span_basis(const std::vector<Vector>& vectors, double tol) {
  if (vectors.empty()) raise(ErrorCode::invalid_argument, "no vectors given");
  const Eigen::Index d = vectors.front().size();
  double max_norm = 0.0;
  for (const auto& v : vectors) {
    if (v.size() != d) raise(ErrorCode::invalid_argument, "mixed vector dimensions");
    max_norm = std::max(max_norm, v.norm());
  }
  const double threshold = tol * max_norm;

  std::vector<Vector> basis;
  for (const auto& v : vectors) {
    Vector r = v;
    // Two orthogonalization passes keep the basis orthonormal to ~machine
    // precision even for nearly dependent inputs.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) r -= b.dot(r) * b;
    }
    double n = r.norm();
    if (n >= threshold && n > 0.0) {
      basis.push_back(r / n);
    }
  }
  if (basis.empty()) raise(ErrorCode::numeric, "all vectors fall below the span tolerance");

  BiasSubspace subspace;
  subspace.basis.resize(static_cast<Eigen::Index>(basis.size()), d);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    subspace.basis.row(static_cast<Eigen::Index>(i)) = basis[i].transpose();
  }
  return subspace;
}

Vector project_onto(const Vector& w, const BiasSubspace& subspace) {
  if (w.size() != subspace.dim()) {
    raise(ErrorCode::invalid_argument, "vector/subspace dimension mismatch");
  }
  Vector coeffs = subspace.basis * w;
  return subspace.basis.transpose() * coeffs;
}

double scalar_projection(const Vector& w, const RelationVector& relation) {
  if (w.size() != relation.direction.size()) {
    raise(ErrorCode::invalid_argument, "vector/relation dimension mismatch");
  }
  return w.dot(relation.direction);
}

RelationVector relation_from_pairs(const EmbeddingSet& set, const WordPairSet& pairs) {
  return first_principal_component(difference_vectors(set, pairs));
}

BiasSubspace span_from_pairs(const EmbeddingSet& set, const WordPairSet& pairs, double tol) {
  return span_basis(difference_vectors(set, pairs), tol);
}

}  // namespace vecbias
