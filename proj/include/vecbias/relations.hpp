#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vecbias/embeddings.hpp"
#include "vecbias/types.hpp"

namespace vecbias {

// Ordered word pairs (x, y) defining an association. The sign convention
// downstream makes "positive" mean "associated with the first element".
struct WordPairSet {
  std::vector<std::pair<std::string, std::string>> pairs;

  static WordPairSet from_pairs(std::vector<std::pair<std::string, std::string>> pairs);
  std::size_t size() const { return pairs.size(); }
};

// TSV, one "x<TAB>y" per line, '#' comments and blank lines allowed.
WordPairSet load_word_pairs(const std::string& path);

// The ten built-in gender-defining pairs, ordered female-first.
WordPairSet default_gender_pairs();

// Unit vector giving the direction of an association (e.g. the gender axis).
struct RelationVector {
  Vector direction;
  int dim() const { return static_cast<int>(direction.size()); }
};

// Mutually orthonormal basis of a bias subspace; projections against it are
// what debiasing removes.
struct BiasSubspace {
  Matrix basis;  // rank rows, d columns
  int rank() const { return static_cast<int>(basis.rows()); }
  int dim() const { return static_cast<int>(basis.cols()); }
};

// x_i - y_i per pair, order preserved. Throws not_found naming any missing token.
std::vector<Vector> difference_vectors(const EmbeddingSet& set, const WordPairSet& pairs);

// Top right-singular vector of the raw (un-centered) stacked vectors, sign
// aligned with the mean input vector. Errors on all-zero input and when the
// top two singular values tie within 1e-9 relative (ambiguous direction).
RelationVector first_principal_component(const std::vector<Vector>& vectors);

// Orthonormal basis of span(vectors) by modified Gram-Schmidt in input order
// with one re-orthogonalization pass. A vector whose residual norm falls
// below tol * (max input norm) is dropped as dependent.
BiasSubspace span_basis(const std::vector<Vector>& vectors, double tol = 1e-8);

// Component of w inside the subspace: sum_i <w, b_i> b_i.
Vector project_onto(const Vector& w, const BiasSubspace& subspace);

// <w, b>; bounded by ±||w|| since b is unit length.
double scalar_projection(const Vector& w, const RelationVector& relation);

RelationVector relation_from_pairs(const EmbeddingSet& set, const WordPairSet& pairs);
BiasSubspace span_from_pairs(const EmbeddingSet& set, const WordPairSet& pairs, double tol = 1e-8);

}  // namespace vecbias
