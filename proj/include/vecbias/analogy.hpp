#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vecbias/embeddings.hpp"
#include "vecbias/relations.hpp"

namespace vecbias {

enum class AnalogyLabel { appropriate, biased };

AnalogyLabel analogy_label_from_name(std::string_view name);
const char* analogy_label_name(AnalogyLabel label);

// a:b :: x:y with four distinct tokens.
struct AnalogyQuad {
  std::string a, b, x, y;
  AnalogyLabel label = AnalogyLabel::appropriate;

  static AnalogyQuad create(std::string a, std::string b, std::string x, std::string y,
                            AnalogyLabel label);
};

// TSV "a<TAB>b<TAB>x<TAB>y<TAB>label", '#' comments and blank lines allowed.
std::vector<AnalogyQuad> load_analogies(const std::string& path);

// |<a - b, direction>|: how strongly the quad's first pair aligns with the
// relation.
double analogy_strength(const AnalogyQuad& quad, const EmbeddingSet& set,
                        const RelationVector& relation);

// True iff cos(b - a, y - x) >= 1 - tol and ||(a + y - x) - b|| <= tol*||y - x||.
bool analogy_holds(const AnalogyQuad& quad, const EmbeddingSet& set, double tol);

struct PreservationCurve {
  AnalogyLabel label = AnalogyLabel::appropriate;
  std::vector<double> thresholds;           // ascending
  std::vector<std::int64_t> count_before;   // holds in `before` at strength >= t
  std::vector<std::int64_t> count_after;    // of those, still holds in `after`
};

struct AnalogyCurves {
  PreservationCurve appropriate;
  PreservationCurve biased;
  double tol = 0.0;

  // count_after / count_before at the given threshold; 1 when nothing held
  // before (nothing was lost).
  static double preserved_fraction(const PreservationCurve& curve, double threshold);
};

std::vector<double> default_thresholds();  // 0.0 to 2.0 step 0.1

// Strength and the `before` hold test are evaluated on `before`; count_after
// additionally requires the quad to hold in `after`.
AnalogyCurves preservation_curves(const std::vector<AnalogyQuad>& quads,
                                  const EmbeddingSet& before, const EmbeddingSet& after,
                                  const RelationVector& relation,
                                  const std::vector<double>& thresholds, double tol);

}  // namespace vecbias
