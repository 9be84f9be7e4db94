#include "vecbias/analogy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "vecbias/error.hpp"

namespace vecbias {

AnalogyLabel analogy_label_from_name(std::string_view name) {
  if (name == "appropriate") return AnalogyLabel::appropriate;
  if (name == "biased") return AnalogyLabel::biased;
  raise(ErrorCode::parse, "unknown analogy label '" + std::string(name) + "'");
}

const char* analogy_label_name(AnalogyLabel label) {
  return label == AnalogyLabel::appropriate ? "appropriate" : "biased";
}

AnalogyQuad AnalogyQuad::create(std::string a, std::string b, std::string x, std::string y,
                                AnalogyLabel label) {
  const std::string* tokens[] = {&a, &b, &x, &y};
  for (int i = 0; i < 4; ++i) {
    if (tokens[i]->empty()) raise(ErrorCode::parse, "empty token in analogy");
    for (int j = i + 1; j < 4; ++j) {
      if (*tokens[i] == *tokens[j]) {
        raise(ErrorCode::parse, "analogy tokens must be distinct ('" + *tokens[i] + "')");
      }
    }
  }
  return AnalogyQuad{std::move(a), std::move(b), std::move(x), std::move(y), label};
}

std::vector<AnalogyQuad> load_analogies(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io, "cannot open analogy file '" + path + "'");
  std::vector<AnalogyQuad> quads;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      std::size_t pos = line.find('\t', start);
      if (pos == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    if (fields.size() != 5) {
      raise(ErrorCode::parse,
            path + ":" + std::to_string(line_no) + ": expected 5 tab-separated fields");
    }
    try {
      quads.push_back(AnalogyQuad::create(fields[0], fields[1], fields[2], fields[3],
                                          analogy_label_from_name(fields[4])));
    } catch (const Error& e) {
      raise(e.code(), path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (quads.empty()) raise(ErrorCode::parse, path + ": no analogies");
  return quads;
}

double analogy_strength(const AnalogyQuad& quad, const EmbeddingSet& set,
                        const RelationVector& relation) {
  const Vector diff = set.vector_for(quad.a) - set.vector_for(quad.b);
  return std::abs(scalar_projection(diff, relation));
}

bool analogy_holds(const AnalogyQuad& quad, const EmbeddingSet& set, double tol) {
  if (!(tol > 0.0) || tol > 1.0) {
    raise(ErrorCode::invalid_argument, "tol must be in (0, 1]");
  }
  const Vector a = set.vector_for(quad.a);
  const Vector b = set.vector_for(quad.b);
  const Vector offset = set.vector_for(quad.y) - set.vector_for(quad.x);
  const Vector ba = b - a;
  const double n_ba = ba.norm();
  const double n_off = offset.norm();
  if (n_ba == 0.0 || n_off == 0.0) {
    raise(ErrorCode::numeric, "zero difference vector in analogy '" + quad.a + ":" + quad.b +
                                  "::" + quad.x + ":" + quad.y + "'");
  }
  const double cos = ba.dot(offset) / (n_ba * n_off);
  const double residual = (a + offset - b).norm();
  return cos >= 1.0 - tol && residual <= tol * n_off;
}

std::vector<double> default_thresholds() {
  std::vector<double> out;
  for (int i = 0; i <= 20; ++i) out.push_back(static_cast<double>(i) / 10.0);
  return out;
}

double AnalogyCurves::preserved_fraction(const PreservationCurve& curve, double threshold) {
  for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
    if (curve.thresholds[i] == threshold) {
      if (curve.count_before[i] == 0) return 1.0;
      return static_cast<double>(curve.count_after[i]) /
             static_cast<double>(curve.count_before[i]);
    }
  }
  raise(ErrorCode::invalid_argument, "threshold not on the curve grid");
}

AnalogyCurves preservation_curves(const std::vector<AnalogyQuad>& quads,
                                  const EmbeddingSet& before, const EmbeddingSet& after,
                                  const RelationVector& relation,
                                  const std::vector<double>& thresholds, double tol) {
  if (quads.empty()) raise(ErrorCode::invalid_argument, "no analogies");
  if (thresholds.empty()) raise(ErrorCode::invalid_argument, "no thresholds");
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    raise(ErrorCode::invalid_argument, "thresholds must be ascending");
  }
  if (thresholds.front() < 0.0) raise(ErrorCode::invalid_argument, "thresholds must be >= 0");

  AnalogyCurves curves;
  curves.tol = tol;
  for (auto* curve : {&curves.appropriate, &curves.biased}) {
    curve->thresholds = thresholds;
    curve->count_before.assign(thresholds.size(), 0);
    curve->count_after.assign(thresholds.size(), 0);
  }
  curves.appropriate.label = AnalogyLabel::appropriate;
  curves.biased.label = AnalogyLabel::biased;

  for (const auto& quad : quads) {
    const double strength = analogy_strength(quad, before, relation);
    const bool held = analogy_holds(quad, before, tol);
    if (!held) continue;
    const bool still_holds = analogy_holds(quad, after, tol);
    auto& curve = quad.label == AnalogyLabel::appropriate ? curves.appropriate : curves.biased;
    for (std::size_t i = 0; i < thresholds.size() && thresholds[i] <= strength; ++i) {
      ++curve.count_before[i];
      if (still_holds) ++curve.count_after[i];
    }
  }
  return curves;
}

}  // namespace vecbias
