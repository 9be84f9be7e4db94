#include "vecbias/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vecbias/error.hpp"

namespace vecbias {

int Vocabulary::add(std::string token) {
  if (token.empty()) raise(ErrorCode::parse, "empty token");
  auto [it, inserted] = index_.emplace(token, static_cast<int>(words_.size()));
  if (!inserted) raise(ErrorCode::parse, "duplicate token '" + token + "'");
  words_.push_back(std::move(token));
  return it->second;
}

std::optional<int> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EmbeddingFormat embedding_format_from_name(std::string_view name) {
  if (name == "word2vec-text") return EmbeddingFormat::word2vec_text;
  if (name == "glove-text") return EmbeddingFormat::glove_text;
  raise(ErrorCode::invalid_argument, "unknown embedding format '" + std::string(name) + "'");
}

const char* embedding_format_name(EmbeddingFormat format) {
  return format == EmbeddingFormat::word2vec_text ? "word2vec-text" : "glove-text";
}

std::optional<RowRef> EmbeddingSet::lookup(std::string_view token) const {
  auto id = vocab.find(token);
  if (!id) return std::nullopt;
  return row(*id);
}

RowRef EmbeddingSet::row(int id) const {
  return RowRef(matrix.row(id).data(), dim);
}

Vector EmbeddingSet::vector_for(std::string_view token) const {
  auto ref = lookup(token);
  if (!ref) raise(ErrorCode::not_found, "token '" + std::string(token) + "' not in vocabulary");
  return *ref;
}

namespace {

std::vector<std::string> split_on_single_spaces(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t pos = line.find(' ', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

double parse_double_field(const std::string& field, const std::string& where) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    raise(ErrorCode::parse, where + ": cannot parse number '" + field + "'");
  }
  if (!std::isfinite(value)) {
    raise(ErrorCode::parse, where + ": non-finite value '" + field + "'");
  }
  return value;
}

long parse_long_field(const std::string& field, const std::string& where) {
  long value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    raise(ErrorCode::parse, where + ": cannot parse integer '" + field + "'");
  }
  return value;
}

void strip_trailing_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

EmbeddingSet load_embeddings(const std::string& path, EmbeddingFormat format) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io, "cannot open embeddings file '" + path + "'");

  std::string line;
  long declared_rows = -1;
  long dim = -1;
  int line_no = 0;

  if (format == EmbeddingFormat::word2vec_text) {
    if (!std::getline(in, line)) raise(ErrorCode::parse, path + ": empty file");
    strip_trailing_cr(line);
    ++line_no;
    auto fields = split_on_single_spaces(line);
    if (fields.size() != 2) {
      raise(ErrorCode::parse, path + ": word2vec header must be '<n> <d>'");
    }
    declared_rows = parse_long_field(fields[0], path + " header");
    dim = parse_long_field(fields[1], path + " header");
    if (declared_rows < 1 || dim < 1) {
      raise(ErrorCode::parse, path + ": header counts must be positive");
    }
  }

  std::vector<std::string> tokens;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    strip_trailing_cr(line);
    if (line.empty()) continue;
    auto fields = split_on_single_spaces(line);
    const std::string where = path + ":" + std::to_string(line_no);
    if (fields.size() < 2) raise(ErrorCode::parse, where + ": expected '<token> <values...>'");
    if (dim < 0) {
      dim = static_cast<long>(fields.size()) - 1;  // glove-text: first row fixes d
    } else if (static_cast<long>(fields.size()) - 1 != dim) {
      raise(ErrorCode::parse,
            where + ": dimension mismatch (expected " + std::to_string(dim) + " values, got " +
                std::to_string(fields.size() - 1) + ")");
    }
    if (fields[0].empty()) raise(ErrorCode::parse, where + ": empty token");
    tokens.push_back(fields[0]);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      values.push_back(parse_double_field(fields[i], where));
    }
  }

  if (tokens.empty()) raise(ErrorCode::parse, path + ": empty file");
  if (declared_rows >= 0 && declared_rows != static_cast<long>(tokens.size())) {
    raise(ErrorCode::parse, path + ": header declares " + std::to_string(declared_rows) +
                                " rows but file has " + std::to_string(tokens.size()));
  }

  EmbeddingSet set;
  set.dim = static_cast<int>(dim);
  set.matrix.resize(static_cast<Eigen::Index>(tokens.size()), dim);
  for (std::size_t r = 0; r < tokens.size(); ++r) {
    set.vocab.add(std::move(tokens[r]));
    for (long c = 0; c < dim; ++c) {
      set.matrix(static_cast<Eigen::Index>(r), c) = values[r * dim + c];
    }
  }
  return set;
}

void save_embeddings(const EmbeddingSet& set, const std::string& path, EmbeddingFormat format) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::io, "cannot open '" + path + "' for writing");
  std::ostringstream text;
  if (format == EmbeddingFormat::word2vec_text) {
    text << set.size() << ' ' << set.dim << '\n';
  }
  for (int r = 0; r < set.size(); ++r) {
    text << set.vocab.token(r);
    for (int c = 0; c < set.dim; ++c) {
      text << ' ' << format_double(set.matrix(r, c));
    }
    text << '\n';
  }
  out << text.str();
  if (!out) raise(ErrorCode::io, "failed to write '" + path + "'");
  out.close();
  if (!out) raise(ErrorCode::io, "failed to write '" + path + "'");
}

}  // namespace vecbias
