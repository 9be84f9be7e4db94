#include "vecbias/cooccurrence.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "vecbias/error.hpp"

namespace vecbias {

namespace {

std::uint64_t pair_key(int center, int context) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(center)) << 32) |
         static_cast<std::uint32_t>(context);
}

std::vector<std::string> tokenize(std::istream& in, bool lowercase) {
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) {
    if (lowercase) {
      for (char& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

}  // namespace

void ModelConstants::validate() const {
  if (!(lambda > 0.0)) raise(ErrorCode::invalid_argument, "lambda must be positive");
  if (!(alpha < 0.0)) raise(ErrorCode::invalid_argument, "alpha must be negative");
  if (k < 1) raise(ErrorCode::invalid_argument, "k must be at least 1");
}

void CooccurrenceTable::add_event(int center, int context, std::uint64_t n) {
  counts_[pair_key(center, context)] += n;
  center_marginals_[center] += n;
  context_marginals_[context] += n;
  total_ += n;
}

std::uint64_t CooccurrenceTable::count_ids(int center, int context) const {
  auto it = counts_.find(pair_key(center, context));
  return it == counts_.end() ? 0 : it->second;
}

CooccurrenceTable CooccurrenceTable::count_tokens(const std::vector<std::string>& tokens,
                                                  int window, int shards) {
  if (window < 1) raise(ErrorCode::invalid_argument, "window must be at least 1");
  if (tokens.empty()) raise(ErrorCode::invalid_argument, "empty corpus");
  if (shards < 1) shards = 1;

  CooccurrenceTable table;
  table.window_ = window;
  std::vector<int> ids(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto id = table.vocab_.find(tokens[i]);
    ids[i] = id ? *id : table.vocab_.add(tokens[i]);
  }
  const int v = table.vocab_.size();
  table.center_marginals_.assign(v, 0);
  table.context_marginals_.assign(v, 0);

  const std::int64_t n = static_cast<std::int64_t>(ids.size());
  shards = static_cast<int>(std::min<std::int64_t>(shards, n));

  struct Shard {
    std::unordered_map<std::uint64_t, std::uint64_t> counts;
    std::vector<std::uint64_t> center_marg, context_marg;
    std::uint64_t total = 0;
  };
  std::vector<Shard> parts(shards);

  auto count_range = [&](Shard& s, std::int64_t begin, std::int64_t end) {
    s.center_marg.assign(v, 0);
    s.context_marg.assign(v, 0);
    for (std::int64_t i = begin; i < end; ++i) {
      const std::int64_t lo = std::max<std::int64_t>(0, i - window);
      const std::int64_t hi = std::min<std::int64_t>(n - 1, i + window);
      for (std::int64_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        ++s.counts[pair_key(ids[i], ids[j])];
        ++s.center_marg[ids[i]];
        ++s.context_marg[ids[j]];
        ++s.total;
      }
    }
  };

  if (shards == 1) {
    count_range(parts[0], 0, n);
  } else {
    std::vector<std::thread> workers;
    for (int s = 0; s < shards; ++s) {
      std::int64_t begin = n * s / shards;
      std::int64_t end = n * (s + 1) / shards;
      workers.emplace_back(count_range, std::ref(parts[s]), begin, end);
    }
    for (auto& w : workers) w.join();
  }

  // Integer addition in shard order: the merged result is exact.
  for (const auto& s : parts) {
    for (const auto& [key, c] : s.counts) table.counts_[key] += c;
    for (int t = 0; t < v; ++t) {
      table.center_marginals_[t] += s.center_marg[t];
      table.context_marginals_[t] += s.context_marg[t];
    }
    table.total_ += s.total;
  }
  return table;
}

CooccurrenceTable CooccurrenceTable::count_text(const std::string& text, int window, int shards) {
  std::istringstream in(text);
  auto tokens = tokenize(in, false);
  return count_tokens(tokens, window, shards);
}

CooccurrenceTable CooccurrenceTable::count_file(const std::string& path, int window,
                                                bool lowercase, int shards) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io, "cannot open corpus file '" + path + "'");
  auto tokens = tokenize(in, lowercase);
  if (tokens.empty()) raise(ErrorCode::parse, path + ": empty corpus");
  return count_tokens(tokens, window, shards);
}

CooccurrenceTable CooccurrenceTable::from_entries(int window, const std::vector<Entry>& entries) {
  if (window < 1) raise(ErrorCode::invalid_argument, "window must be at least 1");
  CooccurrenceTable table;
  table.window_ = window;
  for (const auto& e : entries) {
    if (!table.vocab_.find(e.center)) table.vocab_.add(e.center);
    if (!table.vocab_.find(e.context)) table.vocab_.add(e.context);
  }
  const int v = table.vocab_.size();
  table.center_marginals_.assign(v, 0);
  table.context_marginals_.assign(v, 0);
  for (const auto& e : entries) {
    if (e.count == 0) continue;
    table.add_event(*table.vocab_.find(e.center), *table.vocab_.find(e.context), e.count);
  }
  return table;
}

void CooccurrenceTable::merge(const CooccurrenceTable& other) {
  if (other.window_ != window_) {
    raise(ErrorCode::invalid_argument, "cannot merge tables with different windows");
  }
  for (const auto& e : other.sorted_entries()) {
    auto cid = vocab_.find(e.center);
    int center = cid ? *cid : vocab_.add(e.center);
    auto xid = vocab_.find(e.context);
    int context = xid ? *xid : vocab_.add(e.context);
    int v = vocab_.size();
    if (static_cast<int>(center_marginals_.size()) < v) {
      center_marginals_.resize(v, 0);
      context_marginals_.resize(v, 0);
    }
    add_event(center, context, e.count);
  }
}

std::uint64_t CooccurrenceTable::count(std::string_view center, std::string_view context) const {
  auto c = vocab_.find(center);
  auto x = vocab_.find(context);
  if (!c || !x) return 0;
  return count_ids(*c, *x);
}

std::uint64_t CooccurrenceTable::center_marginal(std::string_view token) const {
  auto id = vocab_.find(token);
  return id ? center_marginals_[*id] : 0;
}

std::uint64_t CooccurrenceTable::context_marginal(std::string_view token) const {
  auto id = vocab_.find(token);
  return id ? context_marginals_[*id] : 0;
}

int CooccurrenceTable::require_token(std::string_view token) const {
  auto id = vocab_.find(token);
  if (!id) raise(ErrorCode::unobserved_pair, "token '" + std::string(token) + "' never observed");
  return *id;
}

double CooccurrenceTable::pmi(std::string_view x, std::string_view w) const {
  if (total_ == 0) raise(ErrorCode::numeric, "table has no events");
  const int xi = require_token(x);
  const int wi = require_token(w);
  const std::uint64_t joint = count_ids(xi, wi);
  if (joint == 0) {
    raise(ErrorCode::unobserved_pair,
          "unobserved pair ('" + std::string(x) + "', '" + std::string(w) + "')");
  }
  const double t = static_cast<double>(total_);
  const double p_joint = static_cast<double>(joint) / t;
  const double p_x = static_cast<double>(center_marginals_[xi]) / t;
  const double p_w = static_cast<double>(context_marginals_[wi]) / t;
  return std::log(p_joint / (p_x * p_w));
}

double CooccurrenceTable::cspmi(std::string_view x, std::string_view y) const {
  if (total_ == 0) raise(ErrorCode::numeric, "table has no events");
  const int xi = require_token(x);
  const int yi = require_token(y);
  const std::uint64_t joint = count_ids(xi, yi);
  if (joint == 0) {
    raise(ErrorCode::unobserved_pair,
          "unobserved pair ('" + std::string(x) + "', '" + std::string(y) + "')");
  }
  return pmi(x, y) + std::log(static_cast<double>(joint) / static_cast<double>(total_));
}

double CooccurrenceTable::log_conditional_ratio(std::string_view w, std::string_view x,
                                                std::string_view y) const {
  if (total_ == 0) raise(ErrorCode::numeric, "table has no events");
  const int wi = require_token(w);
  const int xi = require_token(x);
  const int yi = require_token(y);
  const std::uint64_t cx = count_ids(xi, wi);
  const std::uint64_t cy = count_ids(yi, wi);
  if (cx == 0) {
    raise(ErrorCode::unobserved_pair,
          "unobserved pair ('" + std::string(x) + "', '" + std::string(w) + "')");
  }
  if (cy == 0) {
    raise(ErrorCode::unobserved_pair,
          "unobserved pair ('" + std::string(y) + "', '" + std::string(w) + "')");
  }
  const double px = static_cast<double>(cx) / static_cast<double>(center_marginals_[xi]);
  const double py = static_cast<double>(cy) / static_cast<double>(center_marginals_[yi]);
  return std::log(px / py);
}

Eigen::MatrixXd CooccurrenceTable::shifted_pmi_matrix(const std::vector<std::string>& vocab_subset,
                                                      int k) const {
  if (k < 1) raise(ErrorCode::invalid_argument, "k must be at least 1");
  if (vocab_subset.empty()) raise(ErrorCode::invalid_argument, "empty vocabulary subset");
  if (total_ == 0) raise(ErrorCode::numeric, "table has no events");

  const Eigen::Index m = static_cast<Eigen::Index>(vocab_subset.size());
  std::vector<int> ids(vocab_subset.size());
  for (std::size_t i = 0; i < vocab_subset.size(); ++i) ids[i] = require_token(vocab_subset[i]);

  const double t = static_cast<double>(total_);
  const double shift = std::log(static_cast<double>(k));
  Eigen::MatrixXd mat(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const double joint =
          0.5 * (static_cast<double>(count_ids(ids[i], ids[j])) +
                 static_cast<double>(count_ids(ids[j], ids[i])));
      if (joint == 0.0) {
        raise(ErrorCode::unobserved_pair, "unobserved pair ('" + vocab_subset[i] + "', '" +
                                              vocab_subset[j] + "') inside subset");
      }
      const double mi = 0.5 * (static_cast<double>(center_marginals_[ids[i]]) +
                               static_cast<double>(context_marginals_[ids[i]]));
      const double mj = 0.5 * (static_cast<double>(center_marginals_[ids[j]]) +
                               static_cast<double>(context_marginals_[ids[j]]));
      const double value = std::log((joint / t) / ((mi / t) * (mj / t))) - shift;
      mat(i, j) = value;
      mat(j, i) = value;
    }
  }
  return mat;
}

std::vector<CooccurrenceTable::Entry> CooccurrenceTable::sorted_entries() const {
  std::vector<Entry> entries;
  entries.reserve(counts_.size());
  for (const auto& [key, c] : counts_) {
    const int center = static_cast<int>(key >> 32);
    const int context = static_cast<int>(key & 0xffffffffULL);
    entries.push_back(Entry{vocab_.token(center), vocab_.token(context), c});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.center, a.context) < std::tie(b.center, b.context);
  });
  return entries;
}

void CooccurrenceTable::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::io, "cannot open '" + path + "' for writing");
  out << "# window=" << window_ << " total_events=" << total_ << '\n';
  for (const auto& e : sorted_entries()) {
    out << e.center << '\t' << e.context << '\t' << e.count << '\n';
  }
  if (!out) raise(ErrorCode::io, "failed to write '" + path + "'");
}

CooccurrenceTable CooccurrenceTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io, "cannot open co-occurrence table '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) raise(ErrorCode::parse, path + ": empty table file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  int window = 0;
  std::uint64_t declared_total = 0;
  if (std::sscanf(line.c_str(), "# window=%d total_events=%llu", &window,
                  reinterpret_cast<unsigned long long*>(&declared_total)) != 2) {
    raise(ErrorCode::parse, path + ": expected header '# window=<w> total_events=<n>'");
  }

  std::vector<Entry> entries;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos) {
      raise(ErrorCode::parse, where + ": expected 'center<TAB>context<TAB>count'");
    }
    Entry e;
    e.center = line.substr(0, t1);
    e.context = line.substr(t1 + 1, t2 - t1 - 1);
    const std::string count_text = line.substr(t2 + 1);
    auto [ptr, ec] =
        std::from_chars(count_text.data(), count_text.data() + count_text.size(), e.count);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size()) {
      raise(ErrorCode::parse, where + ": bad count '" + count_text + "'");
    }
    entries.push_back(std::move(e));
  }

  CooccurrenceTable table = from_entries(window, entries);
  if (table.total_ != declared_total) {
    raise(ErrorCode::parse, path + ": header total_events=" + std::to_string(declared_total) +
                                " but rows sum to " + std::to_string(table.total_));
  }
  return table;
}

}  // namespace vecbias
