#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "test_util.hpp"
#include "vecbias/cooccurrence.hpp"
#include "vecbias/error.hpp"
#include "vecbias/rng.hpp"

using namespace vecbias;
using testutil::TempDir;
using testutil::write_file;

namespace {

std::vector<std::string> split_tokens(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

// Compares every count, marginal and statistic against the reference
// sliding-window enumeration. Statistics are expected to match exactly
// because both sides evaluate the same expressions on the same counts.
void check_against_oracle(const std::string& text, int window) {
  CAPTURE(text);
  CAPTURE(window);
  const auto tokens = split_tokens(text);
  const auto expected = oracle::slide_window(tokens, window);
  const auto table = CooccurrenceTable::count_text(text, window);

  CHECK(table.total_events() == expected.total);
  for (const auto& [pair, count] : expected.pairs) {
    CHECK(table.count(pair.first, pair.second) == count);
  }
  for (const auto& token : tokens) {
    CHECK(table.center_marginal(token) == oracle::center_count(expected, token));
    CHECK(table.context_marginal(token) == oracle::context_count(expected, token));
  }
  for (const auto& [pair, count] : expected.pairs) {
    if (count == 0) continue;
    const auto& [x, w] = pair;
    CHECK(table.pmi(x, w) == oracle::pmi(expected, x, w));
    CHECK(table.cspmi(x, w) == oracle::cspmi(expected, x, w));
    for (const auto& y_token : tokens) {
      if (oracle::pair_count(expected, y_token, w) == 0) continue;
      CHECK(table.log_conditional_ratio(w, x, y_token) ==
            oracle::log_conditional_ratio(expected, w, x, y_token));
    }
  }
}

}  // namespace

TEST_CASE("window counting matches the reference enumeration on toy corpora") {
  check_against_oracle("a b a b a", 1);
  check_against_oracle("a a", 1);
  check_against_oracle("the quick brown fox jumps over the lazy dog the quick fox", 2);
  check_against_oracle("x y z z y x x", 3);
  check_against_oracle("solo", 2);  // no events at all
}

TEST_CASE("documented values on the smallest corpora") {
  const auto table = CooccurrenceTable::count_text("a b a b a", 1);
  CHECK(table.total_events() == 8);
  CHECK(table.count("a", "b") == 4);
  CHECK(table.count("b", "a") == 4);
  CHECK(table.count("a", "a") == 0);
  CHECK(table.pmi("a", "b") == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(table.cspmi("a", "b") == 0.0);  // ln 2 + ln(1/2) cancels exactly

  const auto self = CooccurrenceTable::count_text("a a", 1);
  CHECK(self.count("a", "a") == 2);
  CHECK(self.total_events() == 2);
  CHECK(self.pmi("a", "a") == doctest::Approx(0.0).scale(1));
}

TEST_CASE("queries on unobserved pairs and unknown tokens are errors") {
  const auto table = CooccurrenceTable::count_text("a b a b a", 1);
  try {
    table.pmi("a", "a");  // both tokens known, count zero
    FAIL_CHECK("pmi accepted an unobserved pair");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unobserved_pair);
  }
  CHECK_THROWS_AS(static_cast<void>(table.pmi("a", "zebra")), Error);
  CHECK_THROWS_AS(static_cast<void>(table.cspmi("zebra", "a")), Error);
  CHECK_THROWS_AS(static_cast<void>(table.log_conditional_ratio("a", "b", "zebra")), Error);
  CHECK(table.count("a", "zebra") == 0);       // counts are total, not errors
  CHECK(table.center_marginal("zebra") == 0);
}

TEST_CASE("a corpus without events rejects statistics queries") {
  const auto table = CooccurrenceTable::count_text("solo", 1);
  CHECK(table.total_events() == 0);
  try {
    table.pmi("solo", "solo");
    FAIL_CHECK("pmi accepted an event-free corpus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::numeric);
  }
}

TEST_CASE("counting validates its inputs") {
  CHECK_THROWS_AS(CooccurrenceTable::count_text("a b", 0), Error);
  CHECK_THROWS_AS(CooccurrenceTable::count_text("a b", -3), Error);
  CHECK_THROWS_AS(CooccurrenceTable::count_text("", 1), Error);
  CHECK_THROWS_AS(CooccurrenceTable::count_text("  \n \t ", 1), Error);
  // non-positive shard counts clamp to one thread rather than failing
  CHECK(CooccurrenceTable::count_text("a b", 1, 0).total_events() == 2);
}

TEST_CASE("sharded counting equals the single-threaded count") {
  Rng rng(23);
  const char* alphabet[] = {"u", "v", "w", "x", "y"};
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::string> tokens;
    const int n = 50 + static_cast<int>(rng.next_below(200));
    for (int i = 0; i < n; ++i) tokens.push_back(alphabet[rng.next_below(5)]);
    const int window = 1 + static_cast<int>(rng.next_below(4));

    const auto solo = CooccurrenceTable::count_tokens(tokens, window, 1);
    const auto sharded = CooccurrenceTable::count_tokens(tokens, window, 4);

    REQUIRE(solo.total_events() == sharded.total_events());
    for (const auto& entry : solo.sorted_entries()) {
      CHECK(sharded.count(entry.center, entry.context) == entry.count);
    }
    for (const auto& token : solo.vocab().words()) {
      CHECK(sharded.center_marginal(token) == solo.center_marginal(token));
      CHECK(sharded.context_marginal(token) == solo.context_marginal(token));
    }
  }
}

TEST_CASE("count_file lowercases on request") {
  TempDir dir;
  write_file(dir.file("corpus.txt"), "Apple apple APPLE banana\n");
  const auto raw = CooccurrenceTable::count_file(dir.file("corpus.txt"), 1, false);
  CHECK(raw.count("Apple", "apple") == 1);
  const auto folded = CooccurrenceTable::count_file(dir.file("corpus.txt"), 1, true);
  CHECK(folded.count("apple", "apple") == 4);
  CHECK(folded.count("apple", "banana") == 1);

  CHECK_THROWS_AS(CooccurrenceTable::count_file(dir.file("absent.txt"), 1), Error);
}

TEST_CASE("save and load round trip the full table") {
  TempDir dir;
  const auto table = CooccurrenceTable::count_text("the quick brown fox the quick", 2);
  const auto path = dir.file("table.tsv");
  table.save(path);

  const auto back = CooccurrenceTable::load(path);
  CHECK(back.window() == table.window());
  CHECK(back.total_events() == table.total_events());
  const auto entries = table.sorted_entries();
  const auto round = back.sorted_entries();
  REQUIRE(entries.size() == round.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CHECK(entries[i].center == round[i].center);
    CHECK(entries[i].context == round[i].context);
    CHECK(entries[i].count == round[i].count);
  }
  // statistics carry over bit for bit
  CHECK(back.pmi("the", "quick") == table.pmi("the", "quick"));
}

TEST_CASE("table loader rejects malformed files") {
  TempDir dir;
  auto expect_parse = [&](const std::string& name, const std::string& body) {
    write_file(dir.file(name), body);
    try {
      CooccurrenceTable::load(dir.file(name));
      FAIL_CHECK("loader accepted ", name);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::parse);
    }
  };

  expect_parse("no_header.tsv", "a\tb\t1\n");
  expect_parse("bad_window.tsv", "# window=zero total_events=2\na\tb\t1\nb\ta\t1\n");
  expect_parse("bad_total.tsv", "# window=1 total_events=5\na\tb\t1\nb\ta\t1\n");
  expect_parse("bad_count.tsv", "# window=1 total_events=2\na\tb\tmany\nb\ta\t1\n");
  expect_parse("negative.tsv", "# window=1 total_events=0\na\tb\t-1\n");
  expect_parse("arity.tsv", "# window=1 total_events=1\na\tb\n");
  CHECK_THROWS_AS(CooccurrenceTable::load(dir.file("not_there.tsv")), Error);
}

TEST_CASE("from_entries accumulates duplicates and drops zero counts") {
  const auto table = CooccurrenceTable::from_entries(
      2, {{"a", "b", 2}, {"a", "b", 3}, {"c", "d", 0}, {"b", "a", 5}});
  CHECK(table.count("a", "b") == 5);
  CHECK(table.count("b", "a") == 5);
  CHECK(table.count("c", "d") == 0);
  CHECK(table.total_events() == 10);
  CHECK(table.center_marginal("a") == 5);
  CHECK(table.context_marginal("a") == 5);
}

TEST_CASE("merge adds counts and insists on equal windows") {
  auto left = CooccurrenceTable::from_entries(1, {{"a", "b", 2}, {"b", "a", 2}});
  const auto right = CooccurrenceTable::from_entries(1, {{"a", "b", 1}, {"b", "a", 1}, {"a", "c", 4}});
  left.merge(right);
  CHECK(left.count("a", "b") == 3);
  CHECK(left.count("a", "c") == 4);
  CHECK(left.total_events() == 10);

  const auto other_window = CooccurrenceTable::from_entries(2, {{"a", "b", 1}});
  CHECK_THROWS_AS(left.merge(other_window), Error);
}

TEST_CASE("entry counts always sum to the total") {
  Rng rng(29);
  const char* alphabet[] = {"p", "q", "r", "s"};
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::string> tokens;
    const int n = 20 + static_cast<int>(rng.next_below(100));
    for (int i = 0; i < n; ++i) tokens.push_back(alphabet[rng.next_below(4)]);
    const auto table = CooccurrenceTable::count_tokens(tokens, 1 + static_cast<int>(rng.next_below(3)));

    std::uint64_t sum = 0;
    std::uint64_t center_sum = 0;
    for (const auto& entry : table.sorted_entries()) sum += entry.count;
    for (const auto& token : table.vocab().words()) center_sum += table.center_marginal(token);
    CHECK(sum == table.total_events());
    CHECK(center_sum == table.total_events());
  }
}

TEST_CASE("counted corpora give symmetric counts and equal marginals") {
  const auto table = CooccurrenceTable::count_text("m n m o n n m o o m", 2);
  for (const auto& entry : table.sorted_entries()) {
    CHECK(table.count(entry.context, entry.center) == entry.count);
  }
  for (const auto& token : table.vocab().words()) {
    CHECK(table.center_marginal(token) == table.context_marginal(token));
  }
}

TEST_CASE("shifted pmi matrix agrees with pointwise pmi and is symmetric") {
  const auto table = CooccurrenceTable::count_text("a b a b a c b c a b", 2);
  const std::vector<std::string> subset = {"a", "b", "c"};

  const auto m1 = table.shifted_pmi_matrix(subset, 1);
  REQUIRE(m1.rows() == 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(m1(i, j) == m1(j, i));
      CHECK(m1(i, j) == table.pmi(subset[i], subset[j]));  // k = 1: no shift
    }
  }

  const auto m5 = table.shifted_pmi_matrix(subset, 5);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(m5(i, j) == doctest::Approx(m1(i, j) - std::log(5.0)).epsilon(1e-15));
    }
  }

  CHECK_THROWS_AS(static_cast<void>(table.shifted_pmi_matrix(subset, 0)), Error);
  CHECK_THROWS_AS(static_cast<void>(table.shifted_pmi_matrix({"a", "zebra"}, 1)), Error);
}

TEST_CASE("shifted pmi matrix symmetrizes asymmetric hand-made counts") {
  // loaded tables may be asymmetric; the matrix must still come out symmetric
  const auto table = CooccurrenceTable::from_entries(
      1, {{"a", "b", 3}, {"b", "a", 1}, {"a", "a", 2}, {"b", "b", 2}});
  const auto m = table.shifted_pmi_matrix({"a", "b"}, 1);
  CHECK(m(0, 1) == m(1, 0));
  // joint (3+1)/2 = 2; marginals (5+3)/2 = 4 for both tokens; total 8
  const double total = 8.0;
  const double expected = std::log((2.0 / total) / ((4.0 / total) * (4.0 / total)));
  CHECK(m(0, 1) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(m(0, 1) == doctest::Approx(0.0).scale(1));
}

TEST_CASE("model constants validate their ranges") {
  ModelConstants ok;
  ok.validate();

  ModelConstants bad_lambda;
  bad_lambda.lambda = 0.0;
  CHECK_THROWS_AS(bad_lambda.validate(), Error);

  ModelConstants bad_alpha;
  bad_alpha.alpha = 0.5;
  CHECK_THROWS_AS(bad_alpha.validate(), Error);

  ModelConstants bad_k;
  bad_k.k = 0;
  CHECK_THROWS_AS(bad_k.validate(), Error);
}
