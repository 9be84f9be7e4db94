// End-to-end checks of the command-line tool. Each test shells out to the
// built binary (path injected by the build as VECBIAS_CLI_PATH) and inspects
// exit codes and output files only; nothing here links the library.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

#include "test_util.hpp"

using testutil::TempDir;
using testutil::read_file;
using testutil::write_file;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

int g_run_counter = 0;

RunResult run_cli(const TempDir& dir, const std::string& args) {
  const int id = ++g_run_counter;
  const std::string out_path = dir.file("stdout." + std::to_string(id));
  const std::string err_path = dir.file("stderr." + std::to_string(id));
  const std::string command = std::string("\"") + VECBIAS_CLI_PATH + "\" " + args + " > \"" +
                              out_path + "\" 2> \"" + err_path + "\"";
  const int status = std::system(command.c_str());
  RunResult result;
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  result.out = read_file(out_path);
  result.err = read_file(err_path);
  return result;
}

// First data line starting with the given prefix, "" when absent.
std::string line_with_prefix(const std::string& text, const std::string& prefix) {
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = text.find('\n', pos);
    const std::string line =
        text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    if (line.rfind(prefix, 0) == 0) return line;
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  return "";
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

TEST_CASE("version flag exits cleanly") {
  TempDir dir;
  const auto r = run_cli(dir, "--version");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find('.') != std::string::npos);
}

TEST_CASE("missing subcommand or unknown flags fail with nonzero exit") {
  TempDir dir;
  CHECK(run_cli(dir, "").exit_code != 0);
  CHECK(run_cli(dir, "no-such-command").exit_code != 0);
  CHECK(run_cli(dir, "verify-theorems --instances notanumber").exit_code != 0);
}

TEST_CASE("corpus-stats reports the documented toy values") {
  TempDir dir;
  write_file(dir.file("corpus.txt"), "a b a b a\n");
  write_file(dir.file("pairs.tsv"), "a\tb\n");

  const auto r = run_cli(dir, "corpus-stats --corpus \"" + dir.file("corpus.txt") +
                                  "\" --window 1 --pairs \"" + dir.file("pairs.tsv") + "\"");
  REQUIRE(r.exit_code == 0);
  CHECK(line_with_prefix(r.out, "# command=corpus-stats") != "");
  CHECK(r.out.find("x,y,count,pmi,cspmi\n") != std::string::npos);

  const auto row = line_with_prefix(r.out, "a,b,");
  REQUIRE(row != "");
  const auto fields = split(row, ',');
  REQUIRE(fields.size() == 5);
  CHECK(fields[2] == "4");
  CHECK(std::strtod(fields[3].c_str(), nullptr) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(std::strtod(fields[4].c_str(), nullptr) == 0.0);
}

TEST_CASE("corpus-stats round trips a saved table") {
  TempDir dir;
  write_file(dir.file("corpus.txt"), "a b a b a\n");
  write_file(dir.file("pairs.tsv"), "a\tb\n");

  const auto first =
      run_cli(dir, "corpus-stats --corpus \"" + dir.file("corpus.txt") +
                       "\" --window 1 --pairs \"" + dir.file("pairs.tsv") +
                       "\" --save-table \"" + dir.file("table.tsv") + "\"");
  REQUIRE(first.exit_code == 0);

  const auto second = run_cli(dir, "corpus-stats --cooc-table \"" + dir.file("table.tsv") +
                                       "\" --pairs \"" + dir.file("pairs.tsv") + "\"");
  REQUIRE(second.exit_code == 0);

  // provenance headers name different inputs; the data rows must agree
  auto data_only = [](const std::string& text) {
    std::string kept;
    for (const auto& line : split(text, '\n')) {
      if (!line.empty() && line[0] != '#') kept += line + "\n";
    }
    return kept;
  };
  CHECK(data_only(first.out) == data_only(second.out));
  CHECK(data_only(first.out).find("a,b,4,") != std::string::npos);
}

TEST_CASE("corpus-stats with no output request is an input error") {
  TempDir dir;
  write_file(dir.file("corpus.txt"), "a b\n");
  const auto r = run_cli(dir, "corpus-stats --corpus \"" + dir.file("corpus.txt") + "\"");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("error:") != std::string::npos);

  const auto both = run_cli(dir, "corpus-stats --corpus \"" + dir.file("corpus.txt") +
                                     "\" --cooc-table \"" + dir.file("corpus.txt") + "\"");
  CHECK(both.exit_code == 1);
}

TEST_CASE("missing input files exit with code 1 and a message") {
  TempDir dir;
  const auto r = run_cli(dir, "ripa --embeddings \"" + dir.file("nope.vec") + "\"");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("error:") != std::string::npos);
  CHECK(r.out == "");
}

TEST_CASE("ripa writes a csv with one row per word") {
  TempDir dir;
  write_file(dir.file("emb.vec"), "3 2\nx 2 0\ny 0 0\nw 3 4\n");
  write_file(dir.file("pairs.tsv"), "x\ty\n");
  const auto r = run_cli(dir, "ripa --embeddings \"" + dir.file("emb.vec") + "\" --pairs \"" +
                                  dir.file("pairs.tsv") + "\"");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("word,beta\n") != std::string::npos);

  const auto row = line_with_prefix(r.out, "w,");
  REQUIRE(row != "");
  CHECK(std::strtod(split(row, ',')[1].c_str(), nullptr) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("weat on singleton sets saturates through the pipeline") {
  TempDir dir;
  write_file(dir.file("emb.vec"), "4 2\nt1 1 0\nt2 0 1\nax 1 0\nay 0 1\n");
  write_file(dir.file("t1.txt"), "t1\n");
  write_file(dir.file("t2.txt"), "t2\n");
  write_file(dir.file("a1.txt"), "ax\n");
  write_file(dir.file("a2.txt"), "ay\n");

  const auto r = run_cli(dir, "weat --embeddings \"" + dir.file("emb.vec") +
                                  "\" --targets1 \"" + dir.file("t1.txt") + "\" --targets2 \"" +
                                  dir.file("t2.txt") + "\" --attrs1 \"" + dir.file("a1.txt") +
                                  "\" --attrs2 \"" + dir.file("a2.txt") + "\"");
  REQUIRE(r.exit_code == 0);

  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["effect_size"].get<double>() == 2.0);
  CHECK(doc["p_value"].get<double>() == 0.0);
  CHECK(doc["n_partitions"].get<std::uint64_t>() == 2);
  CHECK(doc["exhaustive"].get<bool>());
}

TEST_CASE("debias writes a loadable embedding and a report") {
  TempDir dir;
  write_file(dir.file("emb.vec"), "4 2\nshe 1 0\nhe -1 0\nnurse 0.8 0.6\nrock 0.1 0.9\n");
  write_file(dir.file("pairs.tsv"), "she\the\n");

  const std::string args = "debias --embeddings \"" + dir.file("emb.vec") + "\" --pairs \"" +
                           dir.file("pairs.tsv") + "\" --out \"" + dir.file("debiased.vec") +
                           "\" --report \"" + dir.file("report.json") + "\"";
  const auto r = run_cli(dir, args);
  REQUIRE(r.exit_code == 0);

  const auto saved = read_file(dir.file("debiased.vec"));
  CHECK(line_with_prefix(saved, "she ") == "she 1 0");  // protected row survives untouched

  const auto nurse = split(line_with_prefix(saved, "nurse "), ' ');
  REQUIRE(nurse.size() == 3);
  CHECK(std::abs(std::strtod(nurse[1].c_str(), nullptr)) < 1e-12);
  CHECK(std::strtod(nurse[2].c_str(), nullptr) == doctest::Approx(0.6));

  const auto report = nlohmann::json::parse(read_file(dir.file("report.json")));
  CHECK(report["mode"] == "span");
  CHECK(report["selector"] == "none");
  CHECK(report["subspace_rank"] == 1);
  CHECK(report["debiased_words"] == 2);
  CHECK(report["max_scaled_inner"].get<double>() <= 1e-10);

  // the debiased file loads back through the tool
  const auto again = run_cli(dir, "ripa --embeddings \"" + dir.file("debiased.vec") +
                                      "\" --pairs \"" + dir.file("pairs.tsv") + "\"");
  REQUIRE(again.exit_code == 0);
  const auto row = line_with_prefix(again.out, "nurse,");
  REQUIRE(row != "");
  CHECK(std::abs(std::strtod(split(row, ',')[1].c_str(), nullptr)) < 1e-12);
}

TEST_CASE("analogy-eval reports preservation curves") {
  TempDir dir;
  write_file(dir.file("before.vec"),
             "6 3\np 1 0 0\nq -1 0 0\na 1 0.01 0\nb -1 0 0.005\nx 1 0 0.01\ny -1 0.005 0\n");
  write_file(dir.file("pairs.tsv"), "p\tq\n");
  write_file(dir.file("quads.tsv"), "a\tb\tx\ty\tbiased\n");

  REQUIRE(run_cli(dir, "debias --embeddings \"" + dir.file("before.vec") + "\" --pairs \"" +
                           dir.file("pairs.tsv") + "\" --out \"" + dir.file("after.vec") + "\"")
              .exit_code == 0);

  const auto r = run_cli(dir, "analogy-eval --embeddings \"" + dir.file("before.vec") +
                                  "\" --after \"" + dir.file("after.vec") + "\" --analogies \"" +
                                  dir.file("quads.tsv") + "\" --pairs \"" + dir.file("pairs.tsv") +
                                  "\"");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("label,threshold,count_before,count_after,fraction_after\n") !=
        std::string::npos);
  CHECK(r.out.find("# preserved_fraction_at_0.5 biased=0\n") != std::string::npos);
  CHECK(line_with_prefix(r.out, "biased,0.5,1,0,") != "");
}

TEST_CASE("breakdown joins corpus and embedding associations") {
  TempDir dir;
  write_file(dir.file("table.tsv"),
             "# window=2 total_events=12\n"
             "w\tx\t4\nw\ty\t1\nx\tw\t4\nx\ty\t1\ny\tw\t1\ny\tx\t1\n");
  write_file(dir.file("emb.vec"), "3 2\nx 3 1\ny 1 1\nw 1 0\n");
  write_file(dir.file("pairs.tsv"), "x\ty\n");
  write_file(dir.file("cat.txt"), "w\n");

  const auto r = run_cli(dir, "breakdown --embeddings \"" + dir.file("emb.vec") +
                                  "\" --cooc-table \"" + dir.file("table.tsv") + "\" --pairs \"" +
                                  dir.file("pairs.tsv") + "\" --categories jobs=\"" +
                                  dir.file("cat.txt") + "\" --bootstrap 200");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("word,category,g,g_hat,delta_g,flag\n") != std::string::npos);
  CHECK(line_with_prefix(r.out, "w,jobs,") != "");
  CHECK(r.out.find("# summary category=jobs") != std::string::npos);
}

TEST_CASE("verify-theorems passes normally and fails under tamper") {
  TempDir dir;
  const auto good = run_cli(dir, "verify-theorems --instances 5 --seed 11");
  REQUIRE(good.exit_code == 0);
  const auto doc = nlohmann::json::parse(good.out);
  CHECK(doc["pass"].get<bool>());
  CHECK(doc["theorem_instances"].size() == 5);

  const auto bad = run_cli(dir, "verify-theorems --instances 5 --seed 11 --tamper");
  CHECK(bad.exit_code == 2);
  CHECK(bad.err.find("verification failed") != std::string::npos);
  const auto bad_doc = nlohmann::json::parse(bad.out);
  CHECK_FALSE(bad_doc["pass"].get<bool>());
}

TEST_CASE("identical runs produce byte-identical outputs") {
  TempDir dir;
  write_file(dir.file("corpus.txt"), "the quick brown fox jumps over the lazy dog\n");
  write_file(dir.file("pairs.tsv"), "the\tfox\n");

  const std::string stats = "corpus-stats --corpus \"" + dir.file("corpus.txt") +
                            "\" --window 2 --pairs \"" + dir.file("pairs.tsv") + "\"";
  CHECK(run_cli(dir, stats).out == run_cli(dir, stats).out);

  const std::string verify = "verify-theorems --instances 3 --seed 5";
  CHECK(run_cli(dir, verify).out == run_cli(dir, verify).out);
}
