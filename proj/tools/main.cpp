// vecbias command-line front end. Everything goes through the C API in
// vecbias/vecbias.h; this translation unit never touches the C++ core.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vecbias/vecbias.h"

namespace {

[[noreturn]] void die(const std::string& message) {
  std::cerr << "error: " << message << '\n';
  std::exit(1);
}

void check(vb_status status) {
  if (status != VB_OK) die(vb_last_error());
}

struct EmbeddingsDeleter {
  void operator()(vb_embeddings* p) const { vb_embeddings_free(p); }
};
struct PairsDeleter {
  void operator()(vb_pairs* p) const { vb_pairs_free(p); }
};
struct WordlistDeleter {
  void operator()(vb_wordlist* p) const { vb_wordlist_free(p); }
};
struct CoocDeleter {
  void operator()(vb_cooc* p) const { vb_cooc_free(p); }
};
struct AnalogiesDeleter {
  void operator()(vb_analogies* p) const { vb_analogies_free(p); }
};

using Embeddings = std::unique_ptr<vb_embeddings, EmbeddingsDeleter>;
using Pairs = std::unique_ptr<vb_pairs, PairsDeleter>;
using Wordlist = std::unique_ptr<vb_wordlist, WordlistDeleter>;
using Cooc = std::unique_ptr<vb_cooc, CoocDeleter>;
using Analogies = std::unique_ptr<vb_analogies, AnalogiesDeleter>;

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { vb_string_free(s); }
  OwnedString() = default;
  OwnedString(const OwnedString&) = delete;
  OwnedString& operator=(const OwnedString&) = delete;
};

Embeddings load_embeddings(const std::string& path, const std::string& format) {
  vb_embeddings* raw = nullptr;
  check(vb_embeddings_load(path.c_str(), format.c_str(), &raw));
  return Embeddings(raw);
}

Pairs load_pairs(const std::string& path) {
  vb_pairs* raw = nullptr;
  if (path.empty()) {
    check(vb_pairs_default_gender(&raw));
  } else {
    check(vb_pairs_load(path.c_str(), &raw));
  }
  return Pairs(raw);
}

Wordlist load_wordlist(const std::string& path) {
  vb_wordlist* raw = nullptr;
  check(vb_wordlist_load(path.c_str(), &raw));
  return Wordlist(raw);
}

std::string format_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

// Provenance lines embedded in every report: the resolved configuration, no
// timestamps, so identical runs stay byte-identical.
struct Provenance {
  std::vector<std::string> lines;
  std::vector<const char*> pointers;

  void add(const std::string& line) { lines.push_back(line); }

  const char* const* data() {
    pointers.clear();
    for (const auto& line : lines) pointers.push_back(line.c_str());
    return pointers.empty() ? nullptr : pointers.data();
  }
  int count() const { return static_cast<int>(lines.size()); }
};

void write_output(const std::string& path, const char* contents) {
  if (path.empty()) {
    std::cout << contents;
    std::cout.flush();
    if (!std::cout) die("failed to write to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) die("cannot open '" + path + "' for writing");
  out << contents;
  out.flush();
  if (!out) die("failed to write '" + path + "'");
}

std::string describe_pairs(const std::string& path) { return path.empty() ? "builtin" : path; }

struct CommonEmbeddingFlags {
  std::string embeddings;
  std::string format = "word2vec-text";

  void attach(CLI::App* cmd) {
    cmd->add_option("--embeddings", embeddings, "embedding file")->required();
    cmd->add_option("--format", format, "embedding file format: word2vec-text or glove-text");
  }
};

struct CoocSourceFlags {
  std::string corpus;
  std::string cooc_table;
  int window = 5;
  bool lowercase = false;
  int shards = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--corpus", corpus, "plain-text corpus to count");
    cmd->add_option("--cooc-table", cooc_table, "precomputed co-occurrence table");
    cmd->add_option("--window", window, "co-occurrence window radius")->check(CLI::PositiveNumber);
    cmd->add_flag("--lowercase", lowercase, "lowercase corpus tokens while counting");
    cmd->add_option("--shards", shards, "worker threads for counting")
        ->check(CLI::PositiveNumber);
  }

  Cooc load(Provenance& prov) const {
    if (corpus.empty() == cooc_table.empty()) {
      die("need exactly one of --corpus and --cooc-table");
    }
    vb_cooc* raw = nullptr;
    if (!corpus.empty()) {
      check(vb_cooc_count_file(corpus.c_str(), window, lowercase ? 1 : 0, shards, &raw));
      prov.add("corpus=" + corpus + " window=" + std::to_string(window) +
               " lowercase=" + (lowercase ? "1" : "0"));
    } else {
      check(vb_cooc_load(cooc_table.c_str(), &raw));
      prov.add("cooc_table=" + cooc_table + " window=" + std::to_string(vb_cooc_window(raw)));
    }
    return Cooc(raw);
  }
};

int cmd_ripa(const CommonEmbeddingFlags& emb, const std::string& pairs_path,
             const std::string& words_path, const std::string& out_path) {
  auto set = load_embeddings(emb.embeddings, emb.format);
  auto pairs = load_pairs(pairs_path);
  Wordlist words;
  if (!words_path.empty()) words = load_wordlist(words_path);

  Provenance prov;
  prov.add("command=ripa");
  prov.add("embeddings=" + emb.embeddings + " format=" + emb.format);
  prov.add("pairs=" + describe_pairs(pairs_path));
  prov.add("words=" + (words_path.empty() ? std::string("vocabulary") : words_path));

  OwnedString csv;
  check(vb_render_ripa_csv(set.get(), pairs.get(), words.get(), prov.data(), prov.count(),
                           &csv.s));
  write_output(out_path, csv.s);
  return 0;
}

struct WeatFlags {
  std::string targets1, targets2, attrs1, attrs2;
  std::uint64_t max_exhaustive = 100000;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
};

int cmd_weat(const CommonEmbeddingFlags& emb, const WeatFlags& flags,
             const std::string& out_path) {
  auto set = load_embeddings(emb.embeddings, emb.format);
  auto t1 = load_wordlist(flags.targets1);
  auto t2 = load_wordlist(flags.targets2);
  auto a1 = load_wordlist(flags.attrs1);
  auto a2 = load_wordlist(flags.attrs2);

  Provenance prov;
  prov.add("command=weat");
  prov.add("embeddings=" + emb.embeddings + " format=" + emb.format);
  prov.add("targets1=" + flags.targets1 + " targets2=" + flags.targets2);
  prov.add("attrs1=" + flags.attrs1 + " attrs2=" + flags.attrs2);
  prov.add("max_exhaustive=" + std::to_string(flags.max_exhaustive) +
           " samples=" + std::to_string(flags.samples) + " seed=" + std::to_string(flags.seed));

  OwnedString json;
  check(vb_render_weat_json(set.get(), t1.get(), t2.get(), a1.get(), a2.get(),
                            flags.max_exhaustive, flags.samples, flags.seed, prov.data(),
                            prov.count(), &json.s));
  write_output(out_path, json.s);
  return 0;
}

struct BreakdownFlags {
  std::vector<std::string> categories;  // name=path
  std::string pairs_path;
  double lambda = 1.0;
  double alpha = -1.0;
  int k = 1;
  std::uint64_t seed = 0;
  int bootstrap = 10000;
};

int cmd_breakdown(const CommonEmbeddingFlags& emb, const CoocSourceFlags& cooc_flags,
                  const BreakdownFlags& flags, const std::string& out_path) {
  auto set = load_embeddings(emb.embeddings, emb.format);
  auto pairs = load_pairs(flags.pairs_path);

  Provenance prov;
  prov.add("command=breakdown");
  prov.add("embeddings=" + emb.embeddings + " format=" + emb.format);
  auto table = cooc_flags.load(prov);
  prov.add("pairs=" + describe_pairs(flags.pairs_path));

  std::vector<std::string> names;
  std::vector<Wordlist> lists;
  std::string categories_line = "categories=";
  for (std::size_t i = 0; i < flags.categories.size(); ++i) {
    const auto& spec = flags.categories[i];
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= spec.size()) {
      die("--categories expects name=path, got '" + spec + "'");
    }
    names.push_back(spec.substr(0, eq));
    lists.push_back(load_wordlist(spec.substr(eq + 1)));
    if (i > 0) categories_line += ',';
    categories_line += spec;
  }
  prov.add(categories_line);
  prov.add("lambda=" + format_number(flags.lambda) + " alpha=" + format_number(flags.alpha) +
           " k=" + std::to_string(flags.k));
  prov.add("seed=" + std::to_string(flags.seed) +
           " bootstrap=" + std::to_string(flags.bootstrap));

  std::vector<const char*> name_ptrs;
  std::vector<const vb_wordlist*> list_ptrs;
  for (std::size_t i = 0; i < names.size(); ++i) {
    name_ptrs.push_back(names[i].c_str());
    list_ptrs.push_back(lists[i].get());
  }

  OwnedString csv;
  check(vb_render_breakdown_csv(set.get(), table.get(), pairs.get(), name_ptrs.data(),
                                list_ptrs.data(), static_cast<int>(names.size()), flags.lambda,
                                flags.alpha, flags.k, flags.seed, flags.bootstrap, prov.data(),
                                prov.count(), &csv.s));
  write_output(out_path, csv.s);
  return 0;
}

struct DebiasFlags {
  std::string pairs_path;
  std::string biased_pairs_path;
  std::string protected_path;
  std::string mode = "span";
  std::string selector = "none";
  std::string report_path;
};

int cmd_debias(const CommonEmbeddingFlags& emb, const DebiasFlags& flags,
               const std::string& out_path) {
  if (out_path.empty()) die("--out is required for debias");
  auto set = load_embeddings(emb.embeddings, emb.format);
  auto pairs = load_pairs(flags.pairs_path);
  Pairs biased;
  if (!flags.biased_pairs_path.empty()) biased = load_pairs(flags.biased_pairs_path);
  Wordlist protected_words;
  if (!flags.protected_path.empty()) protected_words = load_wordlist(flags.protected_path);

  Provenance prov;
  prov.add("command=debias");
  prov.add("embeddings=" + emb.embeddings + " format=" + emb.format);
  prov.add("pairs=" + describe_pairs(flags.pairs_path));
  prov.add("mode=" + flags.mode + " selector=" + flags.selector);
  if (!flags.biased_pairs_path.empty()) prov.add("biased_pairs=" + flags.biased_pairs_path);
  if (!flags.protected_path.empty()) prov.add("protected=" + flags.protected_path);
  prov.add("out=" + out_path);

  vb_debias_options options{};
  options.mode = flags.mode.c_str();
  options.selector = flags.selector.c_str();
  options.pairs = pairs.get();
  options.biased_pairs = biased.get();
  options.protected_words = protected_words.get();

  vb_embeddings* raw = nullptr;
  OwnedString report;
  check(vb_debias(set.get(), &options, prov.data(), prov.count(), &raw,
                  flags.report_path.empty() ? nullptr : &report.s));
  Embeddings debiased(raw);
  check(vb_embeddings_save(debiased.get(), out_path.c_str(), emb.format.c_str()));
  if (!flags.report_path.empty()) write_output(flags.report_path, report.s);
  return 0;
}

int cmd_analogy_eval(const CommonEmbeddingFlags& emb, const std::string& after_path,
                     const std::string& analogies_path, const std::string& pairs_path, double tol,
                     const std::string& out_path) {
  auto before = load_embeddings(emb.embeddings, emb.format);
  auto after = load_embeddings(after_path, emb.format);
  auto pairs = load_pairs(pairs_path);
  vb_analogies* raw = nullptr;
  check(vb_analogies_load(analogies_path.c_str(), &raw));
  Analogies analogies(raw);

  Provenance prov;
  prov.add("command=analogy-eval");
  prov.add("embeddings=" + emb.embeddings + " after=" + after_path + " format=" + emb.format);
  prov.add("analogies=" + analogies_path + " pairs=" + describe_pairs(pairs_path));
  prov.add("tol=" + format_number(tol));

  OwnedString csv;
  check(vb_render_curves_csv(analogies.get(), before.get(), after.get(), pairs.get(), tol,
                             prov.data(), prov.count(), &csv.s));
  write_output(out_path, csv.s);
  return 0;
}

int cmd_corpus_stats(const CoocSourceFlags& cooc_flags, const std::string& pairs_path,
                     const std::string& save_table_path, const std::string& out_path) {
  Provenance prov;
  prov.add("command=corpus-stats");
  auto table = cooc_flags.load(prov);

  if (!save_table_path.empty()) {
    check(vb_cooc_save(table.get(), save_table_path.c_str()));
  }

  if (!pairs_path.empty()) {
    auto pairs = load_pairs(pairs_path);
    prov.add("pairs=" + pairs_path);
    OwnedString csv;
    check(vb_render_pair_stats_csv(table.get(), pairs.get(), prov.data(), prov.count(), &csv.s));
    write_output(out_path, csv.s);
    return 0;
  }

  // Without --pairs the counted table itself is the product.
  if (save_table_path.empty()) {
    if (out_path.empty()) die("nothing to do: give --pairs, --save-table, or --out");
    check(vb_cooc_save(table.get(), out_path.c_str()));
  }
  return 0;
}

int cmd_verify_theorems(int instances, std::uint64_t seed, bool tamper,
                        const std::string& out_path) {
  Provenance prov;
  prov.add("command=verify-theorems");
  prov.add("instances=" + std::to_string(instances) + " seed=" + std::to_string(seed) +
           " tamper=" + (tamper ? "1" : "0"));

  OwnedString json;
  int pass = 0;
  check(vb_verify_theorems(instances, seed, tamper ? 1 : 0, prov.data(), prov.count(), &json.s,
                           &pass));
  write_output(out_path, json.s);
  if (!pass) {
    std::cerr << "verification failed\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"word embedding bias measurement and debiasing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vb_version()));

  auto* ripa = app.add_subcommand("ripa", "per-word association with the pair relation vector");
  CommonEmbeddingFlags ripa_emb;
  std::string ripa_pairs, ripa_words, ripa_out;
  ripa_emb.attach(ripa);
  ripa->add_option("--pairs", ripa_pairs, "pair TSV (default: built-in gender pairs)");
  ripa->add_option("--words", ripa_words, "word list to score (default: whole vocabulary)");
  ripa->add_option("--out", ripa_out, "output file (default: stdout)");

  auto* weat = app.add_subcommand("weat", "WEAT statistic, effect size, permutation p-value");
  CommonEmbeddingFlags weat_emb;
  WeatFlags weat_flags;
  std::string weat_out;
  weat_emb.attach(weat);
  weat->add_option("--targets1", weat_flags.targets1, "first target word list")->required();
  weat->add_option("--targets2", weat_flags.targets2, "second target word list")->required();
  weat->add_option("--attrs1", weat_flags.attrs1, "first attribute word list")->required();
  weat->add_option("--attrs2", weat_flags.attrs2, "second attribute word list")->required();
  weat->add_option("--max-exhaustive", weat_flags.max_exhaustive,
                   "enumerate all partitions up to this count");
  weat->add_option("--samples", weat_flags.samples, "sampled partitions beyond that");
  weat->add_option("--seed", weat_flags.seed, "sampling seed");
  weat->add_option("--out", weat_out, "output file (default: stdout)");

  auto* breakdown = app.add_subcommand(
      "breakdown", "per-word corpus vs. embedding association with category summaries");
  CommonEmbeddingFlags breakdown_emb;
  CoocSourceFlags breakdown_cooc;
  BreakdownFlags breakdown_flags;
  std::string breakdown_out;
  breakdown_emb.attach(breakdown);
  breakdown_cooc.attach(breakdown);
  breakdown->add_option("--pairs", breakdown_flags.pairs_path,
                        "pair TSV (default: built-in gender pairs)");
  breakdown
      ->add_option("--categories", breakdown_flags.categories,
                   "category word list as name=path (repeatable)")
      ->required();
  breakdown->add_option("--lambda", breakdown_flags.lambda, "context matrix scale");
  breakdown->add_option("--alpha", breakdown_flags.alpha, "norm offset (negative)");
  breakdown->add_option("--k", breakdown_flags.k, "negative-sampling shift");
  breakdown->add_option("--seed", breakdown_flags.seed, "bootstrap seed");
  breakdown->add_option("--bootstrap", breakdown_flags.bootstrap, "bootstrap resamples")
      ->check(CLI::PositiveNumber);
  breakdown->add_option("--out", breakdown_out, "output file (default: stdout)");

  auto* debias = app.add_subcommand("debias", "remove the pair subspace from non-protected words");
  CommonEmbeddingFlags debias_emb;
  DebiasFlags debias_flags;
  std::string debias_out;
  debias_emb.attach(debias);
  debias->add_option("--pairs", debias_flags.pairs_path,
                     "pair TSV (default: built-in gender pairs)");
  debias->add_option("--biased-pairs", debias_flags.biased_pairs_path,
                     "biased-analogy pair TSV (for the unsupervised selector)");
  debias->add_option("--protected", debias_flags.protected_path, "word list never debiased");
  debias->add_option("--mode", debias_flags.mode, "bias subspace: span or pc1");
  debias->add_option("--selector", debias_flags.selector,
                     "protected-word selector: none, list, unsupervised");
  debias->add_option("--report", debias_flags.report_path, "write a JSON debias report here");
  debias->add_option("--out", debias_out, "output embedding file")->required();

  auto* analogy = app.add_subcommand("analogy-eval",
                                     "analogy preservation curves before and after debiasing");
  CommonEmbeddingFlags analogy_emb;
  std::string analogy_after, analogy_file, analogy_pairs, analogy_out;
  double analogy_tol = 0.25;
  analogy_emb.attach(analogy);
  analogy->add_option("--after", analogy_after, "debiased embedding file")->required();
  analogy->add_option("--analogies", analogy_file, "analogy TSV")->required();
  analogy->add_option("--pairs", analogy_pairs, "pair TSV (default: built-in gender pairs)");
  analogy->add_option("--tol", analogy_tol, "analogy-holds tolerance in (0, 1]");
  analogy->add_option("--out", analogy_out, "output file (default: stdout)");

  auto* corpus = app.add_subcommand("corpus-stats",
                                    "count co-occurrences and query PMI/csPMI for pairs");
  CoocSourceFlags corpus_cooc;
  std::string corpus_pairs, corpus_save_table, corpus_out;
  corpus_cooc.attach(corpus);
  corpus->add_option("--pairs", corpus_pairs, "pair TSV to report PMI/csPMI for");
  corpus->add_option("--save-table", corpus_save_table, "also write the counted table here");
  corpus->add_option("--out", corpus_out, "output file (default: stdout)");

  auto* verify = app.add_subcommand("verify-theorems",
                                    "self-contained synthetic checks of the core guarantees");
  int verify_instances = 200;
  std::uint64_t verify_seed = 0;
  bool verify_tamper = false;
  std::string verify_out;
  verify->add_option("--instances", verify_instances, "random factorization instances")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_seed, "instance generation seed");
  verify->add_flag("--tamper", verify_tamper, "negative control: corrupt the projection")
      ->group("");  // hidden
  verify->add_option("--out", verify_out, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  if (ripa->parsed()) return cmd_ripa(ripa_emb, ripa_pairs, ripa_words, ripa_out);
  if (weat->parsed()) return cmd_weat(weat_emb, weat_flags, weat_out);
  if (breakdown->parsed()) {
    return cmd_breakdown(breakdown_emb, breakdown_cooc, breakdown_flags, breakdown_out);
  }
  if (debias->parsed()) return cmd_debias(debias_emb, debias_flags, debias_out);
  if (analogy->parsed()) {
    return cmd_analogy_eval(analogy_emb, analogy_after, analogy_file, analogy_pairs, analogy_tol,
                            analogy_out);
  }
  if (corpus->parsed()) {
    return cmd_corpus_stats(corpus_cooc, corpus_pairs, corpus_save_table, corpus_out);
  }
  if (verify->parsed()) {
    return cmd_verify_theorems(verify_instances, verify_seed, verify_tamper, verify_out);
  }
  return 1;
}
