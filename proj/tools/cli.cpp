#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "xling/analysis.hpp"
#include "xling/embedding.hpp"
#include "xling/extraction.hpp"
#include "xling/lexicon.hpp"
#include "xling/mapping.hpp"
#include "xling/morph.hpp"
#include "xling/multialign.hpp"
#include "xling/retrieval.hpp"
#include "xling/text.hpp"

namespace xling::cli {

namespace fs = std::filesystem;

Cell text(std::string s) { return {s, s}; }
Cell number(double v, int digits) { return {format_fixed(v, digits), format_double(v)}; }
Cell integer(long long v) { return text(std::to_string(v)); }

void Table::print(std::ostream& os) const {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].human.size());
  }
  const auto emit = [&](std::size_t c, const std::string& s) {
    if (c) os << "  ";
    const std::string pad(width[c] - s.size(), ' ');
    os << (c == 0 ? s + pad : pad + s);
  };
  for (std::size_t c = 0; c < header.size(); ++c) emit(c, header[c]);
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) emit(c, row[c].human);
    os << '\n';
  }
}

std::string Table::csv() const {
  std::ostringstream os;
  for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c].machine;
    os << '\n';
  }
  return os.str();
}

namespace {

std::string read_config_value(std::string_view v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
    v = v.substr(1, v.size() - 2);
  }
  return std::string(v);
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.starts_with(flag + "=");
  });
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (path.empty() || args.size() < 2) return args;

  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::vector<std::string> extra;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(trim(body.substr(0, eq)));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty() || key == "config") {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": bad key");
    }
    const std::string flag = "--" + key;
    if (given_on_command_line(args, flag)) continue;
    extra.push_back(flag + "=" + read_config_value(trim(body.substr(eq + 1))));
  }
  std::vector<std::string> out(args.begin(), args.begin() + 2);
  out.insert(out.end(), extra.begin(), extra.end());
  out.insert(out.end(), args.begin() + 2, args.end());
  return out;
}

namespace {

void require_file(const fs::path& p, const std::string& what) {
  if (!fs::is_regular_file(p)) throw ConfigError(what + " not found: " + p.string());
}

void require_output(const fs::path& p) {
  if (p.empty()) return;
  const auto parent = p.parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw ConfigError("output directory does not exist: " + parent.string());
  }
  if (fs::is_directory(p)) throw ConfigError("output path is a directory: " + p.string());
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << content;
}

std::string lang_or_stem(const std::string& lang, const fs::path& p) {
  return lang.empty() ? p.stem().string() : lang;
}

std::set<std::string> parse_feature_list(const std::string& spec) {
  std::set<std::string> out;
  if (spec == "none") return out;
  for (const auto f : split(spec, ',')) {
    const auto t = trim(f);
    if (!t.empty()) out.emplace(t);
  }
  return out;
}

void print_warnings(const Warnings& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

/// Options shared by commands that load embeddings.
struct EmbeddingOptions {
  std::string normalize = "unit,center,unit";
  std::size_t max_vocab = kDefaultMaxVocab;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--normalize", normalize, "Comma-separated steps (unit, center) or none")
        ->capture_default_str();
    cmd->add_option("--max-vocab", max_vocab, "Rows to read per file (0 = all)")
        ->capture_default_str();
  }

  EmbeddingSpace load(const fs::path& p, const std::string& lang) const {
    return xling::normalize(load_embeddings(p, max_vocab, lang), parse_norm_steps(normalize));
  }
};

struct RefineOptions {
  RefinementConfig cfg;
  std::string seed_strategy = "identical";
  Index similarity_vocab = 4000;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--seed-strategy", seed_strategy, "identical, numerals or similarity")
        ->capture_default_str();
    cmd->add_option("--similarity-vocab", similarity_vocab)->capture_default_str();
    cmd->add_option("--max-iters", cfg.max_iters)->capture_default_str();
    cmd->add_option("--induction-vocab", cfg.induction_vocab)->capture_default_str();
    cmd->add_option("--csls-k", cfg.csls_k)->capture_default_str();
    cmd->add_option("--stop-delta", cfg.stop_delta)->capture_default_str();
  }

  SeedConfig seed() const { return {parse_seed_strategy(seed_strategy), similarity_vocab}; }
};

std::vector<int> checked_ks(const std::vector<int>& ks) {
  if (ks.empty()) throw ConfigError("--ks must list at least one k");
  for (const int k : ks) {
    if (k < 1) throw ConfigError("--ks values must be positive");
  }
  return ks;
}

struct PairEvaluation {
  std::string pair;
  std::string hub;
  EvalResult result;
};

PairEvaluation evaluate_views(const std::string& pair, const std::string& hub,
                              const EmbeddingSpace& src, const Matrix& src_view,
                              const EmbeddingSpace& trg, const Matrix& trg_view, const Lexicon& gold,
                              std::vector<int> ks, int csls_k, Index pool_size, Warnings* warnings) {
  const int k_max = std::min<Index>(*std::max_element(ks.begin(), ks.end()), trg.size());
  std::erase_if(ks, [&](int k) { return k > k_max; });
  RetrievalOptions opts{csls_k, k_max, pool_size};
  const auto run = retrieve(src.words(), src_view, trg.words(), trg_view, gold.sources(), opts,
                            warnings);
  return {pair, hub, precision_at_k(run, gold, ks)};
}

Table evaluation_table(const std::vector<PairEvaluation>& evals, const std::vector<int>& ks,
                       std::uint64_t seed) {
  Table t;
  t.header = {"pair", "hub"};
  for (const int k : ks) t.header.push_back("P@" + std::to_string(k));
  t.header.insert(t.header.end(), {"n_evaluated", "n_skipped_oov", "seed"});
  for (const auto& e : evals) {
    std::vector<Cell> row{text(e.pair), text(e.hub)};
    for (const int k : ks) {
      const auto it = e.result.p_at.find(k);
      row.push_back(it == e.result.p_at.end() ? text("NA") : number(it->second));
    }
    row.push_back(integer(static_cast<long long>(e.result.n_evaluated)));
    row.push_back(integer(static_cast<long long>(e.result.n_skipped_oov)));
    row.push_back(integer(static_cast<long long>(seed)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// ---------------------------------------------------------------- align

struct AlignCommand {
  std::string src, trg, src_lang, trg_lang, out_map, report, gold;
  EmbeddingOptions emb;
  RefineOptions refine;
  std::vector<int> ks{1, 5, 10};
  std::uint64_t seed = 0;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("align", "Learn an orthogonal map from src into trg");
    cmd->add_option("--src", src, "Source embedding file")->required();
    cmd->add_option("--trg", trg, "Target embedding file")->required();
    cmd->add_option("--src-lang", src_lang, "Source language code (default: file stem)");
    cmd->add_option("--trg-lang", trg_lang, "Target language code (default: file stem)");
    cmd->add_option("--out-map", out_map, "Map file to write")->required();
    cmd->add_option("--report", report, "Report file to write");
    cmd->add_option("--gold", gold, "Gold lexicon scored with the learned map");
    cmd->add_option("--ks", ks, "Precision cut-offs for --gold")->delimiter(',');
    cmd->add_option("--seed", seed, "Random seed recorded in the report")->capture_default_str();
    emb.add_to(cmd);
    refine.add_to(cmd);
  }

  int run(std::ostream& out, std::ostream& err) {
    require_file(src, "source embeddings");
    require_file(trg, "target embeddings");
    if (!gold.empty()) require_file(gold, "gold lexicon");
    require_output(out_map);
    require_output(report);
    refine.cfg.validate();
    const auto seed_cfg = refine.seed();
    parse_norm_steps(emb.normalize);
    if (!gold.empty()) checked_ks(ks);

    const auto a = emb.load(src, lang_or_stem(src_lang, src));
    const auto b = emb.load(trg, lang_or_stem(trg_lang, trg));
    if (a.dim() != b.dim()) throw ConfigError("embedding dimensions differ");
    Warnings warnings;
    const auto choice = make_seed(a, b, seed_cfg, &warnings);
    const auto learned = self_learn(a, b, choice.seed, refine.cfg, &warnings);

    std::optional<PairEvaluation> eval;
    if (!gold.empty()) {
      const auto lex = read_lexicon(gold, a.language(), b.language());
      eval = evaluate_views(a.language() + "-" + b.language(), b.language(), a,
                            learned.map.apply(a.vectors()), b, b.vectors(), lex, ks,
                            refine.cfg.csls_k, 0, &warnings);
    }

    Table iters;
    iters.header = {"iteration", "dictionary_size", "induced_size", "objective"};
    for (const auto& h : learned.history) {
      iters.rows.push_back({integer(h.iteration), integer(static_cast<long long>(h.dictionary_size)),
                            integer(static_cast<long long>(h.induced_size)),
                            number(h.objective, 6)});
    }
    std::ostringstream rep;
    rep << "source = " << a.language() << '\n'
        << "target = " << b.language() << '\n'
        << "seed = " << seed << '\n'
        << "seed_strategy = " << to_string(choice.used) << '\n'
        << "seed_size = " << choice.seed.size() << '\n'
        << "iterations = " << learned.history.size() << '\n'
        << "converged = " << (learned.converged ? "true" : "false") << '\n'
        << "final_dictionary_size = " << learned.dictionary.size() << '\n';
    if (eval) {
      for (const auto& [k, p] : eval->result.p_at) {
        rep << "P@" << k << " = " << format_double(p) << '\n';
      }
      rep << "n_evaluated = " << eval->result.n_evaluated << '\n'
          << "n_skipped_oov = " << eval->result.n_skipped_oov << '\n';
    }
    rep << '\n' << iters.csv();

    save_map(learned.map, out_map);
    if (!report.empty()) write_file(report, rep.str());

    print_warnings(warnings, err);
    out << "seed: " << seed << "  strategy: " << to_string(choice.used)
        << "  seed pairs: " << choice.seed.size() << '\n';
    iters.print(out);
    if (eval) evaluation_table({*eval}, ks, seed).print(out);
    return kExitOk;
  }
};

// ---------------------------------------------------------- multi-align

struct MultiAlignCommand {
  std::string manifest, out_dir, hub;
  unsigned threads = default_thread_count();

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("multi-align", "Align every manifest language into a hub");
    cmd->add_option("--manifest", manifest, "Manifest file")->required();
    cmd->add_option("--out-dir", out_dir, "Directory for maps, manifest and report")->required();
    cmd->add_option("--hub", hub, "Override the manifest's hub");
    cmd->add_option("--threads", threads, "Languages trained concurrently")->capture_default_str();
  }

  int run(std::ostream& out, std::ostream& err) {
    require_file(manifest, "manifest");
    if (fs::exists(out_dir) && !fs::is_directory(out_dir)) {
      throw ConfigError("--out-dir is not a directory: " + out_dir);
    }
    auto m = read_manifest(manifest);
    if (!hub.empty()) m.hub = hub;
    if (threads < 1) throw ConfigError("--threads must be positive");
    auto spaces = load_spaces(m);
    std::vector<LanguageReport> reports;
    const auto ms = align_to_hub(std::move(spaces), m.hub, m.seed, m.refine, &reports, threads);

    Table t;
    t.header = {"language", "hub", "seed_strategy", "seed_size", "iterations", "dictionary_size",
                "converged", "seed"};
    for (const auto& r : reports) {
      const bool is_hub = r.language == m.hub;
      t.rows.push_back({text(r.language), text(m.hub), text(is_hub ? "-" : to_string(r.seed_used)),
                        integer(static_cast<long long>(r.seed_size)),
                        integer(static_cast<long long>(r.learned.history.size())),
                        integer(static_cast<long long>(r.learned.dictionary.size())),
                        text(r.learned.converged ? "true" : "false"),
                        integer(static_cast<long long>(m.random_seed))});
    }
    save_multispace(ms, m, out_dir);
    write_file(fs::path(out_dir) / "report.csv", t.csv());
    (void)err;
    out << "seed: " << m.random_seed << "  hub: " << m.hub << '\n';
    t.print(out);
    return kExitOk;
  }
};

// ------------------------------------------------------------- evaluate

struct EvaluateCommand {
  std::string multispace, map, src, trg, src_lang, trg_lang, out, hits;
  std::vector<std::string> gold;
  std::vector<int> ks{1, 5, 10};
  int csls_k = kDefaultCslsNeighborhood;
  Index pool_size = 0;
  EmbeddingOptions emb;
  std::uint64_t seed = 0;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("evaluate", "Score lexicon induction with CSLS retrieval");
    cmd->add_option("--multispace", multispace, "Persisted multi-align manifest");
    cmd->add_option("--map", map, "Bilingual map file (with --src and --trg)");
    cmd->add_option("--src", src, "Source embeddings for --map");
    cmd->add_option("--trg", trg, "Target embeddings for --map");
    cmd->add_option("--src-lang", src_lang);
    cmd->add_option("--trg-lang", trg_lang);
    cmd->add_option("--gold", gold,
                    "Gold lexicon; with --multispace give one SRC-TRG=PATH per pair")
        ->required()
        ->delimiter(';');
    cmd->add_option("--ks", ks, "Precision cut-offs")->delimiter(',');
    cmd->add_option("--csls-k", csls_k)->capture_default_str();
    cmd->add_option("--pool-size", pool_size, "Source rows forming the CSLS neighbourhood (0 = all)")
        ->capture_default_str();
    cmd->add_option("--out", out, "CSV evaluation table");
    cmd->add_option("--hits", hits, "CSV of per-query hits at the smallest k");
    cmd->add_option("--seed", seed)->capture_default_str();
    emb.add_to(cmd);
  }

  int run(std::ostream& os, std::ostream& err) {
    checked_ks(ks);
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    if (csls_k < 1) throw ConfigError("--csls-k must be positive");
    if (multispace.empty() == map.empty()) throw ConfigError("give exactly one of --multispace, --map");
    require_output(out);
    require_output(hits);

    Warnings warnings;
    std::vector<PairEvaluation> evals;
    if (!map.empty()) {
      require_file(map, "map");
      require_file(src, "source embeddings");
      require_file(trg, "target embeddings");
      if (gold.size() != 1) throw ConfigError("--map mode takes a single --gold file");
      require_file(gold[0], "gold lexicon");
      parse_norm_steps(emb.normalize);
      const auto w = load_map(map);
      const auto a = emb.load(src, lang_or_stem(src_lang, src));
      const auto b = emb.load(trg, lang_or_stem(trg_lang, trg));
      if (a.dim() != w.dim() || b.dim() != w.dim()) throw DataError("map and embedding dimensions differ");
      const auto lex = read_lexicon(gold[0], a.language(), b.language());
      const std::string hub = w.trg_lang.empty() ? b.language() : w.trg_lang;
      evals.push_back(evaluate_views(a.language() + "-" + b.language(), hub, a,
                                     w.apply(a.vectors()), b, b.vectors(), lex, ks, csls_k,
                                     pool_size, &warnings));
    } else {
      require_file(multispace, "multispace manifest");
      std::vector<std::tuple<std::string, std::string, fs::path>> jobs;
      for (const auto& g : gold) {
        const auto eq = g.find('=');
        const auto dash = g.find('-');
        if (eq == std::string::npos || dash == std::string::npos || dash > eq) {
          throw ConfigError("--gold expects SRC-TRG=PATH, got '" + g + "'");
        }
        jobs.emplace_back(g.substr(0, dash), g.substr(dash + 1, eq - dash - 1), g.substr(eq + 1));
        require_file(std::get<2>(jobs.back()), "gold lexicon");
      }
      const auto ms = load_multispace(multispace);
      for (const auto& [s, t, p] : jobs) {
        if (!ms.contains(s) || !ms.contains(t)) throw ConfigError("pair " + s + "-" + t + " not in multispace");
        const auto view = pair_view(ms, s, t);
        const auto lex = read_lexicon(p, s, t);
        evals.push_back(evaluate_views(s + "-" + t, ms.hub(), ms.space(s), view.source, ms.space(t),
                                       view.target, lex, ks, csls_k, pool_size, &warnings));
      }
    }

    const auto table = evaluation_table(evals, ks, seed);
    std::string hits_csv = "pair,query,hit\n";
    for (const auto& e : evals) {
      const auto& first = e.result.per_query_hits.begin()->second;
      for (std::size_t i = 0; i < first.size(); ++i) {
        hits_csv += e.pair + "," + e.result.evaluated[i] + "," + (first[i] ? "1" : "0") + "\n";
      }
    }
    if (!out.empty()) write_file(out, table.csv());
    if (!hits.empty()) write_file(hits, hits_csv);
    print_warnings(warnings, err);
    os << "seed: " << seed << '\n';
    table.print(os);
    return kExitOk;
  }
};

// ----------------------------------------------------------- triangulate

struct TriangulateCommand {
  std::string src_pivot, pivot_trg, out, src_morph, trg_morph, ignore = "Gender,VerbForm";
  std::string src_lang, pivot_lang, trg_lang;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("triangulate", "Compose src-pivot and pivot-trg lexicons");
    cmd->add_option("--src-pivot", src_pivot)->required();
    cmd->add_option("--pivot-trg", pivot_trg)->required();
    cmd->add_option("--out", out, "Lexicon to write")->required();
    cmd->add_option("--src-morph", src_morph, "Source morph table (enables filtering)");
    cmd->add_option("--trg-morph", trg_morph, "Target morph table (enables filtering)");
    cmd->add_option("--ignore", ignore, "Features ignored by the filter, or none")
        ->capture_default_str();
    cmd->add_option("--src-lang", src_lang);
    cmd->add_option("--pivot-lang", pivot_lang);
    cmd->add_option("--trg-lang", trg_lang);
  }

  int run(std::ostream& os, std::ostream&) {
    require_file(src_pivot, "src-pivot lexicon");
    require_file(pivot_trg, "pivot-trg lexicon");
    if (src_morph.empty() != trg_morph.empty()) {
      throw ConfigError("--src-morph and --trg-morph go together");
    }
    if (!src_morph.empty()) {
      require_file(src_morph, "source morph table");
      require_file(trg_morph, "target morph table");
    }
    require_output(out);
    const auto a = read_lexicon(src_pivot, src_lang, pivot_lang);
    const auto b = read_lexicon(pivot_trg, pivot_lang, trg_lang);
    auto lex = triangulate(a, b);
    const std::size_t before = lex.size();
    if (!src_morph.empty()) {
      lex = morph_filter(lex, read_morph_table(src_morph, src_lang), read_morph_table(trg_morph, trg_lang),
                         parse_feature_list(ignore));
    }
    write_lexicon(lex, out);
    os << "triangulated " << before << " pairs, kept " << lex.size() << " over "
       << lex.sources().size() << " source words\n";
    return kExitOk;
  }
};

// ---------------------------------------------------------- filter-morph

struct FilterMorphCommand {
  std::string lexicon, out, src_morph, trg_morph, ignore = "Gender,VerbForm";

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("filter-morph", "Drop translations with disagreeing tags");
    cmd->add_option("--lexicon", lexicon)->required();
    cmd->add_option("--src-morph", src_morph)->required();
    cmd->add_option("--trg-morph", trg_morph)->required();
    cmd->add_option("--out", out)->required();
    cmd->add_option("--ignore", ignore, "Features ignored by the filter, or none")
        ->capture_default_str();
  }

  int run(std::ostream& os, std::ostream&) {
    require_file(lexicon, "lexicon");
    require_file(src_morph, "source morph table");
    require_file(trg_morph, "target morph table");
    require_output(out);
    const auto lex = read_lexicon(lexicon);
    const auto kept =
        morph_filter(lex, read_morph_table(src_morph), read_morph_table(trg_morph), parse_feature_list(ignore));
    write_lexicon(kept, out);
    os << "kept " << kept.size() << " of " << lex.size() << " pairs\n";
    return kExitOk;
  }
};

// --------------------------------------------------------------- extract

struct ExtractCommand {
  std::string src_tokens, trg_tokens, forward, reverse, out, symmetrized, count_on = "cooccurrence";
  ExtractionOptions opts;
  std::vector<std::size_t> band;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("extract", "Build a lexicon from a word-aligned bitext");
    cmd->add_option("--src-tokens", src_tokens)->required();
    cmd->add_option("--trg-tokens", trg_tokens)->required();
    cmd->add_option("--forward", forward, "Forward Pharaoh alignments")->required();
    cmd->add_option("--reverse", reverse, "Reverse Pharaoh alignments (source-target order)")
        ->required();
    cmd->add_option("--out", out, "Lexicon to write")->required();
    cmd->add_option("--symmetrized", symmetrized, "Write the gdfa alignments here");
    cmd->add_option("--min-count", opts.min_count, "Count must exceed this")->capture_default_str();
    cmd->add_option("--min-prob", opts.min_prob, "Probability must exceed this both ways")
        ->capture_default_str();
    cmd->add_option("--count-on", count_on, "cooccurrence or source-frequency")->capture_default_str();
    cmd->add_option("--band", band, "Keep source ranks in [LO,HI), e.g. 5000,6500")
        ->delimiter(',')
        ->expected(2);
  }

  int run(std::ostream& os, std::ostream&) {
    for (const auto& [p, what] : {std::pair{src_tokens, "source tokens"}, {trg_tokens, "target tokens"},
                                  {forward, "forward alignments"}, {reverse, "reverse alignments"}}) {
      require_file(p, what);
    }
    require_output(out);
    require_output(symmetrized);
    if (count_on == "cooccurrence") {
      opts.count_on = CountThreshold::cooccurrence;
    } else if (count_on == "source-frequency") {
      opts.count_on = CountThreshold::source_frequency;
    } else {
      throw ConfigError("--count-on must be cooccurrence or source-frequency");
    }
    if (opts.min_count < 0 || !(opts.min_prob >= 0.0 && opts.min_prob < 1.0)) {
      throw ConfigError("thresholds out of range");
    }
    if (!band.empty() && band[0] > band[1]) throw ConfigError("--band needs LO <= HI");

    const auto bitext = read_aligned_bitext(src_tokens, trg_tokens, forward, reverse);
    std::vector<Alignment> sym;
    sym.reserve(bitext.sentences.size());
    std::string sym_text;
    for (std::size_t i = 0; i < bitext.sentences.size(); ++i) {
      const auto& s = bitext.sentences[i];
      sym.push_back(symmetrize_gdfa(bitext.forward[i], bitext.reverse[i], s.source.size(), s.target.size()));
      sym_text += format_pharaoh(sym.back()) + "\n";
    }
    auto lex = extract_pairs(count_pairs(bitext, sym), opts);
    const std::size_t extracted = lex.size();
    if (!band.empty()) lex = eval_band(lex, band[0], band[1]);

    write_lexicon(lex, out);
    if (!symmetrized.empty()) write_file(symmetrized, sym_text);
    os << "sentences: " << bitext.sentences.size() << "  extracted pairs: " << extracted
       << "  written: " << lex.size() << " over " << lex.sources().size() << " source words\n";
    return kExitOk;
  }
};

// ------------------------------------------------------------------ gain

struct GainCommand {
  std::string results, out, series;
  std::uint64_t seed = 0;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("gain", "Expected gain of each hub from a P@1 result matrix");
    cmd->add_option("--results", results, "CSV result matrix (pairs x hubs)")->required();
    cmd->add_option("--out", out, "CSV gain report");
    cmd->add_option("--series", series, "Plain data series for plotting");
    cmd->add_option("--seed", seed)->capture_default_str();
  }

  int run(std::ostream& os, std::ostream&) {
    require_file(results, "result matrix");
    require_output(out);
    require_output(series);
    const auto rm = read_result_matrix(results);
    const auto g = expected_gain(rm);

    Table t;
    t.header = {"hub", "overall", "when_best", "best_count", "mu", "gap_to_best", "seed"};
    std::ostringstream plot;
    plot << "# hub overall when_best\n";
    for (std::size_t l = 0; l < g.hubs.size(); ++l) {
      const auto& wb = g.when_best[l];
      t.rows.push_back({text(g.hubs[l]), number(g.overall[l]), wb ? number(*wb) : text("NA"),
                        integer(g.best_counts[l]), number(g.mu[l]), number(g.mu_best - g.mu[l]),
                        integer(static_cast<long long>(seed))});
      plot << g.hubs[l] << ' ' << format_double(g.overall[l]) << ' '
           << (wb ? format_double(*wb) : std::string("NA")) << '\n';
    }
    if (!out.empty()) write_file(out, t.csv());
    if (!series.empty()) write_file(series, plot.str());
    os << "seed: " << seed << "  pairs: " << rm.pairs.size() << "  mu_best: "
       << format_fixed(g.mu_best, 4) << '\n';
    t.print(os);
    return kExitOk;
  }
};

// -------------------------------------------------------------------- gh

struct GhCommand {
  std::string a, b, a_lang, b_lang, out;
  Index sample_n = 5000;
  std::size_t max_pairs = 2'000'000;
  std::uint64_t seed = 0;
  EmbeddingOptions emb;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("gh", "Gromov-Hausdorff proxy between two embedding spaces");
    cmd->add_option("--a", a)->required();
    cmd->add_option("--b", b)->required();
    cmd->add_option("--a-lang", a_lang);
    cmd->add_option("--b-lang", b_lang);
    cmd->add_option("--sample-n", sample_n, "Top words taken from each space")->capture_default_str();
    cmd->add_option("--max-pairs", max_pairs, "Word pairs compared before subsampling")
        ->capture_default_str();
    cmd->add_option("--seed", seed)->capture_default_str();
    cmd->add_option("--out", out, "CSV result");
    emb.add_to(cmd);
  }

  int run(std::ostream& os, std::ostream&) {
    require_file(a, "embeddings --a");
    require_file(b, "embeddings --b");
    require_output(out);
    if (sample_n < 2) throw ConfigError("--sample-n must be at least 2");
    if (max_pairs < 1) throw ConfigError("--max-pairs must be positive");
    parse_norm_steps(emb.normalize);
    const auto x = emb.load(a, lang_or_stem(a_lang, a));
    const auto y = emb.load(b, lang_or_stem(b_lang, b));
    const double d = gh_distance(x, y, sample_n, seed, max_pairs);
    Table t;
    t.header = {"a", "b", "sample_n", "seed", "gh"};
    t.rows.push_back({text(x.language()), text(y.language()), integer(sample_n),
                      integer(static_cast<long long>(seed)), number(d, 6)});
    if (!out.empty()) write_file(out, t.csv());
    t.print(os);
    return kExitOk;
  }
};

// ------------------------------------------------------------- correlate

struct CorrelateCommand {
  std::string data, x, y, results, distances, method = "pearson", out;
  std::uint64_t seed = 0;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "correlate", "Correlate two CSV columns, or per-pair P@1 with hub distances");
    cmd->add_option("--data", data, "CSV with a header row");
    cmd->add_option("--x", x, "Column of --data");
    cmd->add_option("--y", y, "Column of --data");
    cmd->add_option("--results", results, "Result matrix (with --distances)");
    cmd->add_option("--distances", distances, "src,trg,value language distances");
    cmd->add_option("--method", method, "pearson or spearman")->capture_default_str();
    cmd->add_option("--out", out, "CSV result");
    cmd->add_option("--seed", seed)->capture_default_str();
  }

  static std::vector<double> column(const fs::path& path, const std::string& name,
                                    std::vector<double>* other, const std::string& other_name) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
    const auto header = split(trim(line), ',');
    const auto find = [&](const std::string& n) {
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (trim(header[i]) == n) return i;
      }
      throw ConfigError(path.string() + ": no column '" + n + "'");
    };
    const auto ix = find(name);
    const auto iy = find(other_name);
    std::vector<double> xs;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      const auto cells = split(trim(line), ',');
      double vx = 0.0;
      double vy = 0.0;
      if (cells.size() != header.size() || !parse_number(trim(cells[ix]), vx) ||
          !parse_number(trim(cells[iy]), vy)) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed row");
      }
      xs.push_back(vx);
      other->push_back(vy);
    }
    return xs;
  }

  int run(std::ostream& os, std::ostream&) {
    const auto m = parse_correlation_method(method);
    require_output(out);
    Table t;
    if (!data.empty()) {
      if (!results.empty() || !distances.empty()) throw ConfigError("--data excludes --results/--distances");
      if (x.empty() || y.empty()) throw ConfigError("--data needs --x and --y");
      require_file(data, "data file");
      std::vector<double> ys;
      const auto xs = column(data, x, &ys, y);
      const double r = correlate(xs, ys, m);
      t.header = {"x", "y", "method", "n", "r", "seed"};
      t.rows.push_back({text(x), text(y), text(method), integer(static_cast<long long>(xs.size())),
                        number(r, 6), integer(static_cast<long long>(seed))});
    } else {
      if (results.empty() || distances.empty()) {
        throw ConfigError("give --data with --x/--y, or --results with --distances");
      }
      require_file(results, "result matrix");
      require_file(distances, "distance file");
      const auto rm = read_result_matrix(results);
      const auto hc = hub_distance_correlation(rm, load_distances(distances), m);
      t.header = {"pair", "method", "r", "seed"};
      for (const auto& [pair, r] : hc.per_pair) {
        t.rows.push_back({text(pair), text(method), number(r, 6), integer(static_cast<long long>(seed))});
      }
      t.rows.push_back({text("mean"), text(method), number(hc.mean, 6), integer(static_cast<long long>(seed))});
    }
    if (!out.empty()) write_file(out, t.csv());
    t.print(os);
    return kExitOk;
  }
};

// ------------------------------------------------------------- bootstrap

struct Hits {
  std::vector<std::string> keys;
  std::vector<bool> hits;
};

Hits read_hits(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open hits file " + path.string());
  Hits h;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || (line_no == 1 && body == "pair,query,hit")) continue;
    const auto cells = split(body, ',');
    if (cells.size() != 3 || (cells[2] != "0" && cells[2] != "1")) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected pair,query,0|1");
    }
    h.keys.push_back(std::string(cells[0]) + "," + std::string(cells[1]));
    h.hits.push_back(cells[2] == "1");
  }
  return h;
}

struct BootstrapCommand {
  std::string a, b, out;
  int iterations = 1000;
  std::uint64_t seed = 0;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("bootstrap", "Paired bootstrap test over two hits files");
    cmd->add_option("--a", a, "Hits file of system A (from evaluate --hits)")->required();
    cmd->add_option("--b", b, "Hits file of system B")->required();
    cmd->add_option("--iterations", iterations)->capture_default_str();
    cmd->add_option("--seed", seed)->capture_default_str();
    cmd->add_option("--out", out, "CSV result");
  }

  int run(std::ostream& os, std::ostream&) {
    require_file(a, "hits file --a");
    require_file(b, "hits file --b");
    require_output(out);
    if (iterations < 1) throw ConfigError("--iterations must be positive");
    const auto ha = read_hits(a);
    const auto hb = read_hits(b);
    if (ha.keys != hb.keys) throw DataError("hits files list different queries or orders");
    const double p = paired_bootstrap(ha.hits, hb.hits, iterations, seed);
    const auto acc = [](const std::vector<bool>& v) {
      return static_cast<double>(std::count(v.begin(), v.end(), true)) / static_cast<double>(v.size());
    };
    Table t;
    t.header = {"n", "acc_a", "acc_b", "iterations", "seed", "p_value"};
    t.rows.push_back({integer(static_cast<long long>(ha.hits.size())), number(acc(ha.hits)),
                      number(acc(hb.hits)), integer(iterations), integer(static_cast<long long>(seed)),
                      number(p)});
    if (!out.empty()) write_file(out, t.csv());
    t.print(os);
    return kExitOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-lingual embedding alignment and lexicon induction toolkit", "xling"};
  app.require_subcommand(1);

  AlignCommand align;
  MultiAlignCommand multi;
  EvaluateCommand evaluate;
  TriangulateCommand tri;
  FilterMorphCommand filter;
  ExtractCommand extract;
  GainCommand gain;
  GhCommand gh;
  CorrelateCommand corr;
  BootstrapCommand boot;
  align.add_to(app);
  multi.add_to(app);
  evaluate.add_to(app);
  tri.add_to(app);
  filter.add_to(app);
  extract.add_to(app);
  gain.add_to(app);
  gh.add_to(app);
  corr.add_to(app);
  boot.add_to(app);
  std::string config_unused;
  for (auto* sub : app.get_subcommands({})) {
    sub->add_option("--config", config_unused, "key = value file; command-line options win");
  }

  try {
    const auto args = expand_config(raw_args);
    std::vector<char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitConfig;
    }
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "align") return align.run(out, err);
    if (name == "multi-align") return multi.run(out, err);
    if (name == "evaluate") return evaluate.run(out, err);
    if (name == "triangulate") return tri.run(out, err);
    if (name == "filter-morph") return filter.run(out, err);
    if (name == "extract") return extract.run(out, err);
    if (name == "gain") return gain.run(out, err);
    if (name == "gh") return gh.run(out, err);
    if (name == "correlate") return corr.run(out, err);
    if (name == "bootstrap") return boot.run(out, err);
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

int run(int argc, char** argv) {
  return run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace xling::cli
