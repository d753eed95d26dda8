#include <doctest.h>

#include <sstream>

#include "../tools/cli.hpp"
#include "support.hpp"
#include "xling/lexicon.hpp"
#include "xling/mapping.hpp"
#include "xling/text.hpp"

using namespace xling;
using xling::test::read_text;
using xling::test::TempDir;
using xling::test::write_text;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome xling_run(std::vector<std::string> args) {
  args.insert(args.begin(), "xling");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string str(const std::filesystem::path& p) { return p.string(); }

constexpr Index kWords = 200;
constexpr Index kAnchors = 25;

/// aa.vec and bb.vec (bb a rotation of aa) plus a gold lexicon aa-bb.txt.
void write_pair(const TempDir& dir, std::uint64_t seed = 3) {
  const auto spaces = test::planted_languages({"aa", "bb"}, kWords, 16, kAnchors, seed);
  save_embeddings(*spaces[0], dir / "aa.vec");
  save_embeddings(*spaces[1], dir / "bb.vec");
  write_lexicon(test::planted_gold("aa", "bb", kWords, kAnchors), dir / "aa-bb.txt");
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(xling_run({"--help"}).code == cli::kExitOk);
  CHECK(xling_run({}).code == cli::kExitConfig);
  CHECK(xling_run({"frobnicate"}).code == cli::kExitConfig);
  CHECK(xling_run({"align", "--src", "x"}).code == cli::kExitConfig);
  CHECK(xling_run({"gain", "--results", "/nonexistent.csv"}).code == cli::kExitConfig);
}

TEST_CASE("align recovers a planted rotation and writes its report") {
  TempDir dir;
  write_pair(dir);
  const auto r = xling_run({"align", "--src", str(dir / "aa.vec"), "--trg", str(dir / "bb.vec"),
                            "--out-map", str(dir / "w.txt"), "--report", str(dir / "rep.txt"),
                            "--gold", str(dir / "aa-bb.txt"), "--seed", "17"});
  REQUIRE(r.code == cli::kExitOk);
  const auto report = read_text(dir / "rep.txt");
  CHECK(report.find("source = aa\n") != std::string::npos);
  CHECK(report.find("seed = 17\n") != std::string::npos);
  CHECK(report.find("seed_size = 25\n") != std::string::npos);
  CHECK(report.find("P@1 = 1\n") != std::string::npos);
  CHECK(report.find("iteration,dictionary_size,induced_size,objective\n") != std::string::npos);
  const auto w = load_map(dir / "w.txt");
  CHECK(w.src_lang == "aa");
  CHECK(w.trg_lang == "bb");
  CHECK(w.is_orthogonal());
  CHECK(r.out.find("seed: 17") != std::string::npos);

  // Same inputs, same bytes.
  REQUIRE(xling_run({"align", "--src", str(dir / "aa.vec"), "--trg", str(dir / "bb.vec"),
                     "--out-map", str(dir / "w2.txt"), "--report", str(dir / "rep2.txt"),
                     "--gold", str(dir / "aa-bb.txt"), "--seed", "17"})
              .code == cli::kExitOk);
  CHECK(read_text(dir / "w.txt") == read_text(dir / "w2.txt"));
  CHECK(read_text(dir / "rep.txt") == read_text(dir / "rep2.txt"));
}

TEST_CASE("align of a space onto itself writes the identity") {
  TempDir dir;
  write_pair(dir);
  REQUIRE(xling_run({"align", "--src", str(dir / "aa.vec"), "--trg", str(dir / "aa.vec"),
                     "--trg-lang", "aa2", "--out-map", str(dir / "w.txt")})
              .code == cli::kExitOk);
  const auto w = load_map(dir / "w.txt");
  CHECK((w.w - Matrix::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("align input errors") {
  TempDir dir;
  write_pair(dir);
  const auto missing = xling_run({"align", "--src", str(dir / "none.vec"), "--trg", str(dir / "bb.vec"),
                                  "--out-map", str(dir / "w.txt")});
  CHECK(missing.code == cli::kExitConfig);
  CHECK_FALSE(std::filesystem::exists(dir / "w.txt"));
  write_text(dir / "bad.vec", "2 3\na 1 2 3\nb 1 2\n");
  CHECK(xling_run({"align", "--src", str(dir / "bad.vec"), "--trg", str(dir / "bb.vec"),
                   "--out-map", str(dir / "w.txt")})
            .code == cli::kExitData);
  CHECK(xling_run({"align", "--src", str(dir / "aa.vec"), "--trg", str(dir / "bb.vec"),
                   "--out-map", str(dir / "w.txt"), "--max-iters", "0"})
            .code == cli::kExitConfig);
  CHECK(xling_run({"align", "--src", str(dir / "aa.vec"), "--trg", str(dir / "bb.vec"),
                   "--out-map", str(dir / "nodir" / "w.txt")})
            .code == cli::kExitConfig);
  CHECK_FALSE(std::filesystem::exists(dir / "w.txt"));
}

TEST_CASE("config files supply options and the command line wins") {
  TempDir dir;
  write_pair(dir);
  write_text(dir / "run.cfg", "# shared settings\nsrc = " + str(dir / "aa.vec") + "\ntrg = " +
                                  str(dir / "bb.vec") + "\nmax_iters = 0\nseed = 5\n");
  // max_iters = 0 from the file is invalid ...
  CHECK(xling_run({"align", "--config", str(dir / "run.cfg"), "--out-map", str(dir / "w.txt")}).code ==
        cli::kExitConfig);
  // ... unless the command line overrides it.
  const auto ok = xling_run({"align", "--config", str(dir / "run.cfg"), "--out-map", str(dir / "w.txt"),
                             "--max-iters", "3", "--report", str(dir / "r.txt")});
  CHECK(ok.code == cli::kExitOk);
  CHECK(read_text(dir / "r.txt").find("seed = 5\n") != std::string::npos);
  CHECK(xling_run({"align", "--config", str(dir / "absent.cfg")}).code == cli::kExitConfig);
  write_text(dir / "broken.cfg", "no equals sign\n");
  CHECK(xling_run({"align", "--config", str(dir / "broken.cfg")}).code == cli::kExitConfig);
}

TEST_CASE("expand_config inserts keys after the subcommand") {
  TempDir dir;
  write_text(dir / "c.cfg", "min_count = 3\nout = x.txt\n");
  const auto args =
      cli::expand_config({"xling", "extract", "--config", str(dir / "c.cfg"), "--out", "y.txt"});
  CHECK(args == std::vector<std::string>{"xling", "extract", "--min-count=3", "--config",
                                         str(dir / "c.cfg"), "--out", "y.txt"});
}

TEST_CASE("multi-align then evaluate") {
  TempDir dir;
  const auto spaces = test::planted_languages({"aa", "bb", "cc"}, kWords, 16, kAnchors, 4);
  for (const auto& s : spaces) save_embeddings(*s, dir / (s->language() + ".vec"));
  write_lexicon(test::planted_gold("aa", "cc", kWords, kAnchors), dir / "aa-cc.txt");
  write_text(dir / "m.txt", "hub = bb\nlang.aa = aa.vec\nlang.bb = bb.vec\nlang.cc = cc.vec\n");
  const auto r = xling_run({"multi-align", "--manifest", str(dir / "m.txt"), "--out-dir", str(dir / "ms")});
  REQUIRE(r.code == cli::kExitOk);
  const auto report = read_text(dir / "ms" / "report.csv");
  CHECK(report.starts_with("language,hub,seed_strategy,seed_size,iterations,dictionary_size,converged,seed\n"));
  CHECK(std::filesystem::exists(dir / "ms" / "map.aa.txt"));

  const auto e = xling_run({"evaluate", "--multispace", str(dir / "ms" / "manifest.txt"), "--gold",
                            "aa-cc=" + str(dir / "aa-cc.txt"), "--out", str(dir / "eval.csv"),
                            "--hits", str(dir / "hits.csv"), "--seed", "9"});
  REQUIRE(e.code == cli::kExitOk);
  const auto table = read_text(dir / "eval.csv");
  CHECK(table.starts_with("pair,hub,P@1,P@5,P@10,n_evaluated,n_skipped_oov,seed\n"));
  CHECK(table.find("aa-cc,bb,1,1,1,175,0,9\n") != std::string::npos);
  const auto hits = read_text(dir / "hits.csv");
  CHECK(hits.starts_with("pair,query,hit\naa-cc,aa_w25,1\n"));

  // Hub override.
  CHECK(xling_run({"multi-align", "--manifest", str(dir / "m.txt"), "--out-dir", str(dir / "ms2"),
                   "--hub", "aa"})
            .code == cli::kExitOk);
  CHECK(read_text(dir / "ms2" / "manifest.txt").find("hub = aa\n") != std::string::npos);
  CHECK(xling_run({"multi-align", "--manifest", str(dir / "m.txt"), "--out-dir", str(dir / "ms3"),
                   "--hub", "zz"})
            .code == cli::kExitConfig);

  // Bad gold argument, unknown pair.
  CHECK(xling_run({"evaluate", "--multispace", str(dir / "ms" / "manifest.txt"), "--gold",
                   str(dir / "aa-cc.txt")})
            .code == cli::kExitConfig);
  CHECK(xling_run({"evaluate", "--multispace", str(dir / "ms" / "manifest.txt"), "--gold",
                   "aa-zz=" + str(dir / "aa-cc.txt")})
            .code == cli::kExitConfig);
  CHECK(xling_run({"evaluate", "--gold", "aa-cc=" + str(dir / "aa-cc.txt")}).code == cli::kExitConfig);
}

TEST_CASE("evaluate with a bilingual map and bootstrap over its hits") {
  TempDir dir;
  write_pair(dir);
  REQUIRE(xling_run({"align", "--src", str(dir / "aa.vec"), "--trg", str(dir / "bb.vec"),
                     "--out-map", str(dir / "w.txt")})
              .code == cli::kExitOk);
  const auto e = xling_run({"evaluate", "--map", str(dir / "w.txt"), "--src", str(dir / "aa.vec"),
                            "--trg", str(dir / "bb.vec"), "--gold", str(dir / "aa-bb.txt"), "--ks",
                            "1,5", "--hits", str(dir / "h.csv"), "--out", str(dir / "e.csv")});
  REQUIRE(e.code == cli::kExitOk);
  CHECK(read_text(dir / "e.csv").find("aa-bb,bb,1,1,175,0,0\n") != std::string::npos);

  const auto b = xling_run({"bootstrap", "--a", str(dir / "h.csv"), "--b", str(dir / "h.csv"),
                            "--out", str(dir / "b.csv")});
  REQUIRE(b.code == cli::kExitOk);
  CHECK(read_text(dir / "b.csv") == "n,acc_a,acc_b,iterations,seed,p_value\n175,1,1,1000,0,1\n");

  write_text(dir / "other.csv", "pair,query,hit\naa-bb,x,1\n");
  CHECK(xling_run({"bootstrap", "--a", str(dir / "h.csv"), "--b", str(dir / "other.csv")}).code ==
        cli::kExitData);
  write_text(dir / "malformed.csv", "aa-bb,x,yes\n");
  CHECK(xling_run({"bootstrap", "--a", str(dir / "malformed.csv"), "--b", str(dir / "malformed.csv")})
            .code == cli::kExitData);
  write_text(dir / "empty.csv", "");
  CHECK(xling_run({"bootstrap", "--a", str(dir / "empty.csv"), "--b", str(dir / "empty.csv")}).code ==
        cli::kExitData);
  // Large k is clamped to the vocabulary and reported as NA.
  const auto big = xling_run({"evaluate", "--map", str(dir / "w.txt"), "--src", str(dir / "aa.vec"),
                              "--trg", str(dir / "bb.vec"), "--gold", str(dir / "aa-bb.txt"), "--ks",
                              "1,5000", "--out", str(dir / "big.csv")});
  REQUIRE(big.code == cli::kExitOk);
  CHECK(read_text(dir / "big.csv").find("aa-bb,bb,1,NA,") != std::string::npos);
}

TEST_CASE("triangulate and filter-morph reproduce the Greek-Italian table") {
  TempDir dir;
  const auto r = xling_run({"triangulate", "--src-pivot", str(test::fixture("el-en.txt")),
                            "--pivot-trg", str(test::fixture("en-it.txt")), "--out", str(dir / "t.txt"),
                            "--src-morph", str(test::fixture("el.morph")), "--trg-morph",
                            str(test::fixture("it.morph"))});
  REQUIRE(r.code == cli::kExitOk);
  const auto filtered = read_lexicon(dir / "t.txt");
  CHECK(filtered.size() == 7);
  CHECK(filtered.translations("ειρηνικά") == std::vector<std::string>{"pacifici"});

  REQUIRE(xling_run({"triangulate", "--src-pivot", str(test::fixture("el-en.txt")), "--pivot-trg",
                     str(test::fixture("en-it.txt")), "--out", str(dir / "raw.txt")})
              .code == cli::kExitOk);
  CHECK(read_lexicon(dir / "raw.txt").size() == 12);
  REQUIRE(xling_run({"filter-morph", "--lexicon", str(dir / "raw.txt"), "--src-morph",
                     str(test::fixture("el.morph")), "--trg-morph", str(test::fixture("it.morph")),
                     "--out", str(dir / "f.txt")})
              .code == cli::kExitOk);
  CHECK(read_text(dir / "f.txt") == read_text(dir / "t.txt"));

  // Only one morph table is a configuration error.
  CHECK(xling_run({"triangulate", "--src-pivot", str(test::fixture("el-en.txt")), "--pivot-trg",
                   str(test::fixture("en-it.txt")), "--out", str(dir / "x.txt"), "--src-morph",
                   str(test::fixture("el.morph"))})
            .code == cli::kExitConfig);
  write_text(dir / "bad.txt", "lonely\n");
  CHECK(xling_run({"filter-morph", "--lexicon", str(dir / "bad.txt"), "--src-morph",
                   str(test::fixture("el.morph")), "--trg-morph", str(test::fixture("it.morph")),
                   "--out", str(dir / "y.txt")})
            .code == cli::kExitData);
  CHECK_FALSE(std::filesystem::exists(dir / "y.txt"));
}

TEST_CASE("extract") {
  TempDir dir;
  std::string src;
  std::string trg;
  std::string align;
  for (int i = 0; i < 6; ++i) {
    src += "six\n";
    trg += "seis\n";
    align += "0-0\n";
  }
  write_text(dir / "s.txt", src);
  write_text(dir / "t.txt", trg);
  write_text(dir / "f.txt", align);
  write_text(dir / "r.txt", align);
  const auto base = std::vector<std::string>{"extract", "--src-tokens", str(dir / "s.txt"),
                                             "--trg-tokens", str(dir / "t.txt"), "--forward",
                                             str(dir / "f.txt"), "--reverse", str(dir / "r.txt")};
  auto args = base;
  args.insert(args.end(), {"--out", str(dir / "lex.txt"), "--symmetrized", str(dir / "sym.txt")});
  REQUIRE(xling_run(args).code == cli::kExitOk);
  CHECK(read_text(dir / "lex.txt") == "six\tseis\n");
  CHECK(read_text(dir / "sym.txt") == align);

  args = base;
  args.insert(args.end(), {"--out", str(dir / "lex2.txt"), "--min-count", "6"});
  REQUIRE(xling_run(args).code == cli::kExitOk);
  CHECK(read_text(dir / "lex2.txt").empty());

  args = base;
  args.insert(args.end(), {"--out", str(dir / "x.txt"), "--count-on", "sentences"});
  CHECK(xling_run(args).code == cli::kExitConfig);

  write_text(dir / "bad.txt", "0-9\n0-0\n0-0\n0-0\n0-0\n0-0\n");
  args = base;
  args[6] = str(dir / "bad.txt");
  args.insert(args.end(), {"--out", str(dir / "x.txt")});
  CHECK(xling_run(args).code == cli::kExitData);
  CHECK_FALSE(std::filesystem::exists(dir / "x.txt"));
}

TEST_CASE("gain") {
  TempDir dir;
  write_text(dir / "r.csv", "pair,en,de\na-b,10,20\n");
  const auto r = xling_run({"gain", "--results", str(dir / "r.csv"), "--out", str(dir / "g.csv"),
                            "--series", str(dir / "s.txt"), "--seed", "3"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(read_text(dir / "g.csv") ==
        "hub,overall,when_best,best_count,mu,gap_to_best,seed\n"
        "en,-5,NA,0,10,10,3\n"
        "de,5,5,1,20,0,3\n");
  CHECK(read_text(dir / "s.txt") == "# hub overall when_best\nen -5 NA\nde 5 5\n");
  write_text(dir / "bad.csv", "pair,en\na-b,200\n");
  CHECK(xling_run({"gain", "--results", str(dir / "bad.csv")}).code == cli::kExitData);
}

TEST_CASE("gh") {
  TempDir dir;
  write_pair(dir);
  const auto r = xling_run({"gh", "--a", str(dir / "aa.vec"), "--b", str(dir / "bb.vec"),
                            "--sample-n", "50", "--out", str(dir / "gh.csv")});
  REQUIRE(r.code == cli::kExitOk);
  const auto csv = read_text(dir / "gh.csv");
  CHECK(csv.starts_with("a,b,sample_n,seed,gh\naa,bb,50,0,"));
  double value = 1.0;
  CHECK(parse_number(std::string_view(csv).substr(csv.rfind(',') + 1, csv.size() - csv.rfind(',') - 2), value));
  CHECK(value < 1e-9);
  CHECK(xling_run({"gh", "--a", str(dir / "aa.vec"), "--b", str(dir / "bb.vec"), "--sample-n", "5000"})
            .code == cli::kExitConfig);
}

TEST_CASE("correlate") {
  TempDir dir;
  write_text(dir / "d.csv", "gh,p1\n1,30\n2,20\n3,10\n");
  const auto r = xling_run({"correlate", "--data", str(dir / "d.csv"), "--x", "gh", "--y", "p1",
                            "--method", "spearman", "--out", str(dir / "c.csv")});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(read_text(dir / "c.csv") == "x,y,method,n,r,seed\ngh,p1,spearman,3,-1,0\n");
  CHECK(xling_run({"correlate", "--data", str(dir / "d.csv"), "--x", "gh", "--y", "zz"}).code ==
        cli::kExitConfig);
  write_text(dir / "const.csv", "gh,p1\n1,5\n2,5\n");
  CHECK(xling_run({"correlate", "--data", str(dir / "const.csv"), "--x", "gh", "--y", "p1"}).code ==
        cli::kExitData);

  write_text(dir / "rm.csv", "pair,h1,h2,h3\na-b,30,20,10\n");
  write_text(dir / "dist.csv", "a,h1,1\na,h2,2\na,h3,3\nb,h1,1\nb,h2,1\nb,h3,1\n");
  const auto h = xling_run({"correlate", "--results", str(dir / "rm.csv"), "--distances",
                            str(dir / "dist.csv"), "--out", str(dir / "h.csv")});
  REQUIRE(h.code == cli::kExitOk);
  CHECK(read_text(dir / "h.csv") == "pair,method,r,seed\na-b,pearson,-1,0\nmean,pearson,-1,0\n");
  CHECK(xling_run({"correlate", "--results", str(dir / "rm.csv")}).code == cli::kExitConfig);
  CHECK(xling_run({"correlate", "--data", str(dir / "d.csv"), "--x", "gh", "--y", "p1", "--method",
                   "kendall"})
            .code == cli::kExitConfig);
}
