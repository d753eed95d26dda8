#include <doctest.h>

#include <random>
#include <set>

#include "support.hpp"
#include "xling/error.hpp"
#include "xling/lexicon.hpp"

using namespace xling;
using xling::test::TempDir;
using xling::test::write_text;

namespace {

Lexicon make(std::initializer_list<WordPair> pairs, std::string src = {}, std::string trg = {}) {
  Lexicon lex(std::move(src), std::move(trg));
  for (const auto& [s, t] : pairs) lex.add(s, t);
  return lex;
}

}  // namespace

TEST_CASE("read_lexicon keeps file order and multiple targets") {
  TempDir dir;
  write_text(dir / "l.txt", "cat chat\ncat félin\n");
  const auto lex = read_lexicon(dir / "l.txt", "en", "fr");
  CHECK(lex.entries() == std::vector<WordPair>{{"cat", "chat"}, {"cat", "félin"}});
  CHECK(lex.translations("cat") == std::vector<std::string>{"chat", "félin"});
  CHECK(lex.src_lang() == "en");
}

TEST_CASE("read_lexicon deduplicates and skips blank lines") {
  TempDir dir;
  write_text(dir / "l.txt", "cat chat\n\ncat\tchat\ndog chien\n");
  const auto lex = read_lexicon(dir / "l.txt");
  CHECK(lex.size() == 2);
  CHECK(lex.contains("dog", "chien"));
}

TEST_CASE("read_lexicon rejects lines with one field") {
  TempDir dir;
  write_text(dir / "l.txt", "cat chat\nlonely\n");
  CHECK_THROWS_AS(read_lexicon(dir / "l.txt"), DataError);
  CHECK_THROWS_AS(read_lexicon(dir / "nope.txt"), ConfigError);
}

TEST_CASE("write then read is byte-identical for a tab-separated file") {
  TempDir dir;
  const std::string content = "a\tx\na\ty\nb\tz\nčaj\tчай\n";
  write_text(dir / "in.txt", content);
  write_lexicon(read_lexicon(dir / "in.txt"), dir / "out.txt");
  CHECK(test::read_text(dir / "out.txt") == content);
}

TEST_CASE("triangulate reproduces the trabalho example") {
  const auto pt_en = read_lexicon(test::fixture("pt-en.txt"), "pt", "en");
  const auto en_cs = read_lexicon(test::fixture("en-cs.txt"), "en", "cs");
  const auto pt_cs = triangulate(pt_en, en_cs);
  CHECK(pt_cs.src_lang() == "pt");
  CHECK(pt_cs.trg_lang() == "cs");
  CHECK(pt_cs.translations("trabalho") ==
        std::vector<std::string>{"prácu", "zamestnanie", "praca", "práca", "dielo", "práce",
                                 "pracovné"});
}

TEST_CASE("triangulate edge cases") {
  CHECK(triangulate(Lexicon{}, make({{"e", "t"}})).empty());
  const auto lex = triangulate(make({{"s", "e1"}, {"s", "e2"}}), make({{"e1", "t"}, {"e2", "t"}}));
  CHECK(lex.entries() == std::vector<WordPair>{{"s", "t"}});
  CHECK_THROWS_AS(triangulate(make({{"s", "e"}}, "pt", "en"), make({{"e", "t"}}, "de", "cs")),
                  DataError);
  CHECK_NOTHROW(triangulate(make({{"s", "e"}}, "pt", ""), make({{"e", "t"}}, "en", "cs")));
}

TEST_CASE("triangulate equals a brute-force relational join") {
  std::mt19937_64 gen(21);
  std::uniform_int_distribution<int> pick(0, 5);
  for (int trial = 0; trial < 200; ++trial) {
    Lexicon a;
    Lexicon b;
    for (int k = 0; k < 10; ++k) {
      a.add("s" + std::to_string(pick(gen)), "e" + std::to_string(pick(gen)));
      b.add("e" + std::to_string(pick(gen)), "t" + std::to_string(pick(gen)));
    }
    std::set<WordPair> join;
    for (const auto& [s, e] : a.entries()) {
      for (const auto& [e2, t] : b.entries()) {
        if (e == e2) join.emplace(s, t);
      }
    }
    const auto tri = triangulate(a, b);
    CHECK(std::set<WordPair>(tri.entries().begin(), tri.entries().end()) == join);
    CHECK(tri.size() == join.size());
    // Sources appear in src_pivot order.
    std::vector<std::string> expected;
    for (const auto& s : a.sources()) {
      if (tri.has_source(s)) expected.push_back(s);
    }
    CHECK(tri.sources() == expected);
  }
}

TEST_CASE("split_lexicon partitions by source type") {
  const auto lex = make({{"a", "x"}, {"a", "y"}, {"b", "z"}});
  auto parts = split_lexicon(lex, {{"a", Partition::test}, {"b", Partition::train}});
  CHECK(parts.test.entries() == std::vector<WordPair>{{"a", "x"}, {"a", "y"}});
  CHECK(parts.train.entries() == std::vector<WordPair>{{"b", "z"}});

  parts = split_lexicon(lex, {});
  CHECK(parts.train == lex);
  CHECK(parts.test.empty());

  parts = split_lexicon(lex, {{"c", Partition::test}});
  CHECK(parts.train == lex);
  CHECK(parts.test.empty());
}

TEST_CASE("split_lexicon is a partition on random inputs") {
  std::mt19937_64 gen(4);
  std::uniform_int_distribution<int> pick(0, 9);
  for (int trial = 0; trial < 100; ++trial) {
    Lexicon lex;
    std::unordered_map<std::string, Partition> assign;
    for (int k = 0; k < 20; ++k) lex.add("s" + std::to_string(pick(gen)), "t" + std::to_string(pick(gen)));
    for (int k = 0; k < 6; ++k) {
      assign["s" + std::to_string(pick(gen))] = pick(gen) % 2 ? Partition::test : Partition::train;
    }
    const auto parts = split_lexicon(lex, assign);
    CHECK(parts.train.size() + parts.test.size() == lex.size());
    for (const auto& [s, t] : lex.entries()) {
      CHECK(parts.train.contains(s, t) != parts.test.contains(s, t));
    }
    for (const auto& s : parts.train.sources()) CHECK_FALSE(parts.test.has_source(s));
  }
}
