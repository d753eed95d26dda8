#include "xling/lexicon.hpp"

#include <fstream>

#include "xling/error.hpp"
#include "xling/text.hpp"

namespace xling {

bool Lexicon::add(std::string_view source, std::string_view target) {
  auto it = by_source_.find(source);
  if (it == by_source_.end()) {
    it = by_source_.emplace(std::string(source), std::vector<std::string>{}).first;
    sources_.emplace_back(source);
  } else {
    for (const auto& t : it->second) {
      if (t == target) return false;
    }
  }
  it->second.emplace_back(target);
  entries_.emplace_back(std::string(source), std::string(target));
  return true;
}

bool Lexicon::contains(std::string_view source, std::string_view target) const {
  for (const auto& t : translations(source)) {
    if (t == target) return true;
  }
  return false;
}

bool Lexicon::has_source(std::string_view source) const {
  return by_source_.find(source) != by_source_.end();
}

const std::vector<std::string>& Lexicon::translations(std::string_view source) const {
  static const std::vector<std::string> kNone;
  const auto it = by_source_.find(source);
  return it == by_source_.end() ? kNone : it->second;
}

Lexicon read_lexicon(const std::filesystem::path& path, std::string src_lang,
                     std::string trg_lang) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open lexicon " + path.string());
  Lexicon lex(std::move(src_lang), std::move(trg_lang));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    if (fields.size() < 2) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected a source and a target word");
    }
    lex.add(fields[0], fields[1]);
  }
  return lex;
}

void write_lexicon(const Lexicon& lex, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  for (const auto& [s, t] : lex.entries()) out << s << '\t' << t << '\n';
}

Lexicon triangulate(const Lexicon& src_pivot, const Lexicon& pivot_trg) {
  if (!src_pivot.trg_lang().empty() && !pivot_trg.src_lang().empty() &&
      src_pivot.trg_lang() != pivot_trg.src_lang()) {
    throw DataError("triangulate: pivot language mismatch (" + src_pivot.trg_lang() + " vs " +
                    pivot_trg.src_lang() + ")");
  }
  Lexicon out(src_pivot.src_lang(), pivot_trg.trg_lang());
  for (const auto& source : src_pivot.sources()) {
    for (const auto& pivot : src_pivot.translations(source)) {
      for (const auto& target : pivot_trg.translations(pivot)) out.add(source, target);
    }
  }
  return out;
}

LexiconSplit split_lexicon(const Lexicon& lex,
                           const std::unordered_map<std::string, Partition>& assignment) {
  LexiconSplit out{Lexicon(lex.src_lang(), lex.trg_lang()),
                   Lexicon(lex.src_lang(), lex.trg_lang())};
  for (const auto& [s, t] : lex.entries()) {
    const auto it = assignment.find(s);
    const bool test = it != assignment.end() && it->second == Partition::test;
    (test ? out.test : out.train).add(s, t);
  }
  return out;
}

}  // namespace xling
