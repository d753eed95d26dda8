#include "xling/morph.hpp"

#include <fstream>
#include <numeric>

#include "xling/error.hpp"
#include "xling/text.hpp"

namespace xling {

std::map<std::string, std::string> parse_feats(std::string_view text) {
  std::map<std::string, std::string> feats;
  text = trim(text);
  if (text.empty() || text == "_") return feats;
  for (const auto item : split(text, '|')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == item.size()) {
      throw DataError("malformed feature '" + std::string(item) + "'");
    }
    feats.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
  }
  return feats;
}

void MorphTable::add(MorphAnalysis analysis) {
  for (const auto& [name, value] : analysis.feats) {
    if (name.empty() || value.empty()) {
      throw DataError("empty feature name or value for form '" + analysis.form + "'");
    }
  }
  auto& readings = analyses_[analysis.form];
  for (const auto& r : readings) {
    if (r == analysis) return;
  }
  readings.push_back(std::move(analysis));
}

const std::vector<MorphAnalysis>* MorphTable::find(const std::string& form) const {
  const auto it = analyses_.find(form);
  return it == analyses_.end() || it->second.empty() ? nullptr : &it->second;
}

MorphTable read_morph_table(const std::filesystem::path& path, std::string language) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open morph table " + path.string());
  MorphTable table(std::move(language));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto cols = split(line, '\t');
    if (cols.size() != 4 || cols[0].empty()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected form, lemma, upos and features separated by tabs");
    }
    try {
      table.add(MorphAnalysis{std::string(cols[0]), std::string(cols[1]), std::string(cols[2]),
                              parse_feats(cols[3])});
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return table;
}

std::set<std::string> default_ignored_features() { return {"Gender", "VerbForm"}; }

namespace {

bool has_upos(const MorphAnalysis& a) { return !a.upos.empty() && a.upos != "_"; }

struct PairOutcome {
  std::size_t shared = 0;
  std::size_t conflicts = 0;
};

PairOutcome compare_pair(const MorphAnalysis& s, const MorphAnalysis& t,
                         const std::set<std::string>& ignored) {
  PairOutcome out;
  if (has_upos(s) && has_upos(t) && !ignored.contains(std::string(kUposFeature))) {
    ++out.shared;
    if (s.upos != t.upos) ++out.conflicts;
  }
  for (const auto& [name, value] : s.feats) {
    if (ignored.contains(name)) continue;
    const auto it = t.feats.find(name);
    if (it == t.feats.end()) continue;
    ++out.shared;
    if (it->second != value) ++out.conflicts;
  }
  return out;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

}  // namespace

TagComparison compare_tags(const std::vector<MorphAnalysis>& source,
                           const std::vector<MorphAnalysis>& target,
                           const std::set<std::string>& ignored) {
  TagComparison cmp;
  bool all_conflict = !source.empty() && !target.empty();
  for (const auto& a : source) {
    for (const auto& b : target) {
      const auto pair = compare_pair(a, b, ignored);
      if (pair.shared > 0 && pair.conflicts == 0) cmp.exact = true;
      if (pair.conflicts == 0) all_conflict = false;
    }
  }
  cmp.disagrees = all_conflict;
  return cmp;
}

Lexicon morph_filter(const Lexicon& lex, const MorphTable& src_tags, const MorphTable& trg_tags,
                     const std::set<std::string>& ignored) {
  Lexicon out(lex.src_lang(), lex.trg_lang());
  std::unordered_map<std::string, std::vector<bool>> keep_by_source;

  for (const auto& source : lex.sources()) {
    const auto& targets = lex.translations(source);
    std::vector<bool> keep(targets.size(), true);
    const auto* src_readings = src_tags.find(source);
    if (src_readings) {
      // Candidates sharing any lemma fall into one group.
      const std::size_t n = targets.size();
      std::vector<std::size_t> parent(n);
      std::iota(parent.begin(), parent.end(), std::size_t{0});
      std::vector<const std::vector<MorphAnalysis>*> readings(n);
      std::unordered_map<std::string, std::size_t> lemma_owner;
      for (std::size_t i = 0; i < n; ++i) {
        readings[i] = trg_tags.find(targets[i]);
        if (!readings[i]) continue;
        for (const auto& r : *readings[i]) {
          const auto [it, inserted] = lemma_owner.emplace(r.lemma, i);
          if (!inserted) parent[find_root(parent, i)] = find_root(parent, it->second);
        }
      }

      std::vector<TagComparison> cmp(n);
      std::unordered_map<std::size_t, bool> group_has_exact;
      for (std::size_t i = 0; i < n; ++i) {
        if (!readings[i]) continue;
        cmp[i] = compare_tags(*src_readings, *readings[i], ignored);
        if (cmp[i].exact) group_has_exact[find_root(parent, i)] = true;
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (!readings[i]) continue;
        const bool exact_in_group = group_has_exact.contains(find_root(parent, i));
        keep[i] = exact_in_group ? cmp[i].exact : !cmp[i].disagrees;
      }
    }
    keep_by_source.emplace(source, std::move(keep));
  }

  // Re-walk entries to keep the original interleaving.
  std::unordered_map<std::string, std::size_t> cursor;
  for (const auto& [s, t] : lex.entries()) {
    const std::size_t pos = cursor[s]++;
    if (keep_by_source.at(s)[pos]) out.add(s, t);
  }
  return out;
}

}  // namespace xling
