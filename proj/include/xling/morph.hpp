#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xling/lexicon.hpp"

namespace xling {

/// One morphological reading of a word form (Universal Dependencies features).
struct MorphAnalysis {
  std::string form;
  std::string lemma;
  std::string upos;
  std::map<std::string, std::string> feats;

  friend bool operator==(const MorphAnalysis&, const MorphAnalysis&) = default;
};

/// Parses "Case=Nom|Number=Sing"; "_" or empty means no features.
std::map<std::string, std::string> parse_feats(std::string_view text);

/// Per-language analyses keyed by form; a form may have several readings.
class MorphTable {
 public:
  MorphTable() = default;
  explicit MorphTable(std::string language) : language_(std::move(language)) {}

  const std::string& language() const noexcept { return language_; }
  /// Throws DataError on empty feature names or values.
  void add(MorphAnalysis analysis);
  /// Readings of `form`, or nullptr when it has none.
  const std::vector<MorphAnalysis>* find(const std::string& form) const;
  std::size_t size() const noexcept { return analyses_.size(); }

 private:
  std::string language_;
  std::unordered_map<std::string, std::vector<MorphAnalysis>> analyses_;
};

/// Reads "form<TAB>lemma<TAB>upos<TAB>Feat=Val|Feat=Val" lines ("_" for none).
MorphTable read_morph_table(const std::filesystem::path& path, std::string language = {});

/// Name under which the UPOS tag takes part in comparisons as a virtual feature.
inline constexpr std::string_view kUposFeature = "UPOS";

std::set<std::string> default_ignored_features();

/// Outcome of comparing one source form against one candidate translation.
struct TagComparison {
  bool exact = false;      ///< some reading pair shares features and agrees on all of them
  bool disagrees = false;  ///< every reading pair conflicts on a shared feature
};

TagComparison compare_tags(const std::vector<MorphAnalysis>& source,
                           const std::vector<MorphAnalysis>& target,
                           const std::set<std::string>& ignored);

/// Drops triangulated translations whose tags disagree with the source form.
///
/// Candidates of a source word are grouped by target lemma. Inside a group that
/// holds an exact match, only exact matches survive; otherwise only the members
/// that disagree are removed. Words without analyses pass through unchanged, and
/// entry order is preserved.
Lexicon morph_filter(const Lexicon& lex, const MorphTable& src_tags, const MorphTable& trg_tags,
                     const std::set<std::string>& ignored = default_ignored_features());

}  // namespace xling
