#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace xling {

using WordPair = std::pair<std::string, std::string>;

/// Ordered source->target translation multimap without duplicate pairs.
/// Entries keep insertion order; translations(s) keeps first-insertion order.
class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::string src_lang, std::string trg_lang)
      : src_lang_(std::move(src_lang)), trg_lang_(std::move(trg_lang)) {}

  const std::string& src_lang() const noexcept { return src_lang_; }
  const std::string& trg_lang() const noexcept { return trg_lang_; }

  /// Returns false (and changes nothing) when the pair is already present.
  bool add(std::string_view source, std::string_view target);
  bool contains(std::string_view source, std::string_view target) const;

  const std::vector<WordPair>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// Distinct source words in first-appearance order.
  const std::vector<std::string>& sources() const noexcept { return sources_; }
  bool has_source(std::string_view source) const;
  /// Targets of `source` in insertion order (empty if absent).
  const std::vector<std::string>& translations(std::string_view source) const;

  friend bool operator==(const Lexicon& a, const Lexicon& b) {
    return a.src_lang_ == b.src_lang_ && a.trg_lang_ == b.trg_lang_ && a.entries_ == b.entries_;
  }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::string src_lang_;
  std::string trg_lang_;
  std::vector<WordPair> entries_;
  std::vector<std::string> sources_;
  std::unordered_map<std::string, std::vector<std::string>, Hash, std::equal_to<>> by_source_;
};

/// One pair per line, whitespace separated; blank lines are skipped and
/// repeated pairs keep their first occurrence.
Lexicon read_lexicon(const std::filesystem::path& path, std::string src_lang = {},
                     std::string trg_lang = {});

/// Writes "source<TAB>target" lines.
void write_lexicon(const Lexicon& lex, const std::filesystem::path& path);

/// Composes src->pivot with pivot->trg: (s,t) for every pivot word e with
/// (s,e) and (e,t). Sources follow src_pivot order, targets their first derivation.
/// Throws DataError when both pivot language codes are set and differ.
Lexicon triangulate(const Lexicon& src_pivot, const Lexicon& pivot_trg);

enum class Partition { train, test };

struct LexiconSplit {
  Lexicon train;
  Lexicon test;
};

/// Splits by source word type; unassigned source words go to train.
LexiconSplit split_lexicon(const Lexicon& lex,
                           const std::unordered_map<std::string, Partition>& assignment);

}  // namespace xling
