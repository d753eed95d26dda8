#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xling/lexicon.hpp"

namespace xling {

/// (source index, target index).
using AlignmentPoint = std::pair<std::size_t, std::size_t>;
/// Ordered row-major (by source index, then target index).
using Alignment = std::set<AlignmentPoint>;

struct SentencePair {
  std::vector<std::string> source;
  std::vector<std::string> target;
};

/// Sentence pairs with their forward (source->target) and reverse directional
/// alignments, both expressed as (source index, target index) points.
struct AlignedBitext {
  std::vector<SentencePair> sentences;
  std::vector<Alignment> forward;
  std::vector<Alignment> reverse;

  /// Throws DataError on size mismatches or out-of-range points.
  void validate() const;
};

/// Parses a Pharaoh line such as "0-0 1-2".
Alignment parse_pharaoh(std::string_view line);
std::string format_pharaoh(const Alignment& alignment);

std::vector<Alignment> read_alignments(const std::filesystem::path& path);
std::vector<std::vector<std::string>> read_token_file(const std::filesystem::path& path);

/// Loads parallel token files plus forward/reverse Pharaoh files and validates them.
AlignedBitext read_aligned_bitext(const std::filesystem::path& src_tokens,
                                  const std::filesystem::path& trg_tokens,
                                  const std::filesystem::path& forward,
                                  const std::filesystem::path& reverse);

/// grow-diag-final-and symmetrization.
///
/// Starts from the intersection. Grow passes scan the union candidates in a
/// fixed order: forward-only points row-major, then reverse-only points
/// row-major. A candidate is admitted when one of its 8 neighbours is already
/// accepted and its source or its target position is still unaligned. Passes
/// repeat until nothing is added. Final-and then admits forward points, then
/// reverse points (row-major), whose source and target are both unaligned.
Alignment symmetrize_gdfa(const Alignment& forward, const Alignment& reverse,
                          std::size_t src_len, std::size_t trg_len);

struct WordPairHash {
  std::size_t operator()(const WordPair& p) const noexcept {
    const std::size_t h = std::hash<std::string>{}(p.first);
    return h ^ (std::hash<std::string>{}(p.second) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};

/// Alignment counts behind the extraction thresholds.
struct PairStats {
  std::unordered_map<WordPair, long, WordPairHash> cooc;
  std::unordered_map<std::string, long> src_marginal;
  std::unordered_map<std::string, long> trg_marginal;
  std::unordered_map<std::string, long> src_freq;

  /// Pure addition, so shards merge in any order.
  void merge(const PairStats& other);
};

PairStats count_pairs(const AlignedBitext& bitext, const std::vector<Alignment>& symmetrized);

/// Which count the min_count threshold applies to.
enum class CountThreshold { cooccurrence, source_frequency };

struct ExtractionOptions {
  long min_count = 5;     ///< strict: count must exceed this
  double min_prob = 0.30; ///< strict, in both directions
  CountThreshold count_on = CountThreshold::cooccurrence;
};

/// Keeps (s,t) with count > min_count and cooc/marginal > min_prob both ways.
/// Sources are ordered by corpus frequency (desc, ties lexicographic), targets by
/// co-occurrence (desc, ties lexicographic).
Lexicon extract_pairs(const PairStats& stats, const ExtractionOptions& options = {});

/// Entries whose source word rank r (0-based, over distinct sources) is in [lo, hi).
Lexicon eval_band(const Lexicon& lex, std::size_t lo = 5000, std::size_t hi = 6500);

}  // namespace xling
