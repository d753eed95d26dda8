#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xling/linalg.hpp"

namespace xling {

/// A language's vocabulary and its (V x d) vector matrix. Row i belongs to
/// words()[i]; words are distinct and every entry is finite. Immutable once built.
class EmbeddingSpace {
 public:
  EmbeddingSpace(std::string language, std::vector<std::string> words, Matrix vectors);

  const std::string& language() const noexcept { return language_; }
  const std::vector<std::string>& words() const noexcept { return words_; }
  const Matrix& vectors() const noexcept { return vectors_; }
  Index size() const noexcept { return vectors_.rows(); }
  Index dim() const noexcept { return vectors_.cols(); }

  std::optional<Index> find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word).has_value(); }

  /// First n rows (frequency order in the usual text format).
  EmbeddingSpace head(Index n) const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::string language_;
  std::vector<std::string> words_;
  Matrix vectors_;
  std::unordered_map<std::string, Index, Hash, std::equal_to<>> index_;
};

inline constexpr std::size_t kDefaultMaxVocab = 200000;
inline constexpr std::size_t kUnlimitedVocab = 0;

/// Reads the "V d" header text format. Keeps the first max_vocab distinct tokens
/// (0 = unlimited); repeated tokens are skipped and do not count.
EmbeddingSpace load_embeddings(const std::filesystem::path& path,
                               std::size_t max_vocab = kDefaultMaxVocab,
                               std::string language = {});

void save_embeddings(const EmbeddingSpace& space, const std::filesystem::path& path);

enum class NormStep { unit, center };

/// Default preprocessing: unit, center, unit.
std::vector<NormStep> default_normalization();

/// Parses "unit,center,unit" style lists. Empty string yields no steps.
std::vector<NormStep> parse_norm_steps(std::string_view spec);

EmbeddingSpace normalize(const EmbeddingSpace& space, const std::vector<NormStep>& steps);

}  // namespace xling
