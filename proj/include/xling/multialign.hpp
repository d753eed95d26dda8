#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "xling/embedding.hpp"
#include "xling/mapping.hpp"

namespace xling {

enum class SeedStrategy { identical, numerals, similarity };

SeedStrategy parse_seed_strategy(std::string_view name);
std::string to_string(SeedStrategy strategy);

struct SeedConfig {
  SeedStrategy strategy = SeedStrategy::identical;
  Index similarity_vocab = 4000;
};

struct SeedChoice {
  Lexicon seed;
  SeedStrategy used = SeedStrategy::identical;
};

/// Seed for src -> trg. String-based strategies that yield no pair (different
/// alphabets, typically) fall back to the monolingual-similarity seed.
SeedChoice make_seed(const EmbeddingSpace& src, const EmbeddingSpace& trg, const SeedConfig& cfg,
                     Warnings* warnings = nullptr);

/// A hub language plus every language's orthogonal map into hub coordinates.
/// The hub's own map is exactly the identity.
class MultiSpace {
 public:
  MultiSpace(std::string hub, std::vector<std::shared_ptr<const EmbeddingSpace>> spaces,
             std::map<std::string, OrthogonalMap> maps);

  const std::string& hub() const noexcept { return hub_; }
  /// Language codes in input order.
  const std::vector<std::string>& languages() const noexcept { return order_; }
  bool contains(const std::string& code) const { return spaces_.contains(code); }
  const EmbeddingSpace& space(const std::string& code) const;
  const OrthogonalMap& map(const std::string& code) const;

 private:
  std::string hub_;
  std::vector<std::string> order_;
  std::map<std::string, std::shared_ptr<const EmbeddingSpace>> spaces_;
  std::map<std::string, OrthogonalMap> maps_;
};

struct LanguageReport {
  std::string language;
  SeedStrategy seed_used = SeedStrategy::identical;
  std::size_t seed_size = 0;
  SelfLearnResult learned;
};

/// Learns one self-learning map per non-hub language into the hub, in input
/// order (independent trainings; may run concurrently). A failure names the
/// language and no partial result is returned.
MultiSpace align_to_hub(std::vector<std::shared_ptr<const EmbeddingSpace>> spaces,
                        const std::string& hub, const SeedConfig& seed_cfg,
                        const RefinementConfig& cfg, std::vector<LanguageReport>* reports = nullptr,
                        unsigned threads = default_thread_count());

/// Both vocabularies expressed in hub coordinates: (x·W_src, y·W_trg).
struct PairView {
  Matrix source;
  Matrix target;
};

PairView pair_view(const MultiSpace& ms, const std::string& src, const std::string& trg);

/// Flat key=value run description for multilingual alignment.
///
///   hub = en
///   seed = identical | numerals | similarity
///   lang.<code> = <embedding path>
///   map.<code> = <map path>          (written for persisted results)
///
/// plus refinement, normalization and vocabulary keys. Relative paths resolve
/// against the manifest's directory.
struct Manifest {
  std::string hub;
  std::vector<std::pair<std::string, std::filesystem::path>> languages;
  std::map<std::string, std::filesystem::path> maps;
  SeedConfig seed;
  RefinementConfig refine;
  std::vector<NormStep> normalization = default_normalization();
  std::size_t max_vocab = kDefaultMaxVocab;
  std::uint64_t random_seed = 0;
};

Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

/// Loads and normalizes every language listed in the manifest.
std::vector<std::shared_ptr<const EmbeddingSpace>> load_spaces(const Manifest& manifest);

/// Writes map.<code>.txt files plus manifest.txt (with map entries) into dir.
void save_multispace(const MultiSpace& ms, Manifest manifest, const std::filesystem::path& dir);

/// Rebuilds a MultiSpace from a persisted manifest (embeddings are reloaded).
MultiSpace load_multispace(const std::filesystem::path& manifest_path);

}  // namespace xling
