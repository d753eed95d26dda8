#include "xling/embedding.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "xling/error.hpp"
#include "xling/text.hpp"

namespace xling {

EmbeddingSpace::EmbeddingSpace(std::string language, std::vector<std::string> words,
                               Matrix vectors)
    : language_(std::move(language)), words_(std::move(words)), vectors_(std::move(vectors)) {
  if (static_cast<Index>(words_.size()) != vectors_.rows()) {
    throw DataError("embedding space: " + std::to_string(words_.size()) + " words but " +
                    std::to_string(vectors_.rows()) + " rows");
  }
  if (!vectors_.allFinite()) throw DataError("embedding space: non-finite vector entry");
  index_.reserve(words_.size());
  for (Index i = 0; i < static_cast<Index>(words_.size()); ++i) {
    if (!index_.emplace(words_[i], i).second) {
      throw DataError("embedding space: duplicate word '" + words_[i] + "'");
    }
  }
}

std::optional<Index> EmbeddingSpace::find(std::string_view word) const {
  const auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EmbeddingSpace EmbeddingSpace::head(Index n) const {
  n = std::clamp<Index>(n, 0, size());
  return EmbeddingSpace(language_, {words_.begin(), words_.begin() + n}, vectors_.topRows(n));
}

EmbeddingSpace load_embeddings(const std::filesystem::path& path, std::size_t max_vocab,
                               std::string language) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open embedding file " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": missing header");
  const auto header = split_whitespace(line);
  std::size_t declared = 0;
  std::size_t dim = 0;
  if (header.size() != 2 || !parse_number(header[0], declared) || !parse_number(header[1], dim) ||
      dim == 0) {
    throw DataError(path.string() + ": malformed header '" + line + "', expected 'V d'");
  }

  const std::size_t limit = max_vocab == kUnlimitedVocab ? declared : std::min(declared, max_vocab);
  std::vector<std::string> words;
  std::vector<double> values;
  words.reserve(limit);
  values.reserve(limit * dim);
  std::unordered_set<std::string> seen;

  std::size_t line_no = 1;
  std::size_t rows_read = 0;
  while (words.size() < limit && rows_read < declared && std::getline(in, line)) {
    ++line_no;
    const auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    ++rows_read;
    if (fields.size() - 1 != dim) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(dim) + " values, found " + std::to_string(fields.size() - 1));
    }
    std::string word(fields[0]);
    if (seen.contains(word)) continue;
    const std::size_t base = values.size();
    values.resize(base + dim);
    for (std::size_t j = 0; j < dim; ++j) {
      if (!parse_number(fields[j + 1], values[base + j]) || !std::isfinite(values[base + j])) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad value '" +
                        std::string(fields[j + 1]) + "'");
      }
    }
    seen.insert(word);
    words.push_back(std::move(word));
  }
  if (words.empty()) throw DataError(path.string() + ": empty vocabulary");

  const Index rows = static_cast<Index>(words.size());
  Matrix vectors = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                  Eigen::RowMajor>>(values.data(), rows,
                                                                    static_cast<Index>(dim));
  return EmbeddingSpace(std::move(language), std::move(words), std::move(vectors));
}

void save_embeddings(const EmbeddingSpace& space, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << space.size() << ' ' << space.dim() << '\n';
  for (Index i = 0; i < space.size(); ++i) {
    out << space.words()[i];
    for (Index j = 0; j < space.dim(); ++j) out << ' ' << format_double(space.vectors()(i, j));
    out << '\n';
  }
}

std::vector<NormStep> default_normalization() {
  return {NormStep::unit, NormStep::center, NormStep::unit};
}

std::vector<NormStep> parse_norm_steps(std::string_view spec) {
  std::vector<NormStep> steps;
  for (auto part : split(spec, ',')) {
    part = trim(part);
    if (part.empty()) continue;
    if (part == "unit") {
      steps.push_back(NormStep::unit);
    } else if (part == "center") {
      steps.push_back(NormStep::center);
    } else if (part == "none") {
      continue;
    } else {
      throw ConfigError("unknown normalization step '" + std::string(part) + "'");
    }
  }
  return steps;
}

EmbeddingSpace normalize(const EmbeddingSpace& space, const std::vector<NormStep>& steps) {
  Matrix m = space.vectors();
  for (const NormStep step : steps) {
    switch (step) {
      case NormStep::unit:
        normalize_rows(m);
        break;
      case NormStep::center:
        center_columns(m);
        break;
    }
  }
  return EmbeddingSpace(space.language(), space.words(), std::move(m));
}

}  // namespace xling
