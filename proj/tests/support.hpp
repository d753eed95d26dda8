#pragma once

#include <Eigen/QR>

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <memory>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "xling/embedding.hpp"
#include "xling/lexicon.hpp"
#include "xling/linalg.hpp"

namespace xling::test {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(XLING_FIXTURES) / name;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("xling_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline Matrix gaussian(Index rows, Index cols, std::mt19937_64& gen, double sigma = 1.0) {
  std::normal_distribution<double> normal(0.0, sigma);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(gen);
  }
  return m;
}

/// Haar-ish random orthogonal matrix from the QR factor of a Gaussian matrix.
inline Matrix random_orthogonal(Index d, std::mt19937_64& gen) {
  const Matrix g = gaussian(d, d, gen);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

inline std::vector<std::string> numbered_words(const std::string& prefix, Index n) {
  std::vector<std::string> w;
  w.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) w.push_back(prefix + std::to_string(i));
  return w;
}

inline Matrix unit_gaussian(Index rows, Index cols, std::mt19937_64& gen) {
  Matrix m = gaussian(rows, cols, gen);
  normalize_rows(m);
  return m;
}

/// Word i of language `code`: the first `anchors` words are shared numerals,
/// the rest are language-specific strings.
inline std::string planted_word(const std::string& code, Index i, Index anchors) {
  return i < anchors ? std::to_string(i) : code + "_w" + std::to_string(i);
}

/// Languages that are exact rotations (plus optional noise) of one unit-row
/// base space. Row i is the same concept in every language.
inline std::vector<std::shared_ptr<const EmbeddingSpace>> planted_languages(
    const std::vector<std::string>& codes, Index n, Index d, Index anchors, std::uint64_t seed,
    double noise = 0.0) {
  std::mt19937_64 gen(seed);
  const Matrix base = unit_gaussian(n, d, gen);
  std::vector<std::shared_ptr<const EmbeddingSpace>> out;
  for (const auto& code : codes) {
    Matrix v = base * random_orthogonal(d, gen);
    if (noise > 0) v += gaussian(n, d, gen, noise);
    std::vector<std::string> words;
    for (Index i = 0; i < n; ++i) words.push_back(planted_word(code, i, anchors));
    out.push_back(std::make_shared<const EmbeddingSpace>(code, std::move(words), std::move(v)));
  }
  return out;
}

/// Gold dictionary over the non-anchor concepts [anchors, n).
inline Lexicon planted_gold(const std::string& a, const std::string& b, Index n, Index anchors) {
  Lexicon lex(a, b);
  for (Index i = anchors; i < n; ++i) lex.add(planted_word(a, i, anchors), planted_word(b, i, anchors));
  return lex;
}

}  // namespace xling::test
