#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "xling/embedding.hpp"
#include "xling/error.hpp"
#include "xling/lexicon.hpp"
#include "xling/linalg.hpp"
#include "xling/retrieval.hpp"

namespace xling {

inline constexpr double kOrthogonalityTolerance = 1e-6;

/// Square orthogonal transform carrying src_lang vectors into trg_lang's space.
/// Row-vector convention: x maps to x·W.
struct OrthogonalMap {
  std::string src_lang;
  std::string trg_lang;
  Matrix w;

  static OrthogonalMap identity(Index dim, std::string src = {}, std::string trg = {}) {
    return {std::move(src), std::move(trg), Matrix::Identity(dim, dim)};
  }

  Index dim() const noexcept { return w.rows(); }
  bool is_orthogonal(double tol = kOrthogonalityTolerance) const {
    return w.rows() == w.cols() && orthogonality_error(w) <= tol;
  }

  template <typename Derived>
  Matrix apply(const Eigen::MatrixBase<Derived>& rows) const {
    return rows * w;
  }
  template <typename Derived>
  Matrix apply_inverse(const Eigen::MatrixBase<Derived>& rows) const {
    return rows * w.transpose();
  }
};

/// Text format: header "d src_lang trg_lang", then d rows of d numbers
/// written with round-trip precision.
void save_map(const OrthogonalMap& map, const std::filesystem::path& path);
OrthogonalMap load_map(const std::filesystem::path& path);

/// Orthogonal W minimizing ‖X·W − Y‖_F: with Xᵀ·Y = U·Σ·Vᵀ, W = U·Vᵀ.
template <typename DX, typename DY>
Eigen::Matrix<typename DX::Scalar, Eigen::Dynamic, Eigen::Dynamic> procrustes(
    const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  using Plain = Eigen::Matrix<typename DX::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw DataError("procrustes: shapes " + std::to_string(x.rows()) + "x" +
                    std::to_string(x.cols()) + " and " + std::to_string(y.rows()) + "x" +
                    std::to_string(y.cols()) + " differ");
  }
  if (x.rows() < 1) throw DataError("procrustes: no paired rows");
  if (!x.allFinite() || !y.allFinite()) throw DataError("procrustes: non-finite input");
  const Plain cross = x.transpose() * y;
  Eigen::JacobiSVD<Plain> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw DataError("procrustes: SVD did not converge");
  return svd.matrixU() * svd.matrixV().transpose();
}

/// Procrustes over dictionary pairs; OOV pairs are skipped. Throws DataError
/// when no pair is in vocabulary.
OrthogonalMap procrustes(const EmbeddingSpace& src, const EmbeddingSpace& trg, const Lexicon& dict);

/// Words present verbatim in both vocabularies, as (w, w) pairs in source rank
/// order. With numerals_only, only all-digit tokens are kept.
Lexicon seed_identical(const EmbeddingSpace& a, const EmbeddingSpace& b, bool numerals_only = false);

/// Unsupervised seed from monolingual similarity distributions.
///
/// Over the top n = min(vocab_cap, |a|, |b|) words of each space, every word
/// gets a signature: its row of the monolingual cosine matrix, square-rooted
/// (negatives clamped to 0) and sorted descending. Each source word is paired
/// with the target whose signature is closest in Euclidean distance (lowest
/// index on ties). Expects unit-normalized rows.
Lexicon seed_monolingual_similarity(const EmbeddingSpace& a, const EmbeddingSpace& b,
                                    Index vocab_cap, Warnings* warnings = nullptr);

struct RefinementConfig {
  int max_iters = 10;
  Index induction_vocab = 10000;
  int csls_k = kDefaultCslsNeighborhood;
  double stop_delta = 0.01;

  /// Throws ConfigError unless every field is in range.
  void validate() const;
};

struct IterationStats {
  int iteration = 0;
  std::size_t dictionary_size = 0;  ///< size of the dictionary the map was fit on
  std::size_t induced_size = 0;     ///< size of the dictionary induced with that map
  double objective = 0.0;           ///< mean ‖x·W − y‖² over the fitted dictionary
};

struct SelfLearnResult {
  OrthogonalMap map;
  Lexicon dictionary;
  std::vector<IterationStats> history;
  bool converged = false;  ///< stopped before exhausting max_iters
};

/// Alternates Procrustes on the current dictionary with re-inducing the
/// dictionary as mutual CSLS nearest neighbours among the top
/// cfg.induction_vocab words of each side. Stops when the induced dictionary is
/// unchanged, its relative size change is below cfg.stop_delta, or after
/// cfg.max_iters. The returned map is refit on the returned dictionary.
SelfLearnResult self_learn(const EmbeddingSpace& a, const EmbeddingSpace& b, const Lexicon& seed,
                           const RefinementConfig& cfg = {}, Warnings* warnings = nullptr);

}  // namespace xling
