#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "xling/embedding.hpp"
#include "xling/error.hpp"
#include "xling/lexicon.hpp"
#include "xling/linalg.hpp"
#include "xling/parallel.hpp"

namespace xling {

struct Neighbor {
  Index index = 0;
  double score = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Ranking order shared by every retrieval path: score descending, then index ascending.
inline bool ranks_before(const Neighbor& a, const Neighbor& b) {
  return a.score != b.score ? a.score > b.score : a.index < b.index;
}

inline constexpr int kDefaultCslsNeighborhood = 10;

namespace detail {

inline constexpr Index kCslsBlock = 512;

/// Mean of the k largest entries of each row of (a · bᵀ); rows of a and b are unit.
template <typename DA, typename DB>
Vector mean_topk_similarity(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                            Index k) {
  Vector out(a.rows());
  parallel_for(static_cast<std::size_t>(a.rows()), kCslsBlock, [&](std::size_t lo, std::size_t hi) {
    const Index begin = static_cast<Index>(lo);
    const Index rows = static_cast<Index>(hi - lo);
    const Matrix sims = (a.middleRows(begin, rows) * b.transpose()).template cast<double>();
    std::vector<double> row(static_cast<std::size_t>(sims.cols()));
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < sims.cols(); ++j) row[static_cast<std::size_t>(j)] = sims(i, j);
      std::nth_element(row.begin(), row.begin() + (k - 1), row.end(), std::greater<>());
      std::sort(row.begin(), row.begin() + k, std::greater<>());
      out(begin + i) = std::accumulate(row.begin(), row.begin() + k, 0.0) / static_cast<double>(k);
    }
  });
  return out;
}

inline Index clamp_neighborhood(int k, Index available, const char* side, Warnings* warnings) {
  if (k < 1) throw ConfigError("CSLS neighborhood must be at least 1");
  if (k > available) {
    warn(warnings, std::string("CSLS neighborhood ") + std::to_string(k) + " exceeds " +
                       std::to_string(available) + " available " + side + "; clamped");
    return available;
  }
  return k;
}

}  // namespace detail

/// Per-side CSLS penalties: r_target(x) for every query row, r_source(y) for
/// every candidate row.
struct CslsPenalties {
  Vector query;      ///< mean cosine of each query to its k nearest candidates
  Vector candidate;  ///< mean cosine of each candidate to its k nearest pool rows
};

/// CSLS penalties where candidate densities are measured against `source_pool`.
template <typename DQ, typename DC, typename DP>
CslsPenalties csls_penalties(const Eigen::MatrixBase<DQ>& queries,
                             const Eigen::MatrixBase<DC>& candidates,
                             const Eigen::MatrixBase<DP>& source_pool, int k_neighborhood,
                             Warnings* warnings = nullptr) {
  const Matrix q = unit_rows(queries.template cast<double>());
  const Matrix c = unit_rows(candidates.template cast<double>());
  const Matrix p = unit_rows(source_pool.template cast<double>());
  const Index k_t = detail::clamp_neighborhood(k_neighborhood, c.rows(), "candidates", warnings);
  const Index k_s = detail::clamp_neighborhood(k_neighborhood, p.rows(), "queries", warnings);
  return {detail::mean_topk_similarity(q, c, k_t), detail::mean_topk_similarity(c, p, k_s)};
}

/// Top-k_max candidates per query under CSLS:
///   score(x, y) = 2 cos(x, y) - r_T(x) - r_S(y)
/// with r_T(x) the mean cosine of x to its k nearest candidates and r_S(y) the
/// mean cosine of y to its k nearest rows of `source_pool`. Ties rank by
/// candidate index. Output is identical for any thread count.
template <typename DQ, typename DC, typename DP>
std::vector<std::vector<Neighbor>> csls_topk(const Eigen::MatrixBase<DQ>& queries,
                                             const Eigen::MatrixBase<DC>& candidates,
                                             const Eigen::MatrixBase<DP>& source_pool,
                                             int k_neighborhood, int k_max,
                                             Warnings* warnings = nullptr) {
  if (queries.cols() != candidates.cols() || queries.cols() != source_pool.cols()) {
    throw DataError("csls_topk: dimension mismatch");
  }
  if (candidates.rows() == 0 || source_pool.rows() == 0) {
    throw DataError("csls_topk: empty candidate or query set");
  }
  if (k_max < 1 || k_max > candidates.rows()) {
    throw ConfigError("csls_topk: k_max must lie in [1, " + std::to_string(candidates.rows()) + "]");
  }
  const auto pen = csls_penalties(queries, candidates, source_pool, k_neighborhood, warnings);
  const Matrix q = unit_rows(queries.template cast<double>());
  const Matrix c = unit_rows(candidates.template cast<double>());

  std::vector<std::vector<Neighbor>> out(static_cast<std::size_t>(q.rows()));
  parallel_for(static_cast<std::size_t>(q.rows()), detail::kCslsBlock,
               [&](std::size_t lo, std::size_t hi) {
                 const Index begin = static_cast<Index>(lo);
                 const Index rows = static_cast<Index>(hi - lo);
                 const Matrix cos = q.middleRows(begin, rows) * c.transpose();
                 std::vector<Neighbor> row(static_cast<std::size_t>(c.rows()));
                 for (Index i = 0; i < rows; ++i) {
                   const double r_t = pen.query(begin + i);
                   for (Index j = 0; j < c.rows(); ++j) {
                     row[static_cast<std::size_t>(j)] = {j, 2.0 * cos(i, j) - r_t - pen.candidate(j)};
                   }
                   std::partial_sort(row.begin(), row.begin() + k_max, row.end(), ranks_before);
                   out[static_cast<std::size_t>(begin + i)].assign(row.begin(), row.begin() + k_max);
                 }
               });
  return out;
}

/// CSLS retrieval with the queries themselves as the r_S neighborhood.
template <typename DQ, typename DC>
std::vector<std::vector<Neighbor>> csls_topk(const Eigen::MatrixBase<DQ>& queries,
                                             const Eigen::MatrixBase<DC>& candidates,
                                             int k_neighborhood, int k_max,
                                             Warnings* warnings = nullptr) {
  return csls_topk(queries, candidates, queries, k_neighborhood, k_max, warnings);
}

/// Pairs (i, j) where candidate j is query i's CSLS top-1 and query i is
/// candidate j's CSLS top-1 (both with lowest-index tie-breaking), ordered by i.
template <typename DQ, typename DC>
std::vector<std::pair<Index, Index>> csls_mutual_nearest(const Eigen::MatrixBase<DQ>& queries,
                                                         const Eigen::MatrixBase<DC>& candidates,
                                                         int k_neighborhood,
                                                         Warnings* warnings = nullptr) {
  if (queries.cols() != candidates.cols()) throw DataError("csls_mutual_nearest: dimension mismatch");
  if (queries.rows() == 0 || candidates.rows() == 0) return {};
  const auto pen = csls_penalties(queries, candidates, queries, k_neighborhood, warnings);
  const Matrix q = unit_rows(queries.template cast<double>());
  const Matrix c = unit_rows(candidates.template cast<double>());

  const Index m = q.rows();
  const Index v = c.rows();
  std::vector<Index> row_best(static_cast<std::size_t>(m), 0);
  std::vector<Index> col_best(static_cast<std::size_t>(v), -1);
  std::vector<double> col_score(static_cast<std::size_t>(v), 0.0);
  for (Index begin = 0; begin < m; begin += detail::kCslsBlock) {
    const Index rows = std::min(detail::kCslsBlock, m - begin);
    const Matrix cos = q.middleRows(begin, rows) * c.transpose();
    for (Index i = 0; i < rows; ++i) {
      const Index qi = begin + i;
      Index best = 0;
      double best_score = 0.0;
      for (Index j = 0; j < v; ++j) {
        const double s = 2.0 * cos(i, j) - pen.query(qi) - pen.candidate(j);
        if (j == 0 || s > best_score) {
          best = j;
          best_score = s;
        }
        const auto uj = static_cast<std::size_t>(j);
        if (col_best[uj] < 0 || s > col_score[uj]) {
          col_best[uj] = qi;
          col_score[uj] = s;
        }
      }
      row_best[static_cast<std::size_t>(qi)] = best;
    }
  }
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < m; ++i) {
    const Index j = row_best[static_cast<std::size_t>(i)];
    if (col_best[static_cast<std::size_t>(j)] == i) pairs.emplace_back(i, j);
  }
  return pairs;
}

/// Retrieved translations per query word.
struct RetrievedWord {
  std::string word;
  Index index = 0;
  double score = 0.0;
};

struct RetrievalRun {
  std::vector<std::string> queries;
  std::vector<std::vector<RetrievedWord>> topk;
  int k_max = 0;
};

struct RetrievalOptions {
  int k_neighborhood = kDefaultCslsNeighborhood;
  int k_max = 10;
  /// Leading source rows used as the r_S neighborhood; 0 means the whole source side.
  Index pool_size = 0;
};

/// Retrieves translations for `query_words` (those present in `source_words`)
/// from two row-aligned views living in one coordinate system.
RetrievalRun retrieve(const std::vector<std::string>& source_words, const Matrix& source_view,
                      const std::vector<std::string>& target_words, const Matrix& target_view,
                      const std::vector<std::string>& query_words,
                      const RetrievalOptions& options = {}, Warnings* warnings = nullptr);

struct EvalResult {
  std::map<int, double> p_at;
  std::size_t n_evaluated = 0;
  std::size_t n_skipped_oov = 0;
  std::vector<std::string> evaluated;  ///< query words in evaluation order
  std::map<int, std::vector<bool>> per_query_hits;
};

/// P@k where a query counts as correct at k when any of its gold translations is
/// in its top k. Gold sources missing from the run, and run queries missing from
/// gold, are counted in n_skipped_oov and left out of the denominator.
EvalResult precision_at_k(const RetrievalRun& run, const Lexicon& gold, const std::vector<int>& ks);

/// Paired bootstrap over per-query hits (same query order in both lists).
/// Returns the fraction of resamples whose accuracy difference is zero or has
/// the opposite sign of the full-sample difference; 1.0 when the full-sample
/// difference is zero. Uses std::mt19937_64 with rejection-sampled indices, so
/// a seed reproduces the same value on every platform.
double paired_bootstrap(const std::vector<bool>& hits_a, const std::vector<bool>& hits_b,
                        int iterations, std::uint64_t seed);

}  // namespace xling
