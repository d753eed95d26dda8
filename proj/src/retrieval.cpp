#include "xling/retrieval.hpp"

#include <random>
#include <unordered_map>

namespace xling {

RetrievalRun retrieve(const std::vector<std::string>& source_words, const Matrix& source_view,
                      const std::vector<std::string>& target_words, const Matrix& target_view,
                      const std::vector<std::string>& query_words, const RetrievalOptions& options,
                      Warnings* warnings) {
  if (static_cast<Index>(source_words.size()) != source_view.rows() ||
      static_cast<Index>(target_words.size()) != target_view.rows()) {
    throw DataError("retrieve: vocabulary and matrix sizes differ");
  }
  std::unordered_map<std::string_view, Index> source_index;
  for (Index i = 0; i < static_cast<Index>(source_words.size()); ++i) {
    source_index.emplace(source_words[static_cast<std::size_t>(i)], i);
  }

  RetrievalRun run;
  run.k_max = options.k_max;
  std::vector<Index> rows;
  for (const auto& w : query_words) {
    const auto it = source_index.find(w);
    if (it == source_index.end()) continue;
    rows.push_back(it->second);
    run.queries.push_back(w);
  }
  if (rows.empty()) return run;

  Matrix queries(static_cast<Index>(rows.size()), source_view.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    queries.row(static_cast<Index>(r)) = source_view.row(rows[r]);
  }
  const Index pool_rows = options.pool_size > 0 ? std::min(options.pool_size, source_view.rows())
                                                : source_view.rows();
  const auto hits = csls_topk(queries, target_view, source_view.topRows(pool_rows),
                              options.k_neighborhood, options.k_max, warnings);
  run.topk.reserve(hits.size());
  for (const auto& list : hits) {
    std::vector<RetrievedWord> words;
    words.reserve(list.size());
    for (const auto& n : list) {
      words.push_back({target_words[static_cast<std::size_t>(n.index)], n.index, n.score});
    }
    run.topk.push_back(std::move(words));
  }
  return run;
}

EvalResult precision_at_k(const RetrievalRun& run, const Lexicon& gold, const std::vector<int>& ks) {
  for (const int k : ks) {
    if (k < 1 || k > run.k_max) {
      throw ConfigError("precision_at_k: k=" + std::to_string(k) + " outside [1, " +
                        std::to_string(run.k_max) + "]");
    }
  }
  std::unordered_map<std::string_view, std::size_t> position;
  for (std::size_t i = 0; i < run.queries.size(); ++i) position.emplace(run.queries[i], i);

  EvalResult result;
  for (const int k : ks) result.per_query_hits[k];
  for (const auto& source : gold.sources()) {
    const auto it = position.find(source);
    if (it == position.end()) {
      ++result.n_skipped_oov;
      continue;
    }
    const auto& retrieved = run.topk[it->second];
    // Rank of the first gold translation, or k_max when none is retrieved.
    std::size_t first_hit = retrieved.size();
    for (std::size_t r = 0; r < retrieved.size(); ++r) {
      if (gold.contains(source, retrieved[r].word)) {
        first_hit = r;
        break;
      }
    }
    result.evaluated.push_back(source);
    for (const int k : ks) {
      result.per_query_hits[k].push_back(first_hit < static_cast<std::size_t>(k));
    }
  }
  for (const auto& q : run.queries) {
    if (!gold.has_source(q)) ++result.n_skipped_oov;
  }

  result.n_evaluated = result.evaluated.size();
  if (result.n_evaluated == 0) throw DataError("precision_at_k: no evaluable queries");
  for (const auto& [k, hits] : result.per_query_hits) {
    const auto correct = std::count(hits.begin(), hits.end(), true);
    result.p_at[k] = static_cast<double>(correct) / static_cast<double>(hits.size());
  }
  return result;
}

namespace {

std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = gen();
    if (r >= threshold) return r % n;
  }
}

}  // namespace

double paired_bootstrap(const std::vector<bool>& hits_a, const std::vector<bool>& hits_b,
                        int iterations, std::uint64_t seed) {
  if (hits_a.size() != hits_b.size()) {
    throw DataError("paired_bootstrap: " + std::to_string(hits_a.size()) + " vs " +
                    std::to_string(hits_b.size()) + " queries");
  }
  if (hits_a.empty()) throw DataError("paired_bootstrap: empty hit lists");
  if (iterations < 1) throw ConfigError("paired_bootstrap: iterations must be positive");

  const std::size_t n = hits_a.size();
  std::vector<int> delta(n);
  long observed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    delta[i] = static_cast<int>(hits_a[i]) - static_cast<int>(hits_b[i]);
    observed += delta[i];
  }
  if (observed == 0) return 1.0;

  std::mt19937_64 gen(seed);
  long contradicting = 0;
  for (int it = 0; it < iterations; ++it) {
    long diff = 0;
    for (std::size_t i = 0; i < n; ++i) diff += delta[bounded(gen, n)];
    if (diff == 0 || (diff > 0) != (observed > 0)) ++contradicting;
  }
  return static_cast<double>(contradicting) / static_cast<double>(iterations);
}

}  // namespace xling
