#include "xling/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "xling/text.hpp"

namespace xling {

namespace {

using IndexPairs = std::vector<std::pair<Index, Index>>;

std::string lang_or_dash(const std::string& s) { return s.empty() ? "-" : s; }
std::string dash_to_empty(std::string_view s) { return s == "-" ? std::string{} : std::string(s); }

IndexPairs to_index_pairs(const EmbeddingSpace& a, const EmbeddingSpace& b, const Lexicon& lex) {
  IndexPairs pairs;
  pairs.reserve(lex.size());
  for (const auto& [s, t] : lex.entries()) {
    const auto i = a.find(s);
    const auto j = b.find(t);
    if (i && j) pairs.emplace_back(*i, *j);
  }
  return pairs;
}

Lexicon to_lexicon(const EmbeddingSpace& a, const EmbeddingSpace& b, const IndexPairs& pairs) {
  Lexicon lex(a.language(), b.language());
  for (const auto& [i, j] : pairs) {
    lex.add(a.words()[static_cast<std::size_t>(i)], b.words()[static_cast<std::size_t>(j)]);
  }
  return lex;
}

struct Paired {
  Matrix x;
  Matrix y;
};

Paired gather(const EmbeddingSpace& a, const EmbeddingSpace& b, const IndexPairs& pairs) {
  Paired p{Matrix(static_cast<Index>(pairs.size()), a.dim()),
           Matrix(static_cast<Index>(pairs.size()), b.dim())};
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    p.x.row(static_cast<Index>(r)) = a.vectors().row(pairs[r].first);
    p.y.row(static_cast<Index>(r)) = b.vectors().row(pairs[r].second);
  }
  return p;
}

bool all_digits(const std::string& w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; });
}

/// Row-wise sqrt(max(cos, 0)) signatures sorted descending.
Matrix similarity_signatures(const Matrix& unit) {
  Matrix sims = unit * unit.transpose();
  sims = sims.cwiseMax(0.0).cwiseSqrt();
  Matrix sig(sims.rows(), sims.cols());
  std::vector<double> row(static_cast<std::size_t>(sims.cols()));
  for (Index i = 0; i < sims.rows(); ++i) {
    for (Index j = 0; j < sims.cols(); ++j) row[static_cast<std::size_t>(j)] = sims(i, j);
    std::sort(row.begin(), row.end(), std::greater<>());
    for (Index j = 0; j < sims.cols(); ++j) sig(i, j) = row[static_cast<std::size_t>(j)];
  }
  return sig;
}

}  // namespace

void save_map(const OrthogonalMap& map, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << map.dim() << ' ' << lang_or_dash(map.src_lang) << ' ' << lang_or_dash(map.trg_lang) << '\n';
  for (Index i = 0; i < map.w.rows(); ++i) {
    for (Index j = 0; j < map.w.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(map.w(i, j));
    }
    out << '\n';
  }
}

OrthogonalMap load_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open map file " + path.string());
  std::string line;
  std::getline(in, line);
  const auto header = split_whitespace(line);
  Index dim = 0;
  if (header.size() != 3 || !parse_number(header[0], dim) || dim < 1) {
    throw DataError(path.string() + ": malformed header, expected 'd src_lang trg_lang'");
  }
  OrthogonalMap map{dash_to_empty(header[1]), dash_to_empty(header[2]), Matrix(dim, dim)};
  for (Index i = 0; i < dim; ++i) {
    if (!std::getline(in, line)) throw DataError(path.string() + ": truncated matrix");
    const auto fields = split_whitespace(line);
    if (static_cast<Index>(fields.size()) != dim) {
      throw DataError(path.string() + ": row " + std::to_string(i + 1) + " has " +
                      std::to_string(fields.size()) + " values");
    }
    for (Index j = 0; j < dim; ++j) {
      if (!parse_number(fields[static_cast<std::size_t>(j)], map.w(i, j))) {
        throw DataError(path.string() + ": bad value in row " + std::to_string(i + 1));
      }
    }
  }
  if (!map.is_orthogonal()) throw DataError(path.string() + ": matrix is not orthogonal");
  return map;
}

OrthogonalMap procrustes(const EmbeddingSpace& src, const EmbeddingSpace& trg, const Lexicon& dict) {
  if (src.dim() != trg.dim()) throw DataError("procrustes: embedding dimensions differ");
  const auto pairs = to_index_pairs(src, trg, dict);
  if (pairs.empty()) throw DataError("procrustes: no dictionary pair is in vocabulary");
  const auto p = gather(src, trg, pairs);
  return {src.language(), trg.language(), procrustes(p.x, p.y)};
}

Lexicon seed_identical(const EmbeddingSpace& a, const EmbeddingSpace& b, bool numerals_only) {
  Lexicon seed(a.language(), b.language());
  for (const auto& w : a.words()) {
    if (numerals_only && !all_digits(w)) continue;
    if (b.contains(w)) seed.add(w, w);
  }
  return seed;
}

Lexicon seed_monolingual_similarity(const EmbeddingSpace& a, const EmbeddingSpace& b,
                                    Index vocab_cap, Warnings* warnings) {
  if (vocab_cap < 1) throw ConfigError("similarity seed: vocab_cap must be positive");
  if (a.dim() != b.dim()) throw DataError("similarity seed: embedding dimensions differ");
  const Index n = std::min({vocab_cap, a.size(), b.size()});
  if (n < vocab_cap) {
    warn(warnings, "similarity seed: vocab_cap " + std::to_string(vocab_cap) + " clamped to " +
                       std::to_string(n));
  }
  const Matrix sig_a = similarity_signatures(a.vectors().topRows(n));
  const Matrix sig_b = similarity_signatures(b.vectors().topRows(n));

  const Vector norm_a = sig_a.rowwise().squaredNorm();
  const Vector norm_b = sig_b.rowwise().squaredNorm();
  const Matrix cross = sig_a * sig_b.transpose();
  Lexicon seed(a.language(), b.language());
  for (Index i = 0; i < n; ++i) {
    Index best = 0;
    double best_dist = 0.0;
    for (Index j = 0; j < n; ++j) {
      const double d = norm_a(i) + norm_b(j) - 2.0 * cross(i, j);
      if (j == 0 || d < best_dist) {
        best = j;
        best_dist = d;
      }
    }
    seed.add(a.words()[static_cast<std::size_t>(i)], b.words()[static_cast<std::size_t>(best)]);
  }
  return seed;
}

void RefinementConfig::validate() const {
  if (max_iters < 1) throw ConfigError("max_iters must be positive");
  if (induction_vocab < 1) throw ConfigError("induction_vocab must be positive");
  if (csls_k < 1) throw ConfigError("csls_k must be positive");
  if (!(stop_delta >= 0.0 && stop_delta < 1.0)) throw ConfigError("stop_delta must lie in [0, 1)");
}

SelfLearnResult self_learn(const EmbeddingSpace& a, const EmbeddingSpace& b, const Lexicon& seed,
                           const RefinementConfig& cfg, Warnings* warnings) {
  cfg.validate();
  if (a.dim() != b.dim()) throw DataError("self_learn: embedding dimensions differ");
  IndexPairs current = to_index_pairs(a, b, seed);
  if (current.empty()) throw DataError("self_learn: seed dictionary has no in-vocabulary pair");

  const Index top_a = std::min(cfg.induction_vocab, a.size());
  const Index top_b = std::min(cfg.induction_vocab, b.size());
  const auto cand = b.vectors().topRows(top_b);

  SelfLearnResult result;
  Matrix w;
  bool fitted_on_current = false;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const auto p = gather(a, b, current);
    w = procrustes(p.x, p.y);
    const double objective = (p.x * w - p.y).squaredNorm() / static_cast<double>(current.size());

    const Matrix mapped = a.vectors().topRows(top_a) * w;
    IndexPairs induced = csls_mutual_nearest(mapped, cand, cfg.csls_k, warnings);
    if (induced.empty()) {
      throw ConvergenceError("self_learn: empty induced dictionary at iteration " +
                                 std::to_string(it),
                             it);
    }
    result.history.push_back({it, current.size(), induced.size(), objective});

    const bool unchanged = induced == current;
    const double rel = std::abs(static_cast<double>(induced.size()) -
                                static_cast<double>(current.size())) /
                       static_cast<double>(current.size());
    current = std::move(induced);
    fitted_on_current = unchanged;
    if (unchanged || rel < cfg.stop_delta) {
      result.converged = true;
      break;
    }
  }
  if (!fitted_on_current) {
    const auto p = gather(a, b, current);
    w = procrustes(p.x, p.y);
  }
  result.map = {a.language(), b.language(), std::move(w)};
  result.dictionary = to_lexicon(a, b, current);
  return result;
}

}  // namespace xling
