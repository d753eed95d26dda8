#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xling/embedding.hpp"
#include "xling/linalg.hpp"

namespace xling {

/// P@1 percentages per evaluation pair (rows) and hub language (columns).
/// Excluded cells drop out of every aggregate.
struct ResultMatrix {
  std::vector<std::string> pairs;
  std::vector<std::string> hubs;
  Matrix values;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> excluded;

  ResultMatrix() = default;
  ResultMatrix(std::vector<std::string> pairs, std::vector<std::string> hubs, Matrix values);

  /// Throws DataError on shape mismatches or values outside [0, 100].
  void validate() const;
  Index hub_index(const std::string& hub) const;
};

/// CSV with a header row "<label>,hub1,hub2,..." and one "pair,v1,v2,..." row
/// per evaluation pair. "NA" or "-" marks an excluded cell.
ResultMatrix read_result_matrix(const std::filesystem::path& path);
void write_result_matrix(const ResultMatrix& rm, const std::filesystem::path& path);

/// Expected gain of each hub choice.
struct GainReport {
  std::vector<std::string> hubs;
  std::vector<double> overall;                   ///< G_l: mean over pairs of (value - row mean)
  std::vector<std::optional<double>> when_best;  ///< mean gain over pairs where l is the row max
  std::vector<int> best_counts;                  ///< rows won, first index on ties
  std::vector<double> mu;                        ///< column means
  double mu_best = 0.0;                          ///< mean over pairs of the row maximum

  /// mu_best minus the named hub's column mean.
  double gap_to_best(const std::string& hub) const;
};

GainReport expected_gain(const ResultMatrix& rm);

/// Half the bottleneck distance between the sorted pairwise-distance multisets
/// of the top sample_n words of each space: a cheap lower-bound proxy for the
/// Gromov-Hausdorff distance, not the exact value. When the number of word
/// pairs exceeds max_pairs, the same max_pairs index pairs (drawn with
/// std::mt19937_64 seeded by `seed`) are used for both spaces.
double gh_distance(const EmbeddingSpace& a, const EmbeddingSpace& b, Index sample_n,
                   std::uint64_t seed, std::size_t max_pairs = 2'000'000);

/// Same estimator over two explicit point sets with equal row counts.
double gh_distance(const Matrix& a, const Matrix& b, std::uint64_t seed,
                   std::size_t max_pairs = 2'000'000);

enum class CorrelationMethod { pearson, spearman };

CorrelationMethod parse_correlation_method(const std::string& name);

/// Throws DataError for unequal lengths, fewer than 2 points, or constant input.
double correlate(const std::vector<double>& xs, const std::vector<double>& ys,
                 CorrelationMethod method);

/// Average ranks (1-based), ties sharing the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& values);

/// Symmetric language distance table; self-distance is 0.
class DistanceTable {
 public:
  /// Throws DataError on negative values, nonzero self-distances, or a
  /// conflicting reverse entry (difference above 1e-9).
  void set(const std::string& a, const std::string& b, double value);
  std::optional<double> find(const std::string& a, const std::string& b) const;
  double at(const std::string& a, const std::string& b) const;
  const std::vector<std::string>& languages() const noexcept { return languages_; }

 private:
  void note_language(const std::string& code);

  std::map<std::pair<std::string, std::string>, double> values_;
  std::vector<std::string> languages_;
};

/// Rows "src,trg,value" (an optional header row is skipped).
DistanceTable load_distances(const std::filesystem::path& path);

/// For each evaluation pair "s-t", correlates its P@1 across hubs h with
/// distance(s, h) + distance(t, h). Returns the per-pair coefficients (pairs
/// with an undefined coefficient are omitted) and their mean.
struct HubCorrelation {
  std::vector<std::pair<std::string, double>> per_pair;
  double mean = 0.0;
};

HubCorrelation hub_distance_correlation(const ResultMatrix& rm, const DistanceTable& distances,
                                        CorrelationMethod method);

}  // namespace xling
