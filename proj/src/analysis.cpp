#include "xling/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "xling/error.hpp"
#include "xling/text.hpp"

namespace xling {

ResultMatrix::ResultMatrix(std::vector<std::string> pairs_, std::vector<std::string> hubs_,
                           Matrix values_)
    : pairs(std::move(pairs_)), hubs(std::move(hubs_)), values(std::move(values_)) {
  excluded.setConstant(values.rows(), values.cols(), false);
  validate();
}

void ResultMatrix::validate() const {
  if (static_cast<Index>(pairs.size()) != values.rows() ||
      static_cast<Index>(hubs.size()) != values.cols() || excluded.rows() != values.rows() ||
      excluded.cols() != values.cols()) {
    throw DataError("result matrix: label and value shapes differ");
  }
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      if (excluded(i, j)) continue;
      const double v = values(i, j);
      if (!(v >= 0.0 && v <= 100.0)) {
        throw DataError("result matrix: " + pairs[static_cast<std::size_t>(i)] + "/" +
                        hubs[static_cast<std::size_t>(j)] + " = " + format_double(v) +
                        " outside [0, 100]");
      }
    }
  }
}

Index ResultMatrix::hub_index(const std::string& hub) const {
  const auto it = std::find(hubs.begin(), hubs.end(), hub);
  if (it == hubs.end()) throw ConfigError("result matrix has no hub '" + hub + "'");
  return static_cast<Index>(it - hubs.begin());
}

ResultMatrix read_result_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open result matrix " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  const auto header = split(trim(line), ',');
  if (header.size() < 2) throw DataError(path.string() + ": header needs hub columns");

  ResultMatrix rm;
  for (std::size_t j = 1; j < header.size(); ++j) rm.hubs.emplace_back(trim(header[j]));
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<bool>> masks;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(trim(line), ',');
    if (cells.size() != header.size()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " cells");
    }
    rm.pairs.emplace_back(trim(cells[0]));
    std::vector<double> row;
    std::vector<bool> mask;
    for (std::size_t j = 1; j < cells.size(); ++j) {
      const auto cell = trim(cells[j]);
      double v = 0.0;
      if (cell == "NA" || cell == "-") {
        mask.push_back(true);
      } else if (parse_number(cell, v)) {
        mask.push_back(false);
      } else {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad value '" +
                        std::string(cell) + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
    masks.push_back(std::move(mask));
  }
  if (rows.empty()) throw DataError(path.string() + ": no evaluation pairs");
  const auto m = static_cast<Index>(rows.size());
  const auto n = static_cast<Index>(rm.hubs.size());
  rm.values.resize(m, n);
  rm.excluded.resize(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      rm.values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      rm.excluded(i, j) = masks[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  rm.validate();
  return rm;
}

void write_result_matrix(const ResultMatrix& rm, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "pair";
  for (const auto& h : rm.hubs) out << ',' << h;
  out << '\n';
  for (Index i = 0; i < rm.values.rows(); ++i) {
    out << rm.pairs[static_cast<std::size_t>(i)];
    for (Index j = 0; j < rm.values.cols(); ++j) {
      out << ',' << (rm.excluded(i, j) ? std::string("NA") : format_double(rm.values(i, j)));
    }
    out << '\n';
  }
}

double GainReport::gap_to_best(const std::string& hub) const {
  const auto it = std::find(hubs.begin(), hubs.end(), hub);
  if (it == hubs.end()) throw ConfigError("gain report has no hub '" + hub + "'");
  return mu_best - mu[static_cast<std::size_t>(it - hubs.begin())];
}

GainReport expected_gain(const ResultMatrix& rm) {
  rm.validate();
  const Index m = rm.values.rows();
  const Index n = rm.values.cols();
  GainReport report;
  report.hubs = rm.hubs;
  std::vector<double> gain_sum(static_cast<std::size_t>(n), 0.0);
  std::vector<int> gain_count(static_cast<std::size_t>(n), 0);
  std::vector<double> best_gain_sum(static_cast<std::size_t>(n), 0.0);
  std::vector<double> col_sum(static_cast<std::size_t>(n), 0.0);
  report.best_counts.assign(static_cast<std::size_t>(n), 0);
  double best_sum = 0.0;
  int rows_used = 0;

  for (Index i = 0; i < m; ++i) {
    double row_sum = 0.0;
    int cells = 0;
    Index best = -1;
    for (Index j = 0; j < n; ++j) {
      if (rm.excluded(i, j)) continue;
      row_sum += rm.values(i, j);
      ++cells;
      if (best < 0 || rm.values(i, j) > rm.values(i, best)) best = j;
    }
    if (cells == 0) continue;
    const double row_mean = row_sum / cells;
    for (Index j = 0; j < n; ++j) {
      if (rm.excluded(i, j)) continue;
      const auto uj = static_cast<std::size_t>(j);
      gain_sum[uj] += rm.values(i, j) - row_mean;
      ++gain_count[uj];
      col_sum[uj] += rm.values(i, j);
    }
    const auto ub = static_cast<std::size_t>(best);
    ++report.best_counts[ub];
    best_gain_sum[ub] += rm.values(i, best) - row_mean;
    best_sum += rm.values(i, best);
    ++rows_used;
  }

  for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
    const double count = gain_count[j];
    report.overall.push_back(count > 0 ? gain_sum[j] / count : 0.0);
    report.mu.push_back(count > 0 ? col_sum[j] / count : 0.0);
    report.when_best.push_back(report.best_counts[j] > 0
                                   ? std::optional(best_gain_sum[j] / report.best_counts[j])
                                   : std::nullopt);
  }
  report.mu_best = rows_used > 0 ? best_sum / rows_used : 0.0;
  return report;
}

double gh_distance(const Matrix& a, const Matrix& b, std::uint64_t seed, std::size_t max_pairs) {
  if (a.rows() != b.rows()) throw DataError("gh_distance: point sets differ in size");
  if (a.rows() < 2) throw DataError("gh_distance: need at least 2 points per space");
  const auto n = static_cast<std::size_t>(a.rows());
  const std::size_t total = n * (n - 1) / 2;

  std::vector<double> da;
  std::vector<double> db;
  if (total <= max_pairs) {
    const Matrix pa = pairwise_distances(a);
    const Matrix pb = pairwise_distances(b);
    da.reserve(total);
    db.reserve(total);
    for (Index j = 1; j < a.rows(); ++j) {
      for (Index i = 0; i < j; ++i) {
        da.push_back(pa(i, j));
        db.push_back(pb(i, j));
      }
    }
  } else {
    std::mt19937_64 gen(seed);
    da.reserve(max_pairs);
    db.reserve(max_pairs);
    while (da.size() < max_pairs) {
      const auto i = static_cast<Index>(gen() % n);
      const auto j = static_cast<Index>(gen() % n);
      if (i == j) continue;
      da.push_back((a.row(i) - a.row(j)).norm());
      db.push_back((b.row(i) - b.row(j)).norm());
    }
  }
  std::sort(da.begin(), da.end());
  std::sort(db.begin(), db.end());
  double bottleneck = 0.0;
  for (std::size_t k = 0; k < da.size(); ++k) bottleneck = std::max(bottleneck, std::abs(da[k] - db[k]));
  return 0.5 * bottleneck;
}

double gh_distance(const EmbeddingSpace& a, const EmbeddingSpace& b, Index sample_n,
                   std::uint64_t seed, std::size_t max_pairs) {
  if (sample_n < 2) throw DataError("gh_distance: sample_n must be at least 2");
  if (sample_n > a.size() || sample_n > b.size()) {
    throw ConfigError("gh_distance: sample_n " + std::to_string(sample_n) +
                      " exceeds a vocabulary size");
  }
  return gh_distance(Matrix(a.vectors().topRows(sample_n)), Matrix(b.vectors().topRows(sample_n)),
                     seed, max_pairs);
}

CorrelationMethod parse_correlation_method(const std::string& name) {
  if (name == "pearson") return CorrelationMethod::pearson;
  if (name == "spearman") return CorrelationMethod::spearman;
  throw ConfigError("unknown correlation method '" + name + "'");
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

namespace {

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("correlation undefined for constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

double correlate(const std::vector<double>& xs, const std::vector<double>& ys,
                 CorrelationMethod method) {
  if (xs.size() != ys.size()) throw DataError("correlate: inputs differ in length");
  if (xs.size() < 2) throw DataError("correlate: need at least 2 points");
  if (method == CorrelationMethod::spearman) return pearson(average_ranks(xs), average_ranks(ys));
  return pearson(xs, ys);
}

void DistanceTable::note_language(const std::string& code) {
  if (std::find(languages_.begin(), languages_.end(), code) == languages_.end()) {
    languages_.push_back(code);
  }
}

void DistanceTable::set(const std::string& a, const std::string& b, double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw DataError("distance " + a + "," + b + " must be a non-negative number");
  }
  if (a == b) {
    if (value != 0.0) throw DataError("self-distance " + a + "," + b + " must be 0");
    note_language(a);
    return;
  }
  for (const auto& key : {std::pair{a, b}, std::pair{b, a}}) {
    const auto it = values_.find(key);
    if (it != values_.end() && std::abs(it->second - value) > 1e-9) {
      throw DataError("conflicting distances for " + a + "," + b);
    }
  }
  values_[{a, b}] = value;
  values_[{b, a}] = value;
  note_language(a);
  note_language(b);
}

std::optional<double> DistanceTable::find(const std::string& a, const std::string& b) const {
  if (a == b) return 0.0;
  const auto it = values_.find({a, b});
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

double DistanceTable::at(const std::string& a, const std::string& b) const {
  const auto d = find(a, b);
  if (!d) throw DataError("no distance between " + a + " and " + b);
  return *d;
}

DistanceTable load_distances(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open distance file " + path.string());
  DistanceTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(trim(line), ',');
    if (cells.size() != 3) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected src,trg,value");
    }
    double v = 0.0;
    if (!parse_number(trim(cells[2]), v)) {
      if (line_no == 1) continue;  // header
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad distance value");
    }
    try {
      table.set(std::string(trim(cells[0])), std::string(trim(cells[1])), v);
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return table;
}

HubCorrelation hub_distance_correlation(const ResultMatrix& rm, const DistanceTable& distances,
                                        CorrelationMethod method) {
  HubCorrelation out;
  for (Index i = 0; i < rm.values.rows(); ++i) {
    const auto& label = rm.pairs[static_cast<std::size_t>(i)];
    const auto dash = label.find('-');
    if (dash == std::string::npos) throw DataError("pair label '" + label + "' is not src-trg");
    const std::string src = label.substr(0, dash);
    const std::string trg = label.substr(dash + 1);
    std::vector<double> p1;
    std::vector<double> dist;
    for (Index j = 0; j < rm.values.cols(); ++j) {
      if (rm.excluded(i, j)) continue;
      const auto& hub = rm.hubs[static_cast<std::size_t>(j)];
      p1.push_back(rm.values(i, j));
      dist.push_back(distances.at(src, hub) + distances.at(trg, hub));
    }
    try {
      out.per_pair.emplace_back(label, correlate(p1, dist, method));
    } catch (const DataError&) {
      continue;  // undefined for this pair
    }
  }
  if (out.per_pair.empty()) throw DataError("hub correlation undefined for every pair");
  double sum = 0.0;
  for (const auto& [_, r] : out.per_pair) sum += r;
  out.mean = sum / static_cast<double>(out.per_pair.size());
  return out;
}

}  // namespace xling
