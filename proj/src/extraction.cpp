#include "xling/extraction.hpp"

#include <algorithm>
#include <fstream>

#include "xling/error.hpp"
#include "xling/text.hpp"

namespace xling {

namespace {

void check_range(const Alignment& a, std::size_t src_len, std::size_t trg_len,
                 std::string_view what) {
  for (const auto& [i, j] : a) {
    if (i >= src_len || j >= trg_len) {
      throw DataError(std::string(what) + ": alignment point " + std::to_string(i) + "-" +
                      std::to_string(j) + " outside " + std::to_string(src_len) + "x" +
                      std::to_string(trg_len));
    }
  }
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(std::move(line));
  return lines;
}

}  // namespace

void AlignedBitext::validate() const {
  if (forward.size() != sentences.size() || reverse.size() != sentences.size()) {
    throw DataError("bitext: " + std::to_string(sentences.size()) + " sentence pairs but " +
                    std::to_string(forward.size()) + " forward and " +
                    std::to_string(reverse.size()) + " reverse alignments");
  }
  for (std::size_t k = 0; k < sentences.size(); ++k) {
    const auto where = "sentence " + std::to_string(k + 1);
    check_range(forward[k], sentences[k].source.size(), sentences[k].target.size(), where);
    check_range(reverse[k], sentences[k].source.size(), sentences[k].target.size(), where);
  }
}

Alignment parse_pharaoh(std::string_view line) {
  Alignment a;
  for (const auto tok : split_whitespace(line)) {
    const auto dash = tok.find('-');
    std::size_t i = 0;
    std::size_t j = 0;
    if (dash == std::string_view::npos || !parse_number(tok.substr(0, dash), i) ||
        !parse_number(tok.substr(dash + 1), j)) {
      throw DataError("malformed alignment token '" + std::string(tok) + "'");
    }
    a.emplace(i, j);
  }
  return a;
}

std::string format_pharaoh(const Alignment& alignment) {
  std::string out;
  for (const auto& [i, j] : alignment) {
    if (!out.empty()) out += ' ';
    out += std::to_string(i) + '-' + std::to_string(j);
  }
  return out;
}

std::vector<Alignment> read_alignments(const std::filesystem::path& path) {
  std::vector<Alignment> out;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(path)) {
    ++line_no;
    try {
      out.push_back(parse_pharaoh(line));
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::vector<std::string>> read_token_file(const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> out;
  for (const auto& line : read_lines(path)) {
    std::vector<std::string> tokens;
    for (const auto tok : split_whitespace(line)) tokens.emplace_back(tok);
    out.push_back(std::move(tokens));
  }
  return out;
}

AlignedBitext read_aligned_bitext(const std::filesystem::path& src_tokens,
                                  const std::filesystem::path& trg_tokens,
                                  const std::filesystem::path& forward,
                                  const std::filesystem::path& reverse) {
  auto src = read_token_file(src_tokens);
  auto trg = read_token_file(trg_tokens);
  if (src.size() != trg.size()) {
    throw DataError("token files differ in sentence count: " + std::to_string(src.size()) +
                    " vs " + std::to_string(trg.size()));
  }
  AlignedBitext bitext;
  bitext.sentences.reserve(src.size());
  for (std::size_t k = 0; k < src.size(); ++k) {
    bitext.sentences.push_back({std::move(src[k]), std::move(trg[k])});
  }
  bitext.forward = read_alignments(forward);
  bitext.reverse = read_alignments(reverse);
  bitext.validate();
  return bitext;
}

Alignment symmetrize_gdfa(const Alignment& forward, const Alignment& reverse,
                          std::size_t src_len, std::size_t trg_len) {
  check_range(forward, src_len, trg_len, "gdfa forward");
  check_range(reverse, src_len, trg_len, "gdfa reverse");

  std::vector<char> accepted(src_len * trg_len, 0);
  std::vector<int> src_aligned(src_len, 0);
  std::vector<int> trg_aligned(trg_len, 0);
  Alignment result;
  const auto accept = [&](const AlignmentPoint& p) {
    accepted[p.first * trg_len + p.second] = 1;
    ++src_aligned[p.first];
    ++trg_aligned[p.second];
    result.insert(p);
  };
  const auto is_accepted = [&](const AlignmentPoint& p) {
    return accepted[p.first * trg_len + p.second] != 0;
  };

  for (const auto& p : forward) {
    if (reverse.contains(p)) accept(p);
  }

  std::vector<AlignmentPoint> candidates;
  for (const auto& p : forward) {
    if (!is_accepted(p)) candidates.push_back(p);
  }
  for (const auto& p : reverse) {
    if (!forward.contains(p)) candidates.push_back(p);
  }

  const auto has_accepted_neighbor = [&](const AlignmentPoint& p) {
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        const auto ni = static_cast<std::ptrdiff_t>(p.first) + di;
        const auto nj = static_cast<std::ptrdiff_t>(p.second) + dj;
        if (ni < 0 || nj < 0 || ni >= static_cast<std::ptrdiff_t>(src_len) ||
            nj >= static_cast<std::ptrdiff_t>(trg_len)) {
          continue;
        }
        if (accepted[static_cast<std::size_t>(ni) * trg_len + static_cast<std::size_t>(nj)]) {
          return true;
        }
      }
    }
    return false;
  };

  for (bool added = true; added;) {
    added = false;
    for (const auto& p : candidates) {
      if (is_accepted(p)) continue;
      if ((src_aligned[p.first] == 0 || trg_aligned[p.second] == 0) && has_accepted_neighbor(p)) {
        accept(p);
        added = true;
      }
    }
  }

  for (const Alignment* side : {&forward, &reverse}) {
    for (const auto& p : *side) {
      if (!is_accepted(p) && src_aligned[p.first] == 0 && trg_aligned[p.second] == 0) accept(p);
    }
  }
  return result;
}

void PairStats::merge(const PairStats& other) {
  for (const auto& [k, v] : other.cooc) cooc[k] += v;
  for (const auto& [k, v] : other.src_marginal) src_marginal[k] += v;
  for (const auto& [k, v] : other.trg_marginal) trg_marginal[k] += v;
  for (const auto& [k, v] : other.src_freq) src_freq[k] += v;
}

PairStats count_pairs(const AlignedBitext& bitext, const std::vector<Alignment>& symmetrized) {
  if (symmetrized.size() != bitext.sentences.size()) {
    throw DataError("count_pairs: " + std::to_string(symmetrized.size()) +
                    " alignments for " + std::to_string(bitext.sentences.size()) + " sentences");
  }
  PairStats stats;
  for (std::size_t k = 0; k < bitext.sentences.size(); ++k) {
    const auto& sent = bitext.sentences[k];
    check_range(symmetrized[k], sent.source.size(), sent.target.size(),
                "sentence " + std::to_string(k + 1));
    for (const auto& w : sent.source) ++stats.src_freq[w];
    for (const auto& [i, j] : symmetrized[k]) {
      ++stats.cooc[{sent.source[i], sent.target[j]}];
      ++stats.src_marginal[sent.source[i]];
      ++stats.trg_marginal[sent.target[j]];
    }
  }
  return stats;
}

Lexicon extract_pairs(const PairStats& stats, const ExtractionOptions& options) {
  struct Kept {
    const std::string* target;
    long count;
  };
  std::unordered_map<std::string, std::vector<Kept>> kept;
  for (const auto& [pair, count] : stats.cooc) {
    const auto& [s, t] = pair;
    const long gate = options.count_on == CountThreshold::cooccurrence
                          ? count
                          : (stats.src_freq.contains(s) ? stats.src_freq.at(s) : 0);
    if (gate <= options.min_count) continue;
    const double p_st = static_cast<double>(count) / static_cast<double>(stats.src_marginal.at(s));
    const double p_ts = static_cast<double>(count) / static_cast<double>(stats.trg_marginal.at(t));
    if (p_st > options.min_prob && p_ts > options.min_prob) kept[s].push_back({&t, count});
  }

  std::vector<const std::string*> sources;
  sources.reserve(kept.size());
  for (const auto& [s, _] : kept) sources.push_back(&s);
  const auto freq = [&](const std::string& s) {
    const auto it = stats.src_freq.find(s);
    return it == stats.src_freq.end() ? 0L : it->second;
  };
  std::sort(sources.begin(), sources.end(), [&](const std::string* a, const std::string* b) {
    const long fa = freq(*a);
    const long fb = freq(*b);
    return fa != fb ? fa > fb : *a < *b;
  });

  Lexicon lex;
  for (const auto* s : sources) {
    auto& targets = kept.at(*s);
    std::sort(targets.begin(), targets.end(), [](const Kept& a, const Kept& b) {
      return a.count != b.count ? a.count > b.count : *a.target < *b.target;
    });
    for (const auto& k : targets) lex.add(*s, *k.target);
  }
  return lex;
}

Lexicon eval_band(const Lexicon& lex, std::size_t lo, std::size_t hi) {
  Lexicon out(lex.src_lang(), lex.trg_lang());
  const auto& sources = lex.sources();
  for (std::size_t r = lo; r < std::min(hi, sources.size()); ++r) {
    for (const auto& t : lex.translations(sources[r])) out.add(sources[r], t);
  }
  return out;
}

}  // namespace xling
