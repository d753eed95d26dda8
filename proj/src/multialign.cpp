#include "xling/multialign.hpp"

#include <fstream>
#include <set>

#include "xling/text.hpp"

namespace xling {

SeedStrategy parse_seed_strategy(std::string_view name) {
  if (name == "identical") return SeedStrategy::identical;
  if (name == "numerals") return SeedStrategy::numerals;
  if (name == "similarity") return SeedStrategy::similarity;
  throw ConfigError("unknown seed strategy '" + std::string(name) + "'");
}

std::string to_string(SeedStrategy strategy) {
  switch (strategy) {
    case SeedStrategy::identical:
      return "identical";
    case SeedStrategy::numerals:
      return "numerals";
    case SeedStrategy::similarity:
      return "similarity";
  }
  return "identical";
}

SeedChoice make_seed(const EmbeddingSpace& src, const EmbeddingSpace& trg, const SeedConfig& cfg,
                     Warnings* warnings) {
  if (cfg.strategy != SeedStrategy::similarity) {
    auto seed = seed_identical(src, trg, cfg.strategy == SeedStrategy::numerals);
    if (!seed.empty()) return {std::move(seed), cfg.strategy};
    warn(warnings, src.language() + "->" + trg.language() +
                       ": no identical strings, falling back to similarity seed");
  }
  return {seed_monolingual_similarity(src, trg, cfg.similarity_vocab, warnings),
          SeedStrategy::similarity};
}

MultiSpace::MultiSpace(std::string hub, std::vector<std::shared_ptr<const EmbeddingSpace>> spaces,
                       std::map<std::string, OrthogonalMap> maps)
    : hub_(std::move(hub)), maps_(std::move(maps)) {
  for (auto& s : spaces) {
    const std::string code = s->language();
    if (!spaces_.emplace(code, std::move(s)).second) {
      throw ConfigError("language '" + code + "' listed twice");
    }
    order_.push_back(code);
  }
  if (!spaces_.contains(hub_)) throw ConfigError("hub '" + hub_ + "' is not among the languages");
  if (maps_.size() != spaces_.size()) throw DataError("multispace: maps and spaces differ");
  const Index dim = spaces_.at(hub_)->dim();
  for (const auto& [code, m] : maps_) {
    if (!spaces_.contains(code)) throw DataError("multispace: map for unknown language " + code);
    if (m.dim() != dim) throw DataError("multispace: map for " + code + " has wrong dimension");
    if (!m.is_orthogonal()) throw DataError("multispace: map for " + code + " is not orthogonal");
  }
  if (maps_.at(hub_).w != Matrix::Identity(dim, dim)) {
    throw DataError("multispace: hub map must be the identity");
  }
}

const EmbeddingSpace& MultiSpace::space(const std::string& code) const {
  const auto it = spaces_.find(code);
  if (it == spaces_.end()) throw ConfigError("unknown language '" + code + "'");
  return *it->second;
}

const OrthogonalMap& MultiSpace::map(const std::string& code) const {
  const auto it = maps_.find(code);
  if (it == maps_.end()) throw ConfigError("unknown language '" + code + "'");
  return it->second;
}

namespace {

[[noreturn]] void rethrow_for(const std::string& code, std::exception_ptr failure) {
  try {
    std::rethrow_exception(failure);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(code + ": " + e.what(), e.iteration());
  } catch (const ConfigError& e) {
    throw ConfigError(code + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(code + ": " + e.what());
  }
}

}  // namespace

MultiSpace align_to_hub(std::vector<std::shared_ptr<const EmbeddingSpace>> spaces,
                        const std::string& hub, const SeedConfig& seed_cfg,
                        const RefinementConfig& cfg, std::vector<LanguageReport>* reports,
                        unsigned threads) {
  cfg.validate();
  const EmbeddingSpace* hub_space = nullptr;
  for (const auto& s : spaces) {
    if (s->language() == hub) hub_space = s.get();
  }
  if (!hub_space) throw ConfigError("hub '" + hub + "' is not among the languages");
  for (const auto& s : spaces) {
    if (s->dim() != hub_space->dim()) {
      throw ConfigError(s->language() + ": dimension " + std::to_string(s->dim()) +
                        " differs from hub dimension " + std::to_string(hub_space->dim()));
    }
  }

  const std::size_t n = spaces.size();
  std::vector<LanguageReport> local(n);
  std::vector<Warnings> warnings(n);
  std::vector<std::exception_ptr> failures(n);
  parallel_for(
      n, 1,
      [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
          const auto& src = *spaces[i];
          local[i].language = src.language();
          if (src.language() == hub) {
            local[i].learned.map = OrthogonalMap::identity(hub_space->dim(), hub, hub);
            local[i].learned.converged = true;
            continue;
          }
          try {
            auto choice = make_seed(src, *hub_space, seed_cfg, &warnings[i]);
            local[i].seed_used = choice.used;
            local[i].seed_size = choice.seed.size();
            local[i].learned = self_learn(src, *hub_space, choice.seed, cfg, &warnings[i]);
          } catch (const Error&) {
            failures[i] = std::current_exception();
          }
        }
      },
      threads);
  for (std::size_t i = 0; i < n; ++i) {
    if (failures[i]) rethrow_for(spaces[i]->language(), failures[i]);
  }

  std::map<std::string, OrthogonalMap> maps;
  for (const auto& r : local) maps.emplace(r.language, r.learned.map);
  MultiSpace ms(hub, std::move(spaces), std::move(maps));
  if (reports) *reports = std::move(local);
  return ms;
}

PairView pair_view(const MultiSpace& ms, const std::string& src, const std::string& trg) {
  const auto view = [&](const std::string& code) -> Matrix {
    const auto& vectors = ms.space(code).vectors();
    if (code == ms.hub()) return vectors;
    return ms.map(code).apply(vectors);
  };
  return {view(src), view(trg)};
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
  std::filesystem::path p{std::string(value)};
  return p.is_absolute() ? p : base / p;
}

template <typename T>
T parse_value(std::string_view key, std::string_view value) {
  T out{};
  if (!parse_number(value, out)) {
    throw ConfigError("manifest: bad value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

}  // namespace

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest " + path.string());
  const auto base = path.parent_path();
  Manifest m;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(body.substr(0, eq));
    const auto value = trim(body.substr(eq + 1));
    if (!seen.emplace(key).second) {
      throw ConfigError(path.string() + ": duplicate key '" + std::string(key) + "'");
    }
    if (key.starts_with("lang.")) {
      m.languages.emplace_back(std::string(key.substr(5)), resolve(base, value));
    } else if (key.starts_with("map.")) {
      m.maps.emplace(std::string(key.substr(4)), resolve(base, value));
    } else if (key == "hub") {
      m.hub = value;
    } else if (key == "seed") {
      m.seed.strategy = parse_seed_strategy(value);
    } else if (key == "similarity_vocab") {
      m.seed.similarity_vocab = parse_value<Index>(key, value);
    } else if (key == "max_iters") {
      m.refine.max_iters = parse_value<int>(key, value);
    } else if (key == "induction_vocab") {
      m.refine.induction_vocab = parse_value<Index>(key, value);
    } else if (key == "csls_k") {
      m.refine.csls_k = parse_value<int>(key, value);
    } else if (key == "stop_delta") {
      m.refine.stop_delta = parse_value<double>(key, value);
    } else if (key == "normalize") {
      m.normalization = parse_norm_steps(value);
    } else if (key == "max_vocab") {
      m.max_vocab = parse_value<std::size_t>(key, value);
    } else if (key == "random_seed") {
      m.random_seed = parse_value<std::uint64_t>(key, value);
    } else {
      throw ConfigError(path.string() + ": unknown key '" + std::string(key) + "'");
    }
  }
  if (m.hub.empty()) throw ConfigError(path.string() + ": missing 'hub'");
  if (m.languages.empty()) throw ConfigError(path.string() + ": no lang.<code> entries");
  m.refine.validate();
  return m;
}

void write_manifest(const Manifest& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  std::string norm;
  for (const auto step : m.normalization) {
    if (!norm.empty()) norm += ',';
    norm += step == NormStep::unit ? "unit" : "center";
  }
  out << "hub = " << m.hub << '\n'
      << "seed = " << to_string(m.seed.strategy) << '\n'
      << "similarity_vocab = " << m.seed.similarity_vocab << '\n'
      << "max_iters = " << m.refine.max_iters << '\n'
      << "induction_vocab = " << m.refine.induction_vocab << '\n'
      << "csls_k = " << m.refine.csls_k << '\n'
      << "stop_delta = " << format_double(m.refine.stop_delta) << '\n'
      << "normalize = " << (norm.empty() ? "none" : norm) << '\n'
      << "max_vocab = " << m.max_vocab << '\n'
      << "random_seed = " << m.random_seed << '\n';
  for (const auto& [code, p] : m.languages) out << "lang." << code << " = " << p.string() << '\n';
  for (const auto& [code, p] : m.maps) out << "map." << code << " = " << p.string() << '\n';
}

std::vector<std::shared_ptr<const EmbeddingSpace>> load_spaces(const Manifest& manifest) {
  std::vector<std::shared_ptr<const EmbeddingSpace>> spaces;
  for (const auto& [code, p] : manifest.languages) {
    if (!std::filesystem::exists(p)) throw ConfigError(code + ": missing embedding file " + p.string());
  }
  for (const auto& [code, p] : manifest.languages) {
    spaces.push_back(std::make_shared<const EmbeddingSpace>(
        normalize(load_embeddings(p, manifest.max_vocab, code), manifest.normalization)));
  }
  return spaces;
}

void save_multispace(const MultiSpace& ms, Manifest manifest, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  manifest.maps.clear();
  for (const auto& code : ms.languages()) {
    const std::string file = "map." + code + ".txt";
    save_map(ms.map(code), dir / file);
    manifest.maps.emplace(code, file);
  }
  for (auto& [code, p] : manifest.languages) p = std::filesystem::absolute(p);
  write_manifest(manifest, dir / "manifest.txt");
}

MultiSpace load_multispace(const std::filesystem::path& manifest_path) {
  const auto manifest = read_manifest(manifest_path);
  auto spaces = load_spaces(manifest);
  std::map<std::string, OrthogonalMap> maps;
  for (const auto& [code, _] : manifest.languages) {
    const auto it = manifest.maps.find(code);
    if (it == manifest.maps.end()) throw ConfigError("manifest lacks map." + code);
    maps.emplace(code, load_map(it->second));
  }
  return MultiSpace(manifest.hub, std::move(spaces), std::move(maps));
}

}  // namespace xling
