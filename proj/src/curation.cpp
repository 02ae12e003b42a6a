#include "faultkb/curation.hpp"

#include <cctype>
#include <filesystem>

#include "faultkb/errors.hpp"
#include "faultkb/io_util.hpp"

namespace faultkb {

void CurationConfig::validate() const {
  auto in_unit = [](double x) { return x >= -1.0 && x <= 1.0; };
  if (!in_unit(S_p) || !in_unit(S_c) || !in_unit(sentiment_threshold))
    throw ConfigError("similarity thresholds must lie in [-1, 1]");
}

std::string prune_reason_name(PruneReason r) {
  switch (r) {
    case PruneReason::statistical: return "statistical";
    case PruneReason::linguistic: return "linguistic";
    case PruneReason::embedding: return "embedding";
    case PruneReason::sentiment: return "sentiment";
  }
  return "statistical";
}

Partition prune_statistical(const std::vector<CandidateEntity>& cands, std::size_t f) {
  Partition p;
  for (const auto& c : cands) {
    (c.frequency < f ? p.pruned : p.kept).push_back(c);
  }
  return p;
}

namespace {

std::size_t letter_count(const std::string& term) {
  std::size_t n = 0;
  for (char c : term)
    if (std::isalpha(static_cast<unsigned char>(c))) ++n;
  return n;
}

bool mixes_letters_and_digits(const std::string& term) {
  bool letter = false;
  bool digit = false;
  for (char c : term) {
    if (std::isalpha(static_cast<unsigned char>(c))) letter = true;
    if (std::isdigit(static_cast<unsigned char>(c))) digit = true;
  }
  return letter && digit;
}

}  // namespace

Partition prune_linguistic(const std::vector<CandidateEntity>& cands,
                           const CurationConfig& cfg) {
  Partition p;
  for (const auto& c : cands) {
    const std::size_t max_terms =
        c.role == Role::component ? cfg.T_component : cfg.T_problem;
    const std::size_t min_letters =
        c.role == Role::component ? cfg.L_component : cfg.L_problem;
    const auto terms = split_ws(c.surface);
    bool ok = terms.size() <= max_terms;
    for (const auto& term : terms) {
      if (!ok) break;
      if (letter_count(term) < min_letters || mixes_letters_and_digits(term)) ok = false;
    }
    (ok ? p.kept : p.pruned).push_back(c);
  }
  return p;
}

Partition prune_embedding(const std::vector<CandidateEntity>& cands,
                          const EmbeddingModel& m, const CurationConfig& cfg) {
  const std::size_t n = cands.size();
  std::vector<std::optional<std::vector<double>>> vecs(n);
  for (std::size_t i = 0; i < n; ++i)
    vecs[i] = phrase_vector(split_ws(cands[i].surface), m);

  Partition p;
  for (std::size_t i = 0; i < n; ++i) {
    if (!vecs[i]) {
      p.pruned.push_back(cands[i]);
      continue;
    }
    const bool is_problem = cands[i].role == Role::problem;
    const std::size_t needed = is_problem ? cfg.P : cfg.C;
    const double threshold = is_problem ? cfg.S_p : cfg.S_c;
    std::size_t neighbors = 0;
    for (std::size_t j = 0; j < n && neighbors < needed; ++j) {
      if (j == i || cands[j].role != cands[i].role || !vecs[j]) continue;
      if (normalized_similarity(*vecs[i], *vecs[j]) >= threshold) ++neighbors;
    }
    (neighbors >= needed ? p.kept : p.pruned).push_back(cands[i]);
  }
  return p;
}

Partition prune_sentiment(const std::vector<CandidateEntity>& cands,
                          const EmbeddingModel& m,
                          const std::vector<std::string>& negative_lexicon,
                          const CurationConfig& cfg) {
  std::vector<std::vector<double>> neg_vecs;
  for (const auto& word : negative_lexicon) {
    auto v = phrase_vector(split_ws(word), m);
    if (v) neg_vecs.push_back(std::move(*v));
  }
  Partition p;
  for (const auto& c : cands) {
    if (c.role != Role::problem) {
      p.kept.push_back(c);
      continue;
    }
    auto v = phrase_vector(split_ws(c.surface), m);
    bool negative = false;
    if (v) {
      for (const auto& nv : neg_vecs) {
        if (normalized_similarity(*v, nv) >= cfg.sentiment_threshold) {
          negative = true;
          break;
        }
      }
    }
    (negative ? p.kept : p.pruned).push_back(c);
  }
  return p;
}

CurationReport curate_pipeline(
    const std::vector<CandidateEntity>& cands, const EmbeddingModel& m,
    const std::optional<std::vector<std::string>>& negative_lexicon,
    const CurationConfig& cfg) {
  cfg.validate();
  CurationReport report;
  auto record = [&](const std::vector<CandidateEntity>& pruned, PruneReason reason) {
    for (const auto& c : pruned) report.pruned.push_back(PrunedEntity{c, reason});
  };

  Partition stage = prune_statistical(cands, cfg.F);
  record(stage.pruned, PruneReason::statistical);

  stage = prune_linguistic(stage.kept, cfg);
  record(stage.pruned, PruneReason::linguistic);

  stage = prune_embedding(stage.kept, m, cfg);
  record(stage.pruned, PruneReason::embedding);

  if (negative_lexicon) {
    stage = prune_sentiment(stage.kept, m, *negative_lexicon, cfg);
    record(stage.pruned, PruneReason::sentiment);
  }

  report.kept = std::move(stage.kept);
  return report;
}

std::vector<std::string> load_negative_lexicon(const std::string& path) {
  if (!std::filesystem::exists(path))
    throw LexiconMissing("negative-sentiment lexicon not found: " + path);
  std::vector<std::string> words;
  for (const auto& line : read_lines(path)) {
    if (is_comment_or_blank(line)) continue;
    words.push_back(trim(line));
  }
  if (words.empty()) throw LexiconMissing("negative-sentiment lexicon is empty: " + path);
  return words;
}

CurationConfig parse_curation_config(
    const std::vector<std::pair<std::string, std::string>>& entries) {
  CurationConfig cfg;
  auto as_count = [](const std::string& k, const std::string& v) -> std::size_t {
    try {
      const long long n = std::stoll(v);
      if (n < 0) throw ConfigError(k + " must be >= 0");
      return static_cast<std::size_t>(n);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("bad value for " + k + ": '" + v + "'");
    }
  };
  auto as_real = [](const std::string& k, const std::string& v) -> double {
    try {
      return std::stod(v);
    } catch (const std::exception&) {
      throw ConfigError("bad value for " + k + ": '" + v + "'");
    }
  };
  for (const auto& [key, value] : entries) {
    if (key == "F") cfg.F = as_count(key, value);
    else if (key == "T_component") cfg.T_component = as_count(key, value);
    else if (key == "T_problem") cfg.T_problem = as_count(key, value);
    else if (key == "L_component") cfg.L_component = as_count(key, value);
    else if (key == "L_problem") cfg.L_problem = as_count(key, value);
    else if (key == "P") cfg.P = as_count(key, value);
    else if (key == "S_p") cfg.S_p = as_real(key, value);
    else if (key == "C") cfg.C = as_count(key, value);
    else if (key == "S_c") cfg.S_c = as_real(key, value);
    else if (key == "sentiment_threshold") cfg.sentiment_threshold = as_real(key, value);
  }
  cfg.validate();
  return cfg;
}

void write_curation_report(const std::string& path, const CurationReport& report) {
  std::string out;
  for (const auto& c : report.kept) {
    out += "kept\t" + role_name(c.role) + "\t" + c.surface + "\t-\n";
  }
  for (const auto& [c, reason] : report.pruned) {
    out += "pruned\t" + role_name(c.role) + "\t" + c.surface + "\t" +
           prune_reason_name(reason) + "\n";
  }
  write_file_atomic(path, out);
}

KeptPools kept_pools(const CurationReport& report) {
  KeptPools pools;
  for (const auto& c : report.kept) {
    (c.role == Role::component ? pools.components : pools.problems).insert(c.surface);
  }
  return pools;
}

KeptPools load_kept_pools(const std::string& report_path) {
  KeptPools pools;
  const auto lines = read_lines(report_path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto cols = split(lines[i], '\t');
    if (cols.size() != 4)
      throw FormatError(report_path, i + 1, "expected kept|pruned<TAB>role<TAB>surface<TAB>reason");
    if (cols[0] == "kept") {
      try {
        const Role role = parse_role(cols[1]);
        (role == Role::component ? pools.components : pools.problems).insert(cols[2]);
      } catch (const FormatError& e) {
        throw FormatError(report_path, i + 1, e.what());
      }
    } else if (cols[0] != "pruned") {
      throw FormatError(report_path, i + 1, "first column must be kept or pruned");
    }
  }
  return pools;
}

}  // namespace faultkb
