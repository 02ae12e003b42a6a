#include "faultkb/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "faultkb/errors.hpp"
#include "faultkb/io_util.hpp"
#include "faultkb/rng.hpp"
#include "faultkb/simd/kernels.hpp"

namespace faultkb {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Cumulative unigram^0.75 table; sampling is a binary search over one
// uniform draw, which keeps the noise sequence a pure function of the seed.
struct NoiseTable {
  std::vector<double> cumulative;

  explicit NoiseTable(const std::vector<std::size_t>& counts) {
    cumulative.resize(counts.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      acc += std::pow(static_cast<double>(counts[i]), 0.75);
      cumulative[i] = acc;
    }
  }

  std::size_t sample(Rng& rng) const {
    const double u = rng.uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    return static_cast<std::size_t>(it - cumulative.begin());
  }
};

}  // namespace

EmbeddingModel train_skipgram(const std::vector<NormalizedUtterance>& corpus,
                              const SkipgramConfig& cfg) {
  // Vocabulary: count, filter by min_count, order by (count desc, token asc).
  std::map<std::string, std::size_t> counts;
  for (const auto& u : corpus)
    for (const auto& tok : u.tokens) ++counts[tok];

  std::vector<std::pair<std::string, std::size_t>> kept;
  for (const auto& [tok, c] : counts)
    if (c >= cfg.min_count) kept.emplace_back(tok, c);
  if (kept.empty())
    throw EmptyVocabulary("min_count=" + std::to_string(cfg.min_count) +
                          " filters out every token");
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  EmbeddingModel model;
  model.dim = cfg.dim;
  std::vector<std::size_t> vocab_counts;
  for (const auto& [tok, c] : kept) {
    model.vocab.emplace(tok, model.index_to_token.size());
    model.index_to_token.push_back(tok);
    vocab_counts.push_back(c);
  }
  const std::size_t v = model.index_to_token.size();

  // Sentences with sub-min_count tokens dropped before windowing.
  std::vector<std::vector<std::size_t>> sentences;
  std::size_t total_positions = 0;
  for (const auto& u : corpus) {
    std::vector<std::size_t> ids;
    for (const auto& tok : u.tokens) {
      auto idx = model.lookup(tok);
      if (idx) ids.push_back(*idx);
    }
    if (ids.size() >= 2) {
      total_positions += ids.size();
      sentences.push_back(std::move(ids));
    }
  }

  Rng rng(cfg.seed);
  Matrix in(v, cfg.dim);
  Matrix out(v, cfg.dim);
  in.fill_uniform(rng, -0.5 / static_cast<double>(cfg.dim),
                  0.5 / static_cast<double>(cfg.dim));

  NoiseTable noise(vocab_counts);
  std::vector<double> grad_in(cfg.dim);

  const double total_steps =
      std::max<double>(1.0, static_cast<double>(cfg.epochs * total_positions));
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const auto& sent : sentences) {
      for (std::size_t center = 0; center < sent.size(); ++center, ++step) {
        const double progress = static_cast<double>(step) / total_steps;
        const double lr =
            std::max(cfg.learning_rate * (1.0 - progress), cfg.learning_rate * 1e-4);
        const std::size_t effective =
            1 + static_cast<std::size_t>(rng.below(cfg.window));
        const std::size_t lo = center >= effective ? center - effective : 0;
        const std::size_t hi = std::min(sent.size() - 1, center + effective);
        for (std::size_t ctx = lo; ctx <= hi; ++ctx) {
          if (ctx == center) continue;
          const std::size_t w = sent[center];
          const std::size_t target = sent[ctx];
          std::fill(grad_in.begin(), grad_in.end(), 0.0);
          for (std::size_t k = 0; k <= cfg.negatives; ++k) {
            std::size_t sample = target;
            double label = 1.0;
            if (k > 0) {
              sample = noise.sample(rng);
              if (sample == target) continue;
              label = 0.0;
            }
            const double score = simd::dot(in.row(w), out.row(sample));
            const double g = lr * (label - sigmoid(score));
            simd::axpy(g, out.row(sample), grad_in);
            simd::axpy(g, in.row(w), out.row(sample));
          }
          simd::axpy(1.0, grad_in, in.row(w));
        }
      }
    }
  }
  model.vectors = std::move(in);
  return model;
}

std::optional<std::vector<double>> phrase_vector(
    const std::vector<std::string>& surface_tokens, const EmbeddingModel& m) {
  std::vector<double> mean(m.dim, 0.0);
  std::size_t hits = 0;
  for (const auto& tok : surface_tokens) {
    auto idx = m.lookup(tok);
    if (!idx) continue;
    simd::axpy(1.0, m.vectors.row(*idx), mean);
    ++hits;
  }
  if (hits == 0) return std::nullopt;
  for (double& v : mean) v /= static_cast<double>(hits);
  return mean;
}

double normalized_similarity(std::span<const double> a, std::span<const double> b) {
  const double na = std::sqrt(simd::dot(a, a));
  const double nb = std::sqrt(simd::dot(b, b));
  if (na == 0.0 || nb == 0.0) throw ZeroVector();
  return simd::dot(a, b) / (na * nb);
}

void save_vectors(const std::string& path, const EmbeddingModel& m) {
  std::string out = std::to_string(m.index_to_token.size()) + " " +
                    std::to_string(m.dim) + "\n";
  char buf[48];
  for (std::size_t i = 0; i < m.index_to_token.size(); ++i) {
    out += m.index_to_token[i];
    for (double v : m.vectors.row(i)) {
      std::snprintf(buf, sizeof buf, " %.8g", v);
      out += buf;
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

EmbeddingModel load_vectors(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw FormatError(path, 1, "missing header");
  const auto header = split_ws(lines[0]);
  if (header.size() != 2) throw FormatError(path, 1, "expected `|vocab| dim` header");
  std::size_t count = 0;
  std::size_t dim = 0;
  try {
    count = std::stoul(header[0]);
    dim = std::stoul(header[1]);
  } catch (const std::exception&) {
    throw FormatError(path, 1, "bad header");
  }
  EmbeddingModel m;
  m.dim = dim;
  m.vectors = Matrix(count, dim);
  std::size_t row = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto cols = split_ws(lines[i]);
    if (cols.size() != dim + 1)
      throw FormatError(path, i + 1, "expected token + " + std::to_string(dim) + " values");
    if (row >= count) throw FormatError(path, i + 1, "more rows than the header declares");
    if (m.vocab.count(cols[0])) throw FormatError(path, i + 1, "duplicate token");
    m.vocab.emplace(cols[0], row);
    m.index_to_token.push_back(cols[0]);
    try {
      for (std::size_t d = 0; d < dim; ++d) m.vectors.at(row, d) = std::stod(cols[d + 1]);
    } catch (const std::exception&) {
      throw FormatError(path, i + 1, "bad vector value");
    }
    ++row;
  }
  if (row != count)
    throw FormatError(path, lines.size(), "header declares " + std::to_string(count) +
                                              " rows, found " + std::to_string(row));
  return m;
}

}  // namespace faultkb
