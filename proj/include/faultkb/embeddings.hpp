#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "faultkb/matrix.hpp"
#include "faultkb/normalizer.hpp"

namespace faultkb {

struct EmbeddingModel {
  std::size_t dim = 0;
  std::vector<std::string> index_to_token;            // dense rows
  std::unordered_map<std::string, std::size_t> vocab;
  Matrix vectors;  // |vocab| x dim

  std::optional<std::size_t> lookup(const std::string& token) const {
    auto it = vocab.find(token);
    if (it == vocab.end()) return std::nullopt;
    return it->second;
  }
};

struct SkipgramConfig {
  std::size_t dim = 32;
  std::size_t window = 3;       // max offset; shrunk per center word2vec-style
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.05;
  std::size_t min_count = 1;
  std::uint64_t seed = 1;
};

// Skip-gram with negative sampling over the normalized corpus. Training is
// single-threaded and every stochastic choice comes from the seed, so a
// fixed seed reproduces the vectors bit for bit. Noise words are drawn from
// the unigram^0.75 distribution. Throws EmptyVocabulary when min_count
// filters out every token.
EmbeddingModel train_skipgram(const std::vector<NormalizedUtterance>& corpus,
                              const SkipgramConfig& cfg);

// Mean of in-vocabulary token vectors; nullopt when every token is OOV.
std::optional<std::vector<double>> phrase_vector(
    const std::vector<std::string>& surface_tokens, const EmbeddingModel& m);

// Dot product of the unit-normalized inputs. Throws ZeroVector.
double normalized_similarity(std::span<const double> a, std::span<const double> b);

// Text format: `|vocab| dim` header, then one `token v1 ... vdim` per line.
void save_vectors(const std::string& path, const EmbeddingModel& m);
EmbeddingModel load_vectors(const std::string& path);

}  // namespace faultkb
