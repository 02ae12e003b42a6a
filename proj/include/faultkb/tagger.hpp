#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "faultkb/curation.hpp"
#include "faultkb/iob.hpp"
#include "faultkb/matrix.hpp"
#include "faultkb/pos.hpp"
#include "faultkb/rules.hpp"

namespace faultkb {

struct TrainExample {
  std::vector<std::string> tokens;
  std::vector<IobTag> tags;  // same length, at least one non-O
};

// Every trainable tensor of the encoder-decoder. Gate rows of the fused
// LSTM weight matrices are ordered [input; forget; output; cell]. The
// decoder input is [previous tag embedding; previous attention context], so
// its gates act on d + 2h values; the output projection reads the
// concatenated [decoder hidden; context].
struct TaggerTensors {
  Matrix tok_emb;  // |V_in| x d
  Matrix tag_emb;  // |V_tag| x d
  Matrix enc_w;    // 4h x (d + h)
  Matrix enc_b;    // 1 x 4h
  Matrix dec_w;    // 4h x (d + 2h)
  Matrix dec_b;    // 1 x 4h
  Matrix attn_w;   // h x h, multiplicative attention scores
  Matrix out_w;    // |V_tag| x 2h
  Matrix out_b;    // 1 x |V_tag|

  std::vector<std::pair<std::string, Matrix*>> views();
  std::vector<std::pair<std::string, const Matrix*>> views() const;
};

TaggerTensors zeros_like(const TaggerTensors& t);

inline constexpr std::size_t kUnkIndex = 0;
inline const char* const kUnkToken = "<unk>";

struct Seq2SeqParams {
  std::size_t d = 0;  // embedding size
  std::size_t h = 0;  // hidden size
  std::vector<std::string> index_to_token;  // index 0 is <unk>
  std::unordered_map<std::string, std::size_t> token_vocab;
  TaggerTensors t;

  std::size_t token_id(const std::string& token) const {
    auto it = token_vocab.find(token);
    return it == token_vocab.end() ? kUnkIndex : it->second;
  }
};

struct TrainerConfig {
  std::size_t d = 32;
  std::size_t h = 48;
  std::size_t epochs = 30;
  double learning_rate = 0.25;
  std::size_t batch_size = 8;
  std::uint64_t seed = 1;
  double clip_norm = 5.0;
  bool teacher_forcing = true;  // training always teacher-forces

  void validate() const;  // throws ConfigError
};

// Labels every rule-matched utterance whose extracted entities all survived
// curation: entity spans become B-x/I-x, car-option positions CAR-OPTION,
// everything else O. Utterances with a pruned entity are dropped. The
// result keeps POS tags so it round-trips through write_tagged_corpus.
std::vector<TaggedUtterance> build_training_set(
    const std::vector<TaggedUtterance>& corpus,
    const std::map<std::size_t, RuleMatch>& matches, const KeptPools& kept);

// Extracts (tokens, gold tags) pairs; utterances without gold are rejected.
std::vector<TrainExample> to_train_examples(
    const std::vector<TaggedUtterance>& corpus);

struct EncodeResult {
  std::vector<std::vector<double>> hidden;  // one h-vector per token
  std::vector<double> final_h;
  std::vector<double> final_c;
};

// OOV tokens map to the reserved <unk> row.
EncodeResult encode(const std::vector<std::string>& tokens,
                    const Seq2SeqParams& params);

// s_i = decoder_h^T attn_w enc_i, softmax-normalized over positions.
std::vector<double> attention_weights(
    std::span<const double> decoder_h,
    const std::vector<std::vector<double>>& encoder_states, const Matrix& attn_w);

// Greedy argmax decoding, one tag per input position, IOB-repaired.
std::vector<IobTag> decode_greedy(const EncodeResult& encoded,
                                  const Seq2SeqParams& params);

struct LossAndGrads {
  double loss = 0.0;  // mean token-level cross-entropy
  TaggerTensors grads;
};

// Teacher-forced loss and exact gradients via backpropagation through time
// (through the output projection, attention, input feeding, both LSTMs, and
// the embeddings).
LossAndGrads loss_and_gradients(const std::vector<TrainExample>& batch,
                                const Seq2SeqParams& params);

struct TrainResult {
  Seq2SeqParams params;
  std::vector<double> epoch_loss;
};

// Seeded SGD with global gradient-norm clipping. Deterministic for a fixed
// config. Throws EmptyTrainingSet.
TrainResult train(const std::vector<TrainExample>& examples,
                  const TrainerConfig& cfg);

struct TagResult {
  std::vector<IobTag> tags;
  std::vector<std::pair<Role, std::string>> entities;  // grouped B/I runs
  std::set<std::size_t> car_option_positions;
};

TagResult tag_utterance(const NormalizedUtterance& u, const Seq2SeqParams& params);
TagResult tag_tokens(const std::vector<std::string>& tokens,
                     const Seq2SeqParams& params);

// Versioned binary (magic, version, dims, vocabulary, row-major tensors as
// little-endian 64-bit floats). Round-trips exactly.
void save_model(const std::string& path, const Seq2SeqParams& params);
Seq2SeqParams load_model(const std::string& path);

}  // namespace faultkb
