#include "faultkb/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>

#include "faultkb/errors.hpp"
#include "faultkb/io_util.hpp"
#include "faultkb/rng.hpp"

namespace faultkb {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

using Vec = std::vector<double>;

void softmax_inplace(Vec& v) {
  const double mx = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double& x : v) {
    x = std::exp(x - mx);
    sum += x;
  }
  for (double& x : v) x /= sum;
}

// ---------------------------------------------------------------------------
// LSTM cell: fused gate matrix, rows [i; f; o; g] over z = [x; h_prev].
// ---------------------------------------------------------------------------

struct LstmCache {
  Vec z;       // [x; h_prev]
  Vec i, f, o, g;
  Vec c_prev;
  Vec c;
  Vec tanh_c;
  Vec h;
};

LstmCache lstm_forward(const Matrix& w, const Matrix& b, std::span<const double> x,
                       const Vec& h_prev, const Vec& c_prev) {
  const std::size_t hidden = h_prev.size();
  LstmCache cache;
  cache.z.resize(x.size() + hidden);
  std::copy(x.begin(), x.end(), cache.z.begin());
  std::copy(h_prev.begin(), h_prev.end(), cache.z.begin() + static_cast<std::ptrdiff_t>(x.size()));

  Vec pre(4 * hidden);
  matvec(w, cache.z, pre);
  simd::axpy(1.0, b.row(0), pre);

  cache.i.resize(hidden);
  cache.f.resize(hidden);
  cache.o.resize(hidden);
  cache.g.resize(hidden);
  for (std::size_t k = 0; k < hidden; ++k) {
    cache.i[k] = sigmoid(pre[k]);
    cache.f[k] = sigmoid(pre[hidden + k]);
    cache.o[k] = sigmoid(pre[2 * hidden + k]);
    cache.g[k] = std::tanh(pre[3 * hidden + k]);
  }
  cache.c_prev = c_prev;
  cache.c.resize(hidden);
  cache.tanh_c.resize(hidden);
  cache.h.resize(hidden);
  for (std::size_t k = 0; k < hidden; ++k) {
    cache.c[k] = cache.f[k] * c_prev[k] + cache.i[k] * cache.g[k];
    cache.tanh_c[k] = std::tanh(cache.c[k]);
    cache.h[k] = cache.o[k] * cache.tanh_c[k];
  }
  return cache;
}

// Consumes dh/dc for this step, emits dz and dc_prev, accumulates dW/db.
void lstm_backward(const Matrix& w, const LstmCache& cache, const Vec& dh,
                   const Vec& dc_in, Matrix& dw, Matrix& db, Vec& dz_out,
                   Vec& dc_prev_out) {
  const std::size_t hidden = dh.size();
  Vec dc(hidden);
  for (std::size_t k = 0; k < hidden; ++k) {
    dc[k] = dc_in[k] + dh[k] * cache.o[k] * (1.0 - cache.tanh_c[k] * cache.tanh_c[k]);
  }
  Vec dpre(4 * hidden);
  for (std::size_t k = 0; k < hidden; ++k) {
    const double di = dc[k] * cache.g[k];
    const double df = dc[k] * cache.c_prev[k];
    const double do_ = dh[k] * cache.tanh_c[k];
    const double dg = dc[k] * cache.i[k];
    dpre[k] = di * cache.i[k] * (1.0 - cache.i[k]);
    dpre[hidden + k] = df * cache.f[k] * (1.0 - cache.f[k]);
    dpre[2 * hidden + k] = do_ * cache.o[k] * (1.0 - cache.o[k]);
    dpre[3 * hidden + k] = dg * (1.0 - cache.g[k] * cache.g[k]);
  }
  add_outer(dpre, cache.z, dw);
  simd::axpy(1.0, dpre, db.row(0));
  dz_out.assign(cache.z.size(), 0.0);
  matvec_transpose_acc(w, dpre, dz_out);
  dc_prev_out.resize(hidden);
  for (std::size_t k = 0; k < hidden; ++k) dc_prev_out[k] = dc[k] * cache.f[k];
}

// ---------------------------------------------------------------------------
// Full forward pass with caches for BPTT.
// ---------------------------------------------------------------------------

struct DecodeStepCache {
  std::size_t prev_tag = 0;  // kIobTagCount when none (step 1)
  Vec x;                      // [prev tag emb; ctx_prev]
  LstmCache lstm;
  Vec scores;                 // raw attention scores
  Vec attn;                   // softmax(scores)
  Vec ctx;
  Vec u;                      // [h; ctx]
  Vec probs;                  // softmax(logits)
};

struct ForwardCache {
  std::vector<std::size_t> token_ids;
  std::vector<LstmCache> enc;
  std::vector<Vec> attn_proj;  // attn_w @ enc_h_i, reused across steps
  std::vector<DecodeStepCache> dec;
};

constexpr std::size_t kNoPrevTag = kIobTagCount;

void encode_forward(const std::vector<std::size_t>& ids, const Seq2SeqParams& p,
                    std::vector<LstmCache>& enc) {
  Vec h(p.h, 0.0);
  Vec c(p.h, 0.0);
  enc.clear();
  enc.reserve(ids.size());
  for (std::size_t id : ids) {
    enc.push_back(lstm_forward(p.t.enc_w, p.t.enc_b, p.t.tok_emb.row(id), h, c));
    h = enc.back().h;
    c = enc.back().c;
  }
}

// One decode step; `prev_tag` == kNoPrevTag feeds a zero embedding.
DecodeStepCache decode_step(const Seq2SeqParams& p, const ForwardCache& fc,
                            std::size_t prev_tag, const Vec& ctx_prev,
                            const Vec& h_prev, const Vec& c_prev) {
  DecodeStepCache step;
  step.prev_tag = prev_tag;
  step.x.assign(p.d + p.h, 0.0);
  if (prev_tag != kNoPrevTag) {
    auto emb = p.t.tag_emb.row(prev_tag);
    std::copy(emb.begin(), emb.end(), step.x.begin());
  }
  std::copy(ctx_prev.begin(), ctx_prev.end(), step.x.begin() + static_cast<std::ptrdiff_t>(p.d));

  step.lstm = lstm_forward(p.t.dec_w, p.t.dec_b, step.x, h_prev, c_prev);

  const std::size_t n = fc.enc.size();
  step.scores.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    step.scores[i] = simd::dot(step.lstm.h, fc.attn_proj[i]);
  step.attn = step.scores;
  softmax_inplace(step.attn);

  step.ctx.assign(p.h, 0.0);
  for (std::size_t i = 0; i < n; ++i) simd::axpy(step.attn[i], fc.enc[i].h, step.ctx);

  step.u.resize(2 * p.h);
  std::copy(step.lstm.h.begin(), step.lstm.h.end(), step.u.begin());
  std::copy(step.ctx.begin(), step.ctx.end(), step.u.begin() + static_cast<std::ptrdiff_t>(p.h));

  step.probs.resize(p.t.out_b.cols);
  matvec(p.t.out_w, step.u, step.probs);
  simd::axpy(1.0, p.t.out_b.row(0), step.probs);
  softmax_inplace(step.probs);
  return step;
}

ForwardCache forward_example(const std::vector<std::string>& tokens,
                             const std::vector<IobTag>* teacher_tags,
                             const Seq2SeqParams& p) {
  ForwardCache fc;
  fc.token_ids.reserve(tokens.size());
  for (const auto& tok : tokens) fc.token_ids.push_back(p.token_id(tok));
  encode_forward(fc.token_ids, p, fc.enc);

  fc.attn_proj.resize(fc.enc.size());
  for (std::size_t i = 0; i < fc.enc.size(); ++i) {
    fc.attn_proj[i].assign(p.h, 0.0);
    matvec(p.t.attn_w, fc.enc[i].h, fc.attn_proj[i]);
  }

  Vec h = fc.enc.back().h;
  Vec c = fc.enc.back().c;
  Vec ctx(p.h, 0.0);
  std::size_t prev = kNoPrevTag;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    fc.dec.push_back(decode_step(p, fc, prev, ctx, h, c));
    const DecodeStepCache& step = fc.dec.back();
    h = step.lstm.h;
    c = step.lstm.c;
    ctx = step.ctx;
    if (teacher_tags) {
      prev = static_cast<std::size_t>((*teacher_tags)[t]);
    } else {
      prev = static_cast<std::size_t>(
          std::max_element(step.probs.begin(), step.probs.end()) - step.probs.begin());
    }
  }
  return fc;
}

// Backward through one example; dlogits scale folds in the 1/total_tokens
// mean. Accumulates into `g`.
void backward_example(const std::vector<IobTag>& gold, const Seq2SeqParams& p,
                      const ForwardCache& fc, double scale, TaggerTensors& g) {
  const std::size_t n = gold.size();
  const std::size_t hidden = p.h;

  Vec dh_next(hidden, 0.0);   // into h_t from step t+1
  Vec dc_next(hidden, 0.0);   // into c_t from step t+1
  Vec dctx_next(hidden, 0.0); // into ctx_t from x_{t+1}
  std::vector<Vec> denc(n, Vec(hidden, 0.0));

  Vec dz, dc_prev;
  for (std::size_t t = n; t-- > 0;) {
    const DecodeStepCache& step = fc.dec[t];

    Vec dlogits = step.probs;
    dlogits[static_cast<std::size_t>(gold[t])] -= 1.0;
    for (double& v : dlogits) v *= scale;

    add_outer(dlogits, step.u, g.out_w);
    simd::axpy(1.0, dlogits, g.out_b.row(0));

    Vec du(2 * hidden, 0.0);
    matvec_transpose_acc(p.t.out_w, dlogits, du);

    Vec dh(du.begin(), du.begin() + static_cast<std::ptrdiff_t>(hidden));
    simd::axpy(1.0, dh_next, dh);

    Vec dctx(du.begin() + static_cast<std::ptrdiff_t>(hidden), du.end());
    simd::axpy(1.0, dctx_next, dctx);

    // ctx = sum_i a_i enc_i
    Vec da(n);
    for (std::size_t i = 0; i < n; ++i) {
      da[i] = simd::dot(dctx, fc.enc[i].h);
      simd::axpy(step.attn[i], dctx, denc[i]);
    }
    // softmax jacobian
    double dot_ada = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot_ada += step.attn[i] * da[i];
    Vec ds(n);
    for (std::size_t i = 0; i < n; ++i) ds[i] = step.attn[i] * (da[i] - dot_ada);

    // s_i = h^T attn_w enc_i
    Vec ds_enc_sum(hidden, 0.0);  // sum_i ds_i enc_i
    for (std::size_t i = 0; i < n; ++i) {
      simd::axpy(ds[i], fc.attn_proj[i], dh);      // attn_proj_i = attn_w enc_i
      simd::axpy(ds[i], fc.enc[i].h, ds_enc_sum);
    }
    add_outer(step.lstm.h, ds_enc_sum, g.attn_w);
    Vec w_t_h(hidden, 0.0);  // attn_w^T h
    matvec_transpose_acc(p.t.attn_w, step.lstm.h, w_t_h);
    for (std::size_t i = 0; i < n; ++i) simd::axpy(ds[i], w_t_h, denc[i]);

    lstm_backward(p.t.dec_w, step.lstm, dh, dc_next, g.dec_w, g.dec_b, dz, dc_prev);

    // dz = [d prev-tag emb; d ctx_prev; d h_prev]
    if (step.prev_tag != kNoPrevTag) {
      simd::axpy(1.0, std::span<const double>(dz.data(), p.d),
                 g.tag_emb.row(step.prev_tag));
    }
    dctx_next.assign(dz.begin() + static_cast<std::ptrdiff_t>(p.d),
                     dz.begin() + static_cast<std::ptrdiff_t>(p.d + hidden));
    dh_next.assign(dz.begin() + static_cast<std::ptrdiff_t>(p.d + hidden), dz.end());
    dc_next = dc_prev;
  }

  // Decoder start state was the final encoder state; ctx_0 was constant 0.
  simd::axpy(1.0, dh_next, denc[n - 1]);
  Vec dc_enc_next = dc_next;

  Vec dh_enc_next(hidden, 0.0);
  for (std::size_t t = n; t-- > 0;) {
    Vec dh = denc[t];
    simd::axpy(1.0, dh_enc_next, dh);
    lstm_backward(p.t.enc_w, fc.enc[t], dh, dc_enc_next, g.enc_w, g.enc_b, dz, dc_prev);
    simd::axpy(1.0, std::span<const double>(dz.data(), p.d),
               g.tok_emb.row(fc.token_ids[t]));
    dh_enc_next.assign(dz.begin() + static_cast<std::ptrdiff_t>(p.d), dz.end());
    dc_enc_next = dc_prev;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Public surface
// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, Matrix*>> TaggerTensors::views() {
  return {{"tok_emb", &tok_emb}, {"tag_emb", &tag_emb}, {"enc_w", &enc_w},
          {"enc_b", &enc_b},     {"dec_w", &dec_w},     {"dec_b", &dec_b},
          {"attn_w", &attn_w},   {"out_w", &out_w},     {"out_b", &out_b}};
}

std::vector<std::pair<std::string, const Matrix*>> TaggerTensors::views() const {
  return {{"tok_emb", &tok_emb}, {"tag_emb", &tag_emb}, {"enc_w", &enc_w},
          {"enc_b", &enc_b},     {"dec_w", &dec_w},     {"dec_b", &dec_b},
          {"attn_w", &attn_w},   {"out_w", &out_w},     {"out_b", &out_b}};
}

TaggerTensors zeros_like(const TaggerTensors& t) {
  TaggerTensors z;
  auto src = t.views();
  auto dst = z.views();
  for (std::size_t i = 0; i < src.size(); ++i)
    *dst[i].second = Matrix(src[i].second->rows, src[i].second->cols);
  return z;
}

void TrainerConfig::validate() const {
  if (d == 0 || h == 0) throw ConfigError("trainer dims must be positive");
  if (epochs == 0) throw ConfigError("trainer epochs must be positive");
  if (batch_size == 0) throw ConfigError("trainer batch size must be positive");
  if (learning_rate <= 0.0) throw ConfigError("trainer learning rate must be positive");
  if (clip_norm <= 0.0) throw ConfigError("trainer clip norm must be positive");
  if (!teacher_forcing) throw ConfigError("training requires teacher forcing");
}

std::vector<TaggedUtterance> build_training_set(
    const std::vector<TaggedUtterance>& corpus,
    const std::map<std::size_t, RuleMatch>& matches, const KeptPools& kept) {
  std::vector<TaggedUtterance> out;
  for (const TaggedUtterance& u : corpus) {
    auto it = matches.find(u.id);
    if (it == matches.end()) continue;
    const RuleMatch& match = it->second;

    bool all_kept = true;
    for (const RoleSpan& rs : match.spans) {
      if (!kept.contains(rs.role, surface_of(u, rs.span))) {
        all_kept = false;
        break;
      }
    }
    if (!all_kept) continue;

    std::vector<IobTag> tags(u.tokens.size(), IobTag::O);
    for (const RoleSpan& rs : match.spans) {
      for (std::size_t i = rs.span.begin; i < rs.span.end; ++i) {
        if (i == rs.span.begin) {
          tags[i] = rs.role == Role::component ? IobTag::BComponent : IobTag::BProblem;
        } else {
          tags[i] = rs.role == Role::component ? IobTag::IComponent : IobTag::IProblem;
        }
      }
    }
    for (std::size_t i : u.car_option_positions) tags[i] = IobTag::CarOption;

    TaggedUtterance labeled = u;
    labeled.gold_tags = repair_iob(std::move(tags));
    out.push_back(std::move(labeled));
  }
  return out;
}

std::vector<TrainExample> to_train_examples(
    const std::vector<TaggedUtterance>& corpus) {
  std::vector<TrainExample> out;
  out.reserve(corpus.size());
  for (const auto& u : corpus) {
    if (!u.gold_tags)
      throw InvariantViolation("utterance " + std::to_string(u.id) + " has no gold tags");
    out.push_back(TrainExample{u.tokens, *u.gold_tags});
  }
  return out;
}

EncodeResult encode(const std::vector<std::string>& tokens,
                    const Seq2SeqParams& params) {
  if (tokens.empty()) throw EmptyUtterance();
  std::vector<std::size_t> ids;
  ids.reserve(tokens.size());
  for (const auto& tok : tokens) ids.push_back(params.token_id(tok));
  std::vector<LstmCache> enc;
  encode_forward(ids, params, enc);
  EncodeResult r;
  r.hidden.reserve(enc.size());
  for (const auto& step : enc) r.hidden.push_back(step.h);
  r.final_h = enc.back().h;
  r.final_c = enc.back().c;
  return r;
}

std::vector<double> attention_weights(
    std::span<const double> decoder_h,
    const std::vector<std::vector<double>>& encoder_states, const Matrix& attn_w) {
  // s_i = h^T W e_i = (W^T h) . e_i
  std::vector<double> wth(attn_w.cols, 0.0);
  matvec_transpose_acc(attn_w, decoder_h, wth);
  std::vector<double> scores(encoder_states.size());
  for (std::size_t i = 0; i < encoder_states.size(); ++i)
    scores[i] = simd::dot(wth, encoder_states[i]);
  softmax_inplace(scores);
  return scores;
}

std::vector<IobTag> decode_greedy(const EncodeResult& encoded,
                                  const Seq2SeqParams& params) {
  // Rebuild light caches from the encoder output.
  const std::size_t n = encoded.hidden.size();
  ForwardCache fc;
  fc.enc.resize(n);
  for (std::size_t i = 0; i < n; ++i) fc.enc[i].h = encoded.hidden[i];
  fc.attn_proj.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    fc.attn_proj[i].assign(params.h, 0.0);
    matvec(params.t.attn_w, fc.enc[i].h, fc.attn_proj[i]);
  }

  Vec h = encoded.final_h;
  Vec c = encoded.final_c;
  Vec ctx(params.h, 0.0);
  std::size_t prev = kNoPrevTag;
  std::vector<IobTag> tags;
  tags.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    DecodeStepCache step = decode_step(params, fc, prev, ctx, h, c);
    prev = static_cast<std::size_t>(
        std::max_element(step.probs.begin(), step.probs.end()) - step.probs.begin());
    tags.push_back(static_cast<IobTag>(prev));
    h = std::move(step.lstm.h);
    c = std::move(step.lstm.c);
    ctx = std::move(step.ctx);
  }
  return repair_iob(std::move(tags));
}

LossAndGrads loss_and_gradients(const std::vector<TrainExample>& batch,
                                const Seq2SeqParams& params) {
  if (batch.empty()) throw EmptyTrainingSet();
  std::size_t total_tokens = 0;
  for (const auto& ex : batch) total_tokens += ex.tokens.size();

  LossAndGrads result;
  result.grads = zeros_like(params.t);
  const double scale = 1.0 / static_cast<double>(total_tokens);

  for (const auto& ex : batch) {
    if (ex.tokens.empty() || ex.tokens.size() != ex.tags.size())
      throw InvariantViolation("training example arity mismatch");
    ForwardCache fc = forward_example(ex.tokens, &ex.tags, params);
    for (std::size_t t = 0; t < ex.tags.size(); ++t) {
      const double p = fc.dec[t].probs[static_cast<std::size_t>(ex.tags[t])];
      result.loss -= scale * std::log(std::max(p, 1e-300));
    }
    backward_example(ex.tags, params, fc, scale, result.grads);
  }
  return result;
}

namespace {

Seq2SeqParams init_params(const std::vector<TrainExample>& examples,
                          const TrainerConfig& cfg) {
  Seq2SeqParams p;
  p.d = cfg.d;
  p.h = cfg.h;

  std::map<std::string, std::size_t> counts;
  for (const auto& ex : examples)
    for (const auto& tok : ex.tokens) ++counts[tok];
  std::vector<std::pair<std::string, std::size_t>> order(counts.begin(), counts.end());
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  p.index_to_token.push_back(kUnkToken);
  p.token_vocab.emplace(kUnkToken, kUnkIndex);
  for (const auto& [tok, cnt] : order) {
    if (p.token_vocab.count(tok)) continue;
    p.token_vocab.emplace(tok, p.index_to_token.size());
    p.index_to_token.push_back(tok);
  }

  const std::size_t v = p.index_to_token.size();
  p.t.tok_emb = Matrix(v, cfg.d);
  p.t.tag_emb = Matrix(kIobTagCount, cfg.d);
  p.t.enc_w = Matrix(4 * cfg.h, cfg.d + cfg.h);
  p.t.enc_b = Matrix(1, 4 * cfg.h);
  p.t.dec_w = Matrix(4 * cfg.h, cfg.d + 2 * cfg.h);
  p.t.dec_b = Matrix(1, 4 * cfg.h);
  p.t.attn_w = Matrix(cfg.h, cfg.h);
  p.t.out_w = Matrix(kIobTagCount, 2 * cfg.h);
  p.t.out_b = Matrix(1, kIobTagCount);

  Rng rng(cfg.seed);
  p.t.tok_emb.fill_uniform(rng, -0.1, 0.1);
  p.t.tag_emb.fill_uniform(rng, -0.1, 0.1);
  p.t.enc_w.fill_uniform(rng, -0.1, 0.1);
  p.t.dec_w.fill_uniform(rng, -0.1, 0.1);
  p.t.attn_w.fill_uniform(rng, -0.1, 0.1);
  p.t.out_w.fill_uniform(rng, -0.1, 0.1);
  // Forget-gate bias starts at 1 so early cells retain state.
  for (std::size_t k = 0; k < cfg.h; ++k) {
    p.t.enc_b.at(0, cfg.h + k) = 1.0;
    p.t.dec_b.at(0, cfg.h + k) = 1.0;
  }
  return p;
}

}  // namespace

TrainResult train(const std::vector<TrainExample>& examples,
                  const TrainerConfig& cfg) {
  cfg.validate();
  if (examples.empty()) throw EmptyTrainingSet();

  TrainResult result;
  result.params = init_params(examples, cfg);
  Seq2SeqParams& p = result.params;

  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      std::vector<TrainExample> batch;
      for (std::size_t k = start; k < std::min(order.size(), start + cfg.batch_size); ++k)
        batch.push_back(examples[order[k]]);

      LossAndGrads lg = loss_and_gradients(batch, p);
      epoch_loss += lg.loss;
      ++batches;

      double norm_sq = 0.0;
      for (auto& [name, m] : lg.grads.views())
        norm_sq += simd::dot(m->data, m->data);
      const double norm = std::sqrt(norm_sq);
      const double factor =
          norm > cfg.clip_norm ? cfg.clip_norm / norm : 1.0;

      auto gviews = lg.grads.views();
      auto pviews = p.t.views();
      for (std::size_t i = 0; i < gviews.size(); ++i) {
        simd::axpy(-cfg.learning_rate * factor, gviews[i].second->data,
                   pviews[i].second->data);
      }
    }
    result.epoch_loss.push_back(batches ? epoch_loss / static_cast<double>(batches) : 0.0);
  }
  return result;
}

TagResult tag_tokens(const std::vector<std::string>& tokens,
                     const Seq2SeqParams& params) {
  if (tokens.empty()) throw EmptyUtterance();
  TagResult r;
  r.tags = decode_greedy(encode(tokens, params), params);
  for (const EntitySpan& span : entity_spans(r.tags)) {
    std::string surface;
    for (std::size_t i = span.begin; i < span.end; ++i) {
      if (i > span.begin) surface += ' ';
      surface += tokens[i];
    }
    r.entities.emplace_back(span.role, std::move(surface));
  }
  for (std::size_t i = 0; i < r.tags.size(); ++i)
    if (r.tags[i] == IobTag::CarOption) r.car_option_positions.insert(i);
  return r;
}

TagResult tag_utterance(const NormalizedUtterance& u, const Seq2SeqParams& params) {
  return tag_tokens(u.tokens, params);
}

// ---------------------------------------------------------------------------
// Model io
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'F', 'K', 'B', 'S', '2', 'S', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out.append(b, 4);
}

void put_string(std::string& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out += s;
}

struct Reader {
  const std::string& buf;
  const std::string& path;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > buf.size()) throw FormatError("truncated model file: " + path);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v;
    std::memcpy(&v, buf.data() + pos, 4);
    pos += 4;
    return v;
  }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s = buf.substr(pos, n);
    pos += n;
    return s;
  }
};

}  // namespace

void save_model(const std::string& path, const Seq2SeqParams& params) {
  std::string out;
  out.append(kMagic, 8);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(params.d));
  put_u32(out, static_cast<std::uint32_t>(params.h));
  put_u32(out, static_cast<std::uint32_t>(params.index_to_token.size()));
  for (const auto& tok : params.index_to_token) put_string(out, tok);
  put_u32(out, static_cast<std::uint32_t>(kIobTagCount));
  for (std::size_t i = 0; i < kIobTagCount; ++i)
    put_string(out, iob_name(static_cast<IobTag>(i)));
  for (const auto& [name, m] : params.t.views()) {
    put_string(out, name);
    put_u32(out, static_cast<std::uint32_t>(m->rows));
    put_u32(out, static_cast<std::uint32_t>(m->cols));
    out.append(reinterpret_cast<const char*>(m->data.data()),
               m->data.size() * sizeof(double));
  }
  write_file_atomic(path, out);
}

Seq2SeqParams load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r{buf, path};

  r.need(8);
  if (std::memcmp(buf.data(), kMagic, 8) != 0)
    throw FormatError("bad magic in " + path);
  r.pos = 8;
  const std::uint32_t version = r.u32();
  if (version != kVersion)
    throw VersionMismatch("model version " + std::to_string(version) +
                          ", expected " + std::to_string(kVersion));

  Seq2SeqParams p;
  p.d = r.u32();
  p.h = r.u32();
  const std::uint32_t vocab_size = r.u32();
  for (std::uint32_t i = 0; i < vocab_size; ++i) {
    std::string tok = r.str();
    p.token_vocab.emplace(tok, p.index_to_token.size());
    p.index_to_token.push_back(std::move(tok));
  }
  const std::uint32_t tag_count = r.u32();
  if (tag_count != kIobTagCount) throw FormatError("unexpected tag inventory in " + path);
  for (std::uint32_t i = 0; i < tag_count; ++i) {
    if (r.str() != iob_name(static_cast<IobTag>(i)))
      throw FormatError("unexpected tag inventory in " + path);
  }
  for (auto& [name, m] : p.t.views()) {
    if (r.str() != name) throw FormatError("unexpected tensor order in " + path);
    const std::uint32_t rows = r.u32();
    const std::uint32_t cols = r.u32();
    *m = Matrix(rows, cols);
    const std::size_t bytes = m->data.size() * sizeof(double);
    r.need(bytes);
    std::memcpy(m->data.data(), buf.data() + r.pos, bytes);
    r.pos += bytes;
  }
  if (r.pos != buf.size()) throw FormatError("trailing bytes in " + path);
  if (p.index_to_token.empty() || p.index_to_token[0] != kUnkToken)
    throw FormatError("vocabulary missing <unk> in " + path);
  return p;
}

}  // namespace faultkb
