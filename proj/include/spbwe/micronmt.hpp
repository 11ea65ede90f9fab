#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spbwe/embedding.hpp"
#include "spbwe/pairing.hpp"
#include "spbwe/vocab.hpp"

namespace spbwe {

enum class Optimizer { sgd, adam };
Optimizer optimizer_from_string(const std::string& s);

struct MicroModelConfig {
  int d = 32;
  double lr = 0.5;
  int steps = 2000;
  int batch_size = 16;
  std::uint64_t seed = 1;
  Optimizer optimizer = Optimizer::sgd;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double adam_eps = 1e-8;

  void validate() const;
};

// Attention-based encoder-decoder whose only trained parameters are the
// shared-private embeddings:
//   encoder state  h_i = E^x[x_i] + pos(i)
//   decoder query  q_t = E^y[z_t]                    (teacher forcing)
//   attention      softmax(q_t . h_i / sqrt(d)), padding masked
//   state          u_t = q_t + sum_i alpha_i h_i
//   logits         E^y u_t                           (tied output)
// Every gradient therefore flows through the embedding blocks.
struct MicroModel {
  AssembledEmbeddings emb;
  MicroModelConfig cfg;
  // Additive sinusoidal position signal on the encoder, scaled by
  // 1/sqrt(d) to match the embedding init magnitude.
  bool use_position = true;

  int src_vocab_size() const { return emb.layout.src_vocab_size(); }
  int tgt_vocab_size() const { return emb.layout.tgt_vocab_size(); }
};

std::vector<double> position_signal(int pos, int d);

// Fixed-shape padded batch. dec_in starts with <s>; labels end with </s>;
// steps whose label is <pad> carry no loss and no gradient.
struct PreparedBatch {
  int batch = 0, src_len = 0, steps = 0;
  std::vector<int> src;     // batch x src_len
  std::vector<int> dec_in;  // batch x steps
  std::vector<int> labels;  // batch x steps
};

using SentencePair = std::pair<std::vector<int>, std::vector<int>>;
PreparedBatch prepare_batch(std::span<const SentencePair> items);

struct ForwardCache {
  int batch = 0, src_len = 0, steps = 0, d = 0, n_tgt = 0;
  std::vector<int> true_src_len;  // batch
  std::vector<double> enc;        // batch x src_len x d
  std::vector<double> query;      // batch x steps x d
  std::vector<double> alpha;      // batch x steps x src_len
  std::vector<double> state;      // batch x steps x d
  std::vector<double> prob;       // batch x steps x n_tgt
  std::vector<char> active;       // batch x steps
  std::vector<double> tgt_matrix; // n_tgt x d
  long long n_tokens = 0;
  double loss = 0.0;
};

// Mean token-level cross-entropy under teacher forcing. A batch whose
// labels are all padding has loss 0.
double forward(const MicroModel& model, const PreparedBatch& batch,
               ForwardCache* cache = nullptr);

// Exact gradients of the forward loss, accumulated into model.emb.grad
// through grad_scatter (shared rows collect both sides' contributions).
void backward(MicroModel& model, const PreparedBatch& batch, const ForwardCache& cache);

// zero_grad + forward + backward; returns the loss.
double compute_gradients(MicroModel& model, const PreparedBatch& batch);

// Greedy argmax decoding from <s> until </s> or max_len; smoke-test
// helper, no beam search.
std::vector<int> greedy_decode(const MicroModel& model, const std::vector<int>& src_ids,
                               int max_len = 16);

// Splits the raw embedding dot product <E^x[x], E^y[y]> (position signal
// excluded) at the boundary of the two words' common shared width:
// returns (shared_term, private_term); their sum is the dot product.
// For a paired word the shared term is exactly ||shared slice||^2.
std::pair<double, double> attention_logit_decomposition(const MicroModel& model, int x_id,
                                                        int y_id);

struct FdCheckReport {
  double max_rel_err = 0.0;
  int samples = 0;
  double eps = 0.0;
};

// Central differences on randomly sampled stored scalars, stratified
// across every non-empty block, against the analytic gradients.
FdCheckReport finite_diff_check(MicroModel& model, const PreparedBatch& batch, int n_samples,
                                double eps, std::uint64_t seed);
// Same comparison against whatever model.emb.grad currently holds
// (negative-control hook for corrupted-gradient fixtures).
FdCheckReport fd_compare_current_grads(MicroModel& model, const PreparedBatch& batch,
                                       int n_samples, double eps, std::uint64_t seed);

struct TrainReport {
  std::vector<double> losses;
  double final_loss = 0.0;
  FdCheckReport grad_check;
  double wall_clock_ms = 0.0;
  int diverged_step = -1;  // -1 when training stayed finite
};

// Synthetic tasks. Sentences put one content word first and a few
// one-sided filler words after it; the target is the content word's
// translation. Extra unaligned corpus lines give the vocabularies
// unrelated words on both sides so every category is populated.
enum class ToyTaskKind { copy, lexicon };
ToyTaskKind task_from_string(const std::string& s);

struct ToyTask {
  Vocab src_vocab, tgt_vocab;
  PairingTable pairing;
  std::vector<SentencePair> items;
};

ToyTask make_toy_task(ToyTaskKind kind, int n_words, int n_fillers, int n_items,
                      std::uint64_t seed);

// Dataset from ordinary one-sentence-per-line parallel text, mapped to
// ids against existing vocabularies and pairing.
ToyTask make_file_task(const std::string& src_path, const std::string& tgt_path,
                       const Vocab& src_vocab, const Vocab& tgt_vocab,
                       PairingTable pairing);

MicroModel make_model(const ToyTask& task, const SharingConfig& sharing,
                      const MicroModelConfig& cfg);

// Deterministic given cfg.seed; stops early (partial report, diverged_step
// set) if the loss leaves the finite range.
TrainReport train(MicroModel& model, const ToyTask& task);

// Deterministic JSON: config echo, loss curve, grad-check summary.
// Wall-clock time is intentionally not serialized.
std::string train_report_json(const TrainReport& report, const MicroModelConfig& cfg,
                              const std::string& task_name,
                              const std::array<double, 3>& lambda);

}  // namespace spbwe
