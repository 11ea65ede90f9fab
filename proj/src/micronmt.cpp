#include "spbwe/micronmt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spbwe/align.hpp"
#include "spbwe/errors.hpp"
#include "spbwe/text_io.hpp"

namespace spbwe {

Optimizer optimizer_from_string(const std::string& s) {
  if (s == "sgd") return Optimizer::sgd;
  if (s == "adam") return Optimizer::adam;
  throw ConfigError("unknown optimizer '" + s + "'");
}

void MicroModelConfig::validate() const {
  if (d <= 0 || steps <= 0 || batch_size <= 0)
    throw ConfigError("d, steps and batch size must be positive");
  if (lr < 0.0) throw ConfigError("learning rate must be non-negative");
  if (!(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1 && adam_eps > 0))
    throw ConfigError("invalid adam constants");
}

std::vector<double> position_signal(int pos, int d) {
  std::vector<double> v(static_cast<std::size_t>(d));
  double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) {
    int k = j / 2 * 2;
    double rate = std::pow(10000.0, static_cast<double>(k) / d);
    double angle = pos / rate;
    v[j] = scale * (j % 2 == 0 ? std::sin(angle) : std::cos(angle));
  }
  return v;
}

PreparedBatch prepare_batch(std::span<const SentencePair> items) {
  PreparedBatch b;
  b.batch = static_cast<int>(items.size());
  for (const auto& [src, tgt] : items) {
    b.src_len = std::max(b.src_len, static_cast<int>(src.size()));
    b.steps = std::max(b.steps, static_cast<int>(tgt.size()) + 1);  // + </s>
  }
  b.src.assign(static_cast<std::size_t>(b.batch) * b.src_len, Vocab::kPad);
  b.dec_in.assign(static_cast<std::size_t>(b.batch) * b.steps, Vocab::kPad);
  b.labels.assign(static_cast<std::size_t>(b.batch) * b.steps, Vocab::kPad);
  for (int i = 0; i < b.batch; ++i) {
    const auto& [src, tgt] = items[i];
    std::copy(src.begin(), src.end(), b.src.begin() + static_cast<std::size_t>(i) * b.src_len);
    auto* in = b.dec_in.data() + static_cast<std::size_t>(i) * b.steps;
    auto* lab = b.labels.data() + static_cast<std::size_t>(i) * b.steps;
    in[0] = Vocab::kBos;
    for (std::size_t t = 0; t < tgt.size(); ++t) {
      if (t + 1 < static_cast<std::size_t>(b.steps)) in[t + 1] = tgt[t];
      lab[t] = tgt[t];
    }
    lab[tgt.size()] = Vocab::kEos;
  }
  return b;
}

namespace {

double dot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double forward(const MicroModel& model, const PreparedBatch& batch, ForwardCache* cache) {
  const auto& L = model.emb.layout;
  const int d = L.d, B = batch.batch, S = batch.src_len, T = batch.steps;
  const int Vy = L.tgt_vocab_size();
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));

  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  c.batch = B;
  c.src_len = S;
  c.steps = T;
  c.d = d;
  c.n_tgt = Vy;
  c.true_src_len.assign(B, 0);
  c.enc.assign(static_cast<std::size_t>(B) * S * d, 0.0);
  c.query.assign(static_cast<std::size_t>(B) * T * d, 0.0);
  c.alpha.assign(static_cast<std::size_t>(B) * T * S, 0.0);
  c.state.assign(static_cast<std::size_t>(B) * T * d, 0.0);
  c.prob.assign(static_cast<std::size_t>(B) * T * Vy, 0.0);
  c.active.assign(static_cast<std::size_t>(B) * T, 0);
  c.tgt_matrix = model.emb.assemble_matrix(Side::tgt);
  c.n_tokens = 0;

  double loss_sum = 0.0;
  for (int i = 0; i < B; ++i) {
    const int* src = batch.src.data() + static_cast<std::size_t>(i) * S;
    int len = 0;
    while (len < S && src[len] != Vocab::kPad) ++len;
    c.true_src_len[i] = len;
    for (int p = 0; p < len; ++p) {
      auto v = model.emb.lookup(Side::src, src[p]);
      double* h = c.enc.data() + (static_cast<std::size_t>(i) * S + p) * d;
      std::copy(v.begin(), v.end(), h);
      if (model.use_position) {
        auto pos = position_signal(p, d);
        for (int j = 0; j < d; ++j) h[j] += pos[j];
      }
    }

    const int* dec_in = batch.dec_in.data() + static_cast<std::size_t>(i) * T;
    const int* labels = batch.labels.data() + static_cast<std::size_t>(i) * T;
    for (int t = 0; t < T; ++t) {
      if (labels[t] == Vocab::kPad || len == 0) continue;
      c.active[static_cast<std::size_t>(i) * T + t] = 1;

      double* q = c.query.data() + (static_cast<std::size_t>(i) * T + t) * d;
      auto qv = model.emb.lookup(Side::tgt, dec_in[t]);
      std::copy(qv.begin(), qv.end(), q);

      // Masked scaled dot-product attention over the real source positions.
      double* a = c.alpha.data() + (static_cast<std::size_t>(i) * T + t) * S;
      double max_e = -1e300;
      for (int p = 0; p < len; ++p) {
        const double* h = c.enc.data() + (static_cast<std::size_t>(i) * S + p) * d;
        a[p] = dot(q, h, d) * inv_sqrt_d;
        max_e = std::max(max_e, a[p]);
      }
      double z = 0.0;
      for (int p = 0; p < len; ++p) {
        a[p] = std::exp(a[p] - max_e);
        z += a[p];
      }
      for (int p = 0; p < len; ++p) a[p] /= z;

      double* u = c.state.data() + (static_cast<std::size_t>(i) * T + t) * d;
      for (int j = 0; j < d; ++j) u[j] = q[j];
      for (int p = 0; p < len; ++p) {
        const double* h = c.enc.data() + (static_cast<std::size_t>(i) * S + p) * d;
        for (int j = 0; j < d; ++j) u[j] += a[p] * h[j];
      }

      double* pr = c.prob.data() + (static_cast<std::size_t>(i) * T + t) * Vy;
      double max_l = -1e300;
      for (int v = 0; v < Vy; ++v) {
        pr[v] = dot(c.tgt_matrix.data() + static_cast<std::size_t>(v) * d, u, d);
        max_l = std::max(max_l, pr[v]);
      }
      double zs = 0.0;
      for (int v = 0; v < Vy; ++v) {
        pr[v] = std::exp(pr[v] - max_l);
        zs += pr[v];
      }
      for (int v = 0; v < Vy; ++v) pr[v] /= zs;

      double step_loss = -std::log(pr[labels[t]]);
      if (!std::isfinite(step_loss))
        throw NumericError("non-finite loss at batch item " + std::to_string(i) + ", step " +
                           std::to_string(t));
      loss_sum += step_loss;
      c.n_tokens += 1;
    }
  }
  c.loss = c.n_tokens == 0 ? 0.0 : loss_sum / static_cast<double>(c.n_tokens);
  return c.loss;
}

void backward(MicroModel& model, const PreparedBatch& batch, const ForwardCache& c) {
  if (c.n_tokens == 0) return;
  const auto& L = model.emb.layout;
  const int d = c.d, B = c.batch, S = c.src_len, T = c.steps, Vy = c.n_tgt;
  const int Vx = L.src_vocab_size();
  const double w = 1.0 / static_cast<double>(c.n_tokens);
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));

  // Dense per-id accumulators; scattered into the blocks at the end in
  // fixed id order so reduction order never depends on the batch.
  std::vector<double> d_src(static_cast<std::size_t>(Vx) * d, 0.0);
  std::vector<double> d_tgt(static_cast<std::size_t>(Vy) * d, 0.0);
  std::vector<double> d_logit(Vy), du(d), de(S), denc(static_cast<std::size_t>(S) * d);

  for (int i = 0; i < B; ++i) {
    const int* src = batch.src.data() + static_cast<std::size_t>(i) * S;
    const int* dec_in = batch.dec_in.data() + static_cast<std::size_t>(i) * T;
    const int* labels = batch.labels.data() + static_cast<std::size_t>(i) * T;
    const int len = c.true_src_len[i];
    std::fill(denc.begin(), denc.end(), 0.0);

    for (int t = 0; t < T; ++t) {
      if (!c.active[static_cast<std::size_t>(i) * T + t]) continue;
      const double* q = c.query.data() + (static_cast<std::size_t>(i) * T + t) * d;
      const double* a = c.alpha.data() + (static_cast<std::size_t>(i) * T + t) * S;
      const double* u = c.state.data() + (static_cast<std::size_t>(i) * T + t) * d;
      const double* pr = c.prob.data() + (static_cast<std::size_t>(i) * T + t) * Vy;

      // Cross-entropy + softmax.
      for (int v = 0; v < Vy; ++v) d_logit[v] = pr[v] * w;
      d_logit[labels[t]] -= w;

      // Tied output projection: logits_v = <E^y_v, u>.
      std::fill(du.begin(), du.end(), 0.0);
      for (int v = 0; v < Vy; ++v) {
        if (d_logit[v] == 0.0) continue;
        const double* row = c.tgt_matrix.data() + static_cast<std::size_t>(v) * d;
        double* g = d_tgt.data() + static_cast<std::size_t>(v) * d;
        for (int j = 0; j < d; ++j) {
          g[j] += d_logit[v] * u[j];
          du[j] += d_logit[v] * row[j];
        }
      }

      // u = q + sum_p a_p h_p; softmax over scores e_p = <q, h_p>/sqrt(d).
      double sigma = 0.0;
      for (int p = 0; p < len; ++p) {
        const double* h = c.enc.data() + (static_cast<std::size_t>(i) * S + p) * d;
        de[p] = a[p] * dot(du.data(), h, d);  // a_p * dalpha_p
        sigma += de[p];
      }
      double* dq_row = d_tgt.data() + static_cast<std::size_t>(dec_in[t]) * d;
      for (int j = 0; j < d; ++j) dq_row[j] += du[j];  // residual path
      for (int p = 0; p < len; ++p) {
        const double* h = c.enc.data() + (static_cast<std::size_t>(i) * S + p) * d;
        double* dh = denc.data() + static_cast<std::size_t>(p) * d;
        double ds = (de[p] - a[p] * sigma) * inv_sqrt_d;  // dL/de_p / sqrt(d)
        for (int j = 0; j < d; ++j) {
          dq_row[j] += ds * h[j];
          dh[j] += ds * q[j] + a[p] * du[j];
        }
      }
    }

    for (int p = 0; p < len; ++p) {
      double* g = d_src.data() + static_cast<std::size_t>(src[p]) * d;
      const double* dh = denc.data() + static_cast<std::size_t>(p) * d;
      for (int j = 0; j < d; ++j) g[j] += dh[j];
    }
  }

  for (int id = 0; id < Vx; ++id)
    model.emb.grad_scatter(Side::src, id,
                           {d_src.data() + static_cast<std::size_t>(id) * d,
                            static_cast<std::size_t>(d)});
  for (int id = 0; id < Vy; ++id)
    model.emb.grad_scatter(Side::tgt, id,
                           {d_tgt.data() + static_cast<std::size_t>(id) * d,
                            static_cast<std::size_t>(d)});
}

double compute_gradients(MicroModel& model, const PreparedBatch& batch) {
  model.emb.zero_grad();
  ForwardCache cache;
  double loss = forward(model, batch, &cache);
  backward(model, batch, cache);
  return loss;
}

std::vector<int> greedy_decode(const MicroModel& model, const std::vector<int>& src_ids,
                               int max_len) {
  std::vector<int> out;
  std::vector<int> prefix;  // grows one target token per round
  for (int step = 0; step < max_len; ++step) {
    // Teacher-forced forward over the current prefix; only the newest
    // step's distribution is consulted. Wasteful but fine at this scale.
    std::vector<SentencePair> item = {{src_ids, prefix}};
    auto batch = prepare_batch(item);  // probe step's label is already </s>
    ForwardCache cache;
    forward(model, batch, &cache);
    const double* pr = cache.prob.data() +
                       static_cast<std::size_t>(prefix.size()) * cache.n_tgt;
    int best = 0;
    for (int v = 1; v < cache.n_tgt; ++v)
      if (pr[v] > pr[best]) best = v;
    if (best == Vocab::kEos) break;
    out.push_back(best);
    prefix.push_back(best);
  }
  return out;
}

std::pair<double, double> attention_logit_decomposition(const MicroModel& model, int x_id,
                                                        int y_id) {
  const auto& L = model.emb.layout;
  auto vx = model.emb.lookup(Side::src, x_id);
  auto vy = model.emb.lookup(Side::tgt, y_id);
  int k = std::min(L.shared_width_of(Side::src, x_id), L.shared_width_of(Side::tgt, y_id));
  double shared_term = 0.0, private_term = 0.0;
  for (int j = 0; j < k; ++j) shared_term += vx[j] * vy[j];
  for (int j = k; j < L.d; ++j) private_term += vx[j] * vy[j];
  return {shared_term, private_term};
}

namespace {

struct ScalarRef {
  std::vector<double>* val;
  std::vector<double>* grad;
  std::size_t index;
};

std::vector<std::pair<std::vector<double>*, std::vector<double>*>> nonempty_blocks(
    AssembledEmbeddings& emb) {
  std::vector<std::vector<double>*> vals, grads;
  emb.val.for_each([&](const char*, std::vector<double>& b) { vals.push_back(&b); });
  emb.grad.for_each([&](const char*, std::vector<double>& b) { grads.push_back(&b); });
  std::vector<std::pair<std::vector<double>*, std::vector<double>*>> out;
  for (std::size_t k = 0; k < vals.size(); ++k)
    if (!vals[k]->empty()) out.emplace_back(vals[k], grads[k]);
  return out;
}

FdCheckReport fd_run(MicroModel& model, const PreparedBatch& batch, int n_samples, double eps,
                     std::uint64_t seed) {
  if (n_samples <= 0 || eps <= 0) throw ConfigError("fd check needs positive samples and eps");
  auto blocks = nonempty_blocks(model.emb);
  if (blocks.empty()) return {0.0, 0, eps};

  // Round-robin over the blocks so every block type gets sampled.
  std::mt19937_64 rng(seed);
  std::vector<ScalarRef> picks;
  for (int k = 0; k < n_samples; ++k) {
    auto& [val, grad] = blocks[k % blocks.size()];
    picks.push_back({val, grad, rng() % val->size()});
  }

  FdCheckReport rep;
  rep.samples = n_samples;
  rep.eps = eps;
  for (auto& s : picks) {
    double& theta = (*s.val)[s.index];
    double old = theta;
    theta = old + eps;
    double up = forward(model, batch);
    theta = old - eps;
    double down = forward(model, batch);
    theta = old;
    double numeric = (up - down) / (2.0 * eps);
    double analytic = (*s.grad)[s.index];
    double denom = std::max({std::fabs(numeric), std::fabs(analytic), 1e-6});
    rep.max_rel_err = std::max(rep.max_rel_err, std::fabs(numeric - analytic) / denom);
  }
  return rep;
}

}  // namespace

FdCheckReport finite_diff_check(MicroModel& model, const PreparedBatch& batch, int n_samples,
                                double eps, std::uint64_t seed) {
  compute_gradients(model, batch);
  return fd_run(model, batch, n_samples, eps, seed);
}

FdCheckReport fd_compare_current_grads(MicroModel& model, const PreparedBatch& batch,
                                       int n_samples, double eps, std::uint64_t seed) {
  return fd_run(model, batch, n_samples, eps, seed);
}

ToyTaskKind task_from_string(const std::string& s) {
  if (s == "copy") return ToyTaskKind::copy;
  if (s == "lexicon") return ToyTaskKind::lexicon;
  throw ConfigError("unknown task '" + s + "' (expected copy or lexicon)");
}

ToyTask make_toy_task(ToyTaskKind kind, int n_words, int n_fillers, int n_items,
                      std::uint64_t seed) {
  if (n_words < 2 || n_fillers < 0 || n_items < 1)
    throw ConfigError("toy task needs at least 2 words and 1 item");
  std::mt19937_64 rng(seed);
  auto name = [](const char* stem, int k) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%s%02d", stem, k);
    return std::string(buf);
  };

  // Bijective lexicon; the copy task shares the alphabet.
  std::vector<int> perm(n_words);
  for (int k = 0; k < n_words; ++k) perm[k] = k;
  if (kind == ToyTaskKind::lexicon)
    std::shuffle(perm.begin(), perm.end(), rng);

  std::ostringstream src_text, tgt_text, align_text;
  std::vector<std::string> src_words(n_words), tgt_words(n_words);
  for (int k = 0; k < n_words; ++k) {
    src_words[k] = name(kind == ToyTaskKind::copy ? "w" : "s", k);
    tgt_words[k] = kind == ToyTaskKind::copy ? src_words[k] : name("t", k);
  }

  std::vector<std::pair<std::string, std::string>> sentences;
  for (int n = 0; n < n_items; ++n) {
    int content = static_cast<int>(rng() % n_words);
    std::string s = src_words[content];
    int extra = n_fillers == 0 ? 0 : static_cast<int>(rng() % 3);
    for (int e = 0; e < extra; ++e)
      s += " " + name("f", static_cast<int>(rng() % n_fillers));
    sentences.emplace_back(s, tgt_words[perm[content]]);
    src_text << s << "\n";
    tgt_text << tgt_words[perm[content]] << "\n";
    align_text << "0-0\n";
  }
  // Unaligned noise lines populate the unrelated category on both sides.
  for (int e = 0; e < std::max(2, n_fillers); ++e) {
    src_text << name("f", e % std::max(1, n_fillers)) << "\n";
    tgt_text << name("g", e) << "\n";
    align_text << "\n";
  }

  ToyTask task;
  {
    std::istringstream s(src_text.str()), t(tgt_text.str());
    task.src_vocab = build_vocab(s, 4 + n_words + n_fillers + 8, 1, "src");
    task.tgt_vocab = build_vocab(t, 4 + n_words + 8, 1, "tgt");
  }
  std::vector<int> src_lens, tgt_lens;
  std::vector<std::string> align_lines;
  {
    std::istringstream a(align_text.str());
    std::string line;
    while (std::getline(a, line)) align_lines.push_back(line);
  }
  std::vector<std::vector<int>> src_ids, tgt_ids;
  {
    std::istringstream s(src_text.str()), t(tgt_text.str());
    src_ids = corpus_to_ids(task.src_vocab, s);
    tgt_ids = corpus_to_ids(task.tgt_vocab, t);
  }
  for (auto& v : src_ids) src_lens.push_back(static_cast<int>(v.size()));
  for (auto& v : tgt_ids) tgt_lens.push_back(static_cast<int>(v.size()));
  auto alignments = parse_pharaoh(align_lines, src_lens, tgt_lens, false, "toy");
  auto am = estimate(alignments, src_ids, tgt_ids);
  task.pairing = build_pairing(am, task.src_vocab, task.tgt_vocab, 0.05);

  for (int n = 0; n < n_items; ++n) task.items.emplace_back(src_ids[n], tgt_ids[n]);
  return task;
}

ToyTask make_file_task(const std::string& src_path, const std::string& tgt_path,
                       const Vocab& src_vocab, const Vocab& tgt_vocab,
                       PairingTable pairing) {
  ToyTask task;
  task.src_vocab = src_vocab;
  task.tgt_vocab = tgt_vocab;
  task.pairing = std::move(pairing);
  auto src = corpus_to_ids_file(src_vocab, src_path);
  auto tgt = corpus_to_ids_file(tgt_vocab, tgt_path);
  if (src.size() != tgt.size())
    throw ValidationError(src_path + " and " + tgt_path + " have " +
                          std::to_string(src.size()) + " vs " + std::to_string(tgt.size()) +
                          " sentences");
  for (std::size_t n = 0; n < src.size(); ++n) task.items.emplace_back(src[n], tgt[n]);
  return task;
}

MicroModel make_model(const ToyTask& task, const SharingConfig& sharing,
                      const MicroModelConfig& cfg) {
  cfg.validate();
  if (sharing.d != cfg.d)
    throw ConfigError("model width and sharing config width disagree");
  MicroModel m;
  m.cfg = cfg;
  m.emb = init_embeddings(make_layout(task.pairing, sharing), cfg.seed);
  return m;
}

namespace {

struct AdamState {
  BlockSet m, v;
  long long t = 0;
};

void sgd_step(AssembledEmbeddings& emb, double lr) {
  std::vector<std::vector<double>*> grads;
  emb.grad.for_each([&](const char*, std::vector<double>& b) { grads.push_back(&b); });
  std::size_t k = 0;
  emb.val.for_each([&](const char*, std::vector<double>& b) {
    auto& g = *grads[k++];
    for (std::size_t i = 0; i < b.size(); ++i) b[i] -= lr * g[i];
  });
}

void adam_step(AssembledEmbeddings& emb, const MicroModelConfig& cfg, AdamState& st) {
  st.t += 1;
  double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(st.t));
  double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(st.t));
  std::vector<std::vector<double>*> grads, ms, vs;
  emb.grad.for_each([&](const char*, std::vector<double>& b) { grads.push_back(&b); });
  st.m.for_each([&](const char*, std::vector<double>& b) { ms.push_back(&b); });
  st.v.for_each([&](const char*, std::vector<double>& b) { vs.push_back(&b); });
  std::size_t k = 0;
  emb.val.for_each([&](const char*, std::vector<double>& b) {
    auto& g = *grads[k];
    auto& m = *ms[k];
    auto& v = *vs[k];
    ++k;
    for (std::size_t i = 0; i < b.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      b[i] -= cfg.lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + cfg.adam_eps);
    }
  });
}

}  // namespace

TrainReport train(MicroModel& model, const ToyTask& task) {
  const auto& cfg = model.cfg;
  cfg.validate();
  if (task.items.empty()) throw ConfigError("task has no training items");

  AdamState adam;
  if (cfg.optimizer == Optimizer::adam) {
    adam.m = model.emb.grad;  // zero-initialized copies of the block shapes
    adam.v = model.emb.grad;
  }

  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  TrainReport rep;
  auto t0 = std::chrono::steady_clock::now();
  for (int step = 0; step < cfg.steps; ++step) {
    std::vector<SentencePair> chosen;
    chosen.reserve(cfg.batch_size);
    for (int k = 0; k < cfg.batch_size; ++k)
      chosen.push_back(task.items[rng() % task.items.size()]);
    auto batch = prepare_batch(chosen);

    double loss;
    try {
      loss = compute_gradients(model, batch);
    } catch (const NumericError&) {
      rep.diverged_step = step;
      break;
    }
    rep.losses.push_back(loss);
    if (cfg.optimizer == Optimizer::sgd)
      sgd_step(model.emb, cfg.lr);
    else
      adam_step(model.emb, cfg, adam);
  }
  auto t1 = std::chrono::steady_clock::now();
  rep.wall_clock_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  rep.final_loss = rep.losses.empty() ? 0.0 : rep.losses.back();

  if (rep.diverged_step < 0 && !task.items.empty()) {
    std::vector<SentencePair> probe(task.items.begin(),
                                    task.items.begin() +
                                        std::min<std::size_t>(task.items.size(), 8));
    auto batch = prepare_batch(probe);
    rep.grad_check = finite_diff_check(model, batch, 64, 1e-4, cfg.seed + 17);
  }
  return rep;
}

std::string train_report_json(const TrainReport& report, const MicroModelConfig& cfg,
                              const std::string& task_name,
                              const std::array<double, 3>& lambda) {
  nlohmann::json j;
  j["task"] = task_name;
  j["config"] = {{"d", cfg.d},
                 {"lr", cfg.lr},
                 {"steps", cfg.steps},
                 {"batch_size", cfg.batch_size},
                 {"seed", cfg.seed},
                 {"optimizer", cfg.optimizer == Optimizer::sgd ? "sgd" : "adam"},
                 {"lambda", {lambda[0], lambda[1], lambda[2]}}};
  j["losses"] = report.losses;
  j["final_loss"] = report.final_loss;
  j["grad_check"] = {{"max_rel_err", report.grad_check.max_rel_err},
                     {"samples", report.grad_check.samples},
                     {"eps", report.grad_check.eps}};
  if (report.diverged_step >= 0) j["diverged_step"] = report.diverged_step;
  return j.dump(2) + "\n";
}

}  // namespace spbwe
