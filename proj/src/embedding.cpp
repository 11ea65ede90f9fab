#include "spbwe/embedding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "spbwe/errors.hpp"
#include "spbwe/text_io.hpp"

static_assert(std::endian::native == std::endian::little,
              "embedding dumps are written in native little-endian order");

namespace spbwe {

int shared_width(double lambda, int d) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw ConfigError("sharing coefficient must be in [0, 1], got " + fmt_double(lambda));
  if (d <= 0) throw ConfigError("embedding width must be positive");
  // Truncate toward zero; the epsilon keeps products such as 0.7 * 10
  // (6.999...96 in binary) from losing a full unit.
  int w = static_cast<int>(std::floor(lambda * d + 1e-9));
  return std::min(w, d);
}

std::array<int, 3> SharingConfig::widths() const {
  validate();
  return {shared_width(lambda[0], d), shared_width(lambda[1], d), shared_width(lambda[2], d)};
}

void SharingConfig::validate() const {
  if (d <= 0) throw ConfigError("embedding width must be positive");
  for (double l : lambda)
    if (!(l >= 0.0 && l <= 1.0))
      throw ConfigError("sharing coefficients must be in [0, 1]");
  if (!tie_decoder)
    throw ConfigError(
        "shared-private layouts tie the target input and output embeddings; "
        "set tie_decoder=true (lambda=(0,0,0) reproduces plain decoder WT)");
}

int EmbeddingLayout::shared_width_of(Side side, int id) const {
  const auto& slots = side == Side::src ? src_slot : tgt_slot;
  if (id < 0 || id >= static_cast<int>(slots.size()))
    throw ValidationError("vocab id " + std::to_string(id) + " out of range");
  Region r = slots[id].region;
  return r == Region::surplus ? 0 : width[static_cast<int>(r)];
}

EmbeddingLayout make_layout_widths(const PairingTable& pairing, int d,
                                   std::array<int, 3> widths) {
  if (d <= 0) throw ConfigError("embedding width must be positive");
  for (int w : widths)
    if (w < 0 || w > d) throw ConfigError("shared width outside [0, d]");

  EmbeddingLayout L;
  L.d = d;
  L.width = widths;

  // Rows within a category ordered by source frequency descending,
  // source id ascending on ties (vocab order). Surplus rows likewise by
  // their own side's frequency.
  std::array<std::vector<const WordPair*>, 3> by_cat;
  for (const auto& p : pairing.pairs) by_cat[static_cast<int>(p.category)].push_back(&p);
  for (auto& cat : by_cat) {
    std::stable_sort(cat.begin(), cat.end(), [](const WordPair* a, const WordPair* b) {
      if (a->src_freq != b->src_freq) return a->src_freq > b->src_freq;
      return a->src_id < b->src_id;
    });
  }
  auto surplus_sorted = [](std::vector<SurplusWord> s) {
    std::stable_sort(s.begin(), s.end(), [](const SurplusWord& a, const SurplusWord& b) {
      if (a.freq != b.freq) return a.freq > b.freq;
      return a.id < b.id;
    });
    return s;
  };
  auto sur_src = surplus_sorted(pairing.surplus_src);
  auto sur_tgt = surplus_sorted(pairing.surplus_tgt);

  int n_src = static_cast<int>(pairing.pairs.size() + sur_src.size());
  int n_tgt = static_cast<int>(pairing.pairs.size() + sur_tgt.size());
  L.src_slot.assign(n_src, Slot{});
  L.tgt_slot.assign(n_tgt, Slot{});
  auto place = [](std::vector<Slot>& slots, int id, Region r, int row) {
    if (id < 0 || id >= static_cast<int>(slots.size()))
      throw ValidationError("pairing id " + std::to_string(id) +
                            " outside the contiguous vocabulary range");
    if (slots[id].row >= 0)
      throw ValidationError("pairing id " + std::to_string(id) + " placed twice");
    slots[id] = {r, row};
  };

  for (int c = 0; c < 3; ++c) {
    L.count[c] = static_cast<int>(by_cat[c].size());
    L.rows[c].reserve(by_cat[c].size());
    for (const WordPair* p : by_cat[c]) {
      int row = static_cast<int>(L.rows[c].size());
      place(L.src_slot, p->src_id, static_cast<Region>(c), row);
      place(L.tgt_slot, p->tgt_id, static_cast<Region>(c), row);
      L.rows[c].emplace_back(p->src_id, p->tgt_id);
    }
  }
  L.surplus_src = static_cast<int>(sur_src.size());
  L.surplus_tgt = static_cast<int>(sur_tgt.size());
  for (std::size_t r = 0; r < sur_src.size(); ++r) {
    place(L.src_slot, sur_src[r].id, Region::surplus, static_cast<int>(r));
    L.surplus_src_ids.push_back(sur_src[r].id);
  }
  for (std::size_t r = 0; r < sur_tgt.size(); ++r) {
    place(L.tgt_slot, sur_tgt[r].id, Region::surplus, static_cast<int>(r));
    L.surplus_tgt_ids.push_back(sur_tgt[r].id);
  }
  for (int id = 0; id < n_src; ++id)
    if (L.src_slot[id].row < 0)
      throw ValidationError("source id " + std::to_string(id) + " missing from the pairing");
  for (int id = 0; id < n_tgt; ++id)
    if (L.tgt_slot[id].row < 0)
      throw ValidationError("target id " + std::to_string(id) + " missing from the pairing");

  // One shared row per pair plus a private row per side; a surplus word
  // owns a full unshared row.
  long long total = 0;
  for (int c = 0; c < 3; ++c) {
    long long n = L.count[c];
    total += n * L.width[c] + 2 * n * (d - L.width[c]);
  }
  total += static_cast<long long>(L.surplus_src + L.surplus_tgt) * d;
  L.param_total = total;
  return L;
}

EmbeddingLayout make_layout(const PairingTable& pairing, const SharingConfig& config) {
  return make_layout_widths(pairing, config.d, config.widths());
}

Baseline baseline_from_string(const std::string& s) {
  if (s == "vanilla") return Baseline::vanilla;
  if (s == "decoder_wt") return Baseline::decoder_wt;
  throw ConfigError("unknown baseline '" + s + "' (expected vanilla or decoder_wt)");
}

long long baseline_params(const EmbeddingLayout& layout, Baseline baseline) {
  long long vx = layout.src_vocab_size(), vy = layout.tgt_vocab_size();
  switch (baseline) {
    case Baseline::vanilla: return (vx + 2 * vy) * static_cast<long long>(layout.d);
    case Baseline::decoder_wt: return (vx + vy) * static_cast<long long>(layout.d);
  }
  throw ConfigError("unknown baseline");
}

std::pair<long long, double> param_count(const EmbeddingLayout& layout, Baseline baseline) {
  long long base = baseline_params(layout, baseline);
  double reduction = 1.0 - static_cast<double>(layout.param_total) / static_cast<double>(base);
  return {layout.param_total, reduction};
}

long long single_matrix_params(long long joint_vocab, int d) {
  if (joint_vocab < 0 || d <= 0) throw ConfigError("vocabulary and width must be positive");
  return joint_vocab * static_cast<long long>(d);
}

InitScheme scheme_from_string(const std::string& s) {
  if (s == "uniform_scaled") return InitScheme::uniform_scaled;
  if (s == "normal_scaled") return InitScheme::normal_scaled;
  throw ConfigError("unknown init scheme '" + s + "'");
}

long long BlockSet::total_size() const {
  long long t = 0;
  for (int c = 0; c < 3; ++c)
    t += static_cast<long long>(shared[c].size() + priv_src[c].size() + priv_tgt[c].size());
  return t + static_cast<long long>(sur_src.size() + sur_tgt.size());
}

namespace {

BlockSet make_blocks(const EmbeddingLayout& L) {
  BlockSet b;
  for (int c = 0; c < 3; ++c) {
    b.shared[c].assign(static_cast<std::size_t>(L.count[c]) * L.width[c], 0.0);
    b.priv_src[c].assign(static_cast<std::size_t>(L.count[c]) * (L.d - L.width[c]), 0.0);
    b.priv_tgt[c].assign(static_cast<std::size_t>(L.count[c]) * (L.d - L.width[c]), 0.0);
  }
  b.sur_src.assign(static_cast<std::size_t>(L.surplus_src) * L.d, 0.0);
  b.sur_tgt.assign(static_cast<std::size_t>(L.surplus_tgt) * L.d, 0.0);
  return b;
}

struct RowRef {
  double* shared = nullptr;
  int shared_n = 0;
  double* priv = nullptr;
  int priv_n = 0;
};

RowRef row_ref(const EmbeddingLayout& L, BlockSet& b, Side side, int id) {
  const auto& slots = side == Side::src ? L.src_slot : L.tgt_slot;
  if (id < 0 || id >= static_cast<int>(slots.size()))
    throw ValidationError("vocab id " + std::to_string(id) + " out of range for lookup");
  Slot s = slots[id];
  RowRef r;
  if (s.region == Region::surplus) {
    auto& block = side == Side::src ? b.sur_src : b.sur_tgt;
    r.priv = block.data() + static_cast<std::size_t>(s.row) * L.d;
    r.priv_n = L.d;
    return r;
  }
  int c = static_cast<int>(s.region);
  int w = L.width[c];
  r.shared = b.shared[c].data() + static_cast<std::size_t>(s.row) * w;
  r.shared_n = w;
  auto& priv = side == Side::src ? b.priv_src[c] : b.priv_tgt[c];
  r.priv = priv.data() + static_cast<std::size_t>(s.row) * (L.d - w);
  r.priv_n = L.d - w;
  return r;
}

}  // namespace

std::vector<double> AssembledEmbeddings::lookup(Side side, int id) const {
  auto r = row_ref(layout, const_cast<BlockSet&>(val), side, id);
  std::vector<double> v(static_cast<std::size_t>(layout.d));
  std::copy(r.shared, r.shared + r.shared_n, v.begin());
  std::copy(r.priv, r.priv + r.priv_n, v.begin() + r.shared_n);
  return v;
}

std::span<double> AssembledEmbeddings::shared_row(Side side, int id) {
  auto r = row_ref(layout, val, side, id);
  return {r.shared, static_cast<std::size_t>(r.shared_n)};
}

std::span<const double> AssembledEmbeddings::shared_row(Side side, int id) const {
  auto r = row_ref(layout, const_cast<BlockSet&>(val), side, id);
  return {r.shared, static_cast<std::size_t>(r.shared_n)};
}

std::span<double> AssembledEmbeddings::private_row(Side side, int id) {
  auto r = row_ref(layout, val, side, id);
  return {r.priv, static_cast<std::size_t>(r.priv_n)};
}

std::span<const double> AssembledEmbeddings::private_row(Side side, int id) const {
  auto r = row_ref(layout, const_cast<BlockSet&>(val), side, id);
  return {r.priv, static_cast<std::size_t>(r.priv_n)};
}

void AssembledEmbeddings::grad_scatter(Side side, int id, std::span<const double> g) {
  if (static_cast<int>(g.size()) != layout.d)
    throw ValidationError("gradient must have exactly d entries");
  for (std::size_t k = 0; k < g.size(); ++k)
    if (!std::isfinite(g[k]))
      throw NumericError("non-finite gradient entry " + std::to_string(k) + " for id " +
                         std::to_string(id));
  auto r = row_ref(layout, grad, side, id);
  for (int k = 0; k < r.shared_n; ++k) r.shared[k] += g[k];
  for (int k = 0; k < r.priv_n; ++k) r.priv[k] += g[r.shared_n + k];
}

void AssembledEmbeddings::zero_grad() {
  grad.for_each([](const char*, std::vector<double>& b) { std::fill(b.begin(), b.end(), 0.0); });
}

std::vector<double> AssembledEmbeddings::assemble_matrix(Side side) const {
  int n = side == Side::src ? layout.src_vocab_size() : layout.tgt_vocab_size();
  std::vector<double> m(static_cast<std::size_t>(n) * layout.d);
  for (int id = 0; id < n; ++id) {
    auto v = lookup(side, id);
    std::copy(v.begin(), v.end(), m.begin() + static_cast<std::size_t>(id) * layout.d);
  }
  return m;
}

long long AssembledEmbeddings::stored_scalars() const { return val.total_size(); }

namespace {

// xorshift-free uniform in [0, 1) from the engine's raw 64 bits; avoids
// the implementation-defined std::uniform_real_distribution sequences.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

AssembledEmbeddings init_embeddings(const EmbeddingLayout& layout, std::uint64_t seed,
                                    InitScheme scheme) {
  AssembledEmbeddings emb;
  emb.layout = layout;
  emb.val = make_blocks(layout);
  emb.grad = make_blocks(layout);
  emb.seed = seed;
  emb.scheme = scheme;

  double scale = 1.0 / std::sqrt(static_cast<double>(layout.d));
  std::mt19937_64 rng(seed);
  // Each stored cell is drawn exactly once, in block order; shared cells
  // are therefore sampled once, not once per side. Values are squeezed
  // through f32 so binary dumps reproduce them exactly.
  emb.val.for_each([&](const char*, std::vector<double>& block) {
    if (scheme == InitScheme::uniform_scaled) {
      for (double& v : block)
        v = static_cast<float>(scale * (2.0 * uniform01(rng) - 1.0));
    } else {
      for (double& v : block) {
        double u1 = std::max(uniform01(rng), 0x1.0p-53);
        double u2 = uniform01(rng);
        v = static_cast<float>(scale * std::sqrt(-2.0 * std::log(u1)) *
                               std::cos(2.0 * M_PI * u2));
      }
    }
  });
  return emb;
}

namespace {

constexpr char kMagic[4] = {'S', 'P', 'B', 'E'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out.append(b, 4);
}

std::uint32_t get_u32(const std::string& in, std::size_t& off, const std::string& path) {
  if (off + 4 > in.size()) throw ParseError(path + ": truncated dump header");
  std::uint32_t v;
  std::memcpy(&v, in.data() + off, 4);
  off += 4;
  return v;
}

}  // namespace

void save_embedding_dump(const AssembledEmbeddings& emb, const std::string& path) {
  std::string out;
  out.append(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(emb.layout.d));
  for (int c = 0; c < 3; ++c) {
    put_u32(out, static_cast<std::uint32_t>(emb.layout.count[c]));
    put_u32(out, static_cast<std::uint32_t>(emb.layout.width[c]));
  }
  put_u32(out, static_cast<std::uint32_t>(emb.layout.surplus_src));
  put_u32(out, static_cast<std::uint32_t>(emb.layout.surplus_tgt));
  const_cast<BlockSet&>(emb.val).for_each([&](const char*, std::vector<double>& block) {
    for (double v : block) {
      float f = static_cast<float>(v);
      char b[4];
      std::memcpy(b, &f, 4);
      out.append(b, 4);
    }
  });
  atomic_write(path, out);
}

DumpHeader read_dump_header(const std::string& path) {
  std::string in = read_file(path);
  if (in.size() < 4 || std::memcmp(in.data(), kMagic, 4) != 0)
    throw ParseError(path + ": not an SPBE embedding dump");
  std::size_t off = 4;
  std::uint32_t version = get_u32(in, off, path);
  if (version != kVersion)
    throw ParseError(path + ": unsupported dump version " + std::to_string(version));
  DumpHeader h;
  h.d = static_cast<int>(get_u32(in, off, path));
  for (int c = 0; c < 3; ++c) {
    h.count[c] = static_cast<int>(get_u32(in, off, path));
    h.width[c] = static_cast<int>(get_u32(in, off, path));
  }
  h.surplus_src = static_cast<int>(get_u32(in, off, path));
  h.surplus_tgt = static_cast<int>(get_u32(in, off, path));
  return h;
}

AssembledEmbeddings load_embedding_dump(const std::string& path, const EmbeddingLayout& layout) {
  std::string in = read_file(path);
  DumpHeader h = read_dump_header(path);
  if (h.d != layout.d || h.count != layout.count || h.width != layout.width ||
      h.surplus_src != layout.surplus_src || h.surplus_tgt != layout.surplus_tgt)
    throw ValidationError(path + ": dump header does not match the layout");

  AssembledEmbeddings emb;
  emb.layout = layout;
  emb.val = make_blocks(layout);
  emb.grad = make_blocks(layout);
  std::size_t off = 4 + 4 + 4 + 6 * 4 + 2 * 4;
  std::size_t need = off + static_cast<std::size_t>(emb.val.total_size()) * 4;
  if (in.size() != need)
    throw ParseError(path + ": dump payload has " + std::to_string(in.size() - off) +
                     " bytes, expected " + std::to_string(need - off));
  emb.val.for_each([&](const char*, std::vector<double>& block) {
    for (double& v : block) {
      float f;
      std::memcpy(&f, in.data() + off, 4);
      off += 4;
      v = f;
    }
  });
  return emb;
}

std::string embeddings_to_tsv(const AssembledEmbeddings& emb, const Vocab& src_vocab,
                              const Vocab& tgt_vocab) {
  std::string out;
  auto dump_side = [&](Side side, const Vocab& vocab, const char* name) {
    int n = side == Side::src ? emb.layout.src_vocab_size() : emb.layout.tgt_vocab_size();
    if (n != vocab.size())
      throw ValidationError("vocabulary size does not match the layout for side " +
                            std::string(name));
    for (int id = 0; id < n; ++id) {
      out += vocab.tokens[id];
      out += '\t';
      out += name;
      auto v = emb.lookup(side, id);
      for (double x : v) {
        out += '\t';
        out += fmt_float_compact(x);
      }
      out += '\n';
    }
  };
  dump_side(Side::src, src_vocab, "src");
  dump_side(Side::tgt, tgt_vocab, "tgt");
  return out;
}

std::string layout_report_json(const EmbeddingLayout& layout,
                               const std::optional<std::array<double, 3>>& lambda,
                               Baseline baseline) {
  nlohmann::json j;
  j["d"] = layout.d;
  if (lambda) j["lambda"] = {(*lambda)[0], (*lambda)[1], (*lambda)[2]};
  j["widths"] = {{"lm", layout.width[0]}, {"wf", layout.width[1]}, {"ur", layout.width[2]}};
  j["counts"] = {{"lm", layout.count[0]},
                 {"wf", layout.count[1]},
                 {"ur", layout.count[2]},
                 {"surplus_src", layout.surplus_src},
                 {"surplus_tgt", layout.surplus_tgt}};
  auto [params, reduction] = param_count(layout, baseline);
  j["emb_params"] = params;
  j["baseline"] = baseline == Baseline::vanilla ? "vanilla" : "decoder_wt";
  j["baseline_params"] = baseline_params(layout, baseline);
  j["reduction"] = reduction;
  return j.dump(2) + "\n";
}

}  // namespace spbwe
