#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spbwe/pairing.hpp"
#include "spbwe/vocab.hpp"

namespace spbwe {

// Number of leading embedding coordinates a category shares between the
// two sides of a pair: the integral part of lambda * d. Truncation, not
// rounding; the published parameter counts only come out under floor.
int shared_width(double lambda, int d);

struct SharingConfig {
  int d = 512;
  // (lambda_lm, lambda_wf, lambda_ur), each in [0, 1].
  std::array<double, 3> lambda = {0.9, 0.7, 0.5};
  // Target input and output embeddings are one matrix. Feature sharing
  // requires it; (0,0,0) with tie_decoder is exactly decoder WT.
  bool tie_decoder = true;

  std::array<int, 3> widths() const;
  void validate() const;
};

enum class Region : int { lm = 0, wf = 1, ur = 2, surplus = 3 };
enum class Side : int { src = 0, tgt = 1 };

struct Slot {
  Region region = Region::surplus;
  int row = -1;
};

// Physical arrangement of the shared-private matrices: per category a
// shared block N_c x w_c and two private blocks N_c x (d - w_c); words
// of a pair occupy the same row index of their category. Surplus words
// (unequal vocabulary sizes) own an unshared full-width row.
struct EmbeddingLayout {
  int d = 0;
  std::array<int, 3> width = {0, 0, 0};
  std::array<int, 3> count = {0, 0, 0};
  int surplus_src = 0;
  int surplus_tgt = 0;
  std::vector<Slot> src_slot, tgt_slot;                    // vocab id -> slot
  std::array<std::vector<std::pair<int, int>>, 3> rows;    // row -> (src id, tgt id)
  std::vector<int> surplus_src_ids, surplus_tgt_ids;       // row -> id
  long long param_total = 0;

  int src_vocab_size() const { return static_cast<int>(src_slot.size()); }
  int tgt_vocab_size() const { return static_cast<int>(tgt_slot.size()); }
  int shared_width_of(Side side, int id) const;
};

EmbeddingLayout make_layout(const PairingTable& pairing, const SharingConfig& config);
EmbeddingLayout make_layout_widths(const PairingTable& pairing, int d,
                                   std::array<int, 3> widths);

enum class Baseline { vanilla, decoder_wt };
Baseline baseline_from_string(const std::string& s);

// (embedding parameters, reduction rate vs the baseline). The vanilla
// baseline charges three full matrices: |Vx| d + 2 |Vy| d.
std::pair<long long, double> param_count(const EmbeddingLayout& layout, Baseline baseline);
long long baseline_params(const EmbeddingLayout& layout, Baseline baseline);
// Single joint matrix accounting used by three-way weight tying.
long long single_matrix_params(long long joint_vocab, int d);

enum class InitScheme { uniform_scaled, normal_scaled };
InitScheme scheme_from_string(const std::string& s);

// One vector<double> per physical block, fixed order:
// S_lm, Px_lm, Py_lm, S_wf, Px_wf, Py_wf, S_ur, Px_ur, Py_ur, sur_x, sur_y.
struct BlockSet {
  std::array<std::vector<double>, 3> shared, priv_src, priv_tgt;
  std::vector<double> sur_src, sur_tgt;

  template <typename Fn>
  void for_each(Fn&& fn) {
    static const char* names[] = {"S_lm", "Px_lm", "Py_lm", "S_wf", "Px_wf",
                                  "Py_wf", "S_ur",  "Px_ur", "Py_ur", "sur_x", "sur_y"};
    int k = 0;
    for (int c = 0; c < 3; ++c) {
      fn(names[k++], shared[c]);
      fn(names[k++], priv_src[c]);
      fn(names[k++], priv_tgt[c]);
    }
    fn(names[9], sur_src);
    fn(names[10], sur_tgt);
  }
  long long total_size() const;
};

// Shared-private embedding storage plus a gradient buffer of identical
// shape. The shared slice of a paired word is one storage row seen from
// both sides: writes through either side are visible through both.
// Values live on the f32 grid after init so binary dumps round-trip.
struct AssembledEmbeddings {
  EmbeddingLayout layout;
  BlockSet val;
  BlockSet grad;
  std::uint64_t seed = 0;
  InitScheme scheme = InitScheme::uniform_scaled;

  std::vector<double> lookup(Side side, int id) const;
  std::span<double> shared_row(Side side, int id);
  std::span<const double> shared_row(Side side, int id) const;
  std::span<double> private_row(Side side, int id);
  std::span<const double> private_row(Side side, int id) const;

  // Adds the first w_c entries into the shared row and the rest into
  // this side's private row. Throws NumericError on non-finite entries.
  void grad_scatter(Side side, int id, std::span<const double> g);
  void zero_grad();

  // Row-major |V| x d matrix whose row i equals lookup(side, i).
  std::vector<double> assemble_matrix(Side side) const;
  long long stored_scalars() const;
};

AssembledEmbeddings init_embeddings(const EmbeddingLayout& layout, std::uint64_t seed,
                                    InitScheme scheme = InitScheme::uniform_scaled);

// Binary dump: magic "SPBE", u32 version, u32 d, three (N_c, w_c) u32
// pairs, two u32 surplus counts, then the blocks as little-endian f32 in
// BlockSet order.
void save_embedding_dump(const AssembledEmbeddings& emb, const std::string& path);
struct DumpHeader {
  int d = 0;
  std::array<int, 3> count = {0, 0, 0};
  std::array<int, 3> width = {0, 0, 0};
  int surplus_src = 0, surplus_tgt = 0;
};
DumpHeader read_dump_header(const std::string& path);
AssembledEmbeddings load_embedding_dump(const std::string& path, const EmbeddingLayout& layout);

// Text export: `token<TAB>side<TAB>v1..vd`, all source rows then all
// target rows, vocab id order.
std::string embeddings_to_tsv(const AssembledEmbeddings& emb, const Vocab& src_vocab,
                              const Vocab& tgt_vocab);

// Layout report JSON {d, lambda, widths, counts, emb_params,
// baseline_params, reduction}; lambda is included when known.
std::string layout_report_json(const EmbeddingLayout& layout,
                               const std::optional<std::array<double, 3>>& lambda,
                               Baseline baseline);

}  // namespace spbwe
