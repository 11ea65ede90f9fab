#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spbwe/align.hpp"
#include "spbwe/vocab.hpp"

namespace spbwe {

// Relationship between a paired source and target word: similar lexical
// meaning, same word form, or unrelated.
enum class Relation : int { lm = 0, wf = 1, ur = 2 };

const char* relation_name(Relation r);
Relation relation_from_string(const std::string& s);

struct WordPair {
  int src_id = -1;
  int tgt_id = -1;
  Relation category = Relation::ur;
  // Present only for lm pairs; always >= the threshold used at build time.
  std::optional<double> align_prob;
  long long src_freq = 0;
  long long tgt_freq = 0;
};

struct SurplusWord {
  int id = -1;
  long long freq = 0;
};

// Exclusive source<->target pairing. Every vocabulary id on each side
// appears exactly once across pairs + surplus; at most one side has
// surplus (the longer residue's tail when vocabulary sizes differ).
struct PairingTable {
  std::vector<WordPair> pairs;
  std::vector<SurplusWord> surplus_src;
  std::vector<SurplusWord> surplus_tgt;
  double threshold = 0.0;

  std::array<int, 3> category_counts() const;
  // Throws ValidationError when the partition/exclusivity invariants fail.
  void validate(int src_vocab_size, int tgt_vocab_size) const;
};

// Stage 1: walking source words in frequency-descending order (vocab id
// order, specials excluded), pair each with its highest-probability
// candidate among targets that are still unpaired and reach the
// threshold. Argmax ties break toward the more frequent target, then
// the lexicographically smaller one. Paired targets leave the candidate
// pool for every later source word.
PairingTable pair_lexical(const AlignmentModel& model, const Vocab& src_vocab,
                          const Vocab& tgt_vocab, double threshold);

// Stage 2: among words both stages left unpaired, pair byte-identical
// surface forms (BPE "@@" markers included). The reserved tokens meet
// their counterparts here.
void pair_word_form(PairingTable& table, const Vocab& src_vocab, const Vocab& tgt_vocab);

// Stage 3: both residues sorted by frequency descending and paired by
// rank; the longer residue's tail becomes surplus.
void pair_unrelated(PairingTable& table, const Vocab& src_vocab, const Vocab& tgt_vocab);

// The three stages in priority order; the result satisfies all
// PairingTable invariants.
PairingTable build_pairing(const AlignmentModel& model, const Vocab& src_vocab,
                           const Vocab& tgt_vocab, double threshold);

// TSV: `src<TAB>tgt<TAB>category<TAB>prob_or_NA<TAB>src_freq<TAB>tgt_freq`;
// surplus rows carry NA in both columns of the missing side.
std::string pairing_to_tsv(const PairingTable& table, const Vocab& src_vocab,
                           const Vocab& tgt_vocab);
void save_pairing_tsv(const PairingTable& table, const Vocab& src_vocab,
                      const Vocab& tgt_vocab, const std::string& path);
PairingTable load_pairing_tsv(const std::string& path, const Vocab& src_vocab,
                              const Vocab& tgt_vocab, double threshold = 0.0);

}  // namespace spbwe
