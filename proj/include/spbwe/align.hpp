#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spbwe/vocab.hpp"

namespace spbwe {

// Per-sentence word alignment links, 0-based (src_pos, tgt_pos),
// deduplicated and sorted.
struct SentenceAlignment {
  std::vector<std::pair<int, int>> links;
};

// Pharaoh format: one line per sentence pair, tokens `i-j`. Sentence
// lengths are taken from the parallel corpora; out-of-range indices and
// malformed tokens are rejected with the offending line number.
// reverse=true reads `j-i` (target-source orientation).
std::vector<SentenceAlignment> parse_pharaoh(const std::vector<std::string>& align_lines,
                                             const std::vector<int>& src_lens,
                                             const std::vector<int>& tgt_lens,
                                             bool reverse = false,
                                             const std::string& origin = "alignments");
std::vector<SentenceAlignment> parse_pharaoh_files(const std::string& align_path,
                                                   const std::string& src_path,
                                                   const std::string& tgt_path,
                                                   bool reverse = false);

// Lexical alignment probabilities A(y|x) estimated by maximum-likelihood
// normalization of link co-occurrence counts over vocabulary ids.
// For every x with links, sum_y A(y|x) == 1; the candidate set a(x) is
// every y with a positive count.
struct AlignmentModel {
  // src id -> (tgt id -> link count); ordered maps keep output deterministic.
  std::map<int, std::map<int, long long>> count;
  std::map<int, long long> row_total;

  double prob(int x, int y) const;
  // nullptr when a(x) is empty.
  const std::map<int, long long>* candidates(int x) const;
  long long total_links() const;
};

// Tokens outside the vocabularies fold to <unk> before counting.
AlignmentModel estimate(const std::vector<SentenceAlignment>& alignments,
                        const std::vector<std::vector<int>>& src_ids,
                        const std::vector<std::vector<int>>& tgt_ids);
AlignmentModel estimate_files(const std::string& align_path, const std::string& src_path,
                              const std::string& tgt_path, const Vocab& src_vocab,
                              const Vocab& tgt_vocab, bool reverse = false);

// TSV: `x<TAB>y<TAB>count<TAB>prob`, sorted by source token, then prob
// descending, then target token. Counts are exact; probabilities are
// recomputed from counts when loading.
std::string probs_to_tsv(const AlignmentModel& model, const Vocab& src_vocab,
                         const Vocab& tgt_vocab);
void save_probs_tsv(const AlignmentModel& model, const Vocab& src_vocab,
                    const Vocab& tgt_vocab, const std::string& path);
AlignmentModel load_probs_tsv(const std::string& path, const Vocab& src_vocab,
                              const Vocab& tgt_vocab);

}  // namespace spbwe
