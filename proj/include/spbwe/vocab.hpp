#pragma once

#include <array>
#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

namespace spbwe {

// Frequency-ordered token inventory for one language.
//
// Ids are contiguous from 0. The four reserved tokens occupy the lowest
// ids in fixed order: <pad>=0, <unk>=1, <s>=2, </s>=3. Non-special
// tokens follow, sorted by frequency descending with ties broken
// lexicographically ascending. Input text is assumed pre-tokenized
// (and BPE-applied, "@@" markers intact); this type never splits tokens.
struct Vocab {
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kBos = 2;
  static constexpr int kEos = 3;
  static constexpr int kNumSpecials = 4;
  static const std::array<const char*, kNumSpecials>& special_tokens();

  std::vector<std::string> tokens;             // id -> surface
  std::vector<long long> freq;                 // id -> raw corpus count
  std::unordered_map<std::string, int> index;  // surface -> id
  std::string lang_tag;

  int size() const { return static_cast<int>(tokens.size()); }
  static bool is_special(int id) { return id >= 0 && id < kNumSpecials; }
  // -1 when absent.
  int id_of(const std::string& tok) const;
  int id_or_unk(const std::string& tok) const;
};

// Counts the whole corpus, then keeps the max_size - 4 most frequent
// tokens with freq >= min_freq. Counts of kept tokens reflect the full
// corpus, not the truncated vocabulary.
Vocab build_vocab(std::istream& corpus, int max_size, long long min_freq,
                  std::string lang_tag = {});
Vocab build_vocab_file(const std::string& path, int max_size, long long min_freq,
                       std::string lang_tag = {});

// Fraction of corpus tokens present in the vocabulary; empty corpus is 1.0.
double coverage(const Vocab& vocab, std::istream& corpus);
double coverage_file(const Vocab& vocab, const std::string& path);

// TSV persistence: `id<TAB>token<TAB>freq`, one row per token, specials
// first. Loading the written file reproduces the Vocab exactly.
std::string vocab_to_tsv(const Vocab& vocab);
void save_vocab_tsv(const Vocab& vocab, const std::string& path);
Vocab load_vocab_tsv(const std::string& path, std::string lang_tag = {});

// Maps each corpus line to ids, folding out-of-vocabulary tokens to <unk>.
std::vector<std::vector<int>> corpus_to_ids(const Vocab& vocab, std::istream& corpus);
std::vector<std::vector<int>> corpus_to_ids_file(const Vocab& vocab, const std::string& path);

}  // namespace spbwe
