#include "spbwe/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "spbwe/errors.hpp"
#include "spbwe/text_io.hpp"

namespace spbwe {

const std::array<const char*, Vocab::kNumSpecials>& Vocab::special_tokens() {
  static const std::array<const char*, kNumSpecials> toks = {"<pad>", "<unk>", "<s>", "</s>"};
  return toks;
}

int Vocab::id_of(const std::string& tok) const {
  auto it = index.find(tok);
  return it == index.end() ? -1 : it->second;
}

int Vocab::id_or_unk(const std::string& tok) const {
  int id = id_of(tok);
  return id < 0 ? kUnk : id;
}

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  return in;
}

}  // namespace

Vocab build_vocab(std::istream& corpus, int max_size, long long min_freq,
                  std::string lang_tag) {
  if (max_size < Vocab::kNumSpecials)
    throw ConfigError("max_size must be at least " + std::to_string(Vocab::kNumSpecials) +
                      " (the reserved tokens), got " + std::to_string(max_size));
  if (min_freq < 1) throw ConfigError("min_freq must be positive");

  std::unordered_map<std::string, long long> counts;
  std::string line;
  while (std::getline(corpus, line)) {
    for (auto tok : split_ws(line)) counts[std::string(tok)] += 1;
  }
  if (corpus.bad()) throw IoError("read error while counting corpus");

  Vocab v;
  v.lang_tag = std::move(lang_tag);
  for (const char* s : Vocab::special_tokens()) {
    v.index.emplace(s, v.size());
    v.tokens.emplace_back(s);
    auto it = counts.find(s);
    v.freq.push_back(it == counts.end() ? 0 : it->second);
    if (it != counts.end()) counts.erase(it);
  }

  std::vector<std::pair<std::string, long long>> rest;
  rest.reserve(counts.size());
  for (auto& [tok, c] : counts)
    if (c >= min_freq) rest.emplace_back(tok, c);
  std::sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::size_t keep = static_cast<std::size_t>(max_size - Vocab::kNumSpecials);
  if (rest.size() > keep) rest.resize(keep);

  for (auto& [tok, c] : rest) {
    v.index.emplace(tok, v.size());
    v.tokens.push_back(tok);
    v.freq.push_back(c);
  }
  return v;
}

Vocab build_vocab_file(const std::string& path, int max_size, long long min_freq,
                       std::string lang_tag) {
  auto in = open_or_throw(path);
  return build_vocab(in, max_size, min_freq, std::move(lang_tag));
}

double coverage(const Vocab& vocab, std::istream& corpus) {
  long long total = 0, found = 0;
  std::string line;
  while (std::getline(corpus, line)) {
    for (auto tok : split_ws(line)) {
      ++total;
      if (vocab.index.count(std::string(tok))) ++found;
    }
  }
  if (corpus.bad()) throw IoError("read error while scanning corpus");
  if (total == 0) return 1.0;
  return static_cast<double>(found) / static_cast<double>(total);
}

double coverage_file(const Vocab& vocab, const std::string& path) {
  auto in = open_or_throw(path);
  return coverage(vocab, in);
}

std::string vocab_to_tsv(const Vocab& vocab) {
  std::string out;
  for (int id = 0; id < vocab.size(); ++id) {
    out += std::to_string(id);
    out += '\t';
    out += vocab.tokens[id];
    out += '\t';
    out += std::to_string(vocab.freq[id]);
    out += '\n';
  }
  return out;
}

void save_vocab_tsv(const Vocab& vocab, const std::string& path) {
  atomic_write(path, vocab_to_tsv(vocab));
}

Vocab load_vocab_tsv(const std::string& path, std::string lang_tag) {
  Vocab v;
  v.lang_tag = std::move(lang_tag);
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty() && i + 1 == lines.size()) break;
    std::string ctx = path + ":" + std::to_string(i + 1);
    auto cols = split_tabs(lines[i]);
    if (cols.size() != 3) throw ParseError(ctx + ": expected 3 tab-separated columns");
    long long id = parse_ll(cols[0], ctx);
    if (id != static_cast<long long>(i))
      throw ValidationError(ctx + ": ids must be contiguous from 0, got " + cols[0]);
    if (v.index.count(cols[1])) throw ValidationError(ctx + ": duplicate token '" + cols[1] + "'");
    v.index.emplace(cols[1], v.size());
    v.tokens.push_back(cols[1]);
    v.freq.push_back(parse_ll(cols[2], ctx));
  }
  if (v.size() < Vocab::kNumSpecials)
    throw ValidationError(path + ": vocabulary misses reserved tokens");
  for (int s = 0; s < Vocab::kNumSpecials; ++s)
    if (v.tokens[s] != Vocab::special_tokens()[s])
      throw ValidationError(path + ": token id " + std::to_string(s) + " must be " +
                            Vocab::special_tokens()[s] + ", got '" + v.tokens[s] + "'");
  return v;
}

std::vector<std::vector<int>> corpus_to_ids(const Vocab& vocab, std::istream& corpus) {
  std::vector<std::vector<int>> out;
  std::string line;
  while (std::getline(corpus, line)) {
    std::vector<int> ids;
    for (auto tok : split_ws(line)) ids.push_back(vocab.id_or_unk(std::string(tok)));
    out.push_back(std::move(ids));
  }
  if (corpus.bad()) throw IoError("read error while mapping corpus to ids");
  return out;
}

std::vector<std::vector<int>> corpus_to_ids_file(const Vocab& vocab, const std::string& path) {
  auto in = open_or_throw(path);
  return corpus_to_ids(vocab, in);
}

}  // namespace spbwe
