#include "spbwe/align.hpp"

#include <algorithm>
#include <charconv>

#include "spbwe/errors.hpp"
#include "spbwe/text_io.hpp"

namespace spbwe {

namespace {

int parse_index(std::string_view s, const std::string& ctx) {
  int v = 0;
  auto [end, err] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (err != std::errc() || end != s.data() + s.size() || v < 0)
    throw ParseError(ctx + ": malformed link token");
  return v;
}

}  // namespace

std::vector<SentenceAlignment> parse_pharaoh(const std::vector<std::string>& align_lines,
                                             const std::vector<int>& src_lens,
                                             const std::vector<int>& tgt_lens,
                                             bool reverse, const std::string& origin) {
  if (src_lens.size() != tgt_lens.size())
    throw ValidationError(origin + ": source and target corpora have " +
                          std::to_string(src_lens.size()) + " vs " +
                          std::to_string(tgt_lens.size()) + " sentences");
  if (align_lines.size() != src_lens.size())
    throw ValidationError(origin + ": " + std::to_string(align_lines.size()) +
                          " alignment lines for " + std::to_string(src_lens.size()) +
                          " sentence pairs");

  std::vector<SentenceAlignment> out(align_lines.size());
  for (std::size_t n = 0; n < align_lines.size(); ++n) {
    std::string ctx = origin + ":" + std::to_string(n + 1);
    auto& links = out[n].links;
    for (auto tok : split_ws(align_lines[n])) {
      std::size_t dash = tok.find('-');
      if (dash == std::string_view::npos || dash == 0 || dash + 1 == tok.size())
        throw ParseError(ctx + ": malformed link token '" + std::string(tok) + "'");
      int i = parse_index(tok.substr(0, dash), ctx);
      int j = parse_index(tok.substr(dash + 1), ctx);
      if (reverse) std::swap(i, j);
      if (i >= src_lens[n])
        throw ValidationError(ctx + ": source index " + std::to_string(i) +
                              " out of range for sentence of length " +
                              std::to_string(src_lens[n]));
      if (j >= tgt_lens[n])
        throw ValidationError(ctx + ": target index " + std::to_string(j) +
                              " out of range for sentence of length " +
                              std::to_string(tgt_lens[n]));
      links.emplace_back(i, j);
    }
    std::sort(links.begin(), links.end());
    links.erase(std::unique(links.begin(), links.end()), links.end());
  }
  return out;
}

namespace {

std::vector<int> sentence_lengths(const std::string& path) {
  std::vector<int> lens;
  for (const auto& line : read_lines(path))
    lens.push_back(static_cast<int>(split_ws(line).size()));
  return lens;
}

}  // namespace

std::vector<SentenceAlignment> parse_pharaoh_files(const std::string& align_path,
                                                   const std::string& src_path,
                                                   const std::string& tgt_path, bool reverse) {
  return parse_pharaoh(read_lines(align_path), sentence_lengths(src_path),
                       sentence_lengths(tgt_path), reverse, align_path);
}

double AlignmentModel::prob(int x, int y) const {
  auto row = count.find(x);
  if (row == count.end()) return 0.0;
  auto cell = row->second.find(y);
  if (cell == row->second.end()) return 0.0;
  return static_cast<double>(cell->second) / static_cast<double>(row_total.at(x));
}

const std::map<int, long long>* AlignmentModel::candidates(int x) const {
  auto row = count.find(x);
  return row == count.end() ? nullptr : &row->second;
}

long long AlignmentModel::total_links() const {
  long long t = 0;
  for (auto& [x, total] : row_total) t += total;
  return t;
}

AlignmentModel estimate(const std::vector<SentenceAlignment>& alignments,
                        const std::vector<std::vector<int>>& src_ids,
                        const std::vector<std::vector<int>>& tgt_ids) {
  if (alignments.size() != src_ids.size() || alignments.size() != tgt_ids.size())
    throw ValidationError("alignments and corpora disagree on sentence count");
  AlignmentModel m;
  for (std::size_t n = 0; n < alignments.size(); ++n) {
    for (auto [i, j] : alignments[n].links) {
      if (i >= static_cast<int>(src_ids[n].size()) || j >= static_cast<int>(tgt_ids[n].size()))
        throw ValidationError("link (" + std::to_string(i) + "," + std::to_string(j) +
                              ") out of range in sentence " + std::to_string(n + 1));
      m.count[src_ids[n][i]][tgt_ids[n][j]] += 1;
      m.row_total[src_ids[n][i]] += 1;
    }
  }
  return m;
}

AlignmentModel estimate_files(const std::string& align_path, const std::string& src_path,
                              const std::string& tgt_path, const Vocab& src_vocab,
                              const Vocab& tgt_vocab, bool reverse) {
  auto alignments = parse_pharaoh_files(align_path, src_path, tgt_path, reverse);
  auto src = corpus_to_ids_file(src_vocab, src_path);
  auto tgt = corpus_to_ids_file(tgt_vocab, tgt_path);
  return estimate(alignments, src, tgt);
}

std::string probs_to_tsv(const AlignmentModel& model, const Vocab& src_vocab,
                         const Vocab& tgt_vocab) {
  // Rows keyed by surface strings: sort by source token, prob desc, target token.
  struct Row {
    const std::string* x;
    const std::string* y;
    long long count;
    double prob;
  };
  std::vector<Row> rows;
  for (auto& [x, cands] : model.count) {
    for (auto& [y, c] : cands)
      rows.push_back({&src_vocab.tokens.at(x), &tgt_vocab.tokens.at(y), c, model.prob(x, y)});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (*a.x != *b.x) return *a.x < *b.x;
    if (a.prob != b.prob) return a.prob > b.prob;
    return *a.y < *b.y;
  });
  std::string out;
  for (auto& r : rows) {
    out += *r.x;
    out += '\t';
    out += *r.y;
    out += '\t';
    out += std::to_string(r.count);
    out += '\t';
    out += fmt_double(r.prob);
    out += '\n';
  }
  return out;
}

void save_probs_tsv(const AlignmentModel& model, const Vocab& src_vocab,
                    const Vocab& tgt_vocab, const std::string& path) {
  atomic_write(path, probs_to_tsv(model, src_vocab, tgt_vocab));
}

AlignmentModel load_probs_tsv(const std::string& path, const Vocab& src_vocab,
                              const Vocab& tgt_vocab) {
  AlignmentModel m;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty() && i + 1 == lines.size()) break;
    std::string ctx = path + ":" + std::to_string(i + 1);
    auto cols = split_tabs(lines[i]);
    if (cols.size() != 4) throw ParseError(ctx + ": expected 4 tab-separated columns");
    int x = src_vocab.id_of(cols[0]);
    int y = tgt_vocab.id_of(cols[1]);
    if (x < 0) throw ValidationError(ctx + ": source token '" + cols[0] + "' not in vocabulary");
    if (y < 0) throw ValidationError(ctx + ": target token '" + cols[1] + "' not in vocabulary");
    long long c = parse_ll(cols[2], ctx);
    if (c <= 0) throw ValidationError(ctx + ": counts must be positive");
    if (m.count[x].count(y)) throw ValidationError(ctx + ": duplicate (x, y) row");
    m.count[x][y] = c;
    m.row_total[x] += c;
  }
  return m;
}

}  // namespace spbwe
