#include "spbwe/pairing.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "spbwe/errors.hpp"
#include "spbwe/text_io.hpp"

namespace spbwe {

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::lm: return "lm";
    case Relation::wf: return "wf";
    case Relation::ur: return "ur";
  }
  return "?";
}

Relation relation_from_string(const std::string& s) {
  if (s == "lm") return Relation::lm;
  if (s == "wf") return Relation::wf;
  if (s == "ur") return Relation::ur;
  throw ParseError("unknown relationship category '" + s + "'");
}

std::array<int, 3> PairingTable::category_counts() const {
  std::array<int, 3> n = {0, 0, 0};
  for (const auto& p : pairs) n[static_cast<int>(p.category)] += 1;
  return n;
}

void PairingTable::validate(int src_vocab_size, int tgt_vocab_size) const {
  std::vector<int> src_seen(src_vocab_size, 0), tgt_seen(tgt_vocab_size, 0);
  auto touch = [](std::vector<int>& seen, int id, const char* side) {
    if (id < 0 || id >= static_cast<int>(seen.size()))
      throw ValidationError(std::string(side) + " id " + std::to_string(id) + " out of range");
    if (++seen[id] > 1)
      throw ValidationError(std::string(side) + " id " + std::to_string(id) +
                            " appears more than once in the pairing");
  };
  for (const auto& p : pairs) {
    touch(src_seen, p.src_id, "source");
    touch(tgt_seen, p.tgt_id, "target");
    if (p.align_prob.has_value() != (p.category == Relation::lm))
      throw ValidationError("alignment probability must be present exactly for lm pairs");
    if (p.align_prob && *p.align_prob < threshold)
      throw ValidationError("lm pair below the build threshold");
  }
  for (const auto& s : surplus_src) touch(src_seen, s.id, "source");
  for (const auto& s : surplus_tgt) touch(tgt_seen, s.id, "target");
  for (int id = 0; id < src_vocab_size; ++id)
    if (!src_seen[id])
      throw ValidationError("source id " + std::to_string(id) + " missing from the pairing");
  for (int id = 0; id < tgt_vocab_size; ++id)
    if (!tgt_seen[id])
      throw ValidationError("target id " + std::to_string(id) + " missing from the pairing");
  if (!surplus_src.empty() && !surplus_tgt.empty())
    throw ValidationError("both sides carry surplus words");
}

PairingTable pair_lexical(const AlignmentModel& model, const Vocab& src_vocab,
                          const Vocab& tgt_vocab, double threshold) {
  if (threshold < 0.0)
    throw ConfigError("alignment threshold must be non-negative");
  PairingTable table;
  table.threshold = threshold;
  std::vector<char> tgt_taken(tgt_vocab.size(), 0);

  // Vocab id order is frequency-descending with lexicographic tie-break.
  for (int x = Vocab::kNumSpecials; x < src_vocab.size(); ++x) {
    const auto* cands = model.candidates(x);
    if (!cands) continue;
    int best = -1;
    double best_prob = 0.0;
    for (const auto& [y, c] : *cands) {
      if (y < 0 || y >= tgt_vocab.size()) continue;
      if (Vocab::is_special(y) || tgt_taken[y]) continue;
      double p = model.prob(x, y);
      if (p < threshold) continue;
      if (best < 0 || p > best_prob ||
          (p == best_prob && (tgt_vocab.freq[y] > tgt_vocab.freq[best] ||
                              (tgt_vocab.freq[y] == tgt_vocab.freq[best] &&
                               tgt_vocab.tokens[y] < tgt_vocab.tokens[best])))) {
        best = y;
        best_prob = p;
      }
    }
    if (best >= 0) {
      table.pairs.push_back({x, best, Relation::lm, best_prob, src_vocab.freq[x],
                             tgt_vocab.freq[best]});
      tgt_taken[best] = 1;
    }
  }
  return table;
}

namespace {

std::vector<char> side_taken(const PairingTable& table, int vocab_size, bool src_side) {
  std::vector<char> taken(vocab_size, 0);
  for (const auto& p : table.pairs) taken[src_side ? p.src_id : p.tgt_id] = 1;
  const auto& surplus = src_side ? table.surplus_src : table.surplus_tgt;
  for (const auto& s : surplus) taken[s.id] = 1;
  return taken;
}

// Residue ordered by frequency descending; vocab id order breaks ties.
std::vector<int> remaining_by_freq(const std::vector<char>& taken, const Vocab& vocab) {
  std::vector<int> ids;
  for (int id = 0; id < vocab.size(); ++id)
    if (!taken[id]) ids.push_back(id);
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
    if (vocab.freq[a] != vocab.freq[b]) return vocab.freq[a] > vocab.freq[b];
    return a < b;
  });
  return ids;
}

}  // namespace

void pair_word_form(PairingTable& table, const Vocab& src_vocab, const Vocab& tgt_vocab) {
  auto src_taken = side_taken(table, src_vocab.size(), true);
  auto tgt_taken = side_taken(table, tgt_vocab.size(), false);
  std::unordered_map<std::string, int> tgt_surface;
  for (int y = 0; y < tgt_vocab.size(); ++y)
    if (!tgt_taken[y]) tgt_surface.emplace(tgt_vocab.tokens[y], y);

  for (int x = 0; x < src_vocab.size(); ++x) {
    if (src_taken[x]) continue;
    auto it = tgt_surface.find(src_vocab.tokens[x]);
    if (it == tgt_surface.end()) continue;
    table.pairs.push_back({x, it->second, Relation::wf, std::nullopt, src_vocab.freq[x],
                           tgt_vocab.freq[it->second]});
    tgt_surface.erase(it);
  }
}

void pair_unrelated(PairingTable& table, const Vocab& src_vocab, const Vocab& tgt_vocab) {
  auto src_rest = remaining_by_freq(side_taken(table, src_vocab.size(), true), src_vocab);
  auto tgt_rest = remaining_by_freq(side_taken(table, tgt_vocab.size(), false), tgt_vocab);
  std::size_t n = std::min(src_rest.size(), tgt_rest.size());
  for (std::size_t k = 0; k < n; ++k) {
    table.pairs.push_back({src_rest[k], tgt_rest[k], Relation::ur, std::nullopt,
                           src_vocab.freq[src_rest[k]], tgt_vocab.freq[tgt_rest[k]]});
  }
  for (std::size_t k = n; k < src_rest.size(); ++k)
    table.surplus_src.push_back({src_rest[k], src_vocab.freq[src_rest[k]]});
  for (std::size_t k = n; k < tgt_rest.size(); ++k)
    table.surplus_tgt.push_back({tgt_rest[k], tgt_vocab.freq[tgt_rest[k]]});
}

PairingTable build_pairing(const AlignmentModel& model, const Vocab& src_vocab,
                           const Vocab& tgt_vocab, double threshold) {
  PairingTable table = pair_lexical(model, src_vocab, tgt_vocab, threshold);
  pair_word_form(table, src_vocab, tgt_vocab);
  pair_unrelated(table, src_vocab, tgt_vocab);
  table.validate(src_vocab.size(), tgt_vocab.size());
  return table;
}

std::string pairing_to_tsv(const PairingTable& table, const Vocab& src_vocab,
                           const Vocab& tgt_vocab) {
  std::string out;
  auto row = [&out](const std::string& src, const std::string& tgt, const char* cat,
                    const std::string& prob, const std::string& sf, const std::string& tf) {
    out += src;
    out += '\t';
    out += tgt;
    out += '\t';
    out += cat;
    out += '\t';
    out += prob;
    out += '\t';
    out += sf;
    out += '\t';
    out += tf;
    out += '\n';
  };
  for (const auto& p : table.pairs) {
    row(src_vocab.tokens.at(p.src_id), tgt_vocab.tokens.at(p.tgt_id),
        relation_name(p.category), p.align_prob ? fmt_double(*p.align_prob) : "NA",
        std::to_string(p.src_freq), std::to_string(p.tgt_freq));
  }
  for (const auto& s : table.surplus_src)
    row(src_vocab.tokens.at(s.id), "NA", "ur", "NA", std::to_string(s.freq), "NA");
  for (const auto& s : table.surplus_tgt)
    row("NA", tgt_vocab.tokens.at(s.id), "ur", "NA", "NA", std::to_string(s.freq));
  return out;
}

void save_pairing_tsv(const PairingTable& table, const Vocab& src_vocab,
                      const Vocab& tgt_vocab, const std::string& path) {
  atomic_write(path, pairing_to_tsv(table, src_vocab, tgt_vocab));
}

PairingTable load_pairing_tsv(const std::string& path, const Vocab& src_vocab,
                              const Vocab& tgt_vocab, double threshold) {
  PairingTable table;
  table.threshold = threshold;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty() && i + 1 == lines.size()) break;
    std::string ctx = path + ":" + std::to_string(i + 1);
    auto cols = split_tabs(lines[i]);
    if (cols.size() != 6) throw ParseError(ctx + ": expected 6 tab-separated columns");
    bool src_na = cols[4] == "NA";
    bool tgt_na = cols[5] == "NA";
    if (src_na && tgt_na) throw ParseError(ctx + ": row misses both sides");
    if (tgt_na) {
      int x = src_vocab.id_of(cols[0]);
      if (x < 0) throw ValidationError(ctx + ": unknown source token '" + cols[0] + "'");
      table.surplus_src.push_back({x, parse_ll(cols[4], ctx)});
      continue;
    }
    if (src_na) {
      int y = tgt_vocab.id_of(cols[1]);
      if (y < 0) throw ValidationError(ctx + ": unknown target token '" + cols[1] + "'");
      table.surplus_tgt.push_back({y, parse_ll(cols[5], ctx)});
      continue;
    }
    WordPair p;
    p.src_id = src_vocab.id_of(cols[0]);
    p.tgt_id = tgt_vocab.id_of(cols[1]);
    if (p.src_id < 0) throw ValidationError(ctx + ": unknown source token '" + cols[0] + "'");
    if (p.tgt_id < 0) throw ValidationError(ctx + ": unknown target token '" + cols[1] + "'");
    p.category = relation_from_string(cols[2]);
    if (cols[3] != "NA") p.align_prob = parse_double(cols[3], ctx);
    p.src_freq = parse_ll(cols[4], ctx);
    p.tgt_freq = parse_ll(cols[5], ctx);
    table.pairs.push_back(p);
  }
  table.validate(src_vocab.size(), tgt_vocab.size());
  return table;
}

}  // namespace spbwe
