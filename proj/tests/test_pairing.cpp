#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "pairing_oracle.hpp"
#include "spbwe/errors.hpp"
#include "spbwe/pairing.hpp"
#include "test_util.hpp"

using namespace spbwe;
using oracle::make_vocab;

namespace {

AlignmentModel make_model(const std::map<std::string, std::map<std::string, long long>>& counts,
                          const Vocab& sv, const Vocab& tv) {
  AlignmentModel m;
  for (auto& [x, row] : counts)
    for (auto& [y, c] : row) {
      m.count[sv.index.at(x)][tv.index.at(y)] += c;
      m.row_total[sv.index.at(x)] += c;
    }
  return m;
}

}  // namespace

TEST_CASE("empty alignment model yields zero lm pairs") {
  auto sv = make_vocab({{"a", 3}});
  auto tv = make_vocab({{"b", 2}});
  auto t = pair_lexical(AlignmentModel{}, sv, tv, 0.05);
  CHECK(t.pairs.empty());
}

TEST_CASE("frequency-order greedy gives the frequent source its best target") {
  auto sv = make_vocab({{"a", 10}, {"c", 5}});
  auto tv = make_vocab({{"b", 7}, {"d", 1}});
  // A(b|a) = 0.9, A(b|c) = 0.8; both sources want b.
  auto m = make_model({{"a", {{"b", 9}, {"d", 1}}}, {"c", {{"b", 8}, {"d", 2}}}}, sv, tv);
  auto table = build_pairing(m, sv, tv, 0.5);
  std::map<std::string, std::string> lm;
  for (auto& p : table.pairs)
    if (p.category == Relation::lm) lm[sv.tokens[p.src_id]] = tv.tokens[p.tgt_id];
  CHECK(lm == std::map<std::string, std::string>{{"a", "b"}});
  // c falls through to a later stage but stays in the table.
  table.validate(sv.size(), tv.size());
}

TEST_CASE("candidates below the alignment threshold are ineligible") {
  auto sv = make_vocab({{"a", 5}});
  auto tv = make_vocab({{"b", 5}});
  AlignmentModel m;  // A(b|a) = 1/25 = 0.04
  m.count[sv.index.at("a")][tv.index.at("b")] = 1;
  m.count[sv.index.at("a")][Vocab::kUnk] = 24;
  m.row_total[sv.index.at("a")] = 25;
  auto t = pair_lexical(m, sv, tv, 0.05);
  CHECK(t.pairs.empty());
}

TEST_CASE("unsatisfiable threshold pushes everything to wf/ur") {
  auto sv = make_vocab({{"a", 5}, {"x", 2}});
  auto tv = make_vocab({{"a", 4}, {"y", 1}});
  auto m = make_model({{"a", {{"a", 10}}}, {"x", {{"y", 3}}}}, sv, tv);
  auto table = build_pairing(m, sv, tv, 1.01);
  CHECK(table.category_counts()[0] == 0);
  for (auto& p : table.pairs) CHECK(p.category != Relation::lm);
}

TEST_CASE("same word form pairs byte-identical surfaces including BPE markers") {
  auto sv = make_vocab({{"Ju@@", 4}, {"nur", 2}});
  auto tv = make_vocab({{"Ju@@", 3}, {"only", 2}});
  auto table = build_pairing(AlignmentModel{}, sv, tv, 0.05);
  bool found = false;
  for (auto& p : table.pairs)
    if (p.category == Relation::wf && sv.tokens[p.src_id] == "Ju@@") {
      CHECK(tv.tokens[p.tgt_id] == "Ju@@");
      CHECK(!p.align_prob.has_value());
      found = true;
    }
  CHECK(found);
}

TEST_CASE("bilingual homograph guard: an lm-paired word is closed to wf") {
  auto sv = make_vocab({{"Gift", 6}});
  auto tv = make_vocab({{"Poison", 5}, {"Gift", 3}});
  auto m = make_model({{"Gift", {{"Poison", 19}, {"Gift", 1}}}}, sv, tv);
  auto table = build_pairing(m, sv, tv, 0.05);
  for (auto& p : table.pairs) {
    if (sv.tokens[p.src_id] == "Gift") {
      CHECK(p.category == Relation::lm);
      CHECK(tv.tokens[p.tgt_id] == "Poison");
    }
  }
  // The target-side homograph is left for ur/surplus, never wf.
  for (auto& p : table.pairs)
    if (p.category == Relation::wf) CHECK(tv.tokens[p.tgt_id] != "Gift");
}

TEST_CASE("disjoint surfaces produce no wf pairs beyond the reserved tokens") {
  auto sv = make_vocab({{"aa", 3}, {"bb", 2}});
  auto tv = make_vocab({{"cc", 3}, {"dd", 2}});
  auto table = build_pairing(AlignmentModel{}, sv, tv, 0.05);
  int wf_non_special = 0;
  for (auto& p : table.pairs)
    if (p.category == Relation::wf && !Vocab::is_special(p.src_id)) ++wf_non_special;
  CHECK(wf_non_special == 0);
  CHECK(table.category_counts()[1] == 4);  // the specials meet by form
}

TEST_CASE("unrelated words pair by frequency rank") {
  auto sv = make_vocab({{"s1", 9}, {"s2", 5}, {"s3", 2}});
  auto tv = make_vocab({{"t1", 8}, {"t2", 4}, {"t3", 1}});
  auto table = build_pairing(AlignmentModel{}, sv, tv, 0.05);
  std::map<std::string, std::string> ur;
  for (auto& p : table.pairs)
    if (p.category == Relation::ur) ur[sv.tokens[p.src_id]] = tv.tokens[p.tgt_id];
  CHECK(ur == std::map<std::string, std::string>{{"s1", "t1"}, {"s2", "t2"}, {"s3", "t3"}});
  CHECK(table.surplus_src.empty());
  CHECK(table.surplus_tgt.empty());
}

TEST_CASE("length mismatch leaves the longer side's tail as surplus") {
  auto sv = make_vocab({{"s1", 9}, {"s2", 5}, {"s3", 2}});
  auto tv = make_vocab({{"t1", 8}});
  auto table = build_pairing(AlignmentModel{}, sv, tv, 0.05);
  CHECK(table.category_counts()[2] == 1);
  REQUIRE(table.surplus_src.size() == 2);
  CHECK(sv.tokens[table.surplus_src[0].id] == "s2");
  CHECK(sv.tokens[table.surplus_src[1].id] == "s3");
  CHECK(table.surplus_tgt.empty());
}

TEST_CASE("six-word toy: exhaustive enumeration of valid stage-1 pairings") {
  auto sv = make_vocab({{"a", 9}, {"b", 7}, {"c", 4}});
  auto tv = make_vocab({{"u", 8}, {"v", 6}, {"w", 3}});
  auto m = make_model({{"a", {{"u", 6}, {"v", 4}}},
                       {"b", {{"u", 9}, {"w", 1}}},
                       {"c", {{"v", 1}}}},
                      sv, tv);
  double threshold = 0.1;

  // Enumerate every injective partial map over eligible edges, then keep
  // the maps consistent with the greedy trace: each source, visited in
  // frequency order, holds its best still-free candidate, or none exists.
  std::vector<int> srcs;
  for (int x = Vocab::kNumSpecials; x < sv.size(); ++x) srcs.push_back(x);
  std::sort(srcs.begin(), srcs.end(), [&](int a, int b) {
    if (sv.freq[a] != sv.freq[b]) return sv.freq[a] > sv.freq[b];
    return sv.tokens[a] < sv.tokens[b];
  });
  std::vector<std::vector<int>> options(srcs.size());  // eligible ys, -1 = unpaired
  for (std::size_t k = 0; k < srcs.size(); ++k) {
    options[k].push_back(-1);
    if (auto* cands = m.candidates(srcs[k]))
      for (auto& [y, c] : *cands)
        if (!Vocab::is_special(y) && m.prob(srcs[k], y) >= threshold)
          options[k].push_back(y);
  }
  std::vector<std::map<int, int>> all_maps;
  std::vector<int> pick(srcs.size(), -1);
  std::function<void(std::size_t)> enumerate = [&](std::size_t k) {
    if (k == srcs.size()) {
      std::map<int, int> map;
      for (std::size_t i = 0; i < srcs.size(); ++i)
        if (pick[i] >= 0) map[srcs[i]] = pick[i];
      all_maps.push_back(map);
      return;
    }
    for (int y : options[k]) {
      bool clash = false;
      for (std::size_t i = 0; i < k; ++i)
        if (y >= 0 && pick[i] == y) clash = true;
      if (clash) continue;
      pick[k] = y;
      enumerate(k + 1);
    }
    pick[k] = -1;
  };
  enumerate(0);

  auto trace_consistent = [&](const std::map<int, int>& map) {
    std::set<int> used;
    for (int x : srcs) {
      int best = -1;
      double bp = -1;
      if (auto* cands = m.candidates(x)) {
        for (auto& [y, c] : *cands) {
          if (Vocab::is_special(y) || used.count(y)) continue;
          double p = m.prob(x, y);
          if (p < threshold) continue;
          if (p > bp || (p == bp && (best < 0 || tv.freq[y] > tv.freq[best]))) {
            best = y;
            bp = p;
          }
        }
      }
      auto it = map.find(x);
      if (best < 0) {
        if (it != map.end()) return false;
      } else {
        if (it == map.end() || it->second != best) return false;
        used.insert(best);
      }
    }
    return true;
  };
  std::vector<std::map<int, int>> consistent;
  for (auto& map : all_maps)
    if (trace_consistent(map)) consistent.push_back(map);
  REQUIRE(consistent.size() == 1);  // the greedy trace is a unique fixpoint

  auto table = build_pairing(m, sv, tv, threshold);
  std::map<int, int> got;
  for (auto& p : table.pairs)
    if (p.category == Relation::lm) got[p.src_id] = p.tgt_id;
  CHECK(got == consistent[0]);
  // Hand-checked trace: a takes u (0.6); b's best free is w (0.1); c takes v.
  CHECK(got.at(sv.index.at("a")) == tv.index.at("u"));
  CHECK(got.at(sv.index.at("b")) == tv.index.at("w"));
  CHECK(got.at(sv.index.at("c")) == tv.index.at("v"));
}

TEST_CASE("random instances match the greedy-replay oracle and keep all invariants") {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 300; ++round) {
    auto inst = oracle::random_instance(rng);
    auto table = build_pairing(inst.model, inst.sv, inst.tv, inst.threshold);
    table.validate(inst.sv.size(), inst.tv.size());
    auto diff = oracle::diff_against(
        table, oracle::pair_all(inst.model, inst.sv, inst.tv, inst.threshold));
    CHECK(!diff.has_value());
    auto prio = oracle::check_priority(table, inst.model, inst.sv, inst.tv, inst.threshold);
    CHECK(!prio.has_value());

    // Determinism: identical inputs give byte-identical tables.
    auto again = build_pairing(inst.model, inst.sv, inst.tv, inst.threshold);
    CHECK(pairing_to_tsv(again, inst.sv, inst.tv) == pairing_to_tsv(table, inst.sv, inst.tv));
  }
}

TEST_CASE("raising the threshold never increases the lm count") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 200; ++round) {
    auto inst = oracle::random_instance(rng);
    double lo = static_cast<double>(rng() % 50) / 100.0;
    double hi = lo + static_cast<double>(rng() % 50) / 100.0 + 0.01;
    auto t_lo = build_pairing(inst.model, inst.sv, inst.tv, lo);
    auto t_hi = build_pairing(inst.model, inst.sv, inst.tv, hi);
    CHECK(t_hi.category_counts()[0] <= t_lo.category_counts()[0]);
  }
}

TEST_CASE("pairing TSV round-trips through save and load") {
  auto sv = make_vocab({{"a", 9}, {"b", 7}, {"c", 4}, {"extra", 1}});
  auto tv = make_vocab({{"u", 8}, {"v", 6}});
  auto m = make_model({{"a", {{"u", 3}}}}, sv, tv);
  auto table = build_pairing(m, sv, tv, 0.05);
  REQUIRE(!table.surplus_src.empty());

  TempDir tmp("pairing");
  save_pairing_tsv(table, sv, tv, tmp.path("pairs.tsv"));
  auto loaded = load_pairing_tsv(tmp.path("pairs.tsv"), sv, tv, table.threshold);
  CHECK(pairing_to_tsv(loaded, sv, tv) == pairing_to_tsv(table, sv, tv));
  CHECK(loaded.pairs.size() == table.pairs.size());
  CHECK(loaded.surplus_src.size() == table.surplus_src.size());
}

TEST_CASE("validate rejects duplicate and missing ids") {
  PairingTable t;
  t.pairs.push_back({4, 4, Relation::ur, std::nullopt, 1, 1});
  CHECK_THROWS_AS(t.validate(6, 5), ValidationError);  // ids 0..3 missing
  PairingTable t2;
  for (int id = 0; id < 5; ++id)
    t2.pairs.push_back({id, id, Relation::wf, std::nullopt, 0, 0});
  t2.pairs.push_back({4, 4, Relation::ur, std::nullopt, 0, 0});
  CHECK_THROWS_AS(t2.validate(5, 5), ValidationError);  // 4 appears twice
}
