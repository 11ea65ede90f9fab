// Acceptance suite: one pass/fail line per criterion, nonzero exit on
// any failure. Quantitative targets come from the published accounting
// tables; tolerances are pinned in code next to each check.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "micro_fixtures.hpp"
#include "pairing_oracle.hpp"
#include "spbwe/embedding.hpp"
#include "spbwe/micronmt.hpp"
#include "spbwe/pairing.hpp"

using namespace spbwe;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

std::string mm(long long params) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2fM", params / 1e6);
  return buf;
}

// Synthetic pairing with given category sizes; drives the real layout path.
PairingTable pairing_with_counts(std::array<int, 3> n) {
  PairingTable t;
  long long f = n[0] + n[1] + n[2] + 10;
  int next = 0;
  for (int c = 0; c < 3; ++c)
    for (int k = 0; k < n[c]; ++k) {
      WordPair p;
      p.src_id = next;
      p.tgt_id = next;
      ++next;
      p.category = static_cast<Relation>(c);
      if (c == 0) p.align_prob = 1.0;
      p.src_freq = f;
      p.tgt_freq = f;
      --f;
      t.pairs.push_back(p);
    }
  return t;
}

long long params_of(std::array<int, 3> n, std::array<double, 3> lambda) {
  return make_layout(pairing_with_counts(n), SharingConfig{512, lambda, true}).param_total;
}

void check_params(std::array<int, 3> n, std::array<double, 3> lambda, long long target,
                  long long tol, std::ostringstream& detail) {
  long long got = params_of(n, lambda);
  require(std::llabs(got - target) <= tol,
          "lambda (" + std::to_string(lambda[0]) + "," + std::to_string(lambda[1]) + "," +
              std::to_string(lambda[2]) + "): got " + mm(got) + ", want " + mm(target) +
              " +- " + mm(tol));
  detail << mm(got) << " ";
}

constexpr std::array<int, 3> kZhEnCounts = {21172, 11, 8817};

// ---- criteria ---------------------------------------------------------

std::string criterion1() {
  std::ostringstream d;
  check_params(kZhEnCounts, {0.9, 0.7, 0.5}, 18700000, 50000, d);
  // The published table prints 15.3M for full sharing; the exact
  // arithmetic is 30000 rows * 512 = 15.36M (the displayed value is
  // truncated, not rounded), so the check pins the exact figure.
  check_params(kZhEnCounts, {1, 1, 1}, 15360000, 50000, d);
  check_params(kZhEnCounts, {0.5, 0.5, 0.5}, 23000000, 50000, d);
  check_params(kZhEnCounts, {0.9, 0.7, 0.0}, 21000000, 50000, d);
  check_params(kZhEnCounts, {0.5, 0.7, 0.9}, 21200000, 50000, d);
  check_params(kZhEnCounts, {0, 0, 0}, 30700000, 50000, d);

  auto layout = make_layout(pairing_with_counts(kZhEnCounts),
                            SharingConfig{512, {0.9, 0.7, 0.5}, true});
  long long vanilla = baseline_params(layout, Baseline::vanilla);
  require(std::llabs(vanilla - 46100000) <= 50000,
          "vanilla baseline: got " + mm(vanilla) + ", want 46.1M");
  auto [emb, reduction] = param_count(layout, Baseline::vanilla);
  require(std::fabs(reduction - 0.594) <= 0.002,
          "reduction: got " + std::to_string(reduction * 100) + "%, want 59.4 +- 0.2");
  d << "| vanilla " << mm(vanilla) << ", reduction " << reduction * 100 << "%";
  return d.str();
}

std::string criterion2() {
  std::ostringstream d;
  check_params({4869, 309, 24822}, {0.9, 0.7, 0.5}, 22000000, 50000, d);
  check_params({15103, 23, 14874}, {0.9, 0.7, 0.5}, 20000000, 50000, d);
  check_params({21172, 11, 8817}, {0.9, 0.7, 0.5}, 18700000, 50000, d);
  return "threshold rows 0.5/0.1/0.05 -> " + d.str();
}

std::string criterion3() {
  long long got = single_matrix_params(36900, 512);
  require(std::llabs(got - 18900000) <= 100000,
          "three-way WT matrix: got " + mm(got) + ", want 18.9M +- 0.1M");
  return "36.9K x 512 joint matrix -> " + mm(got);
}

std::string criterion4() {
  std::mt19937_64 rng(20240515);
  int instances = 1000;
  for (int round = 0; round < instances; ++round) {
    auto inst = oracle::random_instance(rng);
    auto table = build_pairing(inst.model, inst.sv, inst.tv, inst.threshold);
    table.validate(inst.sv.size(), inst.tv.size());  // partition + exclusivity
    auto diff = oracle::diff_against(
        table, oracle::pair_all(inst.model, inst.sv, inst.tv, inst.threshold));
    require(!diff, "instance " + std::to_string(round) + ": " + diff.value_or(""));
    auto prio = oracle::check_priority(table, inst.model, inst.sv, inst.tv, inst.threshold);
    require(!prio, "instance " + std::to_string(round) + ": " + prio.value_or(""));

    double hi = std::min(1.01, inst.threshold + 0.25);
    auto t_hi = build_pairing(inst.model, inst.sv, inst.tv, hi);
    require(t_hi.category_counts()[0] <= table.category_counts()[0],
            "instance " + std::to_string(round) + ": lm count grew with the threshold");
  }
  return std::to_string(instances) + " random instances match the greedy-replay oracle";
}

std::string criterion5() {
  const std::array<double, 3> lambdas[] = {
      {0, 0, 0}, {0.5, 0.5, 0.5}, {1, 1, 1}, {0.9, 0.7, 0.5}};
  std::ostringstream d;
  for (auto lambda : lambdas) {
    auto model = fixtures::toy_model(lambda, 16, 11);
    auto batch = fixtures::random_batch(model, 31, 8);
    auto rep = finite_diff_check(model, batch, 200, 1e-4, 13);
    require(rep.max_rel_err < 1e-4,
            "lambda (" + std::to_string(lambda[0]) + "," + std::to_string(lambda[1]) + "," +
                std::to_string(lambda[2]) + "): max rel err " +
                std::to_string(rep.max_rel_err));
    d << rep.max_rel_err << " ";
  }
  return "max relative errors " + d.str() + "(200 samples each, eps 1e-4)";
}

std::string criterion6() {
  auto task = make_toy_task(ToyTaskKind::lexicon, 4, 2, 48, 19);
  MicroModelConfig cfg;
  cfg.d = 16;
  cfg.seed = 19;
  auto tied = make_model(task, SharingConfig{16, {0.9, 0.7, 0.5}, true}, cfg);
  auto untied = make_model(task, SharingConfig{16, {0, 0, 0}, true}, cfg);
  for (auto side : {Side::src, Side::tgt}) {
    int n = side == Side::src ? tied.src_vocab_size() : tied.tgt_vocab_size();
    for (int id = 0; id < n; ++id) {
      auto v = tied.emb.lookup(side, id);
      auto row = untied.emb.private_row(side, id);
      std::copy(v.begin(), v.end(), row.begin());
    }
  }
  auto batch = fixtures::random_batch(tied, 23, 8);
  compute_gradients(tied, batch);
  compute_gradients(untied, batch);

  double worst = 0.0;
  const auto& L = tied.emb.layout;
  for (int c = 0; c < 3; ++c) {
    int w = L.width[c], dd = L.d;
    for (int r = 0; r < L.count[c]; ++r) {
      auto [x, y] = L.rows[c][r];
      const double* gs = tied.emb.grad.shared[c].data() + static_cast<std::size_t>(r) * w;
      const double* gx = untied.emb.grad.priv_src[c].data() +
                         static_cast<std::size_t>(untied.emb.layout.src_slot[x].row) * dd;
      const double* gy = untied.emb.grad.priv_tgt[c].data() +
                         static_cast<std::size_t>(untied.emb.layout.tgt_slot[y].row) * dd;
      for (int j = 0; j < w; ++j)
        worst = std::max(worst, std::fabs(gs[j] - (gx[j] + gy[j])));
    }
  }
  require(worst < 1e-10, "tied-vs-untied gradient gap " + std::to_string(worst));
  std::ostringstream d;
  d << "max |tied - (src + tgt untied)| = " << worst;
  return d.str();
}

std::string criterion7() {
  auto model = fixtures::toy_model({0.9, 0.7, 0.5}, 16, 8);
  std::mt19937_64 rng(8);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    int x = static_cast<int>(rng() % model.src_vocab_size());
    int y = static_cast<int>(rng() % model.tgt_vocab_size());
    auto [shared_term, private_term] = attention_logit_decomposition(model, x, y);
    auto vx = model.emb.lookup(Side::src, x);
    auto vy = model.emb.lookup(Side::tgt, y);
    double full = 0.0;
    for (int j = 0; j < model.emb.layout.d; ++j) full += vx[j] * vy[j];
    double err = std::fabs(shared_term + private_term - full) / std::max(1.0, std::fabs(full));
    worst = std::max(worst, err);
    require(err <= 1e-12,
            "probe " + std::to_string(k) + ": identity off by " + std::to_string(err));
  }
  int paired = 0;
  for (int c = 0; c < 3; ++c) {
    for (auto& [x, y] : model.emb.layout.rows[c]) {
      auto [shared_term, private_term] = attention_logit_decomposition(model, x, y);
      (void)private_term;
      auto s = model.emb.shared_row(Side::src, x);
      double norm2 = 0.0;
      for (double v : s) norm2 += v * v;
      require(shared_term == norm2, "paired shared term is not the squared shared norm");
      ++paired;
    }
  }
  std::ostringstream d;
  d << "100 probes, max identity error " << worst << "; shared term = ||shared||^2 on "
    << paired << " pairs";
  return d.str();
}

std::string criterion8() {
  auto run_once = [] {
    auto task = make_toy_task(ToyTaskKind::lexicon, 12, 3, 256, 1);
    MicroModelConfig cfg;
    cfg.d = 32;
    cfg.lr = 0.5;
    cfg.steps = 2000;
    cfg.batch_size = 16;
    cfg.seed = 1;
    auto model = make_model(task, SharingConfig{32, {0.9, 0.7, 0.5}, true}, cfg);
    return train(model, task);
  };
  auto rep1 = run_once();
  require(rep1.diverged_step == -1, "training diverged");
  // Pinned regression bound: the reference run of this exact
  // configuration ends at 8.5e-4, so 0.2 marks solid convergence.
  require(rep1.final_loss < 0.2,
          "final loss " + std::to_string(rep1.final_loss) + " is not below 0.2");
  auto rep2 = run_once();
  require(rep1.losses == rep2.losses, "loss curves of two identically seeded runs differ");
  std::ostringstream d;
  d << "lexicon d=32 seed=1: final loss " << rep1.final_loss
    << " < 0.2; curve bit-identical across reruns";
  return d.str();
}

std::string criterion9() {
  return "full-scale BLEU results (41.61 vs 40.33 on Zh-En) need a complete "
         "Transformer trained on NIST/WMT corpora; out of scope at desk scale, "
         "replaced by criteria 1-8";
}

}  // namespace

int main() {
  struct Criterion {
    int num;
    const char* name;
    std::function<std::string()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "parameter-count reproduction (sharing coefficients)", criterion1},
      {2, "parameter-count reproduction (alignment thresholds)", criterion2},
      {3, "three-way weight-tying accounting sanity", criterion3},
      {4, "pairing equals the brute-force oracle on 1000 random instances", criterion4},
      {5, "analytic gradients match central differences for all block types", criterion5},
      {6, "shared-gradient accumulation identity (tied vs untied twin)", criterion6},
      {7, "attention-logit decomposition identity", criterion7},
      {8, "toy lexicon training converges deterministically", criterion8},
      {9, "non-reproducibility statement", criterion9},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    try {
      std::string detail = c.run();
      std::printf("PASS  criterion %d: %s -- %s\n", c.num, c.name, detail.c_str());
    } catch (const std::exception& e) {
      ++failures;
      std::printf("FAIL  criterion %d: %s -- %s\n", c.num, c.name, e.what());
    }
    std::fflush(stdout);
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
