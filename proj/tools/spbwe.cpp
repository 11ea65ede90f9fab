// spbwe: shared-private bilingual word embedding pipeline.
//
// Stages: build-vocab, align-stats, pair, layout, init, export,
// train-toy, grad-check, pca, report. Outputs are written atomically;
// with --manifest, every stage checks its inputs' digests before
// running and records its outputs afterwards.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spbwe/align.hpp"
#include "spbwe/embedding.hpp"
#include "spbwe/errors.hpp"
#include "spbwe/manifest.hpp"
#include "spbwe/micronmt.hpp"
#include "spbwe/pairing.hpp"
#include "spbwe/pca.hpp"
#include "spbwe/text_io.hpp"
#include "spbwe/vocab.hpp"

namespace {

using spbwe::ConfigError;

std::array<double, 3> parse_lambda(const std::string& s) {
  std::array<double, 3> lambda{};
  std::istringstream in(s);
  std::string item;
  int k = 0;
  while (std::getline(in, item, ',')) {
    if (k >= 3) throw ConfigError("lambda needs exactly three comma-separated values");
    lambda[k++] = spbwe::parse_double(item, "--lambda");
  }
  if (k != 3) throw ConfigError("lambda needs exactly three comma-separated values");
  return lambda;
}

std::array<int, 3> parse_counts(const std::string& s) {
  std::array<int, 3> n{};
  std::istringstream in(s);
  std::string item;
  int k = 0;
  while (std::getline(in, item, ',')) {
    if (k >= 3) throw ConfigError("counts need exactly three comma-separated values");
    n[k++] = static_cast<int>(spbwe::parse_ll(item, "--counts"));
  }
  if (k != 3) throw ConfigError("counts need exactly three comma-separated values");
  return n;
}

// Flags beat the config file; the config file beats built-in defaults.
struct ConfigFile {
  nlohmann::json j = nlohmann::json::object();

  void load(const std::string& path) {
    try {
      j = nlohmann::json::parse(spbwe::read_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ": invalid config JSON: " + e.what());
    }
  }
  template <typename T>
  void apply(const CLI::Option* opt, const char* key, T& value) const {
    if (opt->count() > 0 || !j.contains(key)) return;
    try {
      value = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
  }
  void apply_lambda(const CLI::Option* opt, std::string& value) const {
    if (opt->count() > 0 || !j.contains("lambda")) return;
    auto arr = j.at("lambda");
    if (!arr.is_array() || arr.size() != 3)
      throw ConfigError("config key 'lambda' must be a 3-element array");
    std::string s;
    for (std::size_t i = 0; i < 3; ++i)
      s += (i ? "," : "") + spbwe::fmt_double(arr[i].get<double>());
    value = s;
  }
};

struct StageContext {
  std::string manifest_path;

  void run(const std::string& stage, const nlohmann::json& params,
           const std::vector<std::string>& inputs, const std::vector<std::string>& outputs,
           const std::function<void()>& body) const {
    if (manifest_path.empty()) {
      body();
      return;
    }
    auto manifest = spbwe::PipelineManifest::load(manifest_path);
    manifest.check_inputs(stage, inputs);
    body();
    manifest.record_stage(stage, params, inputs, outputs);
    manifest.save(manifest_path);
  }
};

int run_cli(int argc, char** argv) {
  CLI::App app{"shared-private bilingual word embedding toolkit"};
  app.require_subcommand(1);
  app.fallthrough(true);

  std::uint64_t seed = 1;
  std::string config_path, manifest_path;
  app.add_option("--seed", seed, "global random seed");
  auto* config_opt = app.add_option("--config", config_path, "JSON config file");
  app.add_option("--manifest", manifest_path, "pipeline manifest path");

  // ---- build-vocab ----------------------------------------------------
  auto* sc_vocab = app.add_subcommand("build-vocab", "frequency-ordered vocabulary from text");
  std::string v_corpus, v_out, v_lang;
  int v_max = 30000;
  long long v_min = 1;
  sc_vocab->add_option("--corpus", v_corpus, "tokenized corpus, one sentence per line")
      ->required();
  sc_vocab->add_option("--out", v_out, "vocabulary TSV")->required();
  auto* v_max_opt = sc_vocab->add_option("--max-size", v_max, "maximum entries incl. specials");
  auto* v_min_opt = sc_vocab->add_option("--min-freq", v_min, "minimum kept frequency");
  sc_vocab->add_option("--lang", v_lang, "language tag");

  // ---- align-stats -----------------------------------------------------
  auto* sc_align = app.add_subcommand("align-stats", "alignment probability table from links");
  std::string a_align, a_src, a_tgt, a_sv, a_tv, a_out;
  bool a_reverse = false;
  sc_align->add_option("--alignments", a_align, "pharaoh i-j lines")->required();
  sc_align->add_option("--src", a_src, "source corpus")->required();
  sc_align->add_option("--tgt", a_tgt, "target corpus")->required();
  sc_align->add_option("--src-vocab", a_sv)->required();
  sc_align->add_option("--tgt-vocab", a_tv)->required();
  sc_align->add_option("--out", a_out, "probability TSV")->required();
  sc_align->add_flag("--reverse", a_reverse, "links are target-source oriented");

  // ---- pair ------------------------------------------------------------
  auto* sc_pair = app.add_subcommand("pair", "three-category exclusive word pairing");
  std::string p_probs, p_sv, p_tv, p_out;
  double p_threshold = 0.05;
  sc_pair->add_option("--probs", p_probs, "probability TSV from align-stats")->required();
  sc_pair->add_option("--src-vocab", p_sv)->required();
  sc_pair->add_option("--tgt-vocab", p_tv)->required();
  sc_pair->add_option("--out", p_out, "pairing TSV")->required();
  auto* p_thr_opt = sc_pair->add_option("--threshold", p_threshold, "min alignment probability");

  // ---- layout ----------------------------------------------------------
  auto* sc_layout = app.add_subcommand("layout", "shared-private layout + parameter report");
  std::string l_pairs, l_sv, l_tv, l_counts, l_lambda = "0.9,0.7,0.5", l_out,
              l_baseline = "vanilla";
  int l_d = 512;
  sc_layout->add_option("--pairs", l_pairs, "pairing TSV");
  sc_layout->add_option("--src-vocab", l_sv);
  sc_layout->add_option("--tgt-vocab", l_tv);
  sc_layout->add_option("--counts", l_counts, "N_lm,N_wf,N_ur instead of a pairing file");
  auto* l_d_opt = sc_layout->add_option("--d", l_d, "embedding width");
  auto* l_lambda_opt = sc_layout->add_option("--lambda", l_lambda, "sharing coefficients");
  sc_layout->add_option("--baseline", l_baseline, "vanilla or decoder_wt");
  sc_layout->add_option("--out", l_out, "layout report JSON")->required();

  // ---- init ------------------------------------------------------------
  auto* sc_init = app.add_subcommand("init", "initialize and dump embedding blocks");
  std::string i_pairs, i_sv, i_tv, i_lambda = "0.9,0.7,0.5", i_scheme = "uniform_scaled", i_out;
  int i_d = 512;
  sc_init->add_option("--pairs", i_pairs)->required();
  sc_init->add_option("--src-vocab", i_sv)->required();
  sc_init->add_option("--tgt-vocab", i_tv)->required();
  auto* i_d_opt = sc_init->add_option("--d", i_d, "embedding width");
  auto* i_lambda_opt = sc_init->add_option("--lambda", i_lambda, "sharing coefficients");
  sc_init->add_option("--scheme", i_scheme, "uniform_scaled or normal_scaled");
  sc_init->add_option("--out", i_out, "binary SPBE dump")->required();

  // ---- export ----------------------------------------------------------
  auto* sc_export = app.add_subcommand("export", "text export of an embedding dump");
  std::string e_emb, e_pairs, e_sv, e_tv, e_out;
  sc_export->add_option("--emb", e_emb, "SPBE dump")->required();
  sc_export->add_option("--pairs", e_pairs)->required();
  sc_export->add_option("--src-vocab", e_sv)->required();
  sc_export->add_option("--tgt-vocab", e_tv)->required();
  sc_export->add_option("--out", e_out, "embedding TSV")->required();

  // ---- train-toy -------------------------------------------------------
  auto* sc_train = app.add_subcommand("train-toy", "train the toy attention model");
  std::string t_task = "lexicon", t_lambda = "0.9,0.7,0.5", t_optimizer = "sgd",
              t_out = "train_report.json";
  std::string t_src, t_tgt, t_sv, t_tv, t_pairs;
  int t_d = 512, t_steps = 2000, t_batch = 16, t_words = 12, t_fillers = 3, t_items = 256;
  double t_lr = 0.5;
  sc_train->add_option("--task", t_task, "copy or lexicon (synthetic, seeded)");
  auto* t_d_opt = sc_train->add_option("--d", t_d, "embedding width");
  auto* t_lambda_opt = sc_train->add_option("--lambda", t_lambda, "sharing coefficients");
  auto* t_steps_opt = sc_train->add_option("--steps", t_steps);
  auto* t_lr_opt = sc_train->add_option("--lr", t_lr);
  auto* t_batch_opt = sc_train->add_option("--batch", t_batch);
  auto* t_opt_opt = sc_train->add_option("--optimizer", t_optimizer, "sgd or adam");
  sc_train->add_option("--words", t_words, "content vocabulary size");
  sc_train->add_option("--fillers", t_fillers, "one-sided filler vocabulary size");
  sc_train->add_option("--items", t_items, "training sentences");
  sc_train->add_option("--src", t_src, "parallel text instead of a synthetic task");
  sc_train->add_option("--tgt", t_tgt, "parallel text instead of a synthetic task");
  sc_train->add_option("--src-vocab", t_sv);
  sc_train->add_option("--tgt-vocab", t_tv);
  sc_train->add_option("--pairs", t_pairs, "pairing TSV (file dataset only)");
  sc_train->add_option("--out", t_out, "train report JSON");

  // ---- grad-check ------------------------------------------------------
  auto* sc_grad = app.add_subcommand("grad-check", "finite-difference gradient check");
  std::string g_lambda = "0.9,0.7,0.5", g_out;
  int g_d = 32, g_samples = 200;
  double g_eps = 1e-4;
  auto* g_d_opt = sc_grad->add_option("--d", g_d, "embedding width");
  auto* g_lambda_opt = sc_grad->add_option("--lambda", g_lambda, "sharing coefficients");
  sc_grad->add_option("--samples", g_samples, "sampled scalars");
  sc_grad->add_option("--eps", g_eps, "central difference step");
  sc_grad->add_option("--out", g_out, "report JSON (default: print)");

  // ---- pca -------------------------------------------------------------
  auto* sc_pca = app.add_subcommand("pca", "2-d projection of the bilingual embeddings");
  std::string c_emb, c_pairs, c_sv, c_tv, c_out;
  int c_limit = 0;
  sc_pca->add_option("--emb", c_emb, "SPBE dump")->required();
  sc_pca->add_option("--pairs", c_pairs)->required();
  sc_pca->add_option("--src-vocab", c_sv)->required();
  sc_pca->add_option("--tgt-vocab", c_tv)->required();
  sc_pca->add_option("--out", c_out, "projection TSV")->required();
  sc_pca->add_option("--limit", c_limit, "most frequent words per side (0 = all)");

  // ---- report ----------------------------------------------------------
  auto* sc_report = app.add_subcommand("report", "manifest and artifact freshness summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  ConfigFile cfg;
  if (config_opt->count() > 0) cfg.load(config_path);
  StageContext ctx{manifest_path};

  if (*sc_vocab) {
    cfg.apply(v_max_opt, "max_size", v_max);
    cfg.apply(v_min_opt, "min_freq", v_min);
    ctx.run("build-vocab", {{"max_size", v_max}, {"min_freq", v_min}, {"lang", v_lang}},
            {v_corpus}, {v_out}, [&] {
              auto vocab = spbwe::build_vocab_file(v_corpus, v_max, v_min, v_lang);
              spbwe::save_vocab_tsv(vocab, v_out);
              std::fprintf(stderr, "vocab %s: %d entries, coverage %.4f\n", v_out.c_str(),
                           vocab.size(), spbwe::coverage_file(vocab, v_corpus));
            });
  } else if (*sc_align) {
    ctx.run("align-stats", {{"reverse", a_reverse}}, {a_align, a_src, a_tgt, a_sv, a_tv},
            {a_out}, [&] {
              auto sv = spbwe::load_vocab_tsv(a_sv);
              auto tv = spbwe::load_vocab_tsv(a_tv);
              auto model = spbwe::estimate_files(a_align, a_src, a_tgt, sv, tv, a_reverse);
              spbwe::save_probs_tsv(model, sv, tv, a_out);
              std::fprintf(stderr, "align-stats %s: %lld links over %zu source types\n",
                           a_out.c_str(), model.total_links(), model.count.size());
            });
  } else if (*sc_pair) {
    cfg.apply(p_thr_opt, "threshold", p_threshold);
    ctx.run("pair", {{"threshold", p_threshold}}, {p_probs, p_sv, p_tv}, {p_out}, [&] {
      auto sv = spbwe::load_vocab_tsv(p_sv);
      auto tv = spbwe::load_vocab_tsv(p_tv);
      auto model = spbwe::load_probs_tsv(p_probs, sv, tv);
      auto table = spbwe::build_pairing(model, sv, tv, p_threshold);
      spbwe::save_pairing_tsv(table, sv, tv, p_out);
      auto n = table.category_counts();
      std::fprintf(stderr, "pair %s: lm %d, wf %d, ur %d, surplus %zu/%zu\n", p_out.c_str(),
                   n[0], n[1], n[2], table.surplus_src.size(), table.surplus_tgt.size());
    });
  } else if (*sc_layout) {
    cfg.apply(l_d_opt, "d", l_d);
    cfg.apply_lambda(l_lambda_opt, l_lambda);
    auto lambda = parse_lambda(l_lambda);
    if (l_counts.empty() == l_pairs.empty())
      throw ConfigError("layout needs exactly one of --pairs or --counts");
    std::vector<std::string> inputs;
    if (!l_pairs.empty()) inputs = {l_pairs, l_sv, l_tv};
    nlohmann::json params = {{"d", l_d}, {"lambda", lambda}, {"baseline", l_baseline}};
    if (!l_counts.empty()) params["counts"] = l_counts;
    ctx.run("layout", params, inputs, {l_out}, [&] {
      spbwe::SharingConfig sharing{l_d, lambda, true};
      spbwe::PairingTable table;
      if (!l_counts.empty()) {
        // Abstract mode: a synthetic pairing with the requested category
        // sizes drives the real layout/accounting path.
        auto n = parse_counts(l_counts);
        int next_src = 0, next_tgt = 0;
        for (int c = 0; c < 3; ++c)
          for (int k = 0; k < n[c]; ++k) {
            spbwe::WordPair p;
            p.src_id = next_src++;
            p.tgt_id = next_tgt++;
            p.category = static_cast<spbwe::Relation>(c);
            if (c == 0) p.align_prob = 1.0;
            p.src_freq = 1;
            p.tgt_freq = 1;
            table.pairs.push_back(p);
          }
      } else {
        if (l_sv.empty() || l_tv.empty())
          throw ConfigError("--pairs requires --src-vocab and --tgt-vocab");
        auto sv = spbwe::load_vocab_tsv(l_sv);
        auto tv = spbwe::load_vocab_tsv(l_tv);
        table = spbwe::load_pairing_tsv(l_pairs, sv, tv);
      }
      auto layout = spbwe::make_layout(table, sharing);
      auto baseline = spbwe::baseline_from_string(l_baseline);
      spbwe::atomic_write(l_out, spbwe::layout_report_json(layout, lambda, baseline));
      auto [params_n, red] = spbwe::param_count(layout, baseline);
      std::fprintf(stderr, "layout %s: emb_params %lld (%.1fM), reduction %.1f%%\n",
                   l_out.c_str(), params_n, params_n / 1e6, red * 100.0);
    });
  } else if (*sc_init) {
    cfg.apply(i_d_opt, "d", i_d);
    cfg.apply_lambda(i_lambda_opt, i_lambda);
    auto lambda = parse_lambda(i_lambda);
    ctx.run("init",
            {{"d", i_d}, {"lambda", lambda}, {"seed", seed}, {"scheme", i_scheme}},
            {i_pairs, i_sv, i_tv}, {i_out}, [&] {
              auto sv = spbwe::load_vocab_tsv(i_sv);
              auto tv = spbwe::load_vocab_tsv(i_tv);
              auto table = spbwe::load_pairing_tsv(i_pairs, sv, tv);
              spbwe::SharingConfig sharing{i_d, lambda, true};
              auto emb = spbwe::init_embeddings(spbwe::make_layout(table, sharing), seed,
                                                spbwe::scheme_from_string(i_scheme));
              spbwe::save_embedding_dump(emb, i_out);
              std::fprintf(stderr, "init %s: %lld stored scalars, seed %llu\n", i_out.c_str(),
                           emb.stored_scalars(), static_cast<unsigned long long>(seed));
            });
  } else if (*sc_export) {
    ctx.run("export", nlohmann::json::object(), {e_emb, e_pairs, e_sv, e_tv}, {e_out}, [&] {
      auto sv = spbwe::load_vocab_tsv(e_sv);
      auto tv = spbwe::load_vocab_tsv(e_tv);
      auto table = spbwe::load_pairing_tsv(e_pairs, sv, tv);
      auto header = spbwe::read_dump_header(e_emb);
      auto layout = spbwe::make_layout_widths(table, header.d, header.width);
      auto emb = spbwe::load_embedding_dump(e_emb, layout);
      spbwe::atomic_write(e_out, spbwe::embeddings_to_tsv(emb, sv, tv));
      std::fprintf(stderr, "export %s\n", e_out.c_str());
    });
  } else if (*sc_train) {
    cfg.apply(t_d_opt, "d", t_d);
    cfg.apply_lambda(t_lambda_opt, t_lambda);
    cfg.apply(t_steps_opt, "steps", t_steps);
    cfg.apply(t_lr_opt, "lr", t_lr);
    cfg.apply(t_batch_opt, "batch", t_batch);
    cfg.apply(t_opt_opt, "optimizer", t_optimizer);
    auto lambda = parse_lambda(t_lambda);
    bool from_files = !t_src.empty() || !t_tgt.empty();
    if (from_files && (t_src.empty() || t_tgt.empty() || t_sv.empty() || t_tv.empty() ||
                       t_pairs.empty()))
      throw ConfigError("file datasets need --src --tgt --src-vocab --tgt-vocab --pairs");
    nlohmann::json params = {{"task", from_files ? "file" : t_task},
                             {"d", t_d},     {"lambda", lambda}, {"steps", t_steps},
                             {"lr", t_lr},   {"batch", t_batch}, {"seed", seed},
                             {"optimizer", t_optimizer}};
    std::vector<std::string> inputs;
    if (from_files) inputs = {t_src, t_tgt, t_sv, t_tv, t_pairs};
    ctx.run("train-toy", params, inputs, {t_out}, [&] {
      spbwe::ToyTask task;
      if (from_files) {
        auto sv = spbwe::load_vocab_tsv(t_sv);
        auto tv = spbwe::load_vocab_tsv(t_tv);
        auto table = spbwe::load_pairing_tsv(t_pairs, sv, tv);
        task = spbwe::make_file_task(t_src, t_tgt, sv, tv, std::move(table));
      } else {
        task = spbwe::make_toy_task(spbwe::task_from_string(t_task), t_words, t_fillers,
                                    t_items, seed);
      }
      spbwe::MicroModelConfig mc;
      mc.d = t_d;
      mc.lr = t_lr;
      mc.steps = t_steps;
      mc.batch_size = t_batch;
      mc.seed = seed;
      mc.optimizer = spbwe::optimizer_from_string(t_optimizer);
      spbwe::SharingConfig sharing{t_d, lambda, true};
      auto model = spbwe::make_model(task, sharing, mc);
      auto report = spbwe::train(model, task);
      spbwe::atomic_write(t_out, spbwe::train_report_json(report, mc,
                                                          from_files ? "file" : t_task,
                                                          lambda));
      std::fprintf(stderr,
                   "train-toy %s: final loss %.4f, grad-check %.2e, %.0f ms%s\n", t_out.c_str(),
                   report.final_loss, report.grad_check.max_rel_err, report.wall_clock_ms,
                   report.diverged_step >= 0 ? " (DIVERGED)" : "");
      if (report.diverged_step >= 0)
        throw spbwe::NumericError("training diverged at step " +
                                  std::to_string(report.diverged_step));
    });
  } else if (*sc_grad) {
    cfg.apply(g_d_opt, "d", g_d);
    cfg.apply_lambda(g_lambda_opt, g_lambda);
    auto lambda = parse_lambda(g_lambda);
    std::vector<std::string> outs;
    if (!g_out.empty()) outs.push_back(g_out);
    ctx.run("grad-check",
            {{"d", g_d}, {"lambda", lambda}, {"samples", g_samples}, {"eps", g_eps},
             {"seed", seed}},
            {}, outs, [&] {
              auto task = spbwe::make_toy_task(spbwe::ToyTaskKind::lexicon, 10, 3, 64, seed);
              spbwe::MicroModelConfig mc;
              mc.d = g_d;
              mc.seed = seed;
              spbwe::SharingConfig sharing{g_d, lambda, true};
              auto model = spbwe::make_model(task, sharing, mc);
              auto batch = spbwe::prepare_batch(
                  std::span(task.items.data(), std::min<std::size_t>(task.items.size(), 16)));
              auto rep = spbwe::finite_diff_check(model, batch, g_samples, g_eps, seed + 1);
              nlohmann::json j = {{"d", g_d},
                                  {"lambda", lambda},
                                  {"samples", rep.samples},
                                  {"eps", rep.eps},
                                  {"max_rel_err", rep.max_rel_err}};
              std::string text = j.dump(2) + "\n";
              if (!g_out.empty())
                spbwe::atomic_write(g_out, text);
              else
                std::fputs(text.c_str(), stdout);
              std::fprintf(stderr, "grad-check: max relative error %.3e over %d samples\n",
                           rep.max_rel_err, rep.samples);
            });
  } else if (*sc_pca) {
    ctx.run("pca", {{"limit", c_limit}}, {c_emb, c_pairs, c_sv, c_tv}, {c_out}, [&] {
      auto sv = spbwe::load_vocab_tsv(c_sv);
      auto tv = spbwe::load_vocab_tsv(c_tv);
      auto table = spbwe::load_pairing_tsv(c_pairs, sv, tv);
      auto header = spbwe::read_dump_header(c_emb);
      auto layout = spbwe::make_layout_widths(table, header.d, header.width);
      auto emb = spbwe::load_embedding_dump(c_emb, layout);

      std::vector<std::vector<double>> vectors;
      std::vector<std::pair<std::string, const char*>> labels;
      auto take = [&](spbwe::Side side, const spbwe::Vocab& vocab, const char* name) {
        int n = vocab.size();
        int limit = c_limit > 0 ? std::min(n, spbwe::Vocab::kNumSpecials + c_limit) : n;
        for (int id = spbwe::Vocab::kNumSpecials; id < limit; ++id) {
          vectors.push_back(emb.lookup(side, id));
          labels.emplace_back(vocab.tokens[id], name);
        }
      };
      take(spbwe::Side::src, sv, "src");
      take(spbwe::Side::tgt, tv, "tgt");
      auto coords = spbwe::pca_project(vectors, 2);
      std::string out;
      for (std::size_t i = 0; i < coords.size(); ++i) {
        out += labels[i].first;
        out += '\t';
        out += labels[i].second;
        out += '\t';
        out += spbwe::fmt_float_compact(coords[i][0]);
        out += '\t';
        out += spbwe::fmt_float_compact(coords[i][1]);
        out += '\n';
      }
      spbwe::atomic_write(c_out, out);
      std::fprintf(stderr, "pca %s: %zu points\n", c_out.c_str(), coords.size());
    });
  } else if (*sc_report) {
    if (manifest_path.empty()) throw ConfigError("report requires --manifest");
    auto manifest = spbwe::PipelineManifest::load(manifest_path);
    std::fputs(manifest.report().c_str(), stdout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const spbwe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
