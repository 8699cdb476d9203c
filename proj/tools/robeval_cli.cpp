// Copyright 2026 The robeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Talks to the library only through robeval.h.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "robeval/robeval.h"

namespace {

// 0 ok, 1 validation, 2 io or remote, 3 internal.
int exit_code(rbe_status status) {
  switch (status) {
    case RBE_OK: return 0;
    case RBE_ERR_VALIDATION: return 1;
    case RBE_ERR_IO:
    case RBE_ERR_REMOTE: return 2;
    case RBE_ERR_INTERNAL: return 3;
  }
  return 3;
}

int report(rbe_status status) {
  if (status != RBE_OK) std::cerr << "robeval: error: " << rbe_last_error() << '\n';
  return exit_code(status);
}

// Takes ownership of a library string.
std::string take(char* s) {
  std::string out = s != nullptr ? s : "";
  rbe_free_string(s);
  return out;
}

struct Globals {
  uint64_t seed = 0;
  std::string out_dir;
  size_t workers = 1;
};

std::string under_out_dir(const Globals& g, const std::string& path) {
  if (g.out_dir.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(g.out_dir) / path).string();
}

struct ProviderFlags {
  std::string provider = "toy";
  std::string model;
  std::string layer = "first";
  std::string cache;
  std::string endpoint;
  std::optional<size_t> dim;
  std::optional<size_t> num_layers;
  std::optional<double> context_weight;
  std::optional<int> timeout_ms;
  std::optional<size_t> max_in_flight;
  std::optional<size_t> batch_size;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--provider", provider, "toy, cache or remote")->capture_default_str();
    cmd->add_option("--model", model, "Model name (toy provider: any label)");
    cmd->add_option("--layer", layer, "first, mean, best or a layer number")->capture_default_str();
    cmd->add_option("--cache", cache, "Embedding cache JSONL");
    cmd->add_option("--endpoint", endpoint, "Sidecar base URL, e.g. http://127.0.0.1:8765");
    cmd->add_option("--dim", dim, "Toy embedding width");
    cmd->add_option("--num-layers", num_layers, "Toy layer count, static layer included");
    cmd->add_option("--context-weight", context_weight, "Toy context mixing weight");
    cmd->add_option("--timeout-ms", timeout_ms, "Remote request timeout");
    cmd->add_option("--max-in-flight", max_in_flight, "Concurrent remote requests");
    cmd->add_option("--batch-size", batch_size, "Texts per remote request");
  }

  std::string json() const {
    nlohmann::json p = {{"kind", provider}};
    if (!model.empty()) p["model"] = model;
    if (!cache.empty()) p["cache"] = cache;
    if (!endpoint.empty()) p["endpoint"] = endpoint;
    if (dim) p["dim"] = *dim;
    if (num_layers) p["num_layers"] = *num_layers;
    if (context_weight) p["context_weight"] = *context_weight;
    if (timeout_ms) p["timeout_ms"] = *timeout_ms;
    if (max_in_flight) p["max_in_flight"] = *max_in_flight;
    if (batch_size) p["batch_size"] = *batch_size;
    return nlohmann::json{{"provider", p}, {"layer", layer}}.dump();
  }
};

class Metric {
 public:
  Metric() = default;
  Metric(const Metric&) = delete;
  Metric& operator=(const Metric&) = delete;
  ~Metric() { rbe_metric_free(handle_); }
  rbe_status create(const ProviderFlags& flags) {
    return rbe_metric_create(flags.json().c_str(), &handle_);
  }
  rbe_metric* get() { return handle_; }

 private:
  rbe_metric* handle_ = nullptr;
};

class Attack {
 public:
  Attack() = default;
  Attack(const Attack&) = delete;
  Attack& operator=(const Attack&) = delete;
  ~Attack() { rbe_attack_free(handle_); }
  rbe_status create(const std::string& kind, double p, uint64_t seed, const std::string& res) {
    return rbe_attack_create(kind.c_str(), p, seed, res.empty() ? nullptr : res.c_str(), &handle_);
  }
  rbe_attack* get() { return handle_; }

 private:
  rbe_attack* handle_ = nullptr;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Character-level attack robustness harness for embedding-based metrics"};
  app.set_version_flag("--version", std::string(rbe_version()));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  CLI::Option* seed_opt = app.add_option("--seed", g.seed, "Attack seed")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Directory for outputs given as relative paths");
  app.add_option("--workers", g.workers, "Worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  int rc = 0;

  // attack
  auto* attack = app.add_subcommand("attack", "Perturb a segments JSONL file or one text");
  std::string a_kind, a_input, a_output, a_text, a_resources;
  double a_p = 0.0;
  attack->add_option("--attack", a_kind, "intrude, disemvowel, keyboard-typo, phonetic, visual")
      ->required();
  attack->add_option("--p", a_p, "Perturbation level in [0, 1]")->required();
  auto* a_in = attack->add_option("--input", a_input, "Segments JSONL");
  attack->add_option("--output", a_output, "Output JSONL")->needs(a_in);
  attack->add_option("--text", a_text, "Perturb this text and print it")->excludes(a_in);
  attack->add_option("--resources", a_resources, "Resource directory");
  attack->callback([&] {
    Attack h;
    rbe_status s = h.create(a_kind, a_p, g.seed, a_resources);
    if (s == RBE_OK && !a_input.empty()) {
      if (a_output.empty()) throw CLI::ValidationError("--output", "required with --input");
      s = rbe_attack_perturb_file(h.get(), a_input.c_str(), under_out_dir(g, a_output).c_str());
    } else if (s == RBE_OK) {
      char* out = nullptr;
      s = rbe_attack_perturb(h.get(), a_text.c_str(), &out);
      if (s == RBE_OK) std::cout << take(out) << '\n';
    }
    rc = report(s);
  });

  // unk-stats
  auto* unk = app.add_subcommand("unk-stats", "Mean unknown-token count per segment");
  std::string u_vocab, u_input, u_kind, u_resources;
  double u_p = 0.0;
  bool u_cased = false;
  unk->add_option("--vocab", u_vocab, "WordPiece vocab file")->required();
  unk->add_option("--input", u_input, "Segments JSONL")->required();
  unk->add_option("--attack", u_kind, "Perturb before counting");
  unk->add_option("--p", u_p, "Perturbation level")->capture_default_str();
  unk->add_option("--resources", u_resources, "Resource directory");
  unk->add_flag("--cased", u_cased, "Keep case and accents when tokenizing");
  unk->callback([&] {
    rbe_vocab* vocab = nullptr;
    rbe_status s = rbe_vocab_load(u_vocab.c_str(), u_cased ? 0 : 1, &vocab);
    Attack h;
    if (s == RBE_OK && !u_kind.empty()) s = h.create(u_kind, u_p, g.seed, u_resources);
    if (s == RBE_OK) {
      char* out = nullptr;
      s = rbe_vocab_unk_stats_file(vocab, u_input.c_str(), h.get(), &out);
      if (s == RBE_OK) std::cout << take(out) << '\n';
    }
    rbe_vocab_free(vocab);
    rc = report(s);
  });

  // score
  auto* score = app.add_subcommand("score", "Score outputs against references");
  ProviderFlags s_flags;
  std::string s_cands, s_refs, s_out;
  bool s_full = false;
  s_flags.add_to(score);
  score->add_option("--cands", s_cands, "Outputs JSONL (seg_id, system, text)")->required();
  score->add_option("--refs", s_refs, "References JSONL (seg_id, text)")->required();
  score->add_option("--out", s_out, "Scores TSV")->required();
  score->add_flag("--full", s_full, "Add precision and recall columns");
  score->callback([&] {
    Metric m;
    rbe_status s = m.create(s_flags);
    if (s == RBE_OK) {
      char* summary = nullptr;
      s = rbe_metric_score_files(m.get(), s_cands.c_str(), s_refs.c_str(),
                                 under_out_dir(g, s_out).c_str(), s_full ? 1 : 0, g.workers,
                                 &summary);
      if (s == RBE_OK) {
        const auto j = nlohmann::json::parse(take(summary));
        for (const auto& e : j["errors"]) {
          std::cerr << "robeval: warning: system " << e["system"].get<std::string>() << " seg_id "
                    << e["seg_id"].get<std::string>() << ": " << e["error"].get<std::string>()
                    << '\n';
        }
        std::cout << j.dump() << '\n';
        if (j["failed"].get<size_t>() > 0) {
          rc = 1;
          return;
        }
      }
    }
    rc = report(s);
  });

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Kendall-like correlation with DARR judgments");
  std::string e_judgments, e_scores, e_ties = "denominator";
  evaluate->add_option("--judgments", e_judgments, "Judgments TSV")->required();
  evaluate->add_option("--scores", e_scores, "Scores TSV")->required();
  evaluate->add_option("--ties", e_ties, "denominator, discordant or drop")->capture_default_str();
  evaluate->callback([&] {
    char* out = nullptr;
    const rbe_status s =
        rbe_evaluate_files(e_judgments.c_str(), e_scores.c_str(), e_ties.c_str(), &out);
    if (s == RBE_OK) std::cout << take(out) << '\n';
    rc = report(s);
  });

  // export-sim
  auto* sim = app.add_subcommand("export-sim", "Write the token similarity matrix as CSV");
  ProviderFlags x_flags;
  std::string x_cand, x_ref, x_out;
  x_flags.add_to(sim);
  sim->add_option("--cand", x_cand, "Candidate text")->required();
  sim->add_option("--ref", x_ref, "Reference text")->required();
  sim->add_option("--out", x_out, "CSV path")->required();
  sim->callback([&] {
    Metric m;
    rbe_status s = m.create(x_flags);
    if (s == RBE_OK) {
      s = rbe_metric_export_similarity(m.get(), x_cand.c_str(), x_ref.c_str(),
                                       under_out_dir(g, x_out).c_str());
    }
    rc = report(s);
  });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run an attack x level x config grid");
  std::string w_config;
  sweep->add_option("--config", w_config, "Sweep config JSON")->required();
  sweep->callback([&] {
    const uint64_t seed = g.seed;
    const bool seed_given = seed_opt->count() > 0;
    const bool workers_given = app.get_option("--workers")->count() > 0;
    char* out = nullptr;
    const rbe_status s =
        rbe_sweep_run(w_config.c_str(), g.out_dir.empty() ? nullptr : g.out_dir.c_str(),
                      seed_given ? &seed : nullptr, workers_given ? g.workers : 0, &out);
    if (s == RBE_OK) std::cout << take(out) << '\n';
    rc = report(s);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return rc;
}
