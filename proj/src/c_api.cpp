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

#include "robeval/robeval.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <map>
#include <memory>
#include <new>
#include <set>
#include <string>

#include "json.hpp"
#include "robeval/attacks.hpp"
#include "robeval/codec.hpp"
#include "robeval/correlate.hpp"
#include "robeval/corpusio.hpp"
#include "robeval/error.hpp"
#include "robeval/scorer.hpp"
#include "robeval/sweep.hpp"
#include "robeval/wordpiece.hpp"

struct rbe_attack {
  robeval::AttackSpec spec;
};

struct rbe_vocab {
  explicit rbe_vocab(robeval::Vocab v) : vocab(std::move(v)) {}
  robeval::Vocab vocab;
};

struct rbe_metric {
  explicit rbe_metric(robeval::MetricConfig config) : scorer(std::move(config)) {}
  robeval::Scorer scorer;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
rbe_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return RBE_OK;
  } catch (const robeval::Error& e) {
    g_last_error = e.what();
    switch (e.kind()) {
      case robeval::ErrorKind::kValidation: return RBE_ERR_VALIDATION;
      case robeval::ErrorKind::kIo: return RBE_ERR_IO;
      case robeval::ErrorKind::kRemote: return RBE_ERR_REMOTE;
      case robeval::ErrorKind::kInternal: return RBE_ERR_INTERNAL;
    }
    return RBE_ERR_INTERNAL;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return RBE_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = std::string("internal error: ") + e.what();
    return RBE_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "internal error: unknown exception";
    return RBE_ERR_INTERNAL;
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) throw robeval::ValidationError(std::string(name) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

robeval::MetricConfig metric_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw robeval::ValidationError("metric config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "provider" && key != "layer") {
      throw robeval::ValidationError("unknown metric key \"" + key + "\"");
    }
  }
  robeval::MetricConfig config;
  nlohmann::json provider = j.value("provider", nlohmann::json::object());
  if (provider.is_string()) provider = {{"kind", provider.get<std::string>()}};
  config.provider = robeval::ProviderConfig::from_json(provider);
  std::string layer = "first";
  try {
    layer = j.value("layer", layer);
  } catch (const nlohmann::json::exception& e) {
    throw robeval::ValidationError(std::string("invalid layer: ") + e.what());
  }
  config.policy = robeval::LayerPolicy::parse(layer, config.provider.model);
  return config;
}

nlohmann::json result_json(const robeval::CorrelationResult& r) {
  return {{"value", r.value},
          {"n_pairs", r.n_pairs},
          {"concordant", r.concordant},
          {"discordant", r.discordant},
          {"ties", r.ties}};
}

}  // namespace

extern "C" {

const char* rbe_version(void) { return "0.1.0"; }

const char* rbe_last_error(void) { return g_last_error.c_str(); }

void rbe_free_string(char* s) { std::free(s); }

rbe_status rbe_default_data_dir(char** out) {
  return guarded([&] {
    require(out, "out");
    *out = dup_string(robeval::default_data_dir().string());
  });
}

rbe_status rbe_attack_create(const char* kind, double level, uint64_t seed,
                             const char* resources_dir, rbe_attack** out) {
  return guarded([&] {
    require(kind, "kind");
    require(out, "out");
    auto attack = std::make_unique<rbe_attack>();
    attack->spec.kind = robeval::parse_attack_kind(kind);
    attack->spec.level = level;
    attack->spec.seed = seed;
    const std::filesystem::path dir =
        resources_dir != nullptr ? std::filesystem::path(resources_dir) : robeval::default_data_dir();
    attack->spec.resources =
        std::make_shared<const robeval::AttackResources>(robeval::load_resources(dir));
    robeval::validate(attack->spec);
    *out = attack.release();
  });
}

void rbe_attack_free(rbe_attack* attack) { delete attack; }

rbe_status rbe_attack_perturb(const rbe_attack* attack, const char* text, char** out) {
  return guarded([&] {
    require(attack, "attack");
    require(text, "text");
    require(out, "out");
    *out = dup_string(robeval::perturb_sentence(text, attack->spec));
  });
}

rbe_status rbe_attack_perturb_file(const rbe_attack* attack, const char* in_path,
                                   const char* out_path) {
  return guarded([&] {
    require(attack, "attack");
    require(in_path, "in_path");
    require(out_path, "out_path");
    const auto segments = robeval::load_segments(in_path);
    robeval::save_segments(out_path, robeval::perturb_corpus(segments, attack->spec));
  });
}

rbe_status rbe_vocab_load(const char* path, int uncased, rbe_vocab** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new rbe_vocab(robeval::load_vocab(path, robeval::kDefaultMaxWordChars, uncased != 0));
  });
}

void rbe_vocab_free(rbe_vocab* vocab) { delete vocab; }

rbe_status rbe_vocab_tokenize(const rbe_vocab* vocab, const char* text, char** out_json) {
  return guarded([&] {
    require(vocab, "vocab");
    require(text, "text");
    require(out_json, "out_json");
    *out_json = dup_string(nlohmann::json(robeval::tokenize_sentence(text, vocab->vocab)).dump());
  });
}

rbe_status rbe_vocab_unk_stats_file(const rbe_vocab* vocab, const char* segments_path,
                                    const rbe_attack* attack, char** out_json) {
  return guarded([&] {
    require(vocab, "vocab");
    require(segments_path, "segments_path");
    require(out_json, "out_json");
    auto segments = robeval::load_segments(segments_path);
    if (attack != nullptr) segments = robeval::perturb_corpus(segments, attack->spec);
    const auto stats = robeval::corpus_unk_stats(segments, vocab->vocab);
    const nlohmann::json j = {{"segments", stats.segments},
                              {"total_unk", stats.total_unk},
                              {"avg_per_segment", stats.avg_per_segment}};
    *out_json = dup_string(j.dump());
  });
}

rbe_status rbe_count_unk(const char* const* pieces, size_t n, size_t* out) {
  return guarded([&] {
    require(out, "out");
    if (n > 0) require(pieces, "pieces");
    std::vector<std::string> list;
    list.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      require(pieces[i], "piece");
      list.emplace_back(pieces[i]);
    }
    *out = robeval::count_unk(list);
  });
}

rbe_status rbe_metric_create(const char* config_json, rbe_metric** out) {
  return guarded([&] {
    require(config_json, "config_json");
    require(out, "out");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw robeval::ValidationError(std::string("malformed metric config: ") + e.what());
    }
    *out = new rbe_metric(metric_from_json(j));
  });
}

void rbe_metric_free(rbe_metric* metric) { delete metric; }

rbe_status rbe_metric_score_pair(rbe_metric* metric, const char* candidate,
                                 const char* reference, double* precision, double* recall,
                                 double* f1) {
  return guarded([&] {
    require(metric, "metric");
    require(candidate, "candidate");
    require(reference, "reference");
    const auto s = metric->scorer.score_pair(candidate, reference);
    if (precision != nullptr) *precision = s.precision;
    if (recall != nullptr) *recall = s.recall;
    if (f1 != nullptr) *f1 = s.f1;
  });
}

rbe_status rbe_metric_score_files(rbe_metric* metric, const char* cands_path,
                                  const char* refs_path, const char* out_path, int full,
                                  size_t workers, char** summary_json) {
  return guarded([&] {
    require(metric, "metric");
    require(cands_path, "cands_path");
    require(refs_path, "refs_path");
    require(out_path, "out_path");
    const auto outputs = robeval::load_outputs(cands_path);
    const auto refs = robeval::load_segments(refs_path);
    std::map<std::string, const std::string*> by_id;
    for (const auto& r : refs) by_id.emplace(r.seg_id, &r.text);

    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(outputs.size());
    for (const auto& o : outputs) {
      const auto it = by_id.find(o.seg_id);
      if (it == by_id.end()) {
        throw robeval::ValidationError("output of system \"" + o.system + "\" references seg_id \"" +
                                       o.seg_id + "\" absent from " + refs_path);
      }
      pairs.emplace_back(o.text, *it->second);
    }
    const auto items = metric->scorer.score_batch(pairs, workers == 0 ? 1 : workers);

    auto out = robeval::open_output(out_path);
    out << "system\tseg_id\tf1" << (full != 0 ? "\tprecision\trecall" : "") << '\n';
    nlohmann::json errors = nlohmann::json::array();
    size_t scored = 0;
    for (size_t i = 0; i < items.size(); ++i) {
      const auto& o = outputs[i];
      if (!items[i].score) {
        errors.push_back({{"system", o.system}, {"seg_id", o.seg_id}, {"error", items[i].error}});
        continue;
      }
      const auto& s = *items[i].score;
      out << o.system << '\t' << o.seg_id << '\t' << robeval::format_fixed(s.f1, 6);
      if (full != 0) {
        out << '\t' << robeval::format_fixed(s.precision, 6) << '\t'
            << robeval::format_fixed(s.recall, 6);
      }
      out << '\n';
      ++scored;
    }
    out.flush();
    if (!out) throw robeval::IoError(std::string("failed writing ") + out_path);
    if (summary_json != nullptr) {
      const nlohmann::json j = {{"scored", scored}, {"failed", errors.size()}, {"errors", errors}};
      *summary_json = dup_string(j.dump());
    }
  });
}

rbe_status rbe_metric_export_similarity(rbe_metric* metric, const char* candidate,
                                        const char* reference, const char* out_path) {
  return guarded([&] {
    require(metric, "metric");
    require(candidate, "candidate");
    require(reference, "reference");
    require(out_path, "out_path");
    metric->scorer.export_similarity_matrix(candidate, reference, out_path);
  });
}

rbe_status rbe_evaluate_files(const char* judgments_path, const char* scores_path,
                              const char* ties, char** out_json) {
  return guarded([&] {
    require(judgments_path, "judgments_path");
    require(scores_path, "scores_path");
    require(out_json, "out_json");
    const auto mode = robeval::parse_tie_mode(ties != nullptr ? ties : "denominator");
    const auto judgments = robeval::load_judgments(judgments_path);
    const auto scores = robeval::load_scores_tsv(scores_path);

    nlohmann::json j = result_json(robeval::kendall_darr(judgments, scores, mode));
    j["kind"] = "kendall_darr";
    j["ties_mode"] = std::string(robeval::to_string(mode));

    std::map<std::string, std::vector<robeval::JudgmentPair>> grouped;
    for (const auto& p : judgments) grouped[p.lang_pair].push_back(p);
    std::map<std::string, robeval::CorrelationResult> per_pair;
    nlohmann::json by_pair = nlohmann::json::object();
    for (const auto& [lp, list] : grouped) {
      per_pair[lp] = robeval::kendall_darr(list, scores, mode);
      by_pair[lp] = result_json(per_pair[lp]);
    }
    j["by_lang_pair"] = by_pair;
    j["average"] = robeval::average_over_pairs(per_pair);
    *out_json = dup_string(j.dump());
  });
}

rbe_status rbe_sweep_run(const char* config_path, const char* out_dir, const uint64_t* seed,
                         size_t workers, char** summary_json) {
  return guarded([&] {
    require(config_path, "config_path");
    auto config = robeval::SweepConfig::load(config_path);
    if (out_dir != nullptr) config.out_dir = out_dir;
    if (seed != nullptr) config.seeds = {*seed};
    if (workers != 0) config.workers = workers;
    const auto result = robeval::run_sweep(config);
    robeval::emit_report(result.rows, config);
    if (summary_json != nullptr) {
      const nlohmann::json j = {{"rows", result.rows.size()},
                                {"errors", result.errors.size()},
                                {"out_dir", config.out_dir.string()}};
      *summary_json = dup_string(j.dump());
    }
  });
}

}  // extern "C"
