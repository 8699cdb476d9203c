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

#include "robeval/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "robeval/codec.hpp"
#include "robeval/corpusio.hpp"
#include "robeval/error.hpp"
#include "robeval/wordpiece.hpp"

namespace robeval {
namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() ? base / path : path;
}

std::string default_config_name(const MetricConfig& m) {
  std::string name = std::string(to_string(m.provider.kind)) + "-" + m.provider.model + "-" +
                     m.policy.label();
  for (char& c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return name;
}

bool safe_file_stem(const std::string& name) {
  if (name.empty() || name == "." || name == "..") return false;
  return name.find_first_of("/\\\t\n\r") == std::string::npos;
}

std::string one_line(std::string text) {
  for (char& c : text) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  auto out = open_output(path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                const std::string& what) {
  if (!j.is_object()) throw ValidationError(what + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ValidationError("unknown " + what + " key \"" + key + "\"");
  }
}

struct LoadedDataset {
  Dataset data;
  std::map<std::string, size_t> ref_index;  // seg_id -> position
};

struct CellJob {
  AttackKind attack;
  double p;
  uint64_t seed;
  size_t dataset;
};

struct CellOutcome {
  std::vector<ReportRow> rows;
  std::vector<SweepError> errors;
};

}  // namespace

void SweepConfig::validate() const {
  if (attacks.empty()) throw ValidationError("sweep needs at least one attack");
  if (std::set<AttackKind>(attacks.begin(), attacks.end()).size() != attacks.size()) {
    throw ValidationError("duplicate attack in sweep config");
  }
  if (p_grid.empty()) throw ValidationError("p_grid is empty");
  for (size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] >= 0.0 && p_grid[i] <= 1.0)) {
      throw ValidationError("p_grid value " + format_shortest(p_grid[i]) + " is outside [0, 1]");
    }
    if (i > 0 && !(p_grid[i] > p_grid[i - 1])) {
      throw ValidationError("p_grid must be strictly increasing");
    }
  }
  if (seeds.empty()) throw ValidationError("sweep needs at least one seed");
  if (std::set<uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ValidationError("duplicate seed in sweep config");
  }
  if (configs.empty()) throw ValidationError("sweep needs at least one metric config");
  std::set<std::string> names;
  for (const auto& c : configs) {
    if (!safe_file_stem(c.name)) throw ValidationError("invalid config name \"" + c.name + "\"");
    if (!names.insert(c.name).second) {
      throw ValidationError("duplicate config name \"" + c.name + "\"");
    }
    c.metric.provider.validate();
  }
  if (datasets.empty()) throw ValidationError("sweep needs at least one dataset");
  std::set<std::string> pairs;
  for (const auto& d : datasets) {
    if (!safe_file_stem(d.lang_pair)) {
      throw ValidationError("invalid lang_pair \"" + d.lang_pair + "\"");
    }
    if (!pairs.insert(d.lang_pair).second) {
      throw ValidationError("duplicate lang_pair \"" + d.lang_pair + "\"");
    }
  }
  if (out_dir.empty()) throw ValidationError("sweep needs an out_dir");
  if (workers == 0) throw ValidationError("workers must be at least 1");
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  check_keys(j,
             {"attacks", "p_grid", "seeds", "configs", "datasets", "vocab", "resources",
              "out_dir", "ties", "workers"},
             "sweep config");
  SweepConfig cfg;
  try {
    for (const auto& a : j.at("attacks")) {
      cfg.attacks.push_back(parse_attack_kind(a.get<std::string>()));
    }
    if (j.contains("p_grid")) cfg.p_grid = j["p_grid"].get<std::vector<double>>();
    cfg.seeds = j.at("seeds").get<std::vector<uint64_t>>();
    for (const auto& c : j.at("configs")) {
      check_keys(c, {"name", "provider", "layer"}, "metric config");
      nlohmann::json provider = c.at("provider");
      if (provider.is_string()) provider = {{"kind", provider.get<std::string>()}};
      if (provider.contains("cache")) {
        provider["cache"] = resolve(base_dir, provider["cache"].get<std::string>()).string();
      }
      SweepMetric m;
      m.metric.provider = ProviderConfig::from_json(provider);
      m.metric.policy = LayerPolicy::parse(c.value("layer", std::string("first")),
                                           m.metric.provider.model);
      m.name = c.value("name", default_config_name(m.metric));
      cfg.configs.push_back(std::move(m));
    }
    for (const auto& d : j.at("datasets")) {
      check_keys(d, {"lang_pair", "references", "outputs", "judgments"}, "dataset");
      cfg.datasets.push_back({d.at("lang_pair").get<std::string>(),
                              resolve(base_dir, d.at("references").get<std::string>()),
                              resolve(base_dir, d.at("outputs").get<std::string>()),
                              resolve(base_dir, d.at("judgments").get<std::string>())});
    }
    if (j.contains("vocab")) cfg.vocab = resolve(base_dir, j["vocab"].get<std::string>());
    if (j.contains("resources")) cfg.resources = resolve(base_dir, j["resources"].get<std::string>());
    if (j.contains("out_dir")) cfg.out_dir = resolve(base_dir, j["out_dir"].get<std::string>());
    if (j.contains("ties")) cfg.ties = parse_tie_mode(j["ties"].get<std::string>());
    if (j.contains("workers")) cfg.workers = j["workers"].get<size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid sweep config: ") + e.what());
  }
  return cfg;
}

SweepConfig SweepConfig::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": malformed JSON: " + e.what());
  }
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  return from_json(j, base);
}

std::filesystem::path cell_dir(AttackKind attack, double p, uint64_t seed,
                               const std::string& lang_pair) {
  return std::filesystem::path("cells") / std::string(to_string(attack)) / format_shortest(p) /
         std::to_string(seed) / lang_pair;
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();

  const auto data_dir = config.resources.empty() ? default_data_dir() : config.resources;
  auto resources = std::make_shared<const AttackResources>(load_resources(data_dir));
  const Vocab vocab =
      load_vocab(config.vocab.empty() ? data_dir / "vocab_30k.txt" : config.vocab);

  std::vector<LoadedDataset> datasets;
  for (const auto& d : config.datasets) {
    LoadedDataset ld;
    ld.data = load_dataset(d.lang_pair, d.references, d.outputs, d.judgments);
    for (size_t i = 0; i < ld.data.references.size(); ++i) {
      ld.ref_index.emplace(ld.data.references[i].seg_id, i);
    }
    datasets.push_back(std::move(ld));
  }

  std::vector<std::unique_ptr<Scorer>> scorers;
  for (const auto& c : config.configs) scorers.push_back(std::make_unique<Scorer>(c.metric));

  std::vector<CellJob> jobs;
  for (AttackKind attack : config.attacks) {
    for (double p : config.p_grid) {
      for (uint64_t seed : config.seeds) {
        for (size_t d = 0; d < datasets.size(); ++d) jobs.push_back({attack, p, seed, d});
      }
    }
  }

  auto run_cell = [&](const CellJob& job) {
    CellOutcome outcome;
    const auto& ds = datasets[job.dataset].data;
    const auto& ref_index = datasets[job.dataset].ref_index;
    auto fail = [&](const std::string& config_name, const std::string& message) {
      outcome.errors.push_back({std::string(to_string(job.attack)), job.p, job.seed,
                                ds.lang_pair, config_name, one_line(message)});
    };
    try {
      const auto dir = config.out_dir / cell_dir(job.attack, job.p, job.seed, ds.lang_pair);
      const AttackSpec spec{job.attack, job.p, job.seed, resources};
      const auto refs = perturb_corpus(ds.references, spec);
      save_segments(dir / "refs.jsonl", refs);
      const double unk = corpus_unk_stats(refs, vocab).avg_per_segment;

      std::vector<std::pair<std::string, std::string>> pairs;
      pairs.reserve(ds.outputs.size());
      for (const auto& o : ds.outputs) {
        pairs.emplace_back(o.text, refs[ref_index.at(o.seg_id)].text);
      }

      for (size_t c = 0; c < config.configs.size(); ++c) {
        const auto& sm = config.configs[c];
        try {
          const auto items = scorers[c]->score_batch(pairs, 1);
          ScoreMap scores;
          std::string tsv = "system\tseg_id\tf1\tprecision\trecall\n";
          double f1_sum = 0.0;
          for (size_t i = 0; i < items.size(); ++i) {
            const auto& o = ds.outputs[i];
            if (!items[i].score) {
              fail(sm.name, "system " + o.system + " seg_id " + o.seg_id + ": " + items[i].error);
              continue;
            }
            const auto& s = *items[i].score;
            // Shortest round-trip text, so reparsing gives the same doubles.
            tsv += o.system + "\t" + o.seg_id + "\t" + format_shortest(s.f1) + "\t" +
                   format_shortest(s.precision) + "\t" + format_shortest(s.recall) + "\n";
            scores.emplace(std::make_pair(o.system, o.seg_id), s.f1);
            f1_sum += s.f1;
          }
          write_file(dir / (sm.name + ".scores.tsv"), tsv);
          const auto k = kendall_darr(ds.judgments, scores, config.ties);
          ReportRow row;
          row.attack = std::string(to_string(job.attack));
          row.p = job.p;
          row.config = sm.name;
          row.provider = std::string(to_string(sm.metric.provider.kind));
          row.model = sm.metric.provider.model;
          row.layer_policy = sm.metric.policy.label();
          row.lang_pair = ds.lang_pair;
          row.seed = job.seed;
          row.kendall = k.value;
          row.n_pairs = k.n_pairs;
          row.mean_f1 = f1_sum / static_cast<double>(scores.size());
          row.unk_per_segment = unk;
          outcome.rows.push_back(std::move(row));
        } catch (const std::exception& e) {
          fail(sm.name, e.what());
        }
      }
    } catch (const std::exception& e) {
      fail("", e.what());
    }
    return outcome;
  };

  std::vector<CellOutcome> outcomes(jobs.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) outcomes[i] = run_cell(jobs[i]);
  };
  const size_t workers = std::min(config.workers, jobs.size());
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  SweepResult result;
  for (auto& o : outcomes) {
    std::move(o.rows.begin(), o.rows.end(), std::back_inserter(result.rows));
    std::move(o.errors.begin(), o.errors.end(), std::back_inserter(result.errors));
  }

  std::string errors = "attack\tp\tseed\tlang_pair\tconfig\tmessage\n";
  for (const auto& e : result.errors) {
    errors += e.attack + "\t" + format_shortest(e.p) + "\t" + std::to_string(e.seed) + "\t" +
              e.lang_pair + "\t" + e.config + "\t" + e.message + "\n";
  }
  write_file(config.out_dir / "errors.tsv", errors);
  return result;
}

std::string format_sweep_csv(const std::vector<ReportRow>& rows) {
  std::string out =
      "attack,p,config,provider,model,layer_policy,lang_pair,seed,kendall,n_pairs,mean_f1,"
      "unk_per_segment\n";
  for (const auto& r : rows) {
    out += csv_field(r.attack) + "," + format_shortest(r.p) + "," + csv_field(r.config) + "," +
           csv_field(r.provider) + "," + csv_field(r.model) + "," + csv_field(r.layer_policy) +
           "," + csv_field(r.lang_pair) + "," + std::to_string(r.seed) + "," +
           format_fixed(r.kendall, 6) + "," + std::to_string(r.n_pairs) + "," +
           format_fixed(r.mean_f1, 6) + "," + format_fixed(r.unk_per_segment, 6) + "\n";
  }
  return out;
}

std::string format_summary_md(const std::vector<ReportRow>& rows, const SweepConfig& config) {
  std::vector<std::string> pairs;
  for (const auto& d : config.datasets) pairs.push_back(d.lang_pair);

  std::ostringstream out;
  out << "# Sweep summary\n\n"
      << "Mean segment-level Kendall per config and language pair, averaged over attacks, "
         "perturbation levels and seeds.\n\n";
  out << "| config |";
  for (const auto& lp : pairs) out << ' ' << lp << " |";
  out << " Average |\n|---|";
  for (size_t i = 0; i < pairs.size(); ++i) out << "---:|";
  out << "---:|\n";

  for (const auto& c : config.configs) {
    std::map<std::string, double> per_pair;
    for (const auto& lp : pairs) {
      double sum = 0.0;
      size_t n = 0;
      for (const auto& r : rows) {
        if (r.config == c.name && r.lang_pair == lp) {
          sum += r.kendall;
          ++n;
        }
      }
      if (n > 0) per_pair[lp] = sum / static_cast<double>(n);
    }
    out << "| " << c.name << " |";
    for (const auto& lp : pairs) {
      const auto it = per_pair.find(lp);
      out << ' ' << (it == per_pair.end() ? std::string("n/a") : format_fixed(it->second, 6))
          << " |";
    }
    out << ' ' << (per_pair.empty() ? std::string("n/a") : format_fixed(average_over_pairs(per_pair), 6))
        << " |\n";
  }
  return out.str();
}

std::string format_curves_csv(const std::vector<ReportRow>& rows, const SweepConfig& config) {
  std::string out = "config,p,mean_kendall,mean_f1,unk_per_segment,n_rows\n";
  for (const auto& c : config.configs) {
    for (double p : config.p_grid) {
      double k = 0.0, f1 = 0.0, unk = 0.0;
      size_t n = 0;
      for (const auto& r : rows) {
        if (r.config == c.name && r.p == p) {
          k += r.kendall;
          f1 += r.mean_f1;
          unk += r.unk_per_segment;
          ++n;
        }
      }
      const double d = n > 0 ? static_cast<double>(n) : 1.0;
      out += csv_field(c.name) + "," + format_shortest(p) + "," +
             (n > 0 ? format_fixed(k / d, 6) : "") + "," + (n > 0 ? format_fixed(f1 / d, 6) : "") +
             "," + (n > 0 ? format_fixed(unk / d, 6) : "") + "," + std::to_string(n) + "\n";
    }
  }
  return out;
}

void emit_report(const std::vector<ReportRow>& rows, const SweepConfig& config) {
  if (rows.empty()) throw ValidationError("no report rows to emit");
  write_file(config.out_dir / "sweep.csv", format_sweep_csv(rows));
  write_file(config.out_dir / "summary.md", format_summary_md(rows, config));
  write_file(config.out_dir / "curves.csv", format_curves_csv(rows, config));
}

}  // namespace robeval
