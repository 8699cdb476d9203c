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

#include "robeval/corpusio.hpp"

#include <fstream>
#include <map>
#include <set>
#include <utility>

#include "json.hpp"
#include "robeval/error.hpp"
#include "robeval/text.hpp"

namespace robeval {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string required_string(const ordered_json& obj, const char* key,
                            const std::string& source, size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError(
        at_line(source, line, std::string("missing field \"") + key + "\""));
  }
  if (!it->is_string()) {
    throw ValidationError(at_line(
        source, line, std::string("field \"") + key + "\" must be a string"));
  }
  return it->get<std::string>();
}

// Calls fn(object, line_number) for each non-blank line.
template <typename Fn>
void for_each_json_line(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ordered_json obj;
    try {
      obj = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(
          at_line(source, number, std::string("malformed JSON: ") + e.what()));
    }
    if (!obj.is_object()) {
      throw ValidationError(at_line(source, number, "expected a JSON object"));
    }
    fn(obj, number);
  }
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::string dump(const ordered_json& j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

}  // namespace

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::vector<Segment> parse_segments(std::istream& in, const std::string& source) {
  std::vector<Segment> segments;
  std::map<std::string, size_t> seen;
  for_each_json_line(in, source, [&](const ordered_json& obj, size_t line) {
    Segment seg{required_string(obj, "seg_id", source, line),
                required_string(obj, "text", source, line)};
    if (auto [it, inserted] = seen.emplace(seg.seg_id, line); !inserted) {
      throw ValidationError(at_line(source, line,
                                    "duplicate seg_id \"" + seg.seg_id +
                                        "\" (first on line " +
                                        std::to_string(it->second) + ")"));
    }
    segments.push_back(std::move(seg));
  });
  return segments;
}

std::vector<SystemOutput> parse_outputs(std::istream& in, const std::string& source) {
  std::vector<SystemOutput> outputs;
  std::set<std::pair<std::string, std::string>> seen;
  for_each_json_line(in, source, [&](const ordered_json& obj, size_t line) {
    SystemOutput out{required_string(obj, "seg_id", source, line),
                     required_string(obj, "system", source, line),
                     required_string(obj, "text", source, line)};
    if (!seen.emplace(out.seg_id, out.system).second) {
      throw ValidationError(at_line(source, line,
                                    "duplicate output for system \"" +
                                        out.system + "\", seg_id \"" +
                                        out.seg_id + "\""));
    }
    outputs.push_back(std::move(out));
  });
  return outputs;
}

std::vector<JudgmentPair> parse_judgments(std::istream& in, const std::string& source) {
  std::vector<JudgmentPair> judgments;
  std::string line;
  size_t number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (line != "lang_pair\tseg_id\tbetter\tworse") {
        throw ValidationError(at_line(
            source, number, "expected header lang_pair<TAB>seg_id<TAB>better<TAB>worse"));
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 4) {
      throw ValidationError(at_line(source, number,
                                    "expected 4 tab-separated fields, got " +
                                        std::to_string(fields.size())));
    }
    for (const auto& f : fields) {
      if (f.empty()) throw ValidationError(at_line(source, number, "empty field"));
    }
    if (fields[2] == fields[3]) {
      throw ValidationError(at_line(source, number,
                                    "better and worse system are both \"" +
                                        fields[2] + "\""));
    }
    judgments.push_back({std::move(fields[0]), std::move(fields[1]),
                         std::move(fields[2]), std::move(fields[3])});
  }
  if (!header_seen) throw ValidationError(source + ": missing header line");
  return judgments;
}

std::vector<Segment> load_segments(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_segments(in, path.string());
}

std::vector<SystemOutput> load_outputs(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_outputs(in, path.string());
}

std::vector<JudgmentPair> load_judgments(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_judgments(in, path.string());
}

void write_segments(std::ostream& out, const std::vector<Segment>& segments) {
  for (const auto& seg : segments) {
    ordered_json j;
    j["seg_id"] = seg.seg_id;
    j["text"] = seg.text;
    out << dump(j) << '\n';
  }
}

void write_outputs(std::ostream& out, const std::vector<SystemOutput>& outputs) {
  for (const auto& o : outputs) {
    ordered_json j;
    j["seg_id"] = o.seg_id;
    j["system"] = o.system;
    j["text"] = o.text;
    out << dump(j) << '\n';
  }
}

void write_judgments(std::ostream& out, const std::vector<JudgmentPair>& judgments) {
  out << "lang_pair\tseg_id\tbetter\tworse\n";
  for (const auto& j : judgments) {
    out << j.lang_pair << '\t' << j.seg_id << '\t' << j.better_system << '\t'
        << j.worse_system << '\n';
  }
}

void save_segments(const std::filesystem::path& path,
                   const std::vector<Segment>& segments) {
  auto out = open_output(path);
  write_segments(out, segments);
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

std::vector<std::string> validate_dataset(const Dataset& ds) {
  std::vector<std::string> problems;
  std::set<std::string> refs;
  for (const auto& seg : ds.references) refs.insert(seg.seg_id);
  std::set<std::pair<std::string, std::string>> outputs;
  for (const auto& o : ds.outputs) {
    outputs.emplace(o.system, o.seg_id);
    if (!refs.contains(o.seg_id)) {
      problems.push_back("output of system \"" + o.system +
                         "\" has no reference for seg_id \"" + o.seg_id + "\"");
    }
  }
  for (size_t i = 0; i < ds.judgments.size(); ++i) {
    const auto& j = ds.judgments[i];
    for (const auto* system : {&j.better_system, &j.worse_system}) {
      if (!outputs.contains({*system, j.seg_id})) {
        problems.push_back("judgment " + std::to_string(i + 1) +
                           " references missing output (system \"" + *system +
                           "\", seg_id \"" + j.seg_id + "\")");
      }
    }
  }
  return problems;
}

Dataset load_dataset(const std::string& lang_pair,
                     const std::filesystem::path& references,
                     const std::filesystem::path& outputs,
                     const std::filesystem::path& judgments) {
  Dataset ds{lang_pair, load_segments(references), load_outputs(outputs), {}};
  for (auto& j : load_judgments(judgments)) {
    if (j.lang_pair == lang_pair) ds.judgments.push_back(std::move(j));
  }
  if (const auto problems = validate_dataset(ds); !problems.empty()) {
    std::string message = "dataset " + lang_pair + " is invalid (" +
                          std::to_string(problems.size()) + " problems):";
    for (const auto& p : problems) message += "\n  " + p;
    throw ValidationError(message);
  }
  return ds;
}

DatasetStats dataset_stats(const Dataset& ds) {
  std::set<std::string> systems;
  for (const auto& o : ds.outputs) systems.insert(o.system);
  return {ds.references.size(), systems.size(), ds.judgments.size()};
}

}  // namespace robeval
