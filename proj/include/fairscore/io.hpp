// Copyright 2026 The fairscore Authors
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

// JSON files: instances, score tables and partitions.
//
// Instance:
//   {"cells": [ids], "weights": [...], "scores": [...],
//    "populations": [{"name": ..., "density": [...]}, ...],
//    "targets": [...], "partition": [1-based group indices] | "auto"}
// "weights" defaults to all ones, "targets" and "partition" are optional
// (a missing partition means "auto").
//
// Score table:  {"cells": [ids], "scores": [...]}
// Partition:    [1-based group indices]
//
// Every number is written with 17 significant digits, so doubles survive a
// write/read cycle unchanged.

#ifndef FAIRSCORE_IO_HPP_
#define FAIRSCORE_IO_HPP_

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fairscore/profile_space.hpp"
#include "json.hpp"

namespace fairscore {

using Json = nlohmann::ordered_json;

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Instance {
  ProfileSpace space;
  std::vector<PopulationModel> populations;
  ScoreTable scores;
  std::optional<TargetVector> targets;
  std::optional<Partition> partition;  // nullopt: one group per cell

  bool operator==(const Instance&) const = default;
};

inline std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline bool is_scalar(const Json& j) {
  return !j.is_object() && !j.is_array();
}

inline void write_json(std::ostream& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (j.is_number_float()) {
    out << format_number(j.get<double>());
  } else if (is_scalar(j)) {
    out << j.dump();
  } else if (j.is_array()) {
    bool flat = true;
    for (const auto& e : j) flat &= is_scalar(e);
    if (flat) {
      out << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out << ", ";
        write_json(out, e, indent + 1);
        first = false;
      }
      out << ']';
      return;
    }
    out << "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
      out << inner;
      write_json(out, j[k], indent + 1);
      out << (k + 1 < j.size() ? ",\n" : "\n");
    }
    out << pad << ']';
  } else {
    if (j.empty()) {
      out << "{}";
      return;
    }
    out << "{\n";
    std::size_t k = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++k) {
      out << inner << Json(it.key()).dump() << ": ";
      write_json(out, it.value(), indent + 1);
      out << (k + 1 < j.size() ? ",\n" : "\n");
    }
    out << pad << '}';
  }
}

inline std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

inline Json parse_document(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw InstanceError(std::string(what) + ": JSON syntax error at " +
                        line_column(text, at));
  }
}

inline std::vector<double> number_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw InstanceError(path + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) {
      throw InstanceError(path + "[" + std::to_string(k) + "]: expected a number");
    }
    out.push_back(j[k].get<double>());
  }
  return out;
}

inline std::vector<std::string> label_array(const Json& j,
                                            const std::string& path) {
  if (!j.is_array()) throw InstanceError(path + ": expected an array of labels");
  std::vector<std::string> out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (j[k].is_string()) {
      out.push_back(j[k].get<std::string>());
    } else if (j[k].is_number_integer()) {
      out.push_back(j[k].dump());
    } else {
      throw InstanceError(path + "[" + std::to_string(k) +
                          "]: expected a string or integer label");
    }
  }
  return out;
}

inline Partition partition_from_json(const Json& j, std::size_t cells,
                                     const std::string& path) {
  if (!j.is_array()) {
    throw InstanceError(path + ": expected \"auto\" or an array of group indices");
  }
  if (j.size() != cells) {
    throw InstanceError(path + ": has " + std::to_string(j.size()) +
                        " entries, expected " + std::to_string(cells));
  }
  std::vector<long long> indices;
  indices.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number_integer()) {
      throw InstanceError(path + "[" + std::to_string(k) +
                          "]: expected an integer group index");
    }
    indices.push_back(j[k].get<long long>());
  }
  try {
    return Partition::FromOneBased(indices);
  } catch (const std::invalid_argument& e) {
    throw InstanceError(path + ": " + e.what());
  }
}

inline Json one_based(const Partition& partition) {
  Json out = Json::array();
  for (std::size_t g : partition.assignment()) out.push_back(g + 1);
  return out;
}

}  // namespace detail

inline void write_json(std::ostream& out, const Json& j) {
  detail::write_json(out, j, 0);
  out << '\n';
}

inline std::string to_json_text(const Json& j) {
  std::ostringstream out;
  write_json(out, j);
  return out.str();
}

// Structural parse only; call validate_instance for the numeric invariants.
inline Instance parse_instance(std::string_view text) {
  const Json doc = detail::parse_document(text, "instance");
  if (!doc.is_object()) throw InstanceError("instance: expected a JSON object");
  auto require = [&](const char* key) -> const Json& {
    if (!doc.contains(key)) {
      throw InstanceError(std::string("instance: missing field \"") + key + "\"");
    }
    return doc.at(key);
  };

  Instance inst;
  inst.space.cell_ids = detail::label_array(require("cells"), "cells");
  const std::size_t cells = inst.space.size();
  if (doc.contains("weights")) {
    inst.space.weights = detail::number_array(doc.at("weights"), "weights");
  } else {
    inst.space.weights.assign(cells, 1.0);
  }
  inst.scores.values = detail::number_array(require("scores"), "scores");

  const Json& pops = require("populations");
  if (!pops.is_array()) throw InstanceError("populations: expected an array");
  for (std::size_t i = 0; i < pops.size(); ++i) {
    const std::string path = "populations[" + std::to_string(i) + "]";
    const Json& p = pops[i];
    if (!p.is_object() || !p.contains("density")) {
      throw InstanceError(path + ": expected {\"name\": ..., \"density\": [...]}");
    }
    PopulationModel model;
    model.name = p.contains("name") && p.at("name").is_string()
                     ? p.at("name").get<std::string>()
                     : "p" + std::to_string(i + 1);
    model.density = detail::number_array(p.at("density"), path + ".density");
    inst.populations.push_back(std::move(model));
  }

  if (doc.contains("targets") && !doc.at("targets").is_null()) {
    inst.targets = TargetVector{detail::number_array(doc.at("targets"), "targets")};
  }
  if (doc.contains("partition")) {
    const Json& part = doc.at("partition");
    if (!(part.is_string() && part.get<std::string>() == "auto")) {
      inst.partition = detail::partition_from_json(part, cells, "partition");
    }
  }
  return inst;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InstanceError(path + ": cannot write file");
  out << text;
  if (!out) throw InstanceError(path + ": write failed");
}

inline Instance read_instance(const std::string& path) {
  try {
    return parse_instance(read_text_file(path));
  } catch (const InstanceError& e) {
    throw InstanceError(path + ": " + e.what());
  }
}

inline Json instance_to_json(const Instance& inst) {
  Json doc = Json::object();
  doc["cells"] = inst.space.cell_ids;
  doc["weights"] = inst.space.weights;
  doc["scores"] = inst.scores.values;
  Json pops = Json::array();
  for (const auto& p : inst.populations) {
    Json entry = Json::object();
    entry["name"] = p.name;
    entry["density"] = p.density;
    pops.push_back(std::move(entry));
  }
  doc["populations"] = std::move(pops);
  if (inst.targets) doc["targets"] = inst.targets->y;
  if (inst.partition) {
    doc["partition"] = detail::one_based(*inst.partition);
  } else {
    doc["partition"] = "auto";
  }
  return doc;
}

inline std::string serialize_instance(const Instance& inst) {
  return to_json_text(instance_to_json(inst));
}

inline std::string serialize_score_table(const ProfileSpace& space,
                                         const ScoreTable& table) {
  Json doc = Json::object();
  doc["cells"] = space.cell_ids;
  doc["scores"] = table.values;
  return to_json_text(doc);
}

// Reads a score table and checks that its cells match `space` in order.
inline ScoreTable parse_score_table(std::string_view text,
                                    const ProfileSpace& space) {
  const Json doc = detail::parse_document(text, "score table");
  if (!doc.is_object() || !doc.contains("scores")) {
    throw InstanceError("score table: expected {\"cells\": [...], \"scores\": [...]}");
  }
  ScoreTable table{detail::number_array(doc.at("scores"), "scores")};
  if (table.size() != space.size()) {
    throw InstanceError("score table: has " + std::to_string(table.size()) +
                        " scores, instance has " + std::to_string(space.size()) +
                        " cells");
  }
  if (doc.contains("cells") &&
      detail::label_array(doc.at("cells"), "cells") != space.cell_ids) {
    throw InstanceError("score table: cell labels differ from the instance");
  }
  return table;
}

inline Partition parse_partition(std::string_view text, std::size_t cells) {
  return detail::partition_from_json(detail::parse_document(text, "partition"),
                                     cells, "partition");
}

}  // namespace fairscore

#endif  // FAIRSCORE_IO_HPP_
