/*
 * Copyright 2026 The pragmatune Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pragmatune/perfdb.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "pragmatune/error.h"

namespace pragmatune {
namespace {

constexpr const char* kFixedColumns[] = {"objective", "elapsed_sec", "status",
                                         "duplicate_of", "timestamp"};

bool needs_quotes(std::string_view v) {
  if (v.empty()) return true;  // an unquoted empty field means inactive
  if (v.find_first_of(",\"\r\n") != std::string_view::npos) return true;
  return v.front() == ' ' || v.back() == ' ' || v.front() == '\t' ||
         v.back() == '\t';
}

std::string quote(std::string_view v) {
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string field(std::string_view v) {
  return needs_quotes(v) ? quote(v) : std::string(v);
}

struct CsvField {
  std::string text;
  bool quoted = false;
};
using CsvRow = std::vector<CsvField>;

// RFC 4180 reader; accepts LF or CRLF line ends.
std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  CsvRow row;
  CsvField cur;
  std::size_t i = 0;
  bool at_field_start = true;
  auto end_field = [&] {
    row.push_back(std::move(cur));
    cur = {};
    at_field_start = true;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };
  while (i < text.size()) {
    const char c = text[i];
    if (at_field_start && c == '"') {
      cur.quoted = true;
      at_field_start = false;
      ++i;
      for (;;) {
        if (i >= text.size()) {
          throw Error(Errc::kParseError, "unterminated quoted CSV field");
        }
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            cur.text += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        cur.text += text[i++];
      }
      if (i < text.size() && text[i] != ',' && text[i] != '\n' &&
          text[i] != '\r') {
        throw Error(Errc::kParseError, "text after closing quote in CSV");
      }
      continue;
    }
    at_field_start = false;
    if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      end_row();
      i += 2;
    } else if (c == '\n') {
      end_row();
      ++i;
    } else {
      if (cur.quoted) throw Error(Errc::kParseError, "stray CSV character");
      cur.text += c;
      ++i;
    }
  }
  if (!at_field_start || !row.empty()) end_row();
  return rows;
}

double parse_double(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw Error(Errc::kParseError, std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

std::size_t parse_index(const std::string& s) {
  if (s.empty() ||
      s.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(Errc::kParseError, "bad duplicate_of '" + s + "'");
  }
  return static_cast<std::size_t>(std::stoull(s));
}

std::int32_t value_slot(const Parameter& p, const std::string& v) {
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    if (p.values[i] == v) return static_cast<std::int32_t>(i);
  }
  throw Error(Errc::kParseError,
              "'" + v + "' is not a value of parameter '" + p.name + "'");
}

void check_record_shape(const ParamSpace& space, const EvalRecord& r) {
  if (!space.is_valid(r.config)) {
    throw Error(Errc::kParseError, "record " + std::to_string(r.index) +
                                       " violates the space's conditions");
  }
  if ((r.status == EvalStatus::kOk) != r.objective.has_value()) {
    throw Error(Errc::kParseError, "record " + std::to_string(r.index) +
                                       ": objective present iff status ok");
  }
  if (r.duplicate_of && (*r.duplicate_of == 0 || *r.duplicate_of >= r.index)) {
    throw Error(Errc::kParseError, "record " + std::to_string(r.index) +
                                       ": duplicate_of must name an earlier row");
  }
}

std::vector<EvalRecord> read_csv(const ParamSpace& space,
                                 const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot read " + path.string());
  const std::string text(std::istreambuf_iterator<char>(in), {});
  const auto rows = parse_csv(text);
  if (rows.empty()) throw Error(Errc::kSchemaMismatch, "results.csv is empty");

  const std::size_t d = space.num_parameters();
  const auto& header = rows.front();
  bool header_ok = header.size() == d + std::size(kFixedColumns);
  for (std::size_t i = 0; header_ok && i < header.size(); ++i) {
    const std::string expected =
        i < d ? space.parameter(i).name : kFixedColumns[i - d];
    header_ok = header[i].text == expected;
  }
  if (!header_ok) {
    throw Error(Errc::kSchemaMismatch,
                "results.csv header does not match the space's columns");
  }

  std::vector<EvalRecord> records;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (row.size() != header.size()) {
      throw Error(Errc::kParseError,
                  "row " + std::to_string(r) + " has " +
                      std::to_string(row.size()) + " fields");
    }
    EvalRecord rec;
    rec.index = r;
    rec.config.slots.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      rec.config.slots[i] =
          (!row[i].quoted && row[i].text.empty())
              ? Configuration::kInactive
              : value_slot(space.parameter(i), row[i].text);
    }
    if (!row[d].text.empty()) rec.objective = parse_double(row[d].text, "objective");
    rec.elapsed = parse_double(row[d + 1].text, "elapsed_sec");
    auto status = parse_eval_status(row[d + 2].text);
    if (!status) throw Error(Errc::kParseError, "bad status '" + row[d + 2].text + "'");
    rec.status = *status;
    if (!row[d + 3].text.empty()) rec.duplicate_of = parse_index(row[d + 3].text);
    rec.timestamp = row[d + 4].text;
    check_record_shape(space, rec);
    records.push_back(std::move(rec));
  }
  return records;
}

nlohmann::ordered_json record_to_json(const ParamSpace& space,
                                      const EvalRecord& r) {
  nlohmann::ordered_json j;
  for (std::size_t i = 0; i < space.num_parameters(); ++i) {
    auto v = space.value(r.config, i);
    j[space.parameter(i).name] =
        v ? nlohmann::ordered_json(std::string(*v)) : nlohmann::ordered_json();
  }
  j["objective"] =
      r.objective ? nlohmann::ordered_json(*r.objective) : nlohmann::ordered_json();
  j["elapsed_sec"] = r.elapsed;
  j["status"] = std::string(eval_status_name(r.status));
  j["duplicate_of"] = r.duplicate_of ? nlohmann::ordered_json(*r.duplicate_of)
                                     : nlohmann::ordered_json();
  j["timestamp"] = r.timestamp;
  return j;
}

std::vector<EvalRecord> read_json(const ParamSpace& space,
                                  const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot read " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kParseError, std::string("results.json: ") + e.what());
  }
  if (!doc.is_array()) {
    throw Error(Errc::kSchemaMismatch, "results.json is not an array");
  }
  std::vector<EvalRecord> records;
  const std::size_t d = space.num_parameters();
  for (std::size_t r = 0; r < doc.size(); ++r) {
    const auto& j = doc[r];
    if (!j.is_object()) throw Error(Errc::kSchemaMismatch, "record is not an object");
    for (std::size_t i = 0; i < d; ++i) {
      if (!j.contains(space.parameter(i).name)) {
        throw Error(Errc::kSchemaMismatch,
                    "results.json lacks column '" + space.parameter(i).name + "'");
      }
    }
    for (const char* col : kFixedColumns) {
      if (!j.contains(col)) {
        throw Error(Errc::kSchemaMismatch,
                    std::string("results.json lacks column '") + col + "'");
      }
    }
    EvalRecord rec;
    rec.index = r + 1;
    try {
      rec.config.slots.resize(d);
      for (std::size_t i = 0; i < d; ++i) {
        const auto& v = j[space.parameter(i).name];
        rec.config.slots[i] =
            v.is_null() ? Configuration::kInactive
                        : value_slot(space.parameter(i), v.get<std::string>());
      }
      if (!j["objective"].is_null()) rec.objective = j["objective"].get<double>();
      rec.elapsed = j["elapsed_sec"].get<double>();
      auto status = parse_eval_status(j["status"].get<std::string>());
      if (!status) throw Error(Errc::kParseError, "bad status in results.json");
      rec.status = *status;
      if (!j["duplicate_of"].is_null()) {
        rec.duplicate_of = j["duplicate_of"].get<std::size_t>();
      }
      rec.timestamp = j["timestamp"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::kParseError, std::string("results.json: ") + e.what());
    }
    check_record_shape(space, rec);
    records.push_back(std::move(rec));
  }
  return records;
}

void write_all(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw Error(Errc::kIoError, "cannot write " + path.string());
}

}  // namespace

double quantize_seconds(double seconds) {
  return std::round(seconds * 1e6) / 1e6;
}

std::string format_seconds(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", seconds);
  std::string s(buf);
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

std::string csv_header(const ParamSpace& space) {
  std::string line;
  for (const Parameter& p : space.parameters()) line += field(p.name) + ",";
  for (std::size_t i = 0; i < std::size(kFixedColumns); ++i) {
    line += kFixedColumns[i];
    line += i + 1 < std::size(kFixedColumns) ? "," : "\n";
  }
  return line;
}

std::string csv_row(const ParamSpace& space, const EvalRecord& r) {
  std::string line;
  for (std::size_t i = 0; i < space.num_parameters(); ++i) {
    auto v = space.value(r.config, i);
    if (v) line += field(*v);
    line += ",";
  }
  if (r.objective) line += format_seconds(*r.objective);
  line += "," + format_seconds(r.elapsed) + ",";
  line += eval_status_name(r.status);
  line += ",";
  if (r.duplicate_of) line += std::to_string(*r.duplicate_of);
  line += "," + field(r.timestamp) + "\n";
  return line;
}

PerfDb::PerfDb(ParamSpace space) : space_(std::move(space)) {}

PerfDb PerfDb::create(ParamSpace space, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::kIoError, "cannot create " + dir.string());
  PerfDb db(std::move(space));
  db.dir_ = dir;
  write_all(dir / kCsvName, csv_header(db.space_));
  write_all(dir / kJsonName, "[]\n");
  return db;
}

PerfDb PerfDb::load(ParamSpace space, const std::filesystem::path& dir) {
  auto csv = read_csv(space, dir / kCsvName);
  auto json = read_json(space, dir / kJsonName);
  if (csv != json) {
    throw Error(Errc::kConsistencyError,
                "results.csv and results.json disagree in " + dir.string());
  }
  PerfDb db(std::move(space));
  for (EvalRecord& r : csv) {
    db.first_.try_emplace(r.config, r.index);
    db.records_.push_back(std::move(r));
  }
  db.dir_ = dir;
  return db;
}

void PerfDb::append(EvalRecord record) {
  if (record.index != next_index()) {
    throw Error(Errc::kIndexGap, "expected index " +
                                     std::to_string(next_index()) + ", got " +
                                     std::to_string(record.index));
  }
  if (!space_.is_valid(record.config)) {
    throw Error(Errc::kInvalidArgument, "configuration is not valid for the space");
  }
  if (record.objective) record.objective = quantize_seconds(*record.objective);
  record.elapsed = quantize_seconds(record.elapsed);

  if (dir_) {
    {
      std::ofstream csv(*dir_ / kCsvName, std::ios::binary | std::ios::app);
      csv << csv_row(space_, record);
      csv.flush();
      if (!csv) throw Error(Errc::kIoError, "cannot append to results.csv");
    }
    auto doc = nlohmann::ordered_json::array();
    for (const EvalRecord& r : records_) doc.push_back(record_to_json(space_, r));
    doc.push_back(record_to_json(space_, record));
    const auto tmp = *dir_ / (std::string(kJsonName) + ".tmp");
    write_all(tmp, doc.dump(2) + "\n");
    std::error_code ec;
    std::filesystem::rename(tmp, *dir_ / kJsonName, ec);
    if (ec) throw Error(Errc::kIoError, "cannot replace results.json");
  }
  first_.try_emplace(record.config, record.index);
  records_.push_back(std::move(record));
}

std::optional<std::size_t> PerfDb::contains(const Configuration& config) const {
  auto it = first_.find(config);
  if (it == first_.end()) return std::nullopt;
  return it->second;
}

const EvalRecord& find_min(const PerfDb& db) {
  const EvalRecord* best = nullptr;
  for (const EvalRecord& r : db.records()) {
    if (r.status != EvalStatus::kOk) continue;
    if (!best || *r.objective < *best->objective) best = &r;
  }
  if (!best) {
    throw Error(Errc::kNoSuccessfulEvaluation, "no record with status ok");
  }
  return *best;
}

}  // namespace pragmatune
