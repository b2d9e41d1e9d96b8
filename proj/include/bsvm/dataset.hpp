#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bsvm/errors.hpp"
#include "bsvm/matrix.hpp"

namespace bsvm {

enum class MissingPolicy { drop, impute };
enum class EncodingPolicy { onehot };

inline MissingPolicy missing_policy_from_string(const std::string& s) {
  if (s == "drop") return MissingPolicy::drop;
  if (s == "impute") return MissingPolicy::impute;
  throw ConfigError("unknown missing policy: " + s);
}

struct CsvOptions {
  std::optional<std::string> label_column;    // default: last column
  std::optional<std::string> positive_label;  // default: minority class
  MissingPolicy missing_policy = MissingPolicy::drop;
  EncodingPolicy encoding_policy = EncodingPolicy::onehot;
  char delimiter = ',';
};

/// In-memory binary classification dataset. Labels are +1/-1 with +1
/// mapped from the configured positive class (minority by default).
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> feature_names;
  std::string source_id;
  std::string positive_label_name;

  std::size_t n() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }

  std::size_t count(int label) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
  }

  bool has_both_classes() const { return count(+1) > 0 && count(-1) > 0; }

  Dataset take_rows(std::span<const std::size_t> idx) const {
    Dataset out;
    out.features = features.take_rows(idx);
    out.labels.reserve(idx.size());
    for (std::size_t i : idx) out.labels.push_back(labels[i]);
    out.feature_names = feature_names;
    out.source_id = source_id;
    out.positive_label_name = positive_label_name;
    return out;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline bool is_missing(const std::string& cell) { return cell.empty() || cell == "?"; }

inline bool parse_double(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  char* end = nullptr;
  out = std::strtod(cell.c_str(), &end);
  return end == cell.c_str() + cell.size() && std::isfinite(out);
}

// RFC 4180 style: quoted fields may contain the delimiter, newlines and
// doubled quotes. Accepts \n and \r\n endings.
inline std::vector<std::vector<std::string>> parse_csv_text(const std::string& text,
                                                            char delimiter) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string cell;
  bool quoted = false;
  bool cell_was_quoted = false;

  auto push_cell = [&] {
    fields.push_back(cell_was_quoted ? cell : trim(cell));
    cell.clear();
    cell_was_quoted = false;
  };
  auto push_record = [&] {
    push_cell();
    records.push_back(std::move(fields));
    fields.clear();
  };

  std::size_t i = 0;
  // strip a UTF-8 BOM
  if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) i = 3;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') { cell += '"'; ++i; }
        else quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"' && trim(cell).empty()) {
      quoted = true;
      cell_was_quoted = true;
      cell.clear();
    } else if (c == delimiter) {
      push_cell();
    } else if (c == '\n') {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      push_record();
    } else {
      cell += c;
    }
  }
  if (quoted) throw DataError("csv: unterminated quoted field");
  if (!cell.empty() || !fields.empty()) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    push_record();
  }
  // drop fully empty trailing records
  while (!records.empty() && records.back().size() == 1 && records.back()[0].empty()) {
    records.pop_back();
  }
  return records;
}

}  // namespace detail

/// Loads a two-class CSV dataset. Numeric columns pass through, symbolic
/// columns are one-hot encoded, rows with missing cells are dropped or
/// imputed (mean for numeric, mode for symbolic) per the policy. Rows
/// whose label is missing are always dropped.
inline Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  auto records = detail::parse_csv_text(buf.str(), options.delimiter);

  if (records.size() < 2) throw DataError(path.string() + ": need a header row and data rows");
  const std::vector<std::string> header = records.front();
  const std::size_t ncols = header.size();

  std::size_t label_col = ncols - 1;
  if (options.label_column) {
    auto it = std::find(header.begin(), header.end(), *options.label_column);
    if (it == header.end()) {
      throw DataError(path.string() + ": label column '" + *options.label_column +
                      "' not found");
    }
    label_col = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<std::vector<std::string>> rows(records.begin() + 1, records.end());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != ncols) {
      throw DataError(path.string() + ": row " + std::to_string(r + 2) + " has " +
                      std::to_string(rows[r].size()) + " cells, expected " +
                      std::to_string(ncols));
    }
  }

  // rows without a label are unusable under either policy
  std::erase_if(rows, [&](const auto& row) { return detail::is_missing(row[label_col]); });

  if (options.missing_policy == MissingPolicy::drop) {
    std::erase_if(rows, [&](const auto& row) {
      return std::any_of(row.begin(), row.end(),
                         [](const std::string& c) { return detail::is_missing(c); });
    });
  }
  if (rows.size() < 2) throw DataError(path.string() + ": fewer than 2 usable rows");

  // column typing over non-missing cells
  std::vector<bool> numeric(ncols, true);
  for (std::size_t c = 0; c < ncols; ++c) {
    if (c == label_col) continue;
    for (const auto& row : rows) {
      double v;
      if (!detail::is_missing(row[c]) && !detail::parse_double(row[c], v)) {
        numeric[c] = false;
        break;
      }
    }
  }

  // imputation values
  std::vector<double> col_mean(ncols, 0.0);
  std::vector<std::string> col_mode(ncols);
  if (options.missing_policy == MissingPolicy::impute) {
    for (std::size_t c = 0; c < ncols; ++c) {
      if (c == label_col) continue;
      if (numeric[c]) {
        double sum = 0.0;
        std::size_t cnt = 0;
        for (const auto& row : rows) {
          double v;
          if (!detail::is_missing(row[c]) && detail::parse_double(row[c], v)) {
            sum += v;
            ++cnt;
          }
        }
        col_mean[c] = cnt ? sum / static_cast<double>(cnt) : 0.0;
      } else {
        std::map<std::string, std::size_t> freq;
        for (const auto& row : rows) {
          if (!detail::is_missing(row[c])) ++freq[row[c]];
        }
        std::size_t best = 0;
        for (const auto& [value, cnt] : freq) {
          if (cnt > best) { best = cnt; col_mode[c] = value; }
        }
      }
    }
  }

  // label mapping: two classes, +1 for the requested or minority class
  std::map<std::string, std::size_t> label_counts;
  for (const auto& row : rows) ++label_counts[row[label_col]];
  if (label_counts.size() != 2) {
    std::string seen;
    for (const auto& [v, _] : label_counts) seen += (seen.empty() ? "" : ", ") + v;
    throw DataError(path.string() + ": expected exactly 2 label values, got " +
                    std::to_string(label_counts.size()) + " {" + seen + "}");
  }
  std::string positive;
  if (options.positive_label) {
    if (!label_counts.contains(*options.positive_label)) {
      throw DataError(path.string() + ": positive label '" + *options.positive_label +
                      "' does not occur");
    }
    positive = *options.positive_label;
  } else {
    // minority class; lexicographically smaller name on a tie
    auto it = label_counts.begin();
    auto first = it++;
    positive = (it->second < first->second) ? it->first : first->first;
  }

  // symbolic category dictionaries (sorted for stable encoding)
  std::vector<std::vector<std::string>> categories(ncols);
  for (std::size_t c = 0; c < ncols; ++c) {
    if (c == label_col || numeric[c]) continue;
    std::set<std::string> vals;
    for (const auto& row : rows) {
      vals.insert(detail::is_missing(row[c]) ? col_mode[c] : row[c]);
    }
    categories[c].assign(vals.begin(), vals.end());
  }

  Dataset out;
  for (std::size_t c = 0; c < ncols; ++c) {
    if (c == label_col) continue;
    if (numeric[c]) {
      out.feature_names.push_back(header[c]);
    } else {
      for (const auto& v : categories[c]) out.feature_names.push_back(header[c] + "=" + v);
    }
  }

  for (const auto& row : rows) {
    std::vector<double> feat;
    feat.reserve(out.feature_names.size());
    for (std::size_t c = 0; c < ncols; ++c) {
      if (c == label_col) continue;
      if (numeric[c]) {
        double v = col_mean[c];
        if (!detail::is_missing(row[c])) detail::parse_double(row[c], v);
        feat.push_back(v);
      } else {
        const std::string& cell = detail::is_missing(row[c]) ? col_mode[c] : row[c];
        for (const auto& cat : categories[c]) feat.push_back(cell == cat ? 1.0 : 0.0);
      }
    }
    out.features.append_row(feat);
    out.labels.push_back(row[label_col] == positive ? +1 : -1);
  }

  for (double v : out.features.data()) {
    if (!std::isfinite(v)) throw DataError(path.string() + ": non-finite feature value");
  }

  out.source_id = path.stem().string();
  out.positive_label_name = positive;
  return out;
}

/// One manifest entry drives one load_csv call in batch runs.
struct ManifestEntry {
  std::filesystem::path path;
  CsvOptions options;
};

/// Manifest: a JSON array of {path, label_column, positive_label,
/// missing_policy, delimiter}. Relative paths resolve against the
/// manifest's directory.
inline std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("manifest " + path.string() + ": " + e.what());
  }
  if (!doc.is_array()) throw DataError("manifest must be a JSON array of entries");

  std::vector<ManifestEntry> entries;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("path")) {
      throw DataError("manifest entries must be objects with a 'path' field");
    }
    ManifestEntry e;
    std::filesystem::path p = item.at("path").get<std::string>();
    e.path = p.is_absolute() ? p : path.parent_path() / p;
    if (item.contains("label_column")) {
      e.options.label_column = item.at("label_column").get<std::string>();
    }
    if (item.contains("positive_label")) {
      e.options.positive_label = item.at("positive_label").get<std::string>();
    }
    if (item.contains("missing_policy")) {
      e.options.missing_policy =
          missing_policy_from_string(item.at("missing_policy").get<std::string>());
    }
    if (item.contains("delimiter")) {
      const auto d = item.at("delimiter").get<std::string>();
      if (d.size() != 1) throw ConfigError("manifest delimiter must be one character");
      e.options.delimiter = d[0];
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace bsvm
