#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

#include "prefrules/dataset.hpp"
#include "prefrules/error.hpp"

namespace prefrules {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

bool is_missing(std::string_view cell) { return cell.empty() || cell == "?" || cell == "NA"; }

std::optional<double> parse_number(std::string_view cell) {
  double value = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::string quote(std::string_view field, char delimiter) {
  if (field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) == std::string_view::npos &&
      (field.empty() || (field.front() != ' ' && field.back() != ' '))) {
    return std::string(field);
  }
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::vector<std::string>> read_csv_records(std::string_view text, char delimiter) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_quoted = false;
  bool any = false;

  const auto end_field = [&] {
    record.push_back(field_quoted ? field : trim(field));
    field.clear();
    field_quoted = false;
  };
  const auto end_record = [&] {
    end_field();
    const bool blank = record.size() == 1 && record.front().empty();
    if (!blank) records.push_back(std::move(record));
    record.clear();
    any = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    any = true;
    if (c == '"' && trim(field).empty()) {
      field.clear();
      in_quotes = true;
      field_quoted = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      // CRLF line endings
    } else {
      field += c;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field", records.size() + 1);
  if (any || !field.empty() || !record.empty()) end_record();
  return records;
}

Dataset parse_csv(std::string_view text, std::string_view target_column, CsvOptions options) {
  auto records = read_csv_records(text, options.delimiter);
  if (records.empty()) throw SchemaError("CSV input has no header row");
  const auto header = std::move(records.front());
  records.erase(records.begin());

  for (std::size_t c = 0; c < header.size(); ++c) {
    for (std::size_t d = c + 1; d < header.size(); ++d) {
      if (header[c] == header[d]) throw SchemaError("duplicate column '" + header[c] + "'");
    }
  }
  const auto target_it = std::find(header.begin(), header.end(), target_column);
  const bool has_target = target_it != header.end();
  if (!has_target && !options.target_optional) {
    throw SchemaError("missing target column '" + std::string(target_column) + "' (header row, columns: " +
                      std::to_string(header.size()) + ")");
  }
  const std::size_t target_index =
      has_target ? static_cast<std::size_t>(target_it - header.begin()) : header.size();

  for (std::size_t r = 0; r < records.size(); ++r) {
    if (records[r].size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                       std::to_string(records[r].size()),
                       r + 1);
    }
  }

  // Targets: resolve the label universe by first appearance.
  std::vector<std::string> label_names;
  std::vector<Ranking> targets;
  if (has_target) {
    std::vector<RankingSyntax> syntax;
    syntax.reserve(records.size());
    const auto intern = [&](const std::string& name) {
      if (std::find(label_names.begin(), label_names.end(), name) == label_names.end()) {
        label_names.push_back(name);
      }
    };
    for (std::size_t r = 0; r < records.size(); ++r) {
      try {
        syntax.push_back(parse_ranking_syntax(records[r][target_index]));
      } catch (const ParseError& e) {
        throw ParseError("column '" + header[target_index] + "': " + e.what(), r + 1);
      }
      const auto& s = syntax.back();
      if (s.ranks) {
        for (const auto& name : default_label_names(s.ranks->size())) intern(name);
      } else {
        for (const auto& group : s.groups) {
          for (const auto& label : group) intern(label);
        }
      }
    }
    const std::size_t k = label_names.size();
    // A universe of exactly L1..Lk keeps index order, so text and vector forms agree.
    if (auto defaults = default_label_names(k); std::is_permutation(label_names.begin(), label_names.end(),
                                                                    defaults.begin(), defaults.end())) {
      label_names = std::move(defaults);
    }
    const auto position = [&](const std::string& label) {
      return static_cast<std::size_t>(std::find(label_names.begin(), label_names.end(), label) - label_names.begin());
    };
    for (std::size_t r = 0; r < records.size(); ++r) {
      std::vector<int> ranks(k, 0);
      const auto& s = syntax[r];
      if (s.ranks) {
        if (s.ranks->size() != k) {
          throw ParseError("column '" + header[target_index] + "': rank vector '" + records[r][target_index] + "' has " + std::to_string(s.ranks->size()) +
                               " entries, expected " + std::to_string(k),
                           r + 1);
        }
        const auto names = default_label_names(k);
        for (std::size_t i = 0; i < k; ++i) ranks[position(names[i])] = (*s.ranks)[i];
      } else {
        for (std::size_t g = 0; g < s.groups.size(); ++g) {
          for (const auto& label : s.groups[g]) {
            ranks[position(label)] = static_cast<int>(g + 1);
          }
        }
      }
      try {
        targets.emplace_back(std::move(ranks));
      } catch (const InvalidOrderError& e) {
        throw ParseError("column '" + header[target_index] + "': invalid ranking '" + records[r][target_index] + "': " + e.what(), r + 1);
      }
    }
  } else {
    targets.assign(records.size(), Ranking{});
  }

  std::vector<Attribute> attributes;
  std::vector<std::vector<ValueCode>> codes;
  std::vector<std::vector<double>> numbers;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == target_index) continue;
    Attribute attr;
    attr.name = header[c];

    bool numeric = false;
    for (const auto& record : records) {
      const auto& cell = record[c];
      if (is_missing(cell)) continue;
      numeric = parse_number(cell).has_value();
      if (!numeric) break;
    }

    std::vector<ValueCode> column_codes;
    std::vector<double> column_numbers;
    if (numeric) {
      attr.kind = AttributeKind::numeric;
      column_numbers.reserve(records.size());
      for (const auto& record : records) {
        column_numbers.push_back(is_missing(record[c]) ? 0.0 : *parse_number(record[c]));
      }
    } else {
      attr.kind = AttributeKind::categorical;
      std::map<std::string, ValueCode, std::less<>> index;
      column_codes.reserve(records.size());
      for (const auto& record : records) {
        const std::string value = record[c].empty() ? "?" : record[c];
        auto [it, inserted] = index.emplace(value, static_cast<ValueCode>(attr.values.size()));
        if (inserted) attr.values.push_back(value);
        column_codes.push_back(it->second);
      }
    }
    attributes.push_back(std::move(attr));
    codes.push_back(std::move(column_codes));
    numbers.push_back(std::move(column_numbers));
  }

  return Dataset(std::move(attributes), std::move(codes), std::move(numbers), std::move(targets),
                 std::move(label_names));
}

std::string to_csv(const Dataset& ds, std::string_view target_column) {
  constexpr char delimiter = ',';
  const bool vector_form = ds.label_names() == default_label_names(ds.label_count());
  std::string out;
  for (const auto& attr : ds.attributes()) {
    out += quote(attr.name, delimiter);
    out += delimiter;
  }
  out += quote(target_column, delimiter);
  out += '\n';
  for (std::size_t row = 0; row < ds.size(); ++row) {
    for (std::size_t a = 0; a < ds.attribute_count(); ++a) {
      const auto& attr = ds.attribute(a);
      if (attr.kind == AttributeKind::numeric) {
        out += format_number(ds.number(row, a));
      } else {
        out += quote(attr.values[ds.code(row, a)], delimiter);
      }
      out += delimiter;
    }
    const auto& target = ds.target(row);
    out += quote(vector_form ? to_vector_text(target) : to_text(target, ds.label_names()), delimiter);
    out += '\n';
  }
  return out;
}

}  // namespace prefrules
