#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "prefrules/error.hpp"
#include "prefrules/lrar.hpp"

namespace prefrules {
namespace {

using nlohmann::json;

json attribute_json(const Attribute& a) {
  json j = {{"name", a.name}, {"values", a.values}};
  if (a.discretized()) j["edges"] = a.edges;
  return j;
}

Attribute attribute_from_json(const json& j) {
  Attribute a;
  a.name = j.at("name").get<std::string>();
  a.kind = AttributeKind::categorical;
  a.values = j.at("values").get<std::vector<std::string>>();
  if (j.contains("edges")) a.edges = j.at("edges").get<std::vector<double>>();
  return a;
}

Descriptor parse_descriptor(const std::string& text, std::span<const Attribute> attributes) {
  std::size_t best = attributes.size();
  std::size_t best_len = 0;
  std::string value;
  for (std::size_t a = 0; a < attributes.size(); ++a) {
    const auto& name = attributes[a].name;
    if (text.size() <= name.size() || text.compare(0, name.size(), name) != 0 || name.size() < best_len) continue;
    const auto rest = std::string_view(text).substr(name.size());
    const std::string_view separator = attributes[a].discretized() ? "∈" : "=";
    if (rest.substr(0, separator.size()) != separator) continue;
    best = a;
    best_len = name.size();
    value = std::string(rest.substr(separator.size()));
  }
  if (best == attributes.size()) throw ParseError("antecedent item '" + text + "' names no model attribute");
  const auto code = attributes[best].code_of(value);
  if (code == kUnknownValue) throw ParseError("antecedent item '" + text + "' has an unknown value");
  return {static_cast<std::uint32_t>(best), code};
}

bool is_missing(std::string_view cell) { return cell.empty() || cell == "?" || cell == "NA"; }

}  // namespace

std::string rule_json(const LrarRule& rule, std::span<const Attribute> attributes,
                      std::span<const std::string> label_names) {
  json antecedent = json::array();
  for (const auto& d : rule.antecedent) antecedent.push_back(descriptor_text(attributes[d.attribute], d.value));
  const json j = {
      {"antecedent", std::move(antecedent)},
      {"consequent", to_text(rule.consequent, label_names)},
      {"sup_lr", rule.sup_lr},
      {"conf_lr", rule.conf_lr},
      {"lift_lr", rule.lift_lr},
  };
  return j.dump();
}

void write_model(std::ostream& out, const LrarModel& model) {
  json attributes = json::array();
  for (const auto& a : model.attributes) attributes.push_back(attribute_json(a));
  const json header = {{"model",
                        {
                            {"labels", model.label_names},
                            {"default_ranking", to_text(model.default_ranking, model.label_names)},
                            {"attributes", std::move(attributes)},
                            {"params",
                             {
                                 {"minsup", model.params.minsup},
                                 {"minconf", model.params.minconf},
                                 {"theta", model.params.theta},
                                 {"min_imp", model.params.min_imp},
                                 {"alpha", model.params.alpha},
                                 {"base", to_string(model.params.base)},
                             }},
                        }}};
  out << header.dump() << '\n';
  for (const auto& r : model.rules) out << rule_json(r, model.attributes, model.label_names) << '\n';
}

LrarModel read_model(std::istream& in) {
  LrarModel model;
  bool have_header = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      if (!have_header) {
        if (!j.contains("model")) throw ParseError("model file must start with a {\"model\": ...} header");
        const auto& m = j.at("model");
        model.label_names = m.at("labels").get<std::vector<std::string>>();
        for (const auto& a : m.at("attributes")) model.attributes.push_back(attribute_from_json(a));
        model.default_ranking = parse_ranking(m.at("default_ranking").get<std::string>(), model.label_names);
        if (m.contains("params")) {
          const auto& p = m.at("params");
          model.params.minsup = p.value("minsup", model.params.minsup);
          model.params.minconf = p.value("minconf", model.params.minconf);
          model.params.theta = p.value("theta", model.params.theta);
          model.params.min_imp = p.value("min_imp", model.params.min_imp);
          model.params.alpha = p.value("alpha", model.params.alpha);
          model.params.base = similarity_from_string(p.value("base", std::string("tau")));
        }
        have_header = true;
        continue;
      }
      LrarRule rule;
      for (const auto& item : j.at("antecedent")) {
        rule.antecedent.push_back(parse_descriptor(item.get<std::string>(), model.attributes));
      }
      std::sort(rule.antecedent.begin(), rule.antecedent.end(),
                [](const Descriptor& a, const Descriptor& b) { return a.attribute < b.attribute; });
      rule.consequent = parse_ranking(j.at("consequent").get<std::string>(), model.label_names);
      rule.sup_lr = j.at("sup_lr").get<double>();
      rule.conf_lr = j.at("conf_lr").get<double>();
      rule.lift_lr = j.at("lift_lr").get<double>();
      rule.coverage = rule.conf_lr > 0 ? rule.sup_lr / rule.conf_lr : 0.0;
      model.rules.push_back(std::move(rule));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad model line: ") + e.what(), line_no);
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!have_header) throw ParseError("empty model file");
  return model;
}

std::vector<std::vector<ValueCode>> encode_rows(std::string_view csv_text, std::span<const Attribute> attributes,
                                                char delimiter) {
  auto records = read_csv_records(csv_text, delimiter);
  if (records.empty()) throw SchemaError("CSV input has no header row");
  const auto& header = records.front();
  std::vector<std::size_t> column(attributes.size());
  for (std::size_t a = 0; a < attributes.size(); ++a) {
    const auto it = std::find(header.begin(), header.end(), attributes[a].name);
    if (it == header.end()) {
      throw ModelMismatchError("column '" + attributes[a].name + "' required by the model is missing");
    }
    column[a] = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<std::vector<ValueCode>> rows;
  rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& record = records[r];
    if (record.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                       std::to_string(record.size()),
                       r);
    }
    auto& codes = rows.emplace_back(attributes.size(), kUnknownValue);
    for (std::size_t a = 0; a < attributes.size(); ++a) {
      const auto& attr = attributes[a];
      const auto& cell = record[column[a]];
      if (attr.discretized()) {
        double value = 0;
        if (!is_missing(cell)) {
          const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
          if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
            codes[a] = attr.code_of(cell);
            continue;
          }
        }
        codes[a] = attr.bin_of(value);
      } else {
        codes[a] = attr.code_of(cell.empty() ? std::string_view("?") : std::string_view(cell));
      }
    }
  }
  return rows;
}

}  // namespace prefrules
