#include "prefrules/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "prefrules/error.hpp"

namespace prefrules {
namespace {

std::string format_bound(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::vector<std::string> interval_names(const std::vector<double>& edges, int digits) {
  std::vector<std::string> names;
  const std::size_t bins = edges.size() - 1;
  for (std::size_t i = 0; i < bins; ++i) {
    const bool last = i + 1 == bins;
    names.push_back("[" + format_bound(edges[i], digits) + "," + format_bound(edges[i + 1], digits) +
                    (last ? "]" : ")"));
  }
  return names;
}

}  // namespace

ValueCode Attribute::code_of(std::string_view value) const {
  const auto it = std::find(values.begin(), values.end(), value);
  return it == values.end() ? kUnknownValue : static_cast<ValueCode>(it - values.begin());
}

ValueCode Attribute::bin_of(double value) const {
  if (edges.size() < 2) throw ArgumentError("attribute '" + name + "' is not discretized");
  // Interior edges only: edges[1] .. edges[bins-1].
  const auto first = edges.begin() + 1;
  const auto last = edges.end() - 1;
  return static_cast<ValueCode>(std::upper_bound(first, last, value) - first);
}

std::string descriptor_text(const Attribute& attribute, ValueCode value) {
  const auto& name = attribute.values.at(value);
  return attribute.name + (attribute.discretized() ? "∈" : "=") + name;
}

Dataset::Dataset(std::vector<Attribute> attributes, std::vector<std::vector<ValueCode>> codes,
                 std::vector<std::vector<double>> numbers, std::vector<Ranking> targets,
                 std::vector<std::string> label_names)
    : attributes_(std::move(attributes)),
      codes_(std::move(codes)),
      numbers_(std::move(numbers)),
      targets_(std::move(targets)),
      label_names_(std::move(label_names)) {
  const std::size_t m = attributes_.size();
  const std::size_t n = targets_.size();
  if (codes_.size() != m || numbers_.size() != m) throw DimensionError("one column per attribute expected");
  std::set<std::string> names;
  for (std::size_t a = 0; a < m; ++a) {
    const auto& attr = attributes_[a];
    if (!names.insert(attr.name).second) throw SchemaError("duplicate attribute '" + attr.name + "'");
    if (attr.kind == AttributeKind::categorical) {
      if (codes_[a].size() != n) throw DimensionError("column '" + attr.name + "' has the wrong length");
      for (const auto code : codes_[a]) {
        if (code >= attr.values.size()) throw ArgumentError("value code out of range in '" + attr.name + "'");
      }
      std::set<std::string> values(attr.values.begin(), attr.values.end());
      if (values.size() != attr.values.size()) throw SchemaError("duplicate category in '" + attr.name + "'");
    } else if (numbers_[a].size() != n) {
      throw DimensionError("column '" + attr.name + "' has the wrong length");
    }
  }
  for (const auto& t : targets_) {
    if (t.size() != label_names_.size()) throw DimensionError("target ranking length differs from label count");
  }
}

bool Dataset::all_categorical() const noexcept {
  return std::all_of(attributes_.begin(), attributes_.end(),
                     [](const Attribute& a) { return a.kind == AttributeKind::categorical; });
}

std::vector<ValueCode> Dataset::descriptor(std::size_t row) const {
  std::vector<ValueCode> out(attributes_.size());
  for (std::size_t a = 0; a < attributes_.size(); ++a) {
    if (attributes_[a].kind != AttributeKind::categorical) {
      throw ArgumentError("attribute '" + attributes_[a].name + "' is numeric; discretize first");
    }
    out[a] = codes_[a][row];
  }
  return out;
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  std::vector<std::vector<ValueCode>> codes(attributes_.size());
  std::vector<std::vector<double>> numbers(attributes_.size());
  std::vector<Ranking> targets;
  targets.reserve(rows.size());
  for (std::size_t a = 0; a < attributes_.size(); ++a) {
    for (const auto row : rows) {
      if (attributes_[a].kind == AttributeKind::categorical) {
        codes[a].push_back(codes_[a].at(row));
      } else {
        numbers[a].push_back(numbers_[a].at(row));
      }
    }
  }
  for (const auto row : rows) targets.push_back(targets_.at(row));
  return Dataset(attributes_, std::move(codes), std::move(numbers), std::move(targets), label_names_);
}

Dataset equal_width_discretize(const Dataset& ds, int bins) {
  if (bins < 2) throw ArgumentError("equal-width discretization needs at least 2 bins");
  std::vector<Attribute> attributes;
  std::vector<std::vector<ValueCode>> codes;
  for (std::size_t a = 0; a < ds.attribute_count(); ++a) {
    const auto& src = ds.attribute(a);
    if (src.kind == AttributeKind::categorical) {
      attributes.push_back(src);
      codes.push_back(ds.codes(a));
      continue;
    }
    const auto& column = ds.numbers(a);
    Attribute attr;
    attr.name = src.name;
    attr.kind = AttributeKind::categorical;
    double lo = 0;
    double hi = 0;
    if (!column.empty()) {
      const auto [mn, mx] = std::minmax_element(column.begin(), column.end());
      lo = *mn;
      hi = *mx;
    }
    if (lo == hi) {
      attr.edges = {lo, hi};
    } else {
      const double width = (hi - lo) / bins;
      attr.edges.push_back(lo);
      for (int i = 1; i < bins; ++i) attr.edges.push_back(lo + i * width);
      attr.edges.push_back(hi);
    }
    attr.values = interval_names(attr.edges, 6);
    if (std::set<std::string>(attr.values.begin(), attr.values.end()).size() != attr.values.size()) {
      attr.values = interval_names(attr.edges, 17);
    }
    std::vector<ValueCode> column_codes;
    column_codes.reserve(column.size());
    for (const double v : column) column_codes.push_back(attr.bin_of(v));
    attributes.push_back(std::move(attr));
    codes.push_back(std::move(column_codes));
  }
  std::vector<std::vector<double>> numbers(attributes.size());
  return Dataset(std::move(attributes), std::move(codes), std::move(numbers), ds.targets(), ds.label_names());
}

double unique_ranking_proportion(const Dataset& ds) {
  if (ds.empty()) throw EmptyInputError("unique_ranking_proportion of an empty dataset");
  const std::set<Ranking> distinct(ds.targets().begin(), ds.targets().end());
  return static_cast<double>(distinct.size()) / static_cast<double>(ds.size());
}

std::vector<Fold> kfold_split(std::size_t n, int folds, std::uint64_t seed) {
  if (folds < 2) throw ArgumentError("cross-validation needs at least 2 folds");
  if (static_cast<std::size_t>(folds) > n) {
    throw ArgumentError(std::to_string(folds) + " folds requested for " + std::to_string(n) + " instances");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto f = static_cast<std::size_t>(folds);
  std::vector<Fold> out(f);
  std::size_t start = 0;
  for (std::size_t i = 0; i < f; ++i) {
    const std::size_t size = n / f + (i < n % f ? 1 : 0);
    std::vector<char> in_test(n, 0);
    for (std::size_t j = start; j < start + size; ++j) in_test[order[j]] = 1;
    for (std::size_t row = 0; row < n; ++row) (in_test[row] ? out[i].test : out[i].train).push_back(row);
    start += size;
  }
  return out;
}

nlohmann::json dataset_stats(const Dataset& ds) {
  return {
      {"n", ds.size()},
      {"m", ds.attribute_count()},
      {"k", ds.label_count()},
      {"U_pi", unique_ranking_proportion(ds)},
      {"label_names", ds.label_names()},
  };
}

}  // namespace prefrules
