#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "prefrules/ranking.hpp"

namespace prefrules {

enum class AttributeKind { categorical, numeric };

/// Category index of one attribute value.
using ValueCode = std::uint32_t;
inline constexpr ValueCode kUnknownValue = std::numeric_limits<ValueCode>::max();

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::categorical;
  /// Category names; for a discretized attribute these are interval names.
  std::vector<std::string> values;
  /// Bin edges lo = e[0] < ... < e[bins] = hi of a discretized attribute.
  /// Bin i is [e[i], e[i+1]), the last bin is closed. Values outside the
  /// training range fall into the first or last bin.
  std::vector<double> edges;

  bool discretized() const noexcept { return kind == AttributeKind::categorical && !edges.empty(); }
  /// Index of a category name, or kUnknownValue.
  ValueCode code_of(std::string_view value) const;
  /// Bin of a raw number for a discretized attribute.
  ValueCode bin_of(double value) const;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

/// `attr=value`, or `attr∈[lo,hi)` for a discretized attribute.
std::string descriptor_text(const Attribute& attribute, ValueCode value);

/// Instance table D = {<x_i, pi_i>} stored column-wise.
///
/// Categorical columns hold category codes, numeric columns hold raw numbers.
/// After discretization every column is categorical.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<Attribute> attributes, std::vector<std::vector<ValueCode>> codes,
          std::vector<std::vector<double>> numbers, std::vector<Ranking> targets,
          std::vector<std::string> label_names);

  std::size_t size() const noexcept { return targets_.size(); }
  bool empty() const noexcept { return targets_.empty(); }
  std::size_t attribute_count() const noexcept { return attributes_.size(); }
  std::size_t label_count() const noexcept { return label_names_.size(); }

  const std::vector<Attribute>& attributes() const noexcept { return attributes_; }
  const Attribute& attribute(std::size_t a) const { return attributes_.at(a); }
  const std::vector<std::string>& label_names() const noexcept { return label_names_; }
  const std::vector<Ranking>& targets() const noexcept { return targets_; }
  const Ranking& target(std::size_t row) const { return targets_.at(row); }

  /// Category code of a categorical column.
  ValueCode code(std::size_t row, std::size_t a) const { return codes_[a][row]; }
  double number(std::size_t row, std::size_t a) const { return numbers_[a][row]; }
  const std::vector<ValueCode>& codes(std::size_t a) const { return codes_[a]; }
  const std::vector<double>& numbers(std::size_t a) const { return numbers_[a]; }

  bool all_categorical() const noexcept;
  /// Codes of one row; requires all_categorical().
  std::vector<ValueCode> descriptor(std::size_t row) const;

  /// Rows in the given order (duplicates allowed).
  Dataset subset(const std::vector<std::size_t>& rows) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Attribute> attributes_;
  std::vector<std::vector<ValueCode>> codes_;
  std::vector<std::vector<double>> numbers_;
  std::vector<Ranking> targets_;
  std::vector<std::string> label_names_;
};

struct CsvOptions {
  char delimiter = ',';
  /// Target column may be absent (prediction input); rows then get an empty ranking.
  bool target_optional = false;
};

/// Reads a CSV table with a header row. The target column holds rankings in
/// text form (`a>b=c`) or rank-vector form (`(1,2,2)`). Labels are numbered by
/// first appearance, except that a universe of exactly L1..Lk keeps index order
/// (vector cells name L1..Lk).
Dataset parse_csv(std::string_view text, std::string_view target_column, CsvOptions options = {});

/// Writes the table back in the form parse_csv reads. Targets use text form,
/// or rank-vector form when the label names are the defaults L1..Lk (so that
/// label order survives a round trip).
std::string to_csv(const Dataset& ds, std::string_view target_column = "ranking");

/// Raw CSV records (header included), with RFC 4180 quoting.
std::vector<std::vector<std::string>> read_csv_records(std::string_view text, char delimiter = ',');

/// Equal-width binning of every numeric attribute; categorical columns are kept.
Dataset equal_width_discretize(const Dataset& ds, int bins);

/// Fraction of distinct target rankings.
double unique_ranking_proportion(const Dataset& ds);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded shuffle, then contiguous folds whose sizes differ by at most one.
std::vector<Fold> kfold_split(std::size_t n, int folds, std::uint64_t seed);
inline std::vector<Fold> kfold_split(const Dataset& ds, int folds, std::uint64_t seed) {
  return kfold_split(ds.size(), folds, seed);
}

/// {n, m, k, U_pi, label_names}
nlohmann::json dataset_stats(const Dataset& ds);

}  // namespace prefrules
