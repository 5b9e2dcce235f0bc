#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "prefrules/error.hpp"
#include "prefrules/ranking.hpp"

namespace prefrules {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

void check_names(std::size_t k, std::span<const std::string> names) {
  if (names.size() < k) {
    throw DimensionError("ranking over " + std::to_string(k) + " labels but only " +
                         std::to_string(names.size()) + " label names");
  }
}

std::string group_text(std::span<const LabelId> group, std::span<const std::string> names) {
  std::string out;
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (i) out += '=';
    out += names[group[i]];
  }
  return out;
}

}  // namespace

std::vector<std::string> default_label_names(std::size_t k) {
  std::vector<std::string> names;
  names.reserve(k);
  for (std::size_t i = 1; i <= k; ++i) names.push_back("L" + std::to_string(i));
  return names;
}

std::string to_text(const Ranking& r, std::span<const std::string> names) {
  check_names(r.size(), names);
  std::string out;
  for (int rank = 1; rank <= r.depth(); ++rank) {
    if (rank > 1) out += '>';
    bool first = true;
    for (LabelId label = 0; label < r.size(); ++label) {
      if (r[label] != rank) continue;
      if (!first) out += '=';
      out += names[label];
      first = false;
    }
  }
  return out;
}

std::string to_vector_text(const Ranking& r) {
  std::string out = "(";
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(r[static_cast<LabelId>(i)]);
  }
  return out + ")";
}

std::string to_text(const PairwiseRelation& rel, std::span<const std::string> names) {
  check_names(std::max(rel.a, rel.b) + 1u, names);
  const auto& a = names[rel.a];
  const auto& b = names[rel.b];
  switch (rel.kind) {
    case PairKind::a_precedes: return a + ">" + b;
    case PairKind::b_precedes: return b + ">" + a;
    case PairKind::tie: return a + "=" + b;
    case PairKind::incomparable: return a + "⊥" + b;
  }
  return {};
}

std::string to_text(const Consolidation& c, std::span<const std::string> names) {
  std::vector<std::string> parts;
  if (c.subranking) {
    if (c.subranking->depth() > 0) parts.push_back(to_text(*c.subranking, names));
  } else {
    for (const auto& path : c.paths) {
      std::string text;
      for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) text += '>';
        text += group_text(path[i], names);
      }
      parts.push_back(std::move(text));
    }
  }
  for (const auto& rel : c.incomparable) parts.push_back(to_text(rel, names));

  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " ∧ ";
    out += parts[i];
  }
  return out;
}

RankingSyntax parse_ranking_syntax(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ParseError("empty ranking");
  RankingSyntax syntax;
  if (text.front() == '(') {
    if (text.back() != ')') throw ParseError("unterminated rank vector '" + std::string(text) + "'");
    std::vector<int> ranks;
    for (const auto field : split(text.substr(1, text.size() - 2), ',')) {
      const auto token = trim(field);
      int value = 0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError("bad rank '" + std::string(token) + "' in '" + std::string(text) + "'");
      }
      ranks.push_back(value);
    }
    syntax.ranks = std::move(ranks);
    return syntax;
  }

  std::set<std::string, std::less<>> seen;
  for (const auto group_field : split(text, '>')) {
    auto& group = syntax.groups.emplace_back();
    for (const auto label_field : split(group_field, '=')) {
      const auto label = trim(label_field);
      if (label.empty()) throw ParseError("empty label in '" + std::string(text) + "'");
      if (!seen.emplace(label).second) {
        throw ParseError("label '" + std::string(label) + "' appears twice in '" + std::string(text) + "'");
      }
      group.emplace_back(label);
    }
  }
  return syntax;
}

Ranking parse_ranking(std::string_view text, std::span<const std::string> names) {
  const auto syntax = parse_ranking_syntax(text);
  if (syntax.ranks) {
    if (syntax.ranks->size() != names.size()) {
      throw ParseError("rank vector has " + std::to_string(syntax.ranks->size()) + " entries, expected " +
                       std::to_string(names.size()));
    }
    try {
      return Ranking(*syntax.ranks);
    } catch (const InvalidOrderError& e) {
      throw ParseError(e.what());
    }
  }
  std::vector<int> ranks(names.size(), 0);
  for (std::size_t g = 0; g < syntax.groups.size(); ++g) {
    for (const auto& label : syntax.groups[g]) {
      const auto it = std::find(names.begin(), names.end(), label);
      if (it == names.end()) throw ParseError("unknown label '" + label + "'");
      ranks[static_cast<std::size_t>(it - names.begin())] = static_cast<int>(g + 1);
    }
  }
  return Ranking(std::move(ranks));
}

}  // namespace prefrules
