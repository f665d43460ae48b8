#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "subseg/bpe.h"
#include "subseg/error.h"
#include "subseg/io.h"
#include "subseg/utf8.h"

namespace subseg {

namespace {

// Index of the first rule that breaks rank order or topological validity.
std::optional<std::pair<std::size_t, std::string>> find_invalid_rule(
    const std::vector<MergeRule>& rules) {
  std::unordered_set<std::string> products;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const MergeRule& rule = rules[i];
    if (rule.rank != i)
      return std::make_pair(i, "rank " + std::to_string(rule.rank) +
                                   " at position " + std::to_string(i));
    for (const Symbol* side : {&rule.left, &rule.right}) {
      const std::string& text = side->text();
      if (!utf8::is_single_char(text) && products.count(text) == 0)
        return std::make_pair(
            i, "symbol '" + text +
                   "' is neither a character nor the product of an earlier rule");
    }
    products.insert(rule.merged());
  }
  return std::nullopt;
}

}  // namespace

MergeTable::MergeTable(std::vector<MergeRule> rules, std::string trained_on)
    : rules_(std::move(rules)), trained_on_(std::move(trained_on)) {
  if (auto bad = find_invalid_rule(rules_))
    throw ValidationError("invalid merge rule " + std::to_string(bad->first) +
                          ": " + bad->second);
}

MergeTable MergeTable::from_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    std::string trained_on) {
  std::vector<MergeRule> rules;
  rules.reserve(pairs.size());
  for (const auto& [left, right] : pairs)
    rules.push_back({Symbol(left), Symbol(right), rules.size()});
  return MergeTable(std::move(rules), std::move(trained_on));
}

MergeTable MergeTable::prefix(std::size_t k) const {
  if (k > rules_.size())
    throw ValidationError("prefix " + std::to_string(k) + " exceeds table of " +
                          std::to_string(rules_.size()) + " rules");
  MergeTable out;
  out.rules_.assign(rules_.begin(), rules_.begin() + static_cast<std::ptrdiff_t>(k));
  out.trained_on_ = trained_on_;
  return out;
}

void write_merges(std::ostream& out, const MergeTable& table) {
  out << kMergesHeader << '\n';
  if (!table.trained_on().empty()) out << "#trained_on " << table.trained_on() << '\n';
  for (const auto& rule : table.rules())
    out << rule.left.text() << ' ' << rule.right.text() << '\n';
}

std::string merges_to_string(const MergeTable& table) {
  std::ostringstream out;
  write_merges(out, table);
  return out.str();
}

MergeTable read_merges(std::istream& in) {
  constexpr std::string_view kTrainedOn = "#trained_on ";
  LineReader reader(in);
  std::string line;
  if (!reader.next(line) || line != kMergesHeader)
    throw FormatError(1, "missing header '" + std::string(kMergesHeader) + "'");

  std::string trained_on;
  std::vector<MergeRule> rules;
  std::unordered_set<std::string> products;
  while (reader.next(line)) {
    const std::size_t n = reader.line_number();
    if (n == 2 && line.starts_with(kTrainedOn)) {
      trained_on = line.substr(kTrainedOn.size());
      continue;
    }
    const auto space = line.find(' ');
    if (space == std::string::npos || space == 0 || space + 1 == line.size() ||
        line.find(' ', space + 1) != std::string::npos)
      throw FormatError(n, "expected 'LEFT RIGHT', got '" + line + "'");
    try {
      Symbol left(line.substr(0, space));
      Symbol right(line.substr(space + 1));
      for (const Symbol* side : {&left, &right}) {
        if (!utf8::is_single_char(side->text()) && products.count(side->text()) == 0)
          throw ValidationError("symbol '" + side->text() +
                                "' is neither a character nor the product of an "
                                "earlier rule");
      }
      MergeRule rule{std::move(left), std::move(right), rules.size()};
      products.insert(rule.merged());
      rules.push_back(std::move(rule));
    } catch (const ValidationError& e) {
      throw ValidationError("merges line " + std::to_string(n) + ": " + e.what());
    }
  }
  return MergeTable(std::move(rules), std::move(trained_on));
}

MergeTable merges_from_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_merges(in);
}

}  // namespace subseg
