#include "subseg/types.h"

#include "subseg/error.h"
#include "subseg/utf8.h"

namespace subseg {

namespace {

bool has_space(std::string_view s) {
  bool found = false;
  utf8::for_each(s, [&](char32_t cp, std::string_view) {
    found = found || utf8::is_space(cp);
  });
  return found;
}

}  // namespace

void Sentinels::validate() const {
  const std::pair<const char*, const std::string*> all[] = {
      {"boundary symbol", &boundary}, {"UNK symbol", &unk}, {"continuation marker", &marker}};
  for (const auto& [name, value] : all) {
    if (value->empty()) throw ValidationError(std::string(name) + " is empty");
    utf8::validate(*value);
    if (has_space(*value))
      throw ValidationError(std::string(name) + " contains whitespace");
  }
  if (boundary == unk || boundary == marker || unk == marker)
    throw ValidationError("reserved symbols must be distinct");
}

std::optional<std::string_view> Sentinels::find_in(std::string_view word) const {
  for (const std::string* s : {&boundary, &unk, &marker}) {
    if (word.find(*s) != std::string_view::npos) return std::string_view(*s);
  }
  return std::nullopt;
}

Symbol::Symbol(std::string text) : text_(std::move(text)) {
  if (text_.empty()) throw ValidationError("empty symbol");
  if (has_space(text_))
    throw ValidationError("symbol contains whitespace: '" + text_ + "'");
}

SegmentedWord::SegmentedWord(std::vector<std::string> units)
    : units_(std::move(units)) {
  if (units_.empty()) throw ValidationError("segmented word without units");
  for (const auto& unit : units_) {
    if (unit.empty()) throw ValidationError("empty unit in segmented word");
  }
}

SegmentedWord SegmentedWord::unk(std::string unk_symbol) {
  SegmentedWord word({std::move(unk_symbol)});
  word.unk_ = true;
  return word;
}

std::string SegmentedWord::surface() const {
  std::string out;
  for (const auto& unit : units_) out += unit;
  return out;
}

std::vector<std::size_t> SegmentedWord::split_positions() const {
  std::vector<std::size_t> positions;
  std::size_t pos = 0;
  for (std::size_t i = 0; i + 1 < units_.size(); ++i) {
    pos += utf8::length(units_[i]);
    positions.push_back(pos);
  }
  return positions;
}

std::string SegmentedWord::joined(std::string_view separator) const {
  std::string out;
  for (std::size_t i = 0; i < units_.size(); ++i) {
    if (i > 0) out += separator;
    out += units_[i];
  }
  return out;
}

std::string SegmentationScheme::name() const {
  switch (kind_) {
    case Kind::kUnseg:
      return "UNSEG";
    case Kind::kChar:
      return "CHAR";
    case Kind::kBpe:
      return "BPE(" + std::to_string(op_) + ")";
    case Kind::kMorphImported:
      return "MORPH-IMPORTED";
  }
  return "?";
}

std::uint64_t SegmentedCorpus::token_count() const {
  std::uint64_t n = 0;
  for (const auto& row : rows) {
    for (const auto& word : row) n += word.size();
  }
  return n;
}

}  // namespace subseg
