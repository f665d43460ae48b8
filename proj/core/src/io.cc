#include "subseg/io.h"

#include <istream>
#include <ostream>

#include "subseg/corpus.h"
#include "subseg/error.h"
#include "subseg/utf8.h"

namespace subseg {

bool LineReader::next(std::string& line) {
  if (!std::getline(in_, line)) return false;
  line_offset_ = next_offset_;
  next_offset_ += line.size() + (in_.eof() ? 0 : 1);
  ++line_number_;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  utf8::validate(line, line_offset_);
  return true;
}

SegmentedLineCodec::SegmentedLineCodec(std::string marker, std::string boundary,
                                       std::string unk)
    : marker_(std::move(marker)), boundary_(std::move(boundary)), unk_(std::move(unk)) {
  if (marker_.empty()) throw ValidationError("continuation marker is empty");
  if (marker_ == boundary_)
    throw ValidationError("continuation marker equals the boundary symbol");
  if (unk_.empty() || unk_ == marker_)
    throw ValidationError("UNK symbol is empty or equals the marker");
}

SegmentedLineCodec SegmentedLineCodec::from(const Sentinels& sentinels) {
  return SegmentedLineCodec(sentinels.marker, sentinels.boundary, sentinels.unk);
}

void SegmentedLineCodec::append_word(std::string& out,
                                     const SegmentedWord& word) const {
  const auto& units = word.units();
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (i > 0) out += ' ';
    out += units[i];
    if (word.continues(i)) out += marker_;
  }
}

std::string SegmentedLineCodec::format(std::span<const SegmentedWord> row) const {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) out += ' ';
    append_word(out, row[i]);
  }
  return out;
}

SegmentedRow SegmentedLineCodec::parse(std::string_view line,
                                       std::size_t line_number) const {
  SegmentedRow row;
  std::vector<std::string> pending;
  const Sentence tokens = split_words(line);
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const std::string& token = tokens[t];
    auto where = [&] { return "token " + std::to_string(t + 1) + " '" + token + "': "; };
    if (token == unk_) {
      if (!pending.empty())
        throw FormatError(line_number, where() + "UNK inside a segmented word");
      row.push_back(SegmentedWord::unk(unk_));
      continue;
    }
    const bool continues = token.size() >= marker_.size() &&
                           token.compare(token.size() - marker_.size(),
                                         marker_.size(), marker_) == 0;
    std::string unit = continues ? token.substr(0, token.size() - marker_.size()) : token;
    if (unit.empty()) throw FormatError(line_number, where() + "empty unit");
    if (unit.find(marker_) != std::string::npos)
      throw FormatError(line_number, where() + "continuation marker inside a unit");
    pending.push_back(std::move(unit));
    if (!continues) {
      row.emplace_back(std::move(pending));
      pending.clear();
    }
  }
  if (!pending.empty())
    throw FormatError(line_number, "dangling continuation marker at end of sentence");
  return row;
}

bool SegmentedReader::next(SegmentedRow& row) {
  if (!lines_.next(line_)) return false;
  row = codec_.parse(line_, lines_.line_number());
  return true;
}

void SegmentedWriter::write(std::span<const SegmentedWord> row) {
  buffer_.clear();
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) buffer_ += ' ';
    codec_.append_word(buffer_, row[i]);
  }
  buffer_ += '\n';
  out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
}

SegmentedCorpus read_segmented_corpus(std::istream& in,
                                      const SegmentedLineCodec& codec,
                                      SegmentationScheme scheme) {
  SegmentedCorpus corpus;
  corpus.scheme = scheme;
  SegmentedReader reader(in, codec);
  SegmentedRow row;
  while (reader.next(row)) {
    for (const auto& word : row) corpus.unk_count += word.is_unk() ? 1 : 0;
    corpus.rows.push_back(std::move(row));
  }
  return corpus;
}

void write_segmented_corpus(std::ostream& out, const SegmentedCorpus& corpus,
                            const SegmentedLineCodec& codec) {
  SegmentedWriter writer(out, codec);
  for (const auto& row : corpus.rows) writer.write(row);
}

SegmentedCorpus SegmentedImporter::import(std::istream& in,
                                          const SegmentedLineCodec& codec) {
  return read_segmented_corpus(
      in, codec, SegmentationScheme::morph_imported(SegmentationScheme::ImportKey()));
}

std::string format_units(std::span<const std::string> units) {
  std::string out;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (i > 0) out += ' ';
    out += units[i];
  }
  return out;
}

std::vector<std::string> parse_units(std::string_view line) {
  return split_words(line);
}

}  // namespace subseg
