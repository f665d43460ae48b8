#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "subseg/types.h"

namespace subseg {

// Incremental line reader. Accepts "\n" and "\r\n" terminators, validates
// UTF-8 and reports decode errors with offsets from the start of the stream.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Reads the next line without its terminator. Returns false at EOF.
  bool next(std::string& line);

  // 1-based number of the last line returned.
  std::size_t line_number() const noexcept { return line_number_; }
  // Byte offset of the start of the last line returned.
  std::uint64_t line_offset() const noexcept { return line_offset_; }

 private:
  std::istream& in_;
  std::size_t line_number_ = 0;
  std::uint64_t line_offset_ = 0;
  std::uint64_t next_offset_ = 0;
};

// Text form of segmented sentences: units separated by one space, every
// non-final unit of a word suffixed with the continuation marker
// ("ab@@ d"). The UNK unit stands alone.
class SegmentedLineCodec {
 public:
  SegmentedLineCodec() = default;
  // Throws ValidationError when marker is empty or equals the boundary.
  SegmentedLineCodec(std::string marker, std::string boundary,
                     std::string unk = std::string(kDefaultUnk));
  static SegmentedLineCodec from(const Sentinels& sentinels);

  const std::string& marker() const noexcept { return marker_; }
  const std::string& boundary() const noexcept { return boundary_; }
  const std::string& unk() const noexcept { return unk_; }

  void append_word(std::string& out, const SegmentedWord& word) const;
  std::string format(std::span<const SegmentedWord> row) const;

  // Throws FormatError (with the given line number) on a dangling marker,
  // an empty unit, a marker inside a unit, or UNK inside a multi-unit word.
  SegmentedRow parse(std::string_view line, std::size_t line_number = 1) const;

 private:
  std::string marker_{kDefaultMarker};
  std::string boundary_{kDefaultBoundary};
  std::string unk_{kDefaultUnk};
};

class SegmentedReader {
 public:
  SegmentedReader(std::istream& in, SegmentedLineCodec codec)
      : lines_(in), codec_(std::move(codec)) {}

  bool next(SegmentedRow& row);
  std::size_t line_number() const noexcept { return lines_.line_number(); }

 private:
  LineReader lines_;
  SegmentedLineCodec codec_;
  std::string line_;
};

class SegmentedWriter {
 public:
  SegmentedWriter(std::ostream& out, SegmentedLineCodec codec)
      : out_(out), codec_(std::move(codec)) {}

  void write(std::span<const SegmentedWord> row);

 private:
  std::ostream& out_;
  SegmentedLineCodec codec_;
  std::string buffer_;
};

// Reads a whole segmented file. UNK units are counted into unk_count.
SegmentedCorpus read_segmented_corpus(std::istream& in,
                                      const SegmentedLineCodec& codec,
                                      SegmentationScheme scheme);
void write_segmented_corpus(std::ostream& out, const SegmentedCorpus& corpus,
                            const SegmentedLineCodec& codec);

// Ingests the output of an external (morphological) segmenter written in the
// segmented-line format. This is the only way to obtain a MORPH-IMPORTED
// scheme.
class SegmentedImporter {
 public:
  static SegmentedCorpus import(std::istream& in,
                                const SegmentedLineCodec& codec);
};

// Character-segmented lines: units separated by one space.
std::string format_units(std::span<const std::string> units);
std::vector<std::string> parse_units(std::string_view line);

}  // namespace subseg
