#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace subseg {

// A sentence is an ordered list of whitespace-free, non-empty words.
using Sentence = std::vector<std::string>;

inline constexpr std::string_view kDefaultBoundary = "▁";
inline constexpr std::string_view kDefaultUnk = "<unk>";
inline constexpr std::string_view kDefaultMarker = "@@";

// Reserved strings. Input words may not contain any of them.
struct Sentinels {
  std::string boundary{kDefaultBoundary};
  std::string unk{kDefaultUnk};
  std::string marker{kDefaultMarker};

  // Throws ValidationError unless all three are non-empty, whitespace-free
  // and pairwise distinct.
  void validate() const;

  // The first sentinel occurring inside word, if any.
  std::optional<std::string_view> find_in(std::string_view word) const;
};

// An atomic unit of segmentation: non-empty and free of whitespace.
class Symbol {
 public:
  explicit Symbol(std::string text);

  const std::string& text() const noexcept { return text_; }

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;

 private:
  std::string text_;
};

// One word split into units. Every unit but the last carries the
// continuation flag, so the flags are implied by position.
class SegmentedWord {
 public:
  // units must be non-empty and contain no empty string.
  explicit SegmentedWord(std::vector<std::string> units);

  // The single-unit replacement emitted for unknown words.
  static SegmentedWord unk(std::string unk_symbol);

  const std::vector<std::string>& units() const noexcept { return units_; }
  std::size_t size() const noexcept { return units_.size(); }
  bool continues(std::size_t i) const noexcept { return i + 1 < units_.size(); }
  bool is_unk() const noexcept { return unk_; }

  // Concatenated unit texts.
  std::string surface() const;

  // Character offsets (from word start) of the internal unit boundaries.
  std::vector<std::size_t> split_positions() const;

  // Units joined with "|", e.g. "driv|en".
  std::string joined(std::string_view separator = "|") const;

  friend bool operator==(const SegmentedWord&, const SegmentedWord&) = default;

 private:
  std::vector<std::string> units_;
  bool unk_ = false;
};

class SegmentationScheme {
 public:
  enum class Kind { kUnseg, kChar, kBpe, kMorphImported };

  // Only the segmented-file importer can mint a MORPH-IMPORTED scheme.
  class ImportKey {
    ImportKey() = default;
    friend class SegmentedImporter;
  };

  static SegmentationScheme unseg() { return SegmentationScheme(Kind::kUnseg, 0); }
  static SegmentationScheme chars() { return SegmentationScheme(Kind::kChar, 0); }
  static SegmentationScheme bpe(std::size_t op) {
    return SegmentationScheme(Kind::kBpe, op);
  }
  static SegmentationScheme morph_imported(ImportKey) {
    return SegmentationScheme(Kind::kMorphImported, 0);
  }

  Kind kind() const noexcept { return kind_; }
  // The OP value; only meaningful for kBpe.
  std::size_t op() const noexcept { return op_; }

  // "UNSEG", "CHAR", "BPE(30000)" or "MORPH-IMPORTED".
  std::string name() const;

  friend bool operator==(const SegmentationScheme&,
                         const SegmentationScheme&) = default;

 private:
  SegmentationScheme(Kind kind, std::size_t op) : kind_(kind), op_(op) {}

  Kind kind_;
  std::size_t op_;
};

using SegmentedRow = std::vector<SegmentedWord>;

struct SegmentedCorpus {
  SegmentationScheme scheme = SegmentationScheme::unseg();
  std::vector<SegmentedRow> rows;
  // Words replaced by the UNK unit.
  std::uint64_t unk_count = 0;

  // Total number of units.
  std::uint64_t token_count() const;
};

}  // namespace subseg
