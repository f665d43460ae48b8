#include "subseg/pospipe.h"

#include <istream>
#include <ostream>

#include "subseg/corpus.h"
#include "subseg/error.h"
#include "subseg/utf8.h"

namespace subseg {

namespace {

TaggedWord parse_tagged_token(std::string_view token, std::size_t line_number,
                              std::size_t position) {
  auto fail = [&](const std::string& what) {
    throw FormatError(line_number, "token " + std::to_string(position) + " '" +
                                       std::string(token) + "': " + what);
  };
  TaggedWord tagged;
  std::string current;
  bool in_tags = false;
  auto finish_tag = [&] {
    if (current.empty()) fail("empty tag");
    tagged.tags.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < token.size(); ++i) {
    const char c = token[i];
    if (c == '\\') {
      if (i + 1 == token.size()) fail("trailing backslash");
      switch (token[++i]) {
        case 'p': current += '|'; break;
        case '+': current += '+'; break;
        case '\\': current += '\\'; break;
        default: fail(std::string("unknown escape '\\") + token[i] + "'");
      }
    } else if (c == '|') {
      if (in_tags) fail("more than one '|'");
      if (current.empty()) fail("empty word");
      tagged.word = std::move(current);
      current.clear();
      in_tags = true;
    } else if (c == '+' && in_tags) {
      finish_tag();
    } else {
      current += c;
    }
  }
  if (!in_tags) fail("missing '|TAG'");
  finish_tag();
  return tagged;
}

}  // namespace

TaggedSentence parse_tagged_line(std::string_view line, std::size_t line_number) {
  TaggedSentence sentence;
  const Sentence tokens = split_words(line);
  for (std::size_t t = 0; t < tokens.size(); ++t)
    sentence.push_back(parse_tagged_token(tokens[t], line_number, t + 1));
  return sentence;
}

TaggedCorpus load_tagged(std::istream& in) {
  TaggedCorpus corpus;
  LineReader reader(in);
  std::string line;
  while (reader.next(line)) {
    TaggedSentence sentence = parse_tagged_line(line, reader.line_number());
    for (const auto& word : sentence) corpus.tagset.insert(word.tags.begin(), word.tags.end());
    corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

WordSegmenter WordSegmenter::unseg() {
  return WordSegmenter(SegmentationScheme::unseg());
}

WordSegmenter WordSegmenter::chars() {
  return WordSegmenter(SegmentationScheme::chars());
}

WordSegmenter WordSegmenter::bpe(const MergeTable& table, std::size_t k) {
  WordSegmenter segmenter(SegmentationScheme::bpe(k));
  segmenter.bpe_ = std::make_shared<const BpeSegmenter>(table, k);
  return segmenter;
}

WordSegmenter WordSegmenter::imported(const SegmentedCorpus& corpus) {
  WordSegmenter segmenter(corpus.scheme);
  auto lookup = std::make_shared<std::unordered_map<std::string, SegmentedWord>>();
  for (const auto& row : corpus.rows) {
    for (const auto& word : row) {
      if (!word.is_unk()) lookup->try_emplace(word.surface(), word);
    }
  }
  segmenter.lookup_ = std::move(lookup);
  return segmenter;
}

SegmentedWord WordSegmenter::segment(std::string_view word) const {
  switch (scheme_.kind()) {
    case SegmentationScheme::Kind::kUnseg:
      return SegmentedWord({std::string(word)});
    case SegmentationScheme::Kind::kChar: {
      std::vector<std::string> units;
      for (std::string_view c : utf8::split_chars(word)) units.emplace_back(c);
      return SegmentedWord(std::move(units));
    }
    case SegmentationScheme::Kind::kBpe:
      return bpe_->segment(word);
    case SegmentationScheme::Kind::kMorphImported: {
      auto it = lookup_->find(std::string(word));
      if (it == lookup_->end())
        throw ValidationError("word '" + std::string(word) +
                              "' is missing from the imported segmentation");
      return it->second;
    }
  }
  throw ValidationError("unknown segmentation scheme");
}

std::vector<TagInstance> sentence_instances(const TaggedSentence& sentence,
                                            const WordSegmenter& segmenter) {
  std::vector<SegmentedWord> segmented;
  segmented.reserve(sentence.size());
  for (const auto& word : sentence) segmented.push_back(segmenter.segment(word.word));

  auto context = [&](std::size_t i, std::size_t back) {
    if (i < back) return ContextEntry::bos();
    return ContextEntry{segmented[i - back], sentence[i - back].tags};
  };

  std::vector<TagInstance> instances;
  instances.reserve(sentence.size());
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    instances.push_back(TagInstance{{context(i, 2), context(i, 1)},
                                    segmented[i],
                                    sentence[i].tags});
  }
  return instances;
}

std::vector<TagInstance> gen_instances(std::span<const TaggedSentence> sentences,
                                       const WordSegmenter& segmenter) {
  std::vector<TagInstance> instances;
  for (const auto& sentence : sentences) {
    auto more = sentence_instances(sentence, segmenter);
    instances.insert(instances.end(), std::make_move_iterator(more.begin()),
                     std::make_move_iterator(more.end()));
  }
  return instances;
}

std::string tag_token(std::string_view tag) {
  return "<T:" + std::string(tag) + ">";
}

std::string format_source_line(const TagInstance& instance,
                               const SegmentedLineCodec& codec) {
  std::string out;
  auto sep = [&out] {
    if (!out.empty()) out += ' ';
  };
  for (const auto& entry : instance.context) {
    sep();
    if (entry.is_bos()) {
      out += kBosToken;
      continue;
    }
    codec.append_word(out, *entry.word);
    for (const auto& tag : entry.tags) {
      sep();
      out += tag_token(tag);
    }
  }
  sep();
  codec.append_word(out, instance.focus);
  return out;
}

std::string format_target_line(const TagInstance& instance) {
  std::string out;
  for (std::size_t i = 0; i < instance.target.size(); ++i) {
    if (i > 0) out += ' ';
    out += instance.target[i];
  }
  return out;
}

void emit_seq2seq(std::span<const TagInstance> instances, std::ostream& src,
                  std::ostream& tgt, const SegmentedLineCodec& codec) {
  for (const auto& instance : instances) {
    src << format_source_line(instance, codec) << '\n';
    tgt << format_target_line(instance) << '\n';
  }
}

}  // namespace subseg
