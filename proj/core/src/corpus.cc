#include "subseg/corpus.h"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "subseg/error.h"
#include "subseg/io.h"
#include "subseg/utf8.h"

namespace subseg {

Corpus::Corpus(std::vector<Sentence> sentences)
    : sentences_(std::move(sentences)) {
  for (const auto& sentence : sentences_) {
    token_count_ += sentence.size();
    for (const auto& word : sentence) ++type_counts_[word];
  }
}

std::vector<std::pair<std::string, std::uint64_t>> Corpus::sorted_types() const {
  std::vector<std::pair<std::string, std::uint64_t>> types(type_counts_.begin(),
                                                           type_counts_.end());
  std::sort(types.begin(), types.end());
  return types;
}

Sentence split_words(std::string_view line) {
  Sentence words;
  std::size_t start = std::string_view::npos;
  std::size_t i = 0;
  while (i < line.size()) {
    const std::size_t pos = i;
    const char32_t cp = utf8::detail::next(line, i);
    if (utf8::is_space(cp)) {
      if (start != std::string_view::npos) {
        words.emplace_back(line.substr(start, pos - start));
        start = std::string_view::npos;
      }
    } else if (start == std::string_view::npos) {
      start = pos;
    }
  }
  if (start != std::string_view::npos) words.emplace_back(line.substr(start));
  return words;
}

std::string join_words(const Sentence& sentence) {
  std::string out;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (i > 0) out += ' ';
    out += sentence[i];
  }
  return out;
}

void check_sentinels(const Sentence& sentence, const Sentinels& sentinels,
                     std::size_t line) {
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (auto found = sentinels.find_in(sentence[i])) {
      throw ValidationError("line " + std::to_string(line) + ", word " +
                            std::to_string(i + 1) + " '" + sentence[i] +
                            "' contains reserved symbol '" + std::string(*found) +
                            "'");
    }
  }
}

Corpus load_corpus(std::istream& in, const LoadOptions& options) {
  if (options.reject_sentinels) options.sentinels.validate();
  LineReader reader(in);
  std::vector<Sentence> sentences;
  std::string line;
  while (reader.next(line)) {
    Sentence sentence = split_words(line);
    if (options.reject_sentinels)
      check_sentinels(sentence, options.sentinels, reader.line_number());
    sentences.push_back(std::move(sentence));
  }
  return Corpus(std::move(sentences));
}

Corpus load_corpus_from_string(std::string_view text, const LoadOptions& options) {
  std::istringstream in{std::string(text)};
  return load_corpus(in, options);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& sentence : corpus.sentences()) out << join_words(sentence) << '\n';
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.tokens = corpus.token_count();
  stats.types = corpus.type_counts().size();
  stats.sentences = corpus.size();
  for (const auto& [word, count] : corpus.type_counts())
    stats.chars += utf8::length(word) * count;
  if (stats.tokens > 0)
    stats.mean_word_len_chars =
        static_cast<double>(stats.chars) / static_cast<double>(stats.tokens);
  return stats;
}

std::string fingerprint(const Corpus& corpus) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto feed = [&hash](unsigned char byte) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  };
  for (const auto& sentence : corpus.sentences()) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      if (i > 0) feed(' ');
      for (const char c : sentence[i]) feed(static_cast<unsigned char>(c));
    }
    feed('\n');
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace subseg
