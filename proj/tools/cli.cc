#include "cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "subseg/analysis.h"
#include "subseg/bpe.h"
#include "subseg/charseg.h"
#include "subseg/corpus.h"
#include "subseg/error.h"
#include "subseg/io.h"
#include "subseg/normalize.h"
#include "subseg/pospipe.h"

namespace subseg::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lines held in memory at once by the streaming commands.
constexpr std::size_t kBatchLines = 4096;

unsigned thread_count() {
  unsigned n = 0;
  if (const char* env = std::getenv("SUBSEG_THREADS"))
    n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

bool is_std_stream(const std::string& path) { return path.empty() || path == "-"; }

class Input {
 public:
  Input(const std::string& path, std::istream& fallback) {
    if (is_std_stream(path)) {
      stream_ = &fallback;
      return;
    }
    file_.open(path, std::ios::binary);
    if (!file_) throw Error("cannot open '" + path + "' for reading");
    stream_ = &file_;
  }

  std::istream& get() { return *stream_; }

 private:
  std::ifstream file_;
  std::istream* stream_ = nullptr;
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : path_(path) {
    if (is_std_stream(path)) {
      stream_ = &fallback;
      return;
    }
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw Error("cannot open '" + path + "' for writing");
    stream_ = &file_;
  }

  std::ostream& get() { return *stream_; }

  void finish() {
    stream_->flush();
    if (!*stream_) throw Error("failed writing '" + (path_.empty() ? "-" : path_) + "'");
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

const CLI::Validator kReadable(
    [](std::string& path) -> std::string {
      if (is_std_stream(path) || std::filesystem::is_regular_file(path)) return {};
      return "file not found: " + path;
    },
    "FILE");

std::size_t parse_size(const std::string& text, const std::string& flag) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw UsageError(flag + ": expected a non-negative integer, got '" + text + "'");
  return value;
}

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

// One subcommand plus the registry of its parameters, used to write and
// replay manifests.
class Command {
 public:
  using Action = std::function<void(Streams&)>;

  Command(CLI::App& parent, const std::string& name, const std::string& help)
      : name_(name), app_(parent.add_subcommand(name, help)) {
    option("--manifest", manifest_,
           "Manifest of resolved parameters (default: <output>.manifest)");
  }

  const std::string& name() const { return name_; }
  CLI::App* app() { return app_; }

  CLI::Option* option(const std::string& flag, std::string& value,
                      const std::string& help) {
    params_.push_back({flag.substr(2), [&value]() -> std::optional<std::string> {
                         if (value.empty()) return std::nullopt;
                         return value;
                       }});
    return app_->add_option(flag, value, help);
  }

  CLI::Option* option(const std::string& flag, std::size_t& value,
                      const std::string& help) {
    params_.push_back({flag.substr(2), [&value]() -> std::optional<std::string> {
                         return std::to_string(value);
                       }});
    return app_->add_option(flag, value, help)->capture_default_str();
  }

  CLI::Option* flag(const std::string& flag, bool& value, const std::string& help) {
    params_.push_back({flag.substr(2), [&value]() -> std::optional<std::string> {
                         if (!value) return std::nullopt;
                         return "true";
                       }});
    return app_->add_flag(flag, value, help);
  }

  // Leaves a parameter out of the manifest while pred() holds.
  void omit_when(const std::string& name, std::function<bool()> pred) {
    for (auto& param : params_) {
      if (param.name == name) param.omit = pred;
    }
  }

  void add_sentinels(Sentinels& sentinels) {
    option("--boundary", sentinels.boundary, "Word-boundary symbol")->capture_default_str();
    option("--unk", sentinels.unk, "UNK symbol")->capture_default_str();
    option("--marker", sentinels.marker, "Continuation marker")->capture_default_str();
  }

  void set_action(Action action, std::function<std::string()> default_manifest) {
    action_ = std::move(action);
    default_manifest_ = std::move(default_manifest);
  }

  void execute(Streams& streams) {
    action_(streams);
    const std::string path = manifest_.empty() ? default_manifest_() : manifest_;
    if (path.empty()) return;
    Output out(path, streams.out);
    out.get() << manifest();
    out.finish();
  }

  // "command=<name>" then "key=value" lines sorted by key.
  std::string manifest() const {
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& param : params_) {
      if (param.omit && param.omit()) continue;
      if (auto value = param.value()) entries.emplace_back(param.name, *value);
    }
    std::sort(entries.begin(), entries.end());
    std::string text = "command=" + name_ + "\n";
    for (const auto& [key, value] : entries) text += key + "=" + value + "\n";
    return text;
  }

 private:
  struct Param {
    std::string name;
    std::function<std::optional<std::string>()> value;
    std::function<bool()> omit;
  };

  std::string name_;
  CLI::App* app_;
  std::vector<Param> params_;
  std::string manifest_;
  Action action_;
  std::function<std::string()> default_manifest_;
};

std::function<std::string()> manifest_next_to(const std::string& output) {
  return [&output]() -> std::string {
    return is_std_stream(output) ? std::string() : output + ".manifest";
  };
}

// Runs work(begin, end) over [0, n) on up to `threads` threads. The first
// exception in index order is rethrown.
void run_chunks(std::size_t n, unsigned threads,
                const std::function<void(std::size_t, std::size_t)>& work) {
  const std::size_t workers = std::min<std::size_t>(threads, n);
  if (workers <= 1) {
    work(0, n);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        work(std::min(n, t * chunk), std::min(n, (t + 1) * chunk));
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& thread : pool) thread.join();
  for (auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

// fn(line, line_number, result, warning) turns one input line into one output
// line. Lines are processed in bounded batches; output order matches input.
using LineFn =
    std::function<void(std::string_view, std::size_t, std::string&, std::string&)>;

void transform_lines(std::istream& in, Streams& streams, std::ostream& out,
                     const LineFn& fn) {
  LineReader reader(in);
  const unsigned threads = thread_count();
  std::vector<std::string> lines;
  std::vector<std::string> results;
  std::vector<std::string> warnings;
  std::string line;
  bool more = true;
  while (more) {
    lines.clear();
    const std::size_t first_line = reader.line_number() + 1;
    while (lines.size() < kBatchLines && (more = reader.next(line))) lines.push_back(line);
    if (lines.empty()) break;
    results.assign(lines.size(), std::string());
    warnings.assign(lines.size(), std::string());
    run_chunks(lines.size(), threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i)
        fn(lines[i], first_line + i, results[i], warnings[i]);
    });
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (!warnings[i].empty()) streams.err << warnings[i] << '\n';
      results[i] += '\n';
      out.write(results[i].data(), static_cast<std::streamsize>(results[i].size()));
    }
  }
}

template <typename F>
auto with_line(std::size_t line_number, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ValidationError("line " + std::to_string(line_number) + ": " + e.what());
  }
}

MergeTable load_merges(const std::string& path, Streams& streams) {
  Input in(path, streams.in);
  return read_merges(in.get());
}

Corpus load_corpus_file(const std::string& path, Streams& streams,
                        const Sentinels& sentinels, bool reject_sentinels = true) {
  Input in(path, streams.in);
  return load_corpus(in.get(), LoadOptions{sentinels, reject_sentinels});
}

std::size_t resolve_k(std::string& k_text, const MergeTable& table) {
  const std::size_t k = k_text.empty() ? table.op() : parse_size(k_text, "--k");
  k_text = std::to_string(k);
  return k;
}

void add_train_bpe(CLI::App& app, std::vector<std::unique_ptr<Command>>& commands) {
  struct Params {
    std::string input, output;
    std::size_t op = 30000;
    bool saturate = false;
    Sentinels sentinels;
  };
  auto p = std::make_shared<Params>();
  auto cmd = std::make_unique<Command>(app, "train-bpe", "Learn BPE merge operations");
  cmd->option("--input", p->input, "Training corpus (default: stdin)")->check(kReadable);
  cmd->option("--output", p->output, "Merges file (default: stdout)");
  auto* op = cmd->option("--op", p->op,
                         "Number of merge operations; 30000 suits an Arabic source, "
                         "90000 an Arabic target");
  cmd->flag("--saturate", p->saturate,
            "Train until no pair occurs twice instead of stopping at --op")
      ->excludes(op);
  cmd->omit_when("op", [p] { return p->saturate; });
  cmd->add_sentinels(p->sentinels);
  cmd->set_action(
      [p](Streams& streams) {
        if (!p->saturate && p->op == 0) throw UsageError("--op must be positive");
        const Corpus corpus = load_corpus_file(p->input, streams, p->sentinels);
        const MergeTable table = bpe_train(corpus, p->saturate ? kSaturate : p->op);
        Output out(p->output, streams.out);
        write_merges(out.get(), table);
        out.finish();
        streams.err << "learned " << table.op() << " merges\n";
      },
      manifest_next_to(p->output));
  commands.push_back(std::move(cmd));
}

void add_apply_bpe(CLI::App& app, std::vector<std::unique_ptr<Command>>& commands) {
  struct Params {
    std::string input, output, merges, k, mode = "unconstrained", vocab;
    Sentinels sentinels;
  };
  auto p = std::make_shared<Params>();
  auto cmd = std::make_unique<Command>(app, "apply-bpe", "Segment a corpus with BPE");
  cmd->option("--input", p->input, "Corpus (default: stdin)")->check(kReadable);
  cmd->option("--output", p->output, "Segmented corpus (default: stdout)");
  cmd->option("--merges", p->merges, "Merges file")->required()->check(kReadable);
  cmd->option("--k", p->k, "Apply only the first k merges (default: all)");
  cmd->option("--mode", p->mode, "unconstrained or constrained")
      ->check(CLI::IsMember({"unconstrained", "constrained"}))
      ->capture_default_str();
  cmd->option("--vocab", p->vocab,
              "Training corpus whose types form the vocabulary (constrained mode)")
      ->check(kReadable);
  cmd->add_sentinels(p->sentinels);
  cmd->set_action(
      [p](Streams& streams) {
        const bool constrained = p->mode == "constrained";
        if (constrained && p->vocab.empty())
          throw UsageError("--mode constrained requires --vocab");
        if (!constrained && !p->vocab.empty())
          throw UsageError("--vocab is only valid with --mode constrained");
        p->sentinels.validate();
        const MergeTable table = load_merges(p->merges, streams);
        const std::size_t k = resolve_k(p->k, table);
        BpeVocab vocab;
        if (constrained)
          vocab = BpeVocab::from_corpus(load_corpus_file(p->vocab, streams, p->sentinels));
        const ApplyMode mode = constrained ? ApplyMode::constrained(vocab, p->sentinels.unk)
                                           : ApplyMode::unconstrained();
        const BpeSegmenter segmenter(table, k);
        const SegmentedLineCodec codec = SegmentedLineCodec::from(p->sentinels);
        std::atomic<std::uint64_t> unk_count{0};

        Input in(p->input, streams.in);
        Output out(p->output, streams.out);
        transform_lines(in.get(), streams, out.get(),
                        [&](std::string_view line, std::size_t n, std::string& result,
                            std::string&) {
                          const Sentence words = split_words(line);
                          check_sentinels(words, p->sentinels, n);
                          std::uint64_t unks = 0;
                          result = codec.format(segmenter.segment_sentence(words, mode, unks));
                          unk_count += unks;
                        });
        out.finish();
        if (constrained) streams.err << "unk_count\t" << unk_count.load() << '\n';
      },
      manifest_next_to(p->output));
  commands.push_back(std::move(cmd));
}

void add_segment_chars(CLI::App& app, std::vector<std::unique_ptr<Command>>& commands) {
  struct Params {
    std::string input, output;
    CharSegConfig config;
  };
  auto p = std::make_shared<Params>();
  auto cmd = std::make_unique<Command>(app, "segment-chars",
                                       "Split words into characters with a boundary symbol");
  cmd->option("--input", p->input, "Corpus (default: stdin)")->check(kReadable);
  cmd->option("--output", p->output, "Character-segmented corpus (default: stdout)");
  cmd->option("--boundary", p->config.boundary, "Word-boundary symbol")
      ->capture_default_str();
  cmd->option("--max-units", p->config.max_sentence_units,
              "Warn about sentences longer than this many units");
  cmd->set_action(
      [p](Streams& streams) {
        p->config.validate();
        Input in(p->input, streams.in);
        Output out(p->output, streams.out);
        transform_lines(in.get(), streams, out.get(),
                        [&](std::string_view line, std::size_t n, std::string& result,
                            std::string& warning) {
                          const CharSegmented seg = with_line(
                              n, [&] { return char_segment(split_words(line), p->config); });
                          result = format_units(seg.units);
                          if (seg.exceeds_limit)
                            warning = "warning: line " + std::to_string(n) + " has " +
                                      std::to_string(seg.units.size()) +
                                      " units, above the limit of " +
                                      std::to_string(p->config.max_sentence_units);
                        });
        out.finish();
      },
      manifest_next_to(p->output));
  commands.push_back(std::move(cmd));
}

void add_desegment(CLI::App& app, std::vector<std::unique_ptr<Command>>& commands) {
  struct Params {
    std::string input, output, scheme = "bpe";
    Sentinels sentinels;
  };
  auto p = std::make_shared<Params>();
  auto cmd = std::make_unique<Command>(app, "desegment",
                                       "Invert BPE or character segmentation");
  cmd->option("--input", p->input, "Segmented corpus (default: stdin)")->check(kReadable);
  cmd->option("--output", p->output, "Corpus (default: stdout)");
  cmd->option("--scheme", p->scheme, "bpe or char")
      ->check(CLI::IsMember({"bpe", "char"}))
      ->capture_default_str();
  cmd->add_sentinels(p->sentinels);
  cmd->set_action(
      [p](Streams& streams) {
        p->sentinels.validate();
        const SegmentedLineCodec codec = SegmentedLineCodec::from(p->sentinels);
        CharSegConfig config;
        config.boundary = p->sentinels.boundary;
        const bool bpe = p->scheme == "bpe";
        Input in(p->input, streams.in);
        Output out(p->output, streams.out);
        transform_lines(in.get(), streams, out.get(),
                        [&](std::string_view line, std::size_t n, std::string& result,
                            std::string&) {
                          if (bpe) {
                            result = join_words(desegment_row(codec.parse(line, n), n - 1));
                          } else {
                            const auto units = parse_units(line);
                            result = join_words(
                                with_line(n, [&] { return char_desegment(units, config); }));
                          }
                        });
        out.finish();
      },
      manifest_next_to(p->output));
  commands.push_back(std::move(cmd));
}

void add_normalize(CLI::App& app, std::vector<std::unique_ptr<Command>>& commands) {
  struct Params {
    std::string input, output, rules;
    bool no_normalize = false;
    bool no_punct = false;
  };
  auto p = std::make_shared<Params>();
  auto cmd = std::make_unique<Command>(
      app, "normalize", "Normalize characters and separate punctuation");
  cmd->option("--input", p->input, "Raw text (default: stdin)")->check(kReadable);
  cmd->option("--output", p->output, "Tokenized text (default: stdout)");
  cmd->option("--rules", p->rules,
              "Rewrite rules, lines 'U+XXXX<TAB>U+YYYY' (default: built-in Arabic rules)")
      ->check(kReadable);
  cmd->flag("--no-normalize", p->no_normalize, "Skip character normalization");
  cmd->flag("--no-punct", p->no_punct, "Do not separate punctuation");
  cmd->set_action(
      [p](Streams& streams) {
        NormalizationConfig config = NormalizationConfig::arabic_default();
        if (!p->rules.empty()) {
          Input rules(p->rules, streams.in);
          config = NormalizationConfig::read_rules(rules.get());
        }
        config = config.with_enabled(!p->no_normalize);
        Input in(p->input, streams.in);
        Output out(p->output, streams.out);
        transform_lines(in.get(), streams, out.get(),
                        [&](std::string_view line, std::size_t, std::string& result,
                            std::string&) {
                          const std::string text = normalize_text(line, config);
                          result = join_words(p->no_punct ? split_words(text)
                                                          : separate_punctuation(text));
                        });
        out.finish();
      },
      manifest_next_to(p->output));
  commands.push_back(std::move(cmd));
}

void add_stats(CLI::App& app, std::vector<std::unique_ptr<Command>>& commands) {
  struct Params {
    std::string input, output;
  };
  auto p = std::make_shared<Params>();
  auto cmd = std::make_unique<Command>(app, "stats", "Token, type and sentence counts");
  cmd->option("--input", p->input, "Corpus (default: stdin)")->check(kReadable);
  cmd->option("--output", p->output, "Report (default: stdout)");
  cmd->set_action(
      [p](Streams& streams) {
        const CorpusStats stats =
            corpus_stats(load_corpus_file(p->input, streams, Sentinels{}, false));
        char mean[64];
        std::snprintf(mean, sizeof(mean), "%.4f", stats.mean_word_len_chars);
        Output out(p->output, streams.out);
        out.get() << "sentences\t" << stats.sentences << "\ntokens\t" << stats.tokens
                  << "\ntypes\t" << stats.types << "\nchars\t" << stats.chars
                  << "\nmean_word_len_chars\t" << mean << '\n';
        out.finish();
      },
      manifest_next_to(p->output));
  commands.push_back(std::move(cmd));
}

std::vector<SweepOp> parse_ops(const std::string& text) {
  std::vector<SweepOp> ops;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      ops.push_back(parse_sweep_op(item));
    } catch (const ValidationError& e) {
      throw UsageError(std::string("--ops: ") + e.what());
    }
  }
  return ops;
}

void add_sweep(CLI::App& app, std::vector<std::unique_ptr<Command>>& commands) {
  struct Params {
    std::string src, tgt, merges, ops, tgt_merges, tgt_k, output;
    bool endpoints = false;
    bool segment_target = false;
    Sentinels sentinels;
  };
  auto p = std::make_shared<Params>();
  auto cmd = std::make_unique<Command>(
      app, "sweep", "Source/target token ratios across merge-table prefixes");
  cmd->option("--src", p->src, "Source corpus")->required()->check(kReadable);
  cmd->option("--tgt", p->tgt, "Target corpus")->required()->check(kReadable);
  cmd->option("--merges", p->merges, "Merges file for the swept side")
      ->required()
      ->check(kReadable);
  cmd->option("--ops", p->ops, "Comma-separated prefix lengths, e.g. 0,15000,saturated");
  cmd->flag("--endpoints", p->endpoints,
            "Add op=0 (characters) and op=saturated (full table)");
  cmd->flag("--segment-target", p->segment_target,
            "Sweep the target side instead of the source");
  cmd->option("--other-merges", p->tgt_merges, "Fixed segmentation for the other side")
      ->check(kReadable);
  cmd->option("--other-k", p->tgt_k, "Prefix of --other-merges (default: all)");
  cmd->option("--output", p->output, "TSV (default: stdout)");
  cmd->add_sentinels(p->sentinels);
  cmd->set_action(
      [p](Streams& streams) {
        const auto ops = parse_ops(p->ops);
        if (ops.empty() && !p->endpoints) throw UsageError("give --ops or --endpoints");
        if (p->tgt_merges.empty() && !p->tgt_k.empty())
          throw UsageError("--other-k requires --other-merges");
        const MergeTable table = load_merges(p->merges, streams);
        std::optional<MergeTable> other;
        SweepOptions options;
        options.include_endpoints = p->endpoints;
        options.segment_target = p->segment_target;
        if (!p->tgt_merges.empty()) {
          other = load_merges(p->tgt_merges, streams);
          options.other_table = &*other;
          options.other_k = resolve_k(p->tgt_k, *other);
        }
        const Corpus src = load_corpus_file(p->src, streams, p->sentinels);
        const Corpus tgt = load_corpus_file(p->tgt, streams, p->sentinels);
        const auto points = op_sweep(src, tgt, table, ops, options);
        Output out(p->output, streams.out);
        write_sweep_tsv(out.get(), points);
        out.finish();
      },
      manifest_next_to(p->output));
  commands.push_back(std::move(cmd));
}

void add_oov(CLI::App& app, std::vector<std::unique_ptr<Command>>& commands) {
  struct Params {
    std::string train, test, output;
    std::size_t top = 10;
    Sentinels sentinels;
  };
  auto p = std::make_shared<Params>();
  auto cmd = std::make_unique<Command>(app, "oov", "Out-of-vocabulary statistics");
  cmd->option("--train", p->train, "Training corpus")->required()->check(kReadable);
  cmd->option("--test", p->test, "Test corpus")->required()->check(kReadable);
  cmd->option("--top", p->top, "Number of example OOV types");
  cmd->option("--output", p->output, "Report (default: stdout)");
  cmd->add_sentinels(p->sentinels);
  cmd->set_action(
      [p](Streams& streams) {
        const BpeVocab vocab =
            BpeVocab::from_corpus(load_corpus_file(p->train, streams, p->sentinels));
        const Corpus test = load_corpus_file(p->test, streams, p->sentinels);
        const OovReport report = oov_report(vocab, test, p->top);
        Output out(p->output, streams.out);
        out.get() << "oov_types\t" << report.oov_types << "\noov_tokens\t"
                  << report.oov_tokens << "\ntest_types\t" << test.type_counts().size()
                  << "\ntest_tokens\t" << test.token_count() << '\n';
        for (const auto& [word, freq] : report.examples)
          out.get() << "example\t" << word << '\t' << freq << '\n';
        out.finish();
      },
      manifest_next_to(p->output));
  commands.push_back(std::move(cmd));
}

void add_consistency(CLI::App& app, std::vector<std::unique_ptr<Command>>& commands) {
  struct Params {
    std::string input, merges, k, output;
    std::size_t min_lcp = kDefaultMinLcp;
    std::size_t top = 50;
    Sentinels sentinels;
  };
  auto p = std::make_shared<Params>();
  auto cmd = std::make_unique<Command>(
      app, "consistency", "Word pairs whose shared prefix is segmented differently");
  cmd->option("--input", p->input, "Corpus (default: stdin)")->check(kReadable);
  cmd->option("--merges", p->merges, "Merges file")->required()->check(kReadable);
  cmd->option("--k", p->k, "Apply only the first k merges (default: all)");
  cmd->option("--min-lcp", p->min_lcp, "Minimum shared prefix in characters");
  cmd->option("--top", p->top, "Report at most this many pairs (0: all)");
  cmd->option("--output", p->output, "TSV (default: stdout)");
  cmd->add_sentinels(p->sentinels);
  cmd->set_action(
      [p](Streams& streams) {
        if (p->min_lcp < 2) throw UsageError("--min-lcp must be at least 2");
        const MergeTable table = load_merges(p->merges, streams);
        const std::size_t k = resolve_k(p->k, table);
        const Corpus corpus = load_corpus_file(p->input, streams, p->sentinels);
        const auto pairs =
            consistency_report(segment_types(corpus, table, k), p->min_lcp, p->top);
        Output out(p->output, streams.out);
        write_consistency_tsv(out.get(), pairs);
        out.finish();
      },
      manifest_next_to(p->output));
  commands.push_back(std::move(cmd));
}

void add_pos_prep(CLI::App& app, std::vector<std::unique_ptr<Command>>& commands) {
  struct Params {
    std::string input, scheme = "unseg", merges, k, segmented, prefix;
    Sentinels sentinels;
  };
  auto p = std::make_shared<Params>();
  auto cmd = std::make_unique<Command>(
      app, "pos-prep", "Build seq2seq POS tagging data (two words of context)");
  cmd->option("--input", p->input, "Tagged corpus, tokens WORD|TAG1+TAG2 (default: stdin)")
      ->check(kReadable);
  cmd->option("--scheme", p->scheme, "unseg, char, bpe or morph")
      ->check(CLI::IsMember({"unseg", "char", "bpe", "morph"}))
      ->capture_default_str();
  cmd->option("--merges", p->merges, "Merges file (bpe)")->check(kReadable);
  cmd->option("--k", p->k, "Apply only the first k merges (default: all)");
  cmd->option("--segmented", p->segmented,
              "Externally segmented text in the segmented-line format (morph)")
      ->check(kReadable);
  cmd->option("--output-prefix", p->prefix, "Writes <prefix>.src and <prefix>.tgt")
      ->required();
  cmd->add_sentinels(p->sentinels);
  cmd->set_action(
      [p](Streams& streams) {
        p->sentinels.validate();
        if ((p->scheme == "bpe") != !p->merges.empty())
          throw UsageError("--merges is required for, and only valid with, --scheme bpe");
        if ((p->scheme == "morph") != !p->segmented.empty())
          throw UsageError("--segmented is required for, and only valid with, --scheme morph");
        if (p->scheme != "bpe" && !p->k.empty())
          throw UsageError("--k is only valid with --scheme bpe");
        const SegmentedLineCodec codec = SegmentedLineCodec::from(p->sentinels);

        std::optional<WordSegmenter> segmenter;
        if (p->scheme == "unseg") {
          segmenter = WordSegmenter::unseg();
        } else if (p->scheme == "char") {
          segmenter = WordSegmenter::chars();
        } else if (p->scheme == "bpe") {
          const MergeTable table = load_merges(p->merges, streams);
          segmenter = WordSegmenter::bpe(table, resolve_k(p->k, table));
        } else {
          Input segmented(p->segmented, streams.in);
          segmenter = WordSegmenter::imported(SegmentedImporter::import(segmented.get(), codec));
        }

        Input in(p->input, streams.in);
        Output src(p->prefix + ".src", streams.out);
        Output tgt(p->prefix + ".tgt", streams.out);
        LineReader reader(in.get());
        std::string line;
        while (reader.next(line)) {
          const std::size_t n = reader.line_number();
          const TaggedSentence sentence = parse_tagged_line(line, n);
          Sentence words;
          for (const auto& tagged : sentence) words.push_back(tagged.word);
          check_sentinels(words, p->sentinels, n);
          const auto instances = with_line(n, [&] { return sentence_instances(sentence, *segmenter); });
          for (const auto& instance : instances) {
            src.get() << format_source_line(instance, codec) << '\n';
            tgt.get() << format_target_line(instance) << '\n';
          }
        }
        src.finish();
        tgt.finish();
      },
      [p] { return p->prefix + ".manifest"; });
  commands.push_back(std::move(cmd));
}

// Rebuilds the argument list recorded in a manifest.
std::vector<std::string> replay_args(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open manifest '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError(n, "expected key=value in manifest");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (args.empty()) {
      if (key != "command") throw FormatError(n, "manifest must start with command=");
      args.push_back(value);
    } else {
      args.push_back("--" + key + "=" + value);
    }
  }
  if (args.empty()) throw Error("empty manifest '" + path + "'");
  return args;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"subseg: subword segmentation toolkit"};
  app.name("subseg");
  app.require_subcommand(0, 1);
  std::string replay;
  app.add_option("--replay", replay, "Re-run the command recorded in a manifest")
      ->check(kReadable);

  std::vector<std::unique_ptr<Command>> commands;
  add_train_bpe(app, commands);
  add_apply_bpe(app, commands);
  add_segment_chars(app, commands);
  add_desegment(app, commands);
  add_normalize(app, commands);
  add_stats(app, commands);
  add_sweep(app, commands);
  add_oov(app, commands);
  add_consistency(app, commands);
  add_pos_prep(app, commands);

  std::vector<std::string> argv_storage;
  argv_storage.push_back("subseg");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& arg : argv_storage) argv.push_back(arg.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Streams streams{in, out, err};
  try {
    if (!replay.empty()) {
      if (app.get_subcommands().size() > 0)
        throw UsageError("--replay cannot be combined with a subcommand");
      return run(replay_args(replay), in, out, err);
    }
    for (auto& command : commands) {
      if (command->app()->parsed()) {
        command->execute(streams);
        return kExitOk;
      }
    }
    err << app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "subseg: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "subseg: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "subseg: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace subseg::cli
