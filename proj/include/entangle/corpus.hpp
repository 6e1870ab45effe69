#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace entangle {

/// Raised for manifest, document and configuration problems while loading a
/// corpus. The message names the offending topic, document or path.
class CorpusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Built-in English stoplist (see data/stoplist_english.txt).
std::span<const std::string_view> default_stoplist_words();

/// Preprocessing choices for one run. Tokens are maximal runs of ASCII
/// letters; everything else (digits, punctuation, non-ASCII bytes) separates.
class PipelineConfig {
public:
    /// Default stoplist, stemming on, lowercasing on.
    PipelineConfig();
    PipelineConfig(std::span<const std::string> stopwords, bool stemming_enabled,
                   bool lowercase = true);

    static PipelineConfig with_default_stoplist(bool stemming_enabled, bool lowercase = true);

    /// Reads one word per line; blank lines and lines starting with '#' are
    /// skipped.
    static PipelineConfig from_stoplist_file(const std::filesystem::path& path,
                                             bool stemming_enabled, bool lowercase = true);

    bool is_stopword(std::string_view token) const;
    bool stemming_enabled() const { return stemming_; }
    bool lowercase() const { return lowercase_; }
    std::size_t stoplist_size() const { return stoplist_.size(); }

private:
    std::unordered_set<std::string> stoplist_;
    bool stemming_ = true;
    bool lowercase_ = true;
};

struct RawDocument {
    std::string doc_id;
    std::string topic_id;
    std::string text;
};

struct TermSequence {
    std::string doc_id;
    std::vector<std::string> terms;

    bool operator==(const TermSequence&) const = default;
};

/// Tile `index` of a document: terms [index*W, min((index+1)*W, len)).
struct Window {
    std::string doc_id;
    std::size_t index = 0;
    std::vector<std::string> terms;

    bool operator==(const Window&) const = default;
};

struct TopicCorpus {
    std::string topic_id;
    std::vector<TermSequence> documents;
    std::size_t window_size = 20;

    /// Windows of every document, in document order then window index.
    std::vector<Window> windows() const;
    std::size_t term_count() const;
};

/// Extract, lowercase, drop stopwords, then stem. Empty text gives an empty
/// sequence.
TermSequence tokenize_and_normalize(const RawDocument& raw, const PipelineConfig& config);

/// Non-overlapping tiles of W terms; the trailing partial tile is kept.
/// Throws std::invalid_argument when W is 0.
std::vector<Window> segment_windows(const TermSequence& seq, std::size_t window_size);

/// Reads a manifest of the form
///   {"topics":[{"topic_id":str,"documents":[{"doc_id":str,"path":str}]}]}
/// Relative document paths resolve against the manifest's directory.
/// Topics come back in manifest order, documents in listing order.
std::vector<TopicCorpus> load_topic_corpus(const std::filesystem::path& manifest_path,
                                           const PipelineConfig& config,
                                           std::size_t window_size);

}  // namespace entangle
