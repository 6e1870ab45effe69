#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entangle/corpus.hpp"
#include "entangle/relevance.hpp"

namespace entangle {

/// Windowed co-occurrence counts between the exemplars of two concepts.
/// Entry (i, j) is the number of windows holding both c1[i] and c2[j];
/// each window contributes at most one per pair.
struct CoocMatrix {
    ConceptPair concept_pair;
    std::size_t window_size = 0;
    std::size_t n_windows = 0;
    std::vector<std::uint64_t> counts;  // row-major, rows() x cols()

    std::size_t rows() const { return concept_pair.c1.size(); }
    std::size_t cols() const { return concept_pair.c2.size(); }
    std::uint64_t at(std::size_t i, std::size_t j) const { return counts[i * cols() + j]; }

    /// Shard merge: adds counts and window totals. Both sides must share the
    /// concept pair and window size.
    CoocMatrix& operator+=(const CoocMatrix& other);
};

/// A zero matrix for `pair` with no windows scanned.
CoocMatrix empty_cooc_matrix(const ConceptPair& pair, std::size_t window_size);

/// Counts indicator co-occurrences over `windows`. No windows gives the zero
/// matrix. Throws std::invalid_argument if a term appears in both concepts or
/// a concept has more than 64 terms.
CoocMatrix count_cooccurrences(const ConceptPair& pair, std::span<const Window> windows,
                               std::size_t window_size);

/// Counts over every window of the topic, sharded by document.
CoocMatrix count_cooccurrences(const ConceptPair& pair, const TopicCorpus& topic);

enum class Binning { unit, log2 };

std::string_view to_string(Binning b);
Binning parse_binning(std::string_view name);

/// Distribution of matrix entry values. Keys are bin lower bounds: the value
/// itself for unit bins; 0 or 2^k for log2 bins covering [2^k, 2^(k+1)).
struct Histogram {
    std::string topic_id;
    RelevanceMethod method = RelevanceMethod::frequency;
    std::size_t window_size = 0;
    Binning binning = Binning::unit;
    std::map<std::uint64_t, std::size_t> bins;

    std::size_t total() const;
    /// Inclusive upper edge of the bin starting at `lo`.
    std::uint64_t upper(std::uint64_t lo) const;
};

Histogram cooccurrence_histogram(const CoocMatrix& m, Binning binning = Binning::unit);

/// CSV with a header row of C2 terms and a leading column of C1 terms.
void write_matrix_csv(std::ostream& os, const CoocMatrix& m);

/// Rows of "topic_id,method,W,n,count"; the header is written when asked.
void write_histogram_csv(std::ostream& os, const Histogram& h, bool header);

}  // namespace entangle
