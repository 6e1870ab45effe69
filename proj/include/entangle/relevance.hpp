#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "entangle/corpus.hpp"

namespace entangle {

enum class RelevanceMethod { frequency, tfidf };

std::string_view to_string(RelevanceMethod m);
/// Accepts "frequency" or "tfidf"; throws std::invalid_argument otherwise.
RelevanceMethod parse_relevance_method(std::string_view name);

/// Number of exemplars per concept.
inline constexpr std::size_t kConceptSize = 10;
/// Distinct terms a topic needs before it can be ranked into two concepts.
inline constexpr std::size_t kMinVocabulary = 2 * kConceptSize;

class InsufficientVocabulary : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TermStats {
    std::string term;
    std::size_t tf = 0;  // occurrences inside the topic
    std::size_t df = 0;  // documents containing the term, collection-wide
};

struct RankedTerm {
    std::string term;
    double score = 0.0;

    bool operator==(const RankedTerm&) const = default;
};

/// Scores are non-increasing; equal scores are ordered by term ascending.
struct RankedTerms {
    std::string topic_id;
    RelevanceMethod method = RelevanceMethod::frequency;
    std::vector<RankedTerm> terms;
};

/// Two disjoint exemplar sets: C1 holds ranks 1..k, C2 ranks k+1..2k.
struct ConceptPair {
    std::string topic_id;
    RelevanceMethod method = RelevanceMethod::frequency;
    std::vector<std::string> c1;
    std::vector<std::string> c2;

    std::size_t k() const { return c1.size(); }
};

/// Collection-wide document frequencies, computed once and shared read-only.
class DocumentFrequency {
public:
    explicit DocumentFrequency(std::span<const TopicCorpus> collection);

    std::size_t df(const std::string& term) const;
    std::size_t n_documents() const { return n_documents_; }

private:
    std::map<std::string, std::size_t, std::less<>> df_;
    std::size_t n_documents_ = 0;
};

/// Per-term tf within the topic and collection-wide df, sorted by term.
std::vector<TermStats> term_stats(const TopicCorpus& topic, const DocumentFrequency& df);

/// Full ranking by raw term count. Throws InsufficientVocabulary when the topic
/// has fewer than `min_distinct` distinct terms.
RankedTerms rank_by_frequency(const TopicCorpus& topic,
                              std::size_t min_distinct = kMinVocabulary);

/// Full ranking by tf * (ln((N + 1) / (df + 1)) + 1) with N the number of
/// documents in the collection.
RankedTerms rank_by_tfidf(const TopicCorpus& topic, const DocumentFrequency& df,
                          std::size_t min_distinct = kMinVocabulary);

/// Convenience overload; throws std::invalid_argument if `topic` is not part
/// of `collection` (matched by topic_id).
RankedTerms rank_by_tfidf(const TopicCorpus& topic, std::span<const TopicCorpus> collection,
                          std::size_t min_distinct = kMinVocabulary);

ConceptPair build_concept_pair(const RankedTerms& ranked, std::size_t k = kConceptSize);

/// CSV with header "term,score,rank"; ranks start at 1.
void write_ranking_csv(std::ostream& os, const RankedTerms& ranked);

}  // namespace entangle
