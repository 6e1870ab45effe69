#include "entangle/relevance.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "entangle/format.hpp"

namespace entangle {
namespace {

std::map<std::string, std::size_t, std::less<>> count_terms(const TopicCorpus& topic) {
    std::map<std::string, std::size_t, std::less<>> tf;
    for (const auto& doc : topic.documents)
        for (const auto& t : doc.terms) ++tf[t];
    return tf;
}

void require_vocabulary(const TopicCorpus& topic, std::size_t distinct, std::size_t needed) {
    if (distinct < needed)
        throw InsufficientVocabulary("insufficient vocabulary: topic '" + topic.topic_id +
                                     "' has " + std::to_string(distinct) +
                                     " distinct terms, need " + std::to_string(needed));
}

void sort_ranking(std::vector<RankedTerm>& terms) {
    std::sort(terms.begin(), terms.end(), [](const RankedTerm& a, const RankedTerm& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.term < b.term;
    });
}

}  // namespace

std::string_view to_string(RelevanceMethod m) {
    return m == RelevanceMethod::frequency ? "frequency" : "tfidf";
}

RelevanceMethod parse_relevance_method(std::string_view name) {
    if (name == "frequency") return RelevanceMethod::frequency;
    if (name == "tfidf") return RelevanceMethod::tfidf;
    throw std::invalid_argument("unknown relevance method '" + std::string(name) +
                                "' (expected frequency or tfidf)");
}

DocumentFrequency::DocumentFrequency(std::span<const TopicCorpus> collection) {
    for (const auto& topic : collection) {
        for (const auto& doc : topic.documents) {
            ++n_documents_;
            const std::set<std::string_view> unique(doc.terms.begin(), doc.terms.end());
            for (auto t : unique) {
                auto it = df_.find(t);
                if (it == df_.end())
                    df_.emplace(std::string(t), 1);
                else
                    ++it->second;
            }
        }
    }
}

std::size_t DocumentFrequency::df(const std::string& term) const {
    const auto it = df_.find(term);
    return it == df_.end() ? 0 : it->second;
}

std::vector<TermStats> term_stats(const TopicCorpus& topic, const DocumentFrequency& df) {
    std::vector<TermStats> out;
    for (const auto& [term, tf] : count_terms(topic)) out.push_back({term, tf, df.df(term)});
    return out;
}

RankedTerms rank_by_frequency(const TopicCorpus& topic, std::size_t min_distinct) {
    const auto tf = count_terms(topic);
    require_vocabulary(topic, tf.size(), min_distinct);
    RankedTerms out{topic.topic_id, RelevanceMethod::frequency, {}};
    out.terms.reserve(tf.size());
    for (const auto& [term, n] : tf) out.terms.push_back({term, static_cast<double>(n)});
    sort_ranking(out.terms);
    return out;
}

RankedTerms rank_by_tfidf(const TopicCorpus& topic, const DocumentFrequency& df,
                          std::size_t min_distinct) {
    const auto tf = count_terms(topic);
    require_vocabulary(topic, tf.size(), min_distinct);
    const double n_plus_1 = static_cast<double>(df.n_documents()) + 1.0;
    RankedTerms out{topic.topic_id, RelevanceMethod::tfidf, {}};
    out.terms.reserve(tf.size());
    for (const auto& [term, n] : tf) {
        const double idf = std::log(n_plus_1 / (static_cast<double>(df.df(term)) + 1.0)) + 1.0;
        out.terms.push_back({term, static_cast<double>(n) * idf});
    }
    sort_ranking(out.terms);
    return out;
}

RankedTerms rank_by_tfidf(const TopicCorpus& topic, std::span<const TopicCorpus> collection,
                          std::size_t min_distinct) {
    const bool member = std::any_of(collection.begin(), collection.end(), [&](const auto& c) {
        return c.topic_id == topic.topic_id;
    });
    if (!member)
        throw std::invalid_argument("topic '" + topic.topic_id + "' is not in the collection");
    return rank_by_tfidf(topic, DocumentFrequency(collection), min_distinct);
}

ConceptPair build_concept_pair(const RankedTerms& ranked, std::size_t k) {
    if (k == 0) throw std::invalid_argument("concept size must be positive");
    if (ranked.terms.size() < 2 * k)
        throw InsufficientVocabulary("insufficient vocabulary: topic '" + ranked.topic_id +
                                     "' ranks " + std::to_string(ranked.terms.size()) +
                                     " terms, need " + std::to_string(2 * k));
    ConceptPair pair{ranked.topic_id, ranked.method, {}, {}};
    for (std::size_t i = 0; i < k; ++i) {
        pair.c1.push_back(ranked.terms[i].term);
        pair.c2.push_back(ranked.terms[k + i].term);
    }
    return pair;
}

void write_ranking_csv(std::ostream& os, const RankedTerms& ranked) {
    os << "term,score,rank\n";
    for (std::size_t i = 0; i < ranked.terms.size(); ++i)
        os << csv_field(ranked.terms[i].term) << ',' << format_number(ranked.terms[i].score)
           << ',' << (i + 1) << '\n';
}

}  // namespace entangle
