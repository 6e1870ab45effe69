#include "entangle/cooccurrence.hpp"

#include <bit>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "entangle/format.hpp"
#include "entangle/parallel.hpp"

namespace entangle {
namespace {

constexpr std::size_t kMaxConceptTerms = 64;

// term -> (concept side, index); side 0 = C1, 1 = C2
std::unordered_map<std::string_view, std::pair<int, std::size_t>> index_terms(
    const ConceptPair& pair) {
    if (pair.c1.size() > kMaxConceptTerms || pair.c2.size() > kMaxConceptTerms)
        throw std::invalid_argument("concepts are limited to 64 terms each");
    std::unordered_map<std::string_view, std::pair<int, std::size_t>> index;
    auto add = [&](const std::vector<std::string>& terms, int side) {
        for (std::size_t i = 0; i < terms.size(); ++i)
            if (!index.emplace(terms[i], std::pair{side, i}).second)
                throw std::invalid_argument("term '" + terms[i] +
                                            "' appears more than once in the concept pair");
    };
    add(pair.c1, 0);
    add(pair.c2, 1);
    return index;
}

}  // namespace

CoocMatrix& CoocMatrix::operator+=(const CoocMatrix& other) {
    if (other.window_size != window_size || other.concept_pair.c1 != concept_pair.c1 ||
        other.concept_pair.c2 != concept_pair.c2)
        throw std::invalid_argument("cannot merge matrices over different concepts or windows");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    n_windows += other.n_windows;
    return *this;
}

CoocMatrix empty_cooc_matrix(const ConceptPair& pair, std::size_t window_size) {
    CoocMatrix m{pair, window_size, 0, {}};
    m.counts.assign(pair.c1.size() * pair.c2.size(), 0);
    return m;
}

CoocMatrix count_cooccurrences(const ConceptPair& pair, std::span<const Window> windows,
                               std::size_t window_size) {
    const auto index = index_terms(pair);
    CoocMatrix m = empty_cooc_matrix(pair, window_size);
    const std::size_t cols = m.cols();
    for (const auto& w : windows) {
        std::uint64_t rows_present = 0;
        std::uint64_t cols_present = 0;
        for (const auto& term : w.terms) {
            const auto it = index.find(term);
            if (it == index.end()) continue;
            const auto bit = std::uint64_t{1} << it->second.second;
            (it->second.first == 0 ? rows_present : cols_present) |= bit;
        }
        ++m.n_windows;
        if (rows_present == 0 || cols_present == 0) continue;
        for (auto r = rows_present; r != 0; r &= r - 1) {
            const auto i = static_cast<std::size_t>(std::countr_zero(r));
            for (auto c = cols_present; c != 0; c &= c - 1)
                ++m.counts[i * cols + static_cast<std::size_t>(std::countr_zero(c))];
        }
    }
    return m;
}

CoocMatrix count_cooccurrences(const ConceptPair& pair, const TopicCorpus& topic) {
    std::vector<CoocMatrix> shards(topic.documents.size());
    parallel_for(topic.documents.size(), [&](std::size_t d) {
        const auto windows = segment_windows(topic.documents[d], topic.window_size);
        shards[d] = count_cooccurrences(pair, windows, topic.window_size);
    });
    CoocMatrix total = empty_cooc_matrix(pair, topic.window_size);
    for (const auto& s : shards) total += s;
    return total;
}

std::string_view to_string(Binning b) { return b == Binning::unit ? "unit" : "log2"; }

Binning parse_binning(std::string_view name) {
    if (name == "unit") return Binning::unit;
    if (name == "log2") return Binning::log2;
    throw std::invalid_argument("unknown binning '" + std::string(name) +
                                "' (expected unit or log2)");
}

std::size_t Histogram::total() const {
    std::size_t n = 0;
    for (const auto& [lo, count] : bins) n += count;
    return n;
}

std::uint64_t Histogram::upper(std::uint64_t lo) const {
    if (binning == Binning::unit || lo == 0) return lo;
    return 2 * lo - 1;
}

Histogram cooccurrence_histogram(const CoocMatrix& m, Binning binning) {
    Histogram h{m.concept_pair.topic_id, m.concept_pair.method, m.window_size, binning, {}};
    for (const auto v : m.counts) {
        const std::uint64_t key = (binning == Binning::unit || v == 0) ? v : std::bit_floor(v);
        ++h.bins[key];
    }
    return h;
}

void write_matrix_csv(std::ostream& os, const CoocMatrix& m) {
    os << "term";
    for (const auto& t : m.concept_pair.c2) os << ',' << csv_field(t);
    os << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << csv_field(m.concept_pair.c1[i]);
        for (std::size_t j = 0; j < m.cols(); ++j) os << ',' << m.at(i, j);
        os << '\n';
    }
}

void write_histogram_csv(std::ostream& os, const Histogram& h, bool header) {
    if (header) os << "topic_id,method,W,n,count\n";
    for (const auto& [lo, count] : h.bins)
        os << csv_field(h.topic_id) << ',' << to_string(h.method) << ',' << h.window_size << ','
           << lo << ',' << count << '\n';
}

}  // namespace entangle
