#include "entangle/chsh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "entangle/parallel.hpp"

namespace entangle {
namespace {

__extension__ typedef __int128 int128;

// One 2x2 block: E = num / den, undefined when den == 0.
struct Cell {
    double e = 0.0;
    std::int64_t num = 0;
    std::int64_t den = 0;
};

Cell make_cell(std::uint64_t f11, std::uint64_t f12, std::uint64_t f21, std::uint64_t f22) {
    Cell c;
    const auto agree = static_cast<std::int64_t>(f11 + f22);
    const auto disagree = static_cast<std::int64_t>(f12 + f21);
    c.den = agree + disagree;
    c.num = agree - disagree;
    c.e = c.den == 0 ? std::numeric_limits<double>::quiet_NaN()
                     : static_cast<double>(c.num) / static_cast<double>(c.den);
    return c;
}

// Expected values for every ordered row pair x ordered column pair of an
// r x c count matrix.
class ExpectationTable {
public:
    template <typename CountFn>
    ExpectationTable(std::size_t rows, std::size_t cols, CountFn&& f)
        : rows_(rows), cols_(cols), cells_(rows * rows * cols * cols) {
        for (std::size_t i1 = 0; i1 < rows; ++i1)
            for (std::size_t i2 = 0; i2 < rows; ++i2)
                for (std::size_t j1 = 0; j1 < cols; ++j1)
                    for (std::size_t j2 = 0; j2 < cols; ++j2)
                        cells_[index(i1 * rows + i2, j1 * cols + j2)] =
                            make_cell(f(i1, j1), f(i1, j2), f(i2, j1), f(i2, j2));
    }

    std::size_t row_pair(std::size_t a, std::size_t b) const { return a * rows_ + b; }
    std::size_t col_pair(std::size_t a, std::size_t b) const { return a * cols_ + b; }
    const Cell& at(std::size_t row_pair, std::size_t col_pair) const {
        return cells_[index(row_pair, col_pair)];
    }

private:
    std::size_t index(std::size_t rp, std::size_t cp) const { return rp * cols_ * cols_ + cp; }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<Cell> cells_;
};

// Sign of |E0 + E1 + E2 - E3| - 2 in exact rational arithmetic.
int compare_abs_to_two(const Cell& c0, const Cell& c1, const Cell& c2, const Cell& c3,
                       double approx_abs) {
    constexpr std::int64_t kLimit = std::int64_t{1} << 31;
    if (c0.den >= kLimit || c1.den >= kLimit || c2.den >= kLimit || c3.den >= kLimit)
        return approx_abs > 2.0 ? 1 : (approx_abs < 2.0 ? -1 : 0);
    const int128 d0 = c0.den, d1 = c1.den, d2 = c2.den, d3 = c3.den;
    const int128 den = d0 * d1 * d2 * d3;
    int128 num = c0.num * (d1 * d2 * d3) + c1.num * (d0 * d2 * d3) + c2.num * (d0 * d1 * d3) -
                 c3.num * (d0 * d1 * d2);
    if (num < 0) num = -num;
    const int128 bound = 2 * den;
    return num > bound ? 1 : (num < bound ? -1 : 0);
}

// |S|, with values within 1e-9 of the classical bound settled exactly so that
// "|S| > 2" is never decided by rounding noise.
double settled_abs(double s, const Cell& c0, const Cell& c1, const Cell& c2, const Cell& c3) {
    const double a = std::fabs(s);
    if (std::fabs(a - 2.0) > 1e-9) return a;
    const int cmp = compare_abs_to_two(c0, c1, c2, c3, a);
    if (cmp == 0) return 2.0;
    if (cmp > 0) return a > 2.0 ? a : std::nextafter(2.0, 4.0);
    return a < 2.0 ? a : std::nextafter(2.0, 0.0);
}

struct SearchResult {
    double best_abs = -1.0;
    double best_s = 0.0;
    std::size_t best_row = 0;
    std::size_t best_col = 0;
    std::size_t skipped = 0;
};

struct PairIndex {
    std::size_t unprimed;
    std::size_t primed;
};

template <typename PairFn>
std::vector<PairIndex> pair_indices(std::span<const Partition> parts,
                                    const std::array<std::size_t, 4>& ids, PairFn&& pair) {
    std::vector<PairIndex> out;
    out.reserve(parts.size());
    for (const auto& p : parts)
        out.push_back({pair(ids[p.order[0]], ids[p.order[1]]),
                       pair(ids[p.order[2]], ids[p.order[3]])});
    return out;
}

SearchResult search(const ExpectationTable& table, std::span<const PairIndex> row_pairs,
                    std::span<const PairIndex> col_pairs) {
    SearchResult r;
    for (std::size_t a = 0; a < row_pairs.size(); ++a) {
        const auto [ra, ra_p] = row_pairs[a];
        for (std::size_t b = 0; b < col_pairs.size(); ++b) {
            const auto [cb, cb_p] = col_pairs[b];
            const Cell& ab = table.at(ra, cb);
            const Cell& apb = table.at(ra_p, cb);
            const Cell& abp = table.at(ra, cb_p);
            const Cell& apbp = table.at(ra_p, cb_p);
            if (ab.den == 0 || apb.den == 0 || abp.den == 0 || apbp.den == 0) {
                ++r.skipped;
                continue;
            }
            const double s = ab.e + apb.e + abp.e - apbp.e;
            const double a_abs = settled_abs(s, ab, apb, abp, apbp);
            if (a_abs > r.best_abs) {
                r.best_abs = a_abs;
                r.best_s = s < 0 ? -a_abs : a_abs;
                r.best_row = a;
                r.best_col = b;
            }
        }
    }
    return r;
}

ExpectationTable table_for(const SubMatrix& m) {
    return ExpectationTable(4, 4, [&](std::size_t i, std::size_t j) { return m.f[i][j]; });
}

ChshEvaluation evaluate(const SubMatrix& m, std::span<const Partition> row_parts,
                        std::span<const Partition> col_parts) {
    const auto table = table_for(m);
    const std::array<std::size_t, 4> ids{0, 1, 2, 3};
    const auto rp = pair_indices(row_parts, ids,
                                 [&](std::size_t a, std::size_t b) { return table.row_pair(a, b); });
    const auto cp = pair_indices(col_parts, ids,
                                 [&](std::size_t a, std::size_t b) { return table.col_pair(a, b); });
    const auto r = search(table, rp, cp);
    ChshEvaluation ev;
    ev.skipped_partitions = r.skipped;
    if (r.best_abs >= 0.0) {
        ev.max_abs_s = r.best_abs;
        ev.s_at_max = r.best_s;
        ev.argmax = {row_parts[r.best_row], col_parts[r.best_col]};
        ev.violated = r.best_abs > 2.0;
    }
    return ev;
}

}  // namespace

SubMatrix SubMatrix::from_counts(const Counts4x4& f) {
    return SubMatrix{{"r0", "r1", "r2", "r3"}, {"c0", "c1", "c2", "c3"}, f};
}

SubMatrix SubMatrix::transposed() const {
    SubMatrix t{cols, rows, {}};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) t.f[j][i] = f[i][j];
    return t;
}

SubMatrix submatrix(const CoocMatrix& m, const std::array<std::size_t, 4>& r,
                    const std::array<std::size_t, 4>& c) {
    SubMatrix s;
    for (std::size_t i = 0; i < 4; ++i) {
        if (r[i] >= m.rows() || c[i] >= m.cols())
            throw std::out_of_range("submatrix index outside the co-occurrence matrix");
        s.rows[i] = m.concept_pair.c1[r[i]];
        s.cols[i] = m.concept_pair.c2[c[i]];
    }
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) s.f[i][j] = m.at(r[i], c[j]);
    return s;
}

Partition Partition::flipped() const {
    return Partition{{order[1], order[0], order[3], order[2]}};
}

bool Partition::is_permutation() const {
    unsigned seen = 0;
    for (auto v : order) {
        if (v > 3) return false;
        seen |= 1u << v;
    }
    return seen == 0xF;
}

const std::array<Partition, 12>& canonical_partitions() {
    static const std::array<Partition, 12> parts = [] {
        constexpr std::uint8_t pairings[3][2][2] = {
            {{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}};
        std::array<Partition, 12> out{};
        std::size_t n = 0;
        for (const auto& pairing : pairings) {
            for (int primed = 1; primed >= 0; --primed) {
                const auto& u = pairing[1 - primed];
                const auto& v = pairing[primed];
                out[n++] = Partition{{u[0], u[1], v[0], v[1]}};
                out[n++] = Partition{{u[0], u[1], v[1], v[0]}};
            }
        }
        return out;
    }();
    return parts;
}

const std::array<Partition, 24>& all_orderings() {
    static const std::array<Partition, 24> perms = [] {
        std::array<Partition, 24> out{};
        std::array<std::uint8_t, 4> p{0, 1, 2, 3};
        std::size_t n = 0;
        do {
            out[n++] = Partition{p};
        } while (std::next_permutation(p.begin(), p.end()));
        return out;
    }();
    return perms;
}

std::vector<PartitionPair> enumerate_partitions() {
    std::vector<PartitionPair> out;
    out.reserve(144);
    for (const auto& r : canonical_partitions())
        for (const auto& c : canonical_partitions()) out.push_back({r, c});
    return out;
}

std::optional<double> expected_value(std::uint64_t f11, std::uint64_t f12, std::uint64_t f21,
                                     std::uint64_t f22) {
    const Cell c = make_cell(f11, f12, f21, f22);
    if (c.den == 0) return std::nullopt;
    return c.e;
}

std::optional<double> chsh_statistic(const SubMatrix& m, const Partition& row_partition,
                                     const Partition& col_partition) {
    const auto& a = row_partition.order;
    const auto& b = col_partition.order;
    auto e = [&](std::size_t x1, std::size_t x2, std::size_t y1, std::size_t y2) {
        return expected_value(m.f[x1][y1], m.f[x1][y2], m.f[x2][y1], m.f[x2][y2]);
    };
    const auto ab = e(a[0], a[1], b[0], b[1]);
    const auto apb = e(a[2], a[3], b[0], b[1]);
    const auto abp = e(a[0], a[1], b[2], b[3]);
    const auto apbp = e(a[2], a[3], b[2], b[3]);
    if (!ab || !apb || !abp || !apbp) return std::nullopt;
    return *ab + *apb + *abp - *apbp;
}

ChshEvaluation max_abs_chsh(const SubMatrix& m) {
    return evaluate(m, canonical_partitions(), canonical_partitions());
}

ChshEvaluation max_abs_chsh(const SubMatrix& m, std::span<const Partition> row_partitions,
                            std::span<const Partition> col_partitions) {
    return evaluate(m, row_partitions, col_partitions);
}

std::vector<double> abs_chsh_values(const SubMatrix& m, std::span<const Partition> row_partitions,
                                    std::span<const Partition> col_partitions) {
    std::vector<double> out;
    out.reserve(row_partitions.size() * col_partitions.size());
    for (const auto& r : row_partitions)
        for (const auto& c : col_partitions)
            if (const auto s = chsh_statistic(m, r, c)) out.push_back(std::fabs(*s));
    return out;
}

std::vector<std::array<std::size_t, 4>> four_subsets(std::size_t n) {
    std::vector<std::array<std::size_t, 4>> out;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                for (std::size_t d = c + 1; d < n; ++d) out.push_back({a, b, c, d});
    return out;
}

ProportionReport entanglement_proportion(const CoocMatrix& m, std::size_t top_n) {
    ProportionReport report;
    report.topic_id = m.concept_pair.topic_id;
    report.window_size = m.window_size;
    report.method = m.concept_pair.method;

    const auto row_sets = four_subsets(m.rows());
    const auto col_sets = four_subsets(m.cols());
    report.n_pairs_total = row_sets.size() * col_sets.size();
    if (report.n_pairs_total == 0) return report;

    const ExpectationTable table(m.rows(), m.cols(),
                                 [&](std::size_t i, std::size_t j) { return m.at(i, j); });
    const auto& parts = canonical_partitions();

    std::vector<std::vector<PairIndex>> col_pairs;
    col_pairs.reserve(col_sets.size());
    for (const auto& cs : col_sets)
        col_pairs.push_back(pair_indices(
            parts, cs, [&](std::size_t a, std::size_t b) { return table.col_pair(a, b); }));

    struct Hit {
        double abs_s;
        double s;
        std::size_t row_set;
        std::size_t col_set;
        std::size_t row_part;
        std::size_t col_part;
    };
    auto stronger = [](const Hit& x, const Hit& y) {
        if (x.abs_s != y.abs_s) return x.abs_s > y.abs_s;
        if (x.row_set != y.row_set) return x.row_set < y.row_set;
        return x.col_set < y.col_set;
    };

    std::vector<std::size_t> counts(row_sets.size(), 0);
    std::vector<std::vector<Hit>> hits(row_sets.size());
    parallel_for(row_sets.size(), [&](std::size_t ri) {
        const auto rp = pair_indices(
            parts, row_sets[ri], [&](std::size_t a, std::size_t b) { return table.row_pair(a, b); });
        auto& local = hits[ri];
        for (std::size_t ci = 0; ci < col_sets.size(); ++ci) {
            const auto r = search(table, rp, col_pairs[ci]);
            if (r.best_abs <= 2.0) continue;
            ++counts[ri];
            if (top_n == 0) continue;
            local.push_back({r.best_abs, r.best_s, ri, ci, r.best_row, r.best_col});
            if (local.size() > 2 * top_n) {
                std::partial_sort(local.begin(), local.begin() + static_cast<std::ptrdiff_t>(top_n),
                                  local.end(), stronger);
                local.resize(top_n);
            }
        }
    });

    std::vector<Hit> merged;
    for (std::size_t ri = 0; ri < row_sets.size(); ++ri) {
        report.n_pairs_entangled += counts[ri];
        merged.insert(merged.end(), hits[ri].begin(), hits[ri].end());
    }
    std::sort(merged.begin(), merged.end(), stronger);
    if (merged.size() > top_n) merged.resize(top_n);
    for (const auto& h : merged) {
        Violation v;
        for (std::size_t i = 0; i < 4; ++i) {
            v.c1[i] = m.concept_pair.c1[row_sets[h.row_set][i]];
            v.c2[i] = m.concept_pair.c2[col_sets[h.col_set][i]];
        }
        v.partition = {parts[h.row_part], parts[h.col_part]};
        v.s = h.s;
        report.top_violations.push_back(std::move(v));
    }
    report.p = static_cast<double>(report.n_pairs_entangled) /
               static_cast<double>(report.n_pairs_total);
    return report;
}

}  // namespace entangle
