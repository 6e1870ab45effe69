#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entangle/cooccurrence.hpp"

namespace entangle {

using Counts4x4 = std::array<std::array<std::uint64_t, 4>, 4>;

/// A 4x4 block of co-occurrence counts: rows are four C1 exemplars, columns
/// four C2 exemplars.
struct SubMatrix {
    std::array<std::string, 4> rows;
    std::array<std::string, 4> cols;
    Counts4x4 f{};

    /// Unlabelled block (labels r0..r3 / c0..c3).
    static SubMatrix from_counts(const Counts4x4& f);
    SubMatrix transposed() const;
};

/// Rows `r` and columns `c` of a co-occurrence matrix.
SubMatrix submatrix(const CoocMatrix& m, const std::array<std::size_t, 4>& r,
                    const std::array<std::size_t, 4>& c);

/// Assignment of the four indices of one side to two measurements.
/// order = {X1, X2, X'1, X'2}: X = (X1, X2) and X' = (X'1, X'2), where the
/// first element of each pair carries outcome +1 and the second -1.
struct Partition {
    std::array<std::uint8_t, 4> order{0, 1, 2, 3};

    bool operator==(const Partition&) const = default;
    /// Both measurements with their outcomes swapped; negates S.
    Partition flipped() const;
    bool is_permutation() const;
};

/// The 12 inequivalent partitions of one side. Each is one of the 3 ways to
/// pair up the indices, times which pair is primed, times the orientation of
/// the primed pair; the unprimed pair is held in ascending order because
/// flipping both pairs only negates S.
const std::array<Partition, 12>& canonical_partitions();

/// All 24 orderings of four indices (every row or column permutation).
const std::array<Partition, 24>& all_orderings();

struct PartitionPair {
    Partition rows;
    Partition cols;
};

/// Canonical rows x canonical cols, 144 pairs, row-major.
std::vector<PartitionPair> enumerate_partitions();

/// (f11 + f22 - f12 - f21) / (f11 + f22 + f12 + f21); nullopt when all four
/// counts are zero.
std::optional<double> expected_value(std::uint64_t f11, std::uint64_t f12, std::uint64_t f21,
                                     std::uint64_t f22);

/// S = E(AB) + E(A'B) + E(AB') - E(A'B'); nullopt if any block is empty.
std::optional<double> chsh_statistic(const SubMatrix& m, const Partition& row_partition,
                                     const Partition& col_partition);

struct ChshEvaluation {
    std::array<std::size_t, 4> row_ids{0, 1, 2, 3};
    std::array<std::size_t, 4> col_ids{0, 1, 2, 3};
    double max_abs_s = 0.0;
    double s_at_max = 0.0;  // signed S of the argmax partition
    PartitionPair argmax{};
    bool violated = false;  // max_abs_s > 2, decided in exact arithmetic
    std::size_t skipped_partitions = 0;
};

/// Maximum |S| over the 144 canonical partition pairs. If every pair is
/// undefined the result is max_abs_s = 0, not violated.
ChshEvaluation max_abs_chsh(const SubMatrix& m);

/// Same search over caller-supplied partition lists (row x col).
ChshEvaluation max_abs_chsh(const SubMatrix& m, std::span<const Partition> row_partitions,
                            std::span<const Partition> col_partitions);

/// |S| for every (row, col) partition pair in row-major order; undefined
/// pairs are left out.
std::vector<double> abs_chsh_values(const SubMatrix& m, std::span<const Partition> row_partitions,
                                    std::span<const Partition> col_partitions);

struct Violation {
    std::array<std::string, 4> c1;
    std::array<std::string, 4> c2;
    PartitionPair partition;
    double s = 0.0;
};

struct ProportionReport {
    std::string topic_id;
    std::size_t window_size = 0;
    RelevanceMethod method = RelevanceMethod::frequency;
    double p = 0.0;
    std::size_t n_pairs_total = 0;
    std::size_t n_pairs_entangled = 0;
    /// Strongest violations, |S| descending, ties in enumeration order.
    std::vector<Violation> top_violations;
};

/// Scans every pair of 4-subsets (C1 rows x C2 columns) of the matrix; for
/// 10x10 that is 210 x 210 = 44,100 pairs. Expected values are tabulated
/// once per ordered row pair and ordered column pair, so each partition
/// costs four lookups.
ProportionReport entanglement_proportion(const CoocMatrix& m, std::size_t top_n = 10);

/// Lexicographic 4-subsets of {0..n-1}.
std::vector<std::array<std::size_t, 4>> four_subsets(std::size_t n);

}  // namespace entangle
