#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "entangle/chsh.hpp"
#include "entangle/cooccurrence.hpp"
#include "entangle/relevance.hpp"
#include "entangle/simulation.hpp"

namespace entangle {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Process exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitCorpus = 2, kExitSelftest = 3 };

struct RunConfig {
    std::filesystem::path manifest;
    std::vector<std::size_t> window_sizes{20, 10, 5};
    std::vector<RelevanceMethod> methods{RelevanceMethod::frequency, RelevanceMethod::tfidf};
    std::size_t k = kConceptSize;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 42;
    std::optional<std::filesystem::path> stoplist;
    bool stemming = true;
    Binning binning = Binning::unit;
    std::size_t top_violations = 10;
};

/// Throws std::invalid_argument for empty, zero or repeated window sizes, an
/// empty method list or k < 4.
void validate(const RunConfig& config);

struct CellResult {
    CoocMatrix matrix;
    ProportionReport proportion;
    Histogram histogram;
};

struct TopicReport {
    std::string topic_id;
    std::map<RelevanceMethod, RankedTerms> rankings;
    std::map<std::pair<std::size_t, RelevanceMethod>, CellResult> cells;  // (W, method)

    /// p at the smallest configured W; the sort key.
    double sort_key(RelevanceMethod method) const;
    /// True when p strictly decreases as W grows (reported, not enforced).
    bool monotone_in_w(RelevanceMethod method) const;
};

struct AnalyzeResult {
    std::vector<TopicReport> topics;  // manifest order
    std::vector<std::filesystem::path> files;
};

/// Topics ordered by descending p at the smallest W, ties by topic_id.
std::vector<const TopicReport*> sorted_topics(const AnalyzeResult& result, RelevanceMethod method);

/// Full pipeline: load, rank, count, scan, then write into config.output_dir:
///   summary_<method>.csv      topic_id,method,W,p,n_entangled,n_pairs,monotone_in_W
///   histograms_<method>.csv   topic_id,method,W,n,count
///   rankings/<topic>_<method>.csv
///   matrices/<topic>_<method>_W<W>.csv
///   results/<topic>_<method>_W<W>.json
/// Corpus problems surface as CorpusError or InsufficientVocabulary; an empty
/// topic list is a CorpusError("no topics").
AnalyzeResult run_analyze(const RunConfig& config);

struct SimulateConfig {
    DistributionKind kind = DistributionKind::zipf;
    std::vector<double> grid = parse_grid("0.1:2.0:0.1");
    std::vector<std::uint32_t> bounds{10, 50, 100, 500};
    std::size_t samples = 10000;
    std::uint64_t seed = 42;
    std::filesystem::path out = "curves.csv";
};

/// Sweeps the grid and writes the curve CSV plus a "<out>.json" sidecar with
/// the grid, seed and tool version.
CurveSet run_simulate(const SimulateConfig& config);

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SelftestOptions {
    /// Test hook: run the partition checks against a damaged table.
    bool corrupt_partition_table = false;
};

std::vector<SelftestCheck> run_selftest(const SelftestOptions& options = {});
void print_selftest(std::ostream& os, const std::vector<SelftestCheck>& checks);

/// Topic ids made safe for file names.
std::string file_stem(std::string_view topic_id);

}  // namespace entangle
