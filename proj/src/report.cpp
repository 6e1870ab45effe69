#include "entangle/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "entangle/corpus.hpp"
#include "entangle/format.hpp"
#include "json.hpp"

namespace entangle {
namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::ofstream open_output(const fs::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    return os;
}

ordered_json partition_json(const Violation& v) {
    auto names = [](const std::array<std::string, 4>& labels, const Partition& p, int first) {
        return ordered_json::array({labels[p.order[first]], labels[p.order[first + 1]]});
    };
    ordered_json j;
    j["A"] = names(v.c1, v.partition.rows, 0);
    j["A'"] = names(v.c1, v.partition.rows, 2);
    j["B"] = names(v.c2, v.partition.cols, 0);
    j["B'"] = names(v.c2, v.partition.cols, 2);
    return j;
}

ordered_json proportion_json(const ProportionReport& r) {
    ordered_json j;
    j["topic_id"] = r.topic_id;
    j["W"] = r.window_size;
    j["method"] = std::string(to_string(r.method));
    j["p"] = r.p;
    j["n_entangled"] = r.n_pairs_entangled;
    j["n_pairs"] = r.n_pairs_total;
    auto& top = j["top_violations"] = ordered_json::array();
    for (const auto& v : r.top_violations) {
        ordered_json e;
        e["c1"] = v.c1;
        e["c2"] = v.c2;
        e["partition"] = partition_json(v);
        e["S"] = v.s;
        top.push_back(std::move(e));
    }
    return j;
}

std::string cell_stem(const std::string& topic_id, RelevanceMethod m, std::size_t w) {
    return file_stem(topic_id) + "_" + std::string(to_string(m)) + "_W" + std::to_string(w);
}

void write_outputs(const RunConfig& config, AnalyzeResult& result) {
    const fs::path out = config.output_dir;
    for (const auto* sub : {"rankings", "matrices", "results"}) fs::create_directories(out / sub);

    auto ws = config.window_sizes;
    std::sort(ws.begin(), ws.end());

    for (const auto method : config.methods) {
        const auto order = sorted_topics(result, method);
        const auto mname = std::string(to_string(method));

        const auto summary_path = out / ("summary_" + mname + ".csv");
        auto summary = open_output(summary_path);
        summary << "topic_id,method,W,p,n_entangled,n_pairs,monotone_in_W\n";
        const auto hist_path = out / ("histograms_" + mname + ".csv");
        auto hist = open_output(hist_path);
        hist << "topic_id,method,W,n,count\n";

        for (const auto* topic : order) {
            const bool monotone = topic->monotone_in_w(method);
            for (const auto w : ws) {
                const auto& cell = topic->cells.at({w, method});
                const auto& pr = cell.proportion;
                summary << csv_field(topic->topic_id) << ',' << mname << ',' << w << ','
                        << format_number(pr.p) << ',' << pr.n_pairs_entangled << ','
                        << pr.n_pairs_total << ',' << (monotone ? "true" : "false") << '\n';
                write_histogram_csv(hist, cell.histogram, false);
            }
        }
        result.files.push_back(summary_path);
        result.files.push_back(hist_path);
    }

    for (const auto& topic : result.topics) {
        for (const auto& [method, ranked] : topic.rankings) {
            const auto path = out / "rankings" /
                              (file_stem(topic.topic_id) + "_" + std::string(to_string(method)) +
                               ".csv");
            auto os = open_output(path);
            write_ranking_csv(os, ranked);
            result.files.push_back(path);
        }
        for (const auto& [key, cell] : topic.cells) {
            const auto stem = cell_stem(topic.topic_id, key.second, key.first);
            const auto mpath = out / "matrices" / (stem + ".csv");
            auto mos = open_output(mpath);
            write_matrix_csv(mos, cell.matrix);
            const auto jpath = out / "results" / (stem + ".json");
            auto jos = open_output(jpath);
            jos << proportion_json(cell.proportion).dump(2) << '\n';
            result.files.push_back(mpath);
            result.files.push_back(jpath);
        }
    }
}

}  // namespace

std::string file_stem(std::string_view topic_id) {
    std::string out;
    for (char c : topic_id) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                          (c >= '0' && c <= '9') || c == '-' || c == '.';
        out += keep ? c : '_';
    }
    return out.empty() ? "_" : out;
}

void validate(const RunConfig& config) {
    if (config.window_sizes.empty()) throw std::invalid_argument("no window sizes configured");
    std::set<std::size_t> seen;
    for (const auto w : config.window_sizes) {
        if (w == 0) throw std::invalid_argument("window sizes must be positive");
        if (!seen.insert(w).second)
            throw std::invalid_argument("window size " + std::to_string(w) + " is repeated");
    }
    if (config.methods.empty()) throw std::invalid_argument("no relevance methods configured");
    if (config.k < 4) throw std::invalid_argument("concept size k must be at least 4");
}

double TopicReport::sort_key(RelevanceMethod method) const {
    for (const auto& [key, cell] : cells)  // map order: smallest W first
        if (key.second == method) return cell.proportion.p;
    return 0.0;
}

bool TopicReport::monotone_in_w(RelevanceMethod method) const {
    std::optional<double> prev;
    for (const auto& [key, cell] : cells) {
        if (key.second != method) continue;
        if (prev && !(cell.proportion.p < *prev)) return false;
        prev = cell.proportion.p;
    }
    return true;
}

std::vector<const TopicReport*> sorted_topics(const AnalyzeResult& result, RelevanceMethod method) {
    std::vector<const TopicReport*> order;
    for (const auto& t : result.topics) order.push_back(&t);
    std::sort(order.begin(), order.end(), [&](const TopicReport* a, const TopicReport* b) {
        const double pa = a->sort_key(method), pb = b->sort_key(method);
        if (pa != pb) return pa > pb;
        return a->topic_id < b->topic_id;
    });
    return order;
}

AnalyzeResult run_analyze(const RunConfig& config) {
    validate(config);
    const auto pipeline = config.stoplist
                              ? PipelineConfig::from_stoplist_file(*config.stoplist, config.stemming)
                              : PipelineConfig::with_default_stoplist(config.stemming);

    const auto corpora = load_topic_corpus(config.manifest, pipeline, config.window_sizes.front());
    if (corpora.empty()) throw CorpusError("no topics in manifest " + config.manifest.string());
    const DocumentFrequency df(corpora);

    AnalyzeResult result;
    for (const auto& corpus : corpora) {
        TopicReport report{corpus.topic_id, {}, {}};
        for (const auto method : config.methods) {
            auto ranked = method == RelevanceMethod::frequency
                              ? rank_by_frequency(corpus, 2 * config.k)
                              : rank_by_tfidf(corpus, df, 2 * config.k);
            const auto pair = build_concept_pair(ranked, config.k);
            for (const auto w : config.window_sizes) {
                TopicCorpus windowed = corpus;
                windowed.window_size = w;
                auto matrix = count_cooccurrences(pair, windowed);
                auto proportion = entanglement_proportion(matrix, config.top_violations);
                auto histogram = cooccurrence_histogram(matrix, config.binning);
                report.cells.emplace(std::pair{w, method},
                                     CellResult{std::move(matrix), std::move(proportion),
                                                std::move(histogram)});
            }
            report.rankings.emplace(method, std::move(ranked));
        }
        result.topics.push_back(std::move(report));
    }
    write_outputs(config, result);
    return result;
}

CurveSet run_simulate(const SimulateConfig& config) {
    auto curves =
        parameter_sweep(config.kind, config.grid, config.bounds, config.samples, config.seed);
    if (config.out.has_parent_path()) fs::create_directories(config.out.parent_path());
    {
        auto os = open_output(config.out);
        write_curve_csv(os, curves);
    }
    ordered_json meta;
    meta["tool"] = "entangle";
    meta["tool_version"] = std::string(kToolVersion);
    meta["kind"] = std::string(to_string(config.kind));
    meta["grid"] = config.grid;
    meta["B"] = config.bounds;
    meta["samples"] = config.samples;
    meta["seed"] = config.seed;
    meta["points"] = curves.estimates.size();
    meta["point_seed"] = "splitmix64(seed, point index)";
    meta["columns"] = {"kind", "lambda", "mu", "B", "n_samples", "p_hat", "std_err", "seed"};
    auto side = open_output(fs::path(config.out.string() + ".json"));
    side << meta.dump(2) << '\n';
    return curves;
}

// ---------------------------------------------------------------------------
// selftest

namespace {

SelftestCheck check_expected_values() {
    struct Case {
        std::uint64_t f11, f12, f21, f22;
        std::int64_t num, den;  // exact value num/den; den 0 = undefined
    };
    constexpr Case cases[] = {
        {100, 1, 1, 100, 198, 202}, {5, 5, 5, 5, 0, 20}, {3, 0, 0, 0, 3, 3},
        {0, 0, 0, 0, 0, 0},         {0, 7, 2, 0, -9, 9}, {2, 1, 0, 1, 2, 4},
        {17, 3, 11, 5, 8, 36},      {1, 0, 0, 2, 3, 3},  {0, 4, 0, 0, -4, 4},
    };
    for (const auto& c : cases) {
        const auto e = expected_value(c.f11, c.f12, c.f21, c.f22);
        const bool ok = c.den == 0
                            ? !e.has_value()
                            : (e && std::fabs(*e - static_cast<double>(c.num) / c.den) <= 1e-12);
        if (!ok)
            return {"expected value arithmetic", false,
                    "mismatch at (" + std::to_string(c.f11) + "," + std::to_string(c.f12) + "," +
                        std::to_string(c.f21) + "," + std::to_string(c.f22) + ")"};
    }
    return {"expected value arithmetic", true, std::to_string(std::size(cases)) + " cases"};
}

Counts4x4 large_small_pattern(std::uint64_t large, std::uint64_t small) {
    const auto L = large, S = small;
    return {{{L, S, L, S}, {S, L, S, L}, {L, S, S, L}, {S, L, L, S}}};
}

SelftestCheck check_large_small_pattern() {
    const double want = 4.0 * 198.0 / 202.0;
    const auto ev = max_abs_chsh(SubMatrix::from_counts(large_small_pattern(100, 1)));
    auto swapped = large_small_pattern(100, 1);
    for (auto& row : swapped) {
        std::swap(row[0], row[1]);
        std::swap(row[2], row[3]);
    }
    const auto ev_swapped = max_abs_chsh(SubMatrix::from_counts(swapped));
    const bool ok = ev.violated && std::fabs(ev.max_abs_s - want) <= 1e-9 && ev.s_at_max > 0 &&
                    ev_swapped.violated && std::fabs(ev_swapped.max_abs_s - want) <= 1e-9 &&
                    ev_swapped.s_at_max < 0;
    std::ostringstream detail;
    detail << std::setprecision(10) << "max|S| = " << ev.max_abs_s << ", swapped S = "
           << ev_swapped.s_at_max;
    return {"large/small violating pattern", ok, detail.str()};
}

SelftestCheck check_boundary() {
    const Counts4x4 f{{{9, 0, 9, 0}, {0, 9, 0, 9}, {9, 0, 9, 0}, {0, 9, 0, 9}}};
    const auto ev = max_abs_chsh(SubMatrix::from_counts(f));
    const bool ok = !ev.violated && std::fabs(ev.max_abs_s - 2.0) <= 1e-12;
    return {"classical boundary |S| = 2", ok, "max|S| = " + format_number(ev.max_abs_s)};
}

SelftestCheck check_partition_table(std::span<const Partition> parts) {
    bool ok = parts.size() == 12;
    for (std::size_t i = 0; ok && i < parts.size(); ++i) {
        ok = parts[i].is_permutation();
        for (std::size_t j = 0; ok && j < parts.size(); ++j)
            if (i != j && (parts[i] == parts[j] || parts[i] == parts[j].flipped())) ok = false;
    }
    return {"partition table structure", ok,
            std::to_string(parts.size()) + " partitions per side"};
}

SelftestCheck check_permutation_equivalence(std::span<const Partition> parts) {
    Rng rng(20240601);
    constexpr int kMatrices = 200;
    for (int t = 0; t < kMatrices; ++t) {
        Counts4x4 f{};
        for (auto& row : f)
            for (auto& v : row) v = rng() % 21;
        const auto m = SubMatrix::from_counts(f);
        const auto& all = all_orderings();
        auto full = abs_chsh_values(m, all, all);
        auto canon = abs_chsh_values(m, parts, parts);
        std::vector<double> canon4;
        for (const auto v : canon) canon4.insert(canon4.end(), 4, v);
        std::sort(full.begin(), full.end());
        std::sort(canon4.begin(), canon4.end());
        bool same = full.size() == canon4.size();
        for (std::size_t i = 0; same && i < full.size(); ++i)
            same = std::fabs(full[i] - canon4[i]) <= 1e-12;
        const bool decision_full = max_abs_chsh(m, all, all).violated;
        const bool decision_canon = max_abs_chsh(m, parts, parts).violated;
        if (!same || decision_full != decision_canon)
            return {"576 vs 144 partition equivalence", false,
                    "matrix " + std::to_string(t) + " differs"};
    }
    return {"576 vs 144 partition equivalence", true,
            std::to_string(kMatrices) + " random matrices"};
}

SelftestCheck check_pmf_normalization() {
    const DistributionSpec specs[] = {
        DistributionSpec::zipf(0.3, 100), DistributionSpec::zipf(2.0, 500),
        DistributionSpec::zipf(0.0, 7),   DistributionSpec::homogeneous(10),
        DistributionSpec::poisson(10, 100), DistributionSpec::poisson(50, 500),
    };
    double worst = 0.0;
    for (const auto& s : specs) {
        double total = 0.0;
        for (const auto p : distribution_pmf(s)) total += p;
        worst = std::max(worst, std::fabs(total - 1.0));
    }
    return {"pmf normalisation", worst <= 1e-12, "max |sum - 1| = " + format_number(worst)};
}

}  // namespace

std::vector<SelftestCheck> run_selftest(const SelftestOptions& options) {
    std::vector<Partition> parts(canonical_partitions().begin(), canonical_partitions().end());
    if (options.corrupt_partition_table) parts.back() = parts.front();

    return {
        check_expected_values(),
        check_large_small_pattern(),
        check_boundary(),
        check_partition_table(parts),
        check_permutation_equivalence(parts),
        check_pmf_normalization(),
    };
}

void print_selftest(std::ostream& os, const std::vector<SelftestCheck>& checks) {
    std::size_t width = 0;
    for (const auto& c : checks) width = std::max(width, c.name.size());
    for (const auto& c : checks)
        os << (c.passed ? "[PASS] " : "[FAIL] ") << std::left << std::setw(static_cast<int>(width))
           << c.name << "  " << c.detail << '\n';
}

}  // namespace entangle
