// entangle: CHSH violation analysis of windowed term co-occurrence.
//
//   entangle analyze  --manifest corpus/manifest.json --out results/
//   entangle simulate --kind zipf --lambda-grid 0.1:2.0:0.1 --B 10,50,100,500 --out curves.csv
//   entangle selftest

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "entangle/corpus.hpp"
#include "entangle/report.hpp"

namespace {

using namespace entangle;

int analyze(const RunConfig& config) {
    const auto result = run_analyze(config);
    for (const auto method : config.methods) {
        std::cout << "# " << to_string(method) << '\n';
        for (const auto* topic : sorted_topics(result, method)) {
            std::cout << topic->topic_id;
            for (const auto& [key, cell] : topic->cells)
                if (key.second == method)
                    std::cout << "  p_" << key.first << "=" << cell.proportion.p;
            std::cout << '\n';
        }
    }
    std::cout << "wrote " << result.files.size() << " files to " << config.output_dir.string()
              << '\n';
    return kExitOk;
}

int simulate(const SimulateConfig& config) {
    const auto curves = run_simulate(config);
    std::cout << "wrote " << curves.estimates.size() << " points to " << config.out.string()
              << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conceptual entanglement in document collections: CHSH tests over term "
                 "co-occurrence windows"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    RunConfig run;
    std::vector<std::string> methods;
    std::string stoplist;
    bool no_stem = false;
    std::string binning = "unit";
    auto* analyze_cmd = app.add_subcommand("analyze", "Measure p_W(T) for every topic of a corpus");
    analyze_cmd->add_option("--manifest", run.manifest, "Corpus manifest (JSON)")->required();
    analyze_cmd->add_option("--window", run.window_sizes, "Window sizes (default 20,10,5)")
        ->delimiter(',');
    analyze_cmd->add_option("--relevance", methods, "frequency and/or tfidf (default both)")
        ->delimiter(',')
        ->check(CLI::IsMember({"frequency", "tfidf"}));
    analyze_cmd->add_option("--k", run.k, "Exemplars per concept")->capture_default_str();
    analyze_cmd->add_option("--out", run.output_dir, "Output directory")->capture_default_str();
    analyze_cmd->add_option("--seed", run.seed, "Run seed (recorded; analysis is exhaustive)");
    analyze_cmd->add_option("--stoplist", stoplist, "Stoplist file, one word per line");
    analyze_cmd->add_flag("--no-stem", no_stem, "Disable Porter stemming");
    analyze_cmd->add_option("--binning", binning, "Histogram bins: unit or log2")
        ->check(CLI::IsMember({"unit", "log2"}))
        ->capture_default_str();
    analyze_cmd->add_option("--top", run.top_violations, "Violations kept per result file")
        ->capture_default_str();

    SimulateConfig sim;
    std::string kind = "zipf";
    std::string lambda_grid = "0.1:2.0:0.1";
    std::string mu_grid;
    auto* simulate_cmd = app.add_subcommand("simulate", "Estimate p_B for random 4x4 matrices");
    simulate_cmd->add_option("--kind", kind, "zipf, homogeneous or poisson")
        ->check(CLI::IsMember({"zipf", "homogeneous", "poisson"}))
        ->capture_default_str();
    simulate_cmd->add_option("--lambda-grid", lambda_grid, "start:stop:step or a comma list")
        ->capture_default_str();
    simulate_cmd->add_option("--mu-grid", mu_grid, "Poisson means (default B/10)");
    simulate_cmd->add_option("--B", sim.bounds, "Support bounds")->delimiter(',');
    simulate_cmd->add_option("--samples", sim.samples, "Samples per grid point")
        ->capture_default_str();
    simulate_cmd->add_option("--seed", sim.seed, "Base seed")->capture_default_str();
    simulate_cmd->add_option("--out", sim.out, "Curve CSV path")->capture_default_str();

    bool corrupt = false;
    auto* selftest_cmd = app.add_subcommand("selftest", "Run the embedded oracle checks");
    selftest_cmd->add_flag("--corrupt-partitions", corrupt,
                           "Damage the partition table (negative control)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*analyze_cmd) {
            if (!methods.empty()) {
                run.methods.clear();
                for (const auto& m : methods) run.methods.push_back(parse_relevance_method(m));
            }
            if (!stoplist.empty()) run.stoplist = stoplist;
            run.stemming = !no_stem;
            run.binning = parse_binning(binning);
            validate(run);
            return analyze(run);
        }
        if (*simulate_cmd) {
            sim.kind = parse_distribution_kind(kind);
            if (sim.kind == DistributionKind::zipf)
                sim.grid = parse_grid(lambda_grid);
            else if (sim.kind == DistributionKind::poisson && !mu_grid.empty())
                sim.grid = parse_grid(mu_grid);
            else
                sim.grid.clear();
            if (sim.samples == 0) throw std::invalid_argument("--samples must be at least 1");
            if (sim.kind == DistributionKind::zipf) {
                for (const double lambda : sim.grid) {
                    if (const auto w = distribution_warning(DistributionSpec::zipf(lambda, 1))) {
                        std::cerr << "warning: " << *w << '\n';
                        break;
                    }
                }
            }
            return simulate(sim);
        }
        if (*selftest_cmd) {
            const auto checks = run_selftest({corrupt});
            print_selftest(std::cout, checks);
            for (const auto& c : checks)
                if (!c.passed) return kExitSelftest;
            return kExitOk;
        }
    } catch (const CorpusError& e) {
        std::cerr << "corpus error: " << e.what() << '\n';
        return kExitCorpus;
    } catch (const InsufficientVocabulary& e) {
        std::cerr << "corpus error: " << e.what() << '\n';
        return kExitCorpus;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCorpus;
    }
    return kExitUsage;
}
