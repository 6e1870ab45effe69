#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entangle/chsh.hpp"

namespace entangle {

enum class DistributionKind { zipf, homogeneous, poisson };

std::string_view to_string(DistributionKind k);
DistributionKind parse_distribution_kind(std::string_view name);

/// Law of a single co-occurrence count on the support {1, ..., B}.
struct DistributionSpec {
    DistributionKind kind = DistributionKind::zipf;
    double lambda = 1.0;    // zipf exponent
    std::uint32_t B = 100;  // support bound
    double mu = 10.0;       // poisson mean before truncation

    static DistributionSpec zipf(double lambda, std::uint32_t B);
    static DistributionSpec homogeneous(std::uint32_t B);
    static DistributionSpec poisson(double mu, std::uint32_t B);
};

/// Throws std::invalid_argument for B < 1, a negative or non-finite zipf
/// exponent, or a non-positive poisson mean.
void validate(const DistributionSpec& spec);

/// Non-fatal remarks about a valid spec (zipf with lambda = 0 is uniform).
std::optional<std::string> distribution_warning(const DistributionSpec& spec);

/// P(n) for n = 1..B (index 0 holds n = 1):
///   zipf         n^-lambda / sum_m m^-lambda
///   homogeneous  1 / B
///   poisson      mu^n e^-mu / n!, renormalised on 1..B
std::vector<double> distribution_pmf(const DistributionSpec& spec);

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// splitmix64 finaliser over (seed, index); used for per-task seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Inverse-CDF sampler over the spec's pmf.
class CountSampler {
public:
    explicit CountSampler(const DistributionSpec& spec);

    std::uint64_t operator()(Rng& rng) const;
    const std::vector<double>& cdf() const { return cdf_; }

private:
    std::vector<double> cdf_;
};

/// Sixteen i.i.d. counts, filled row by row; labels r0..r3 / c0..c3.
SubMatrix sample_submatrix(const CountSampler& sampler, Rng& rng);
SubMatrix sample_submatrix(const DistributionSpec& spec, Rng& rng);

struct ViolationEstimate {
    DistributionSpec spec;
    std::size_t n_samples = 0;
    std::size_t n_violations = 0;
    double p_hat = 0.0;
    double std_err = 0.0;  // sqrt(p_hat (1 - p_hat) / n_samples)
    std::uint64_t seed = 0;
};

/// Fraction of sampled 4x4 matrices with some partition giving |S| > 2.
/// Fully determined by (spec, n_samples, seed). Throws for n_samples = 0.
ViolationEstimate estimate_violation_probability(const DistributionSpec& spec,
                                                 std::size_t n_samples, std::uint64_t seed);

struct CurveSet {
    std::vector<DistributionSpec> grid;
    std::vector<ViolationEstimate> estimates;
};

/// Grid points are ordered B-major, then by parameter. The parameter grid is
/// lambda for zipf and mu for poisson (empty: mu = B / 10); homogeneous
/// ignores it and yields one point per B. Point i is estimated with seed
/// derive_seed(seed, i).
CurveSet parameter_sweep(DistributionKind kind, std::span<const double> parameter_grid,
                         std::span<const std::uint32_t> bounds, std::size_t n_samples,
                         std::uint64_t seed);

/// Expands "start:stop:step" (inclusive stop) or a comma list.
std::vector<double> parse_grid(std::string_view text);

/// Header "kind,lambda,mu,B,n_samples,p_hat,std_err,seed"; fields that do not
/// apply to the kind are left empty.
void write_curve_csv(std::ostream& os, const CurveSet& curves);

}  // namespace entangle
