#include "entangle/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "entangle/format.hpp"
#include "entangle/parallel.hpp"

namespace entangle {

std::string_view to_string(DistributionKind k) {
    switch (k) {
        case DistributionKind::zipf: return "zipf";
        case DistributionKind::homogeneous: return "homogeneous";
        case DistributionKind::poisson: return "poisson";
    }
    return "zipf";
}

DistributionKind parse_distribution_kind(std::string_view name) {
    if (name == "zipf") return DistributionKind::zipf;
    if (name == "homogeneous") return DistributionKind::homogeneous;
    if (name == "poisson") return DistributionKind::poisson;
    throw std::invalid_argument("unknown distribution kind '" + std::string(name) +
                                "' (expected zipf, homogeneous or poisson)");
}

DistributionSpec DistributionSpec::zipf(double lambda, std::uint32_t B) {
    return {DistributionKind::zipf, lambda, B, 0.0};
}

DistributionSpec DistributionSpec::homogeneous(std::uint32_t B) {
    return {DistributionKind::homogeneous, 0.0, B, 0.0};
}

DistributionSpec DistributionSpec::poisson(double mu, std::uint32_t B) {
    return {DistributionKind::poisson, 0.0, B, mu};
}

void validate(const DistributionSpec& spec) {
    if (spec.B < 1) throw std::invalid_argument("support bound B must be at least 1");
    if (spec.kind == DistributionKind::zipf && !(std::isfinite(spec.lambda) && spec.lambda >= 0.0))
        throw std::invalid_argument("zipf exponent must be finite and non-negative, got " +
                                    format_number(spec.lambda));
    if (spec.kind == DistributionKind::poisson && !(std::isfinite(spec.mu) && spec.mu > 0.0))
        throw std::invalid_argument("poisson mean must be positive, got " +
                                    format_number(spec.mu));
}

std::optional<std::string> distribution_warning(const DistributionSpec& spec) {
    if (spec.kind == DistributionKind::zipf && spec.lambda == 0.0)
        return std::string("zipf exponent 0 is the homogeneous distribution");
    return std::nullopt;
}

std::vector<double> distribution_pmf(const DistributionSpec& spec) {
    validate(spec);
    std::vector<double> w(spec.B);
    switch (spec.kind) {
        case DistributionKind::zipf:
            for (std::uint32_t n = 1; n <= spec.B; ++n)
                w[n - 1] = std::pow(static_cast<double>(n), -spec.lambda);
            break;
        case DistributionKind::homogeneous:
            std::fill(w.begin(), w.end(), 1.0);
            break;
        case DistributionKind::poisson: {
            // log space: mu^n e^-mu / n! underflows for large n
            const double log_mu = std::log(spec.mu);
            double peak = -INFINITY;
            for (std::uint32_t n = 1; n <= spec.B; ++n) {
                w[n - 1] = n * log_mu - spec.mu - std::lgamma(n + 1.0);
                peak = std::max(peak, w[n - 1]);
            }
            for (auto& v : w) v = std::exp(v - peak);
            break;
        }
    }
    double total = 0.0;
    for (auto v : w) total += v;
    for (auto& v : w) v /= total;
    return w;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

CountSampler::CountSampler(const DistributionSpec& spec) {
    const auto pmf = distribution_pmf(spec);
    cdf_.resize(pmf.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        acc += pmf[i];
        cdf_[i] = acc;
    }
    cdf_.back() = 1.0;
}

std::uint64_t CountSampler::operator()(Rng& rng) const {
    const double u = uniform01(rng);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<std::uint64_t>(it - cdf_.begin()) + 1;
}

SubMatrix sample_submatrix(const CountSampler& sampler, Rng& rng) {
    Counts4x4 f{};
    for (auto& row : f)
        for (auto& v : row) v = sampler(rng);
    return SubMatrix::from_counts(f);
}

SubMatrix sample_submatrix(const DistributionSpec& spec, Rng& rng) {
    return sample_submatrix(CountSampler(spec), rng);
}

ViolationEstimate estimate_violation_probability(const DistributionSpec& spec,
                                                 std::size_t n_samples, std::uint64_t seed) {
    if (n_samples == 0) throw std::invalid_argument("n_samples must be at least 1");
    const CountSampler sampler(spec);
    Rng rng(seed);
    ViolationEstimate est{spec, n_samples, 0, 0.0, 0.0, seed};
    for (std::size_t i = 0; i < n_samples; ++i)
        if (max_abs_chsh(sample_submatrix(sampler, rng)).violated) ++est.n_violations;
    const double n = static_cast<double>(n_samples);
    est.p_hat = static_cast<double>(est.n_violations) / n;
    est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) / n);
    return est;
}

CurveSet parameter_sweep(DistributionKind kind, std::span<const double> parameter_grid,
                         std::span<const std::uint32_t> bounds, std::size_t n_samples,
                         std::uint64_t seed) {
    if (bounds.empty()) throw std::invalid_argument("parameter sweep needs at least one B");
    if (kind == DistributionKind::zipf && parameter_grid.empty())
        throw std::invalid_argument("zipf sweep needs a non-empty lambda grid");

    CurveSet curves;
    for (const auto B : bounds) {
        switch (kind) {
            case DistributionKind::zipf:
                for (const double lambda : parameter_grid)
                    curves.grid.push_back(DistributionSpec::zipf(lambda, B));
                break;
            case DistributionKind::homogeneous:
                curves.grid.push_back(DistributionSpec::homogeneous(B));
                break;
            case DistributionKind::poisson:
                if (parameter_grid.empty())
                    curves.grid.push_back(DistributionSpec::poisson(B / 10.0, B));
                for (const double mu : parameter_grid)
                    curves.grid.push_back(DistributionSpec::poisson(mu, B));
                break;
        }
    }
    for (const auto& spec : curves.grid) validate(spec);

    curves.estimates.resize(curves.grid.size());
    parallel_for(curves.grid.size(), [&](std::size_t i) {
        curves.estimates[i] =
            estimate_violation_probability(curves.grid[i], n_samples, derive_seed(seed, i));
    });
    return curves;
}

std::vector<double> parse_grid(std::string_view text) {
    auto to_double = [&](std::string_view s) {
        try {
            std::size_t used = 0;
            const std::string str(s);
            const double v = std::stod(str, &used);
            if (used != str.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("bad number '" + std::string(s) + "' in grid '" +
                                        std::string(text) + "'");
        }
    };
    std::vector<double> out;
    if (text.find(':') != std::string_view::npos) {
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string_view::npos)
            throw std::invalid_argument("range grid must be start:stop:step");
        const double start = to_double(text.substr(0, c1));
        const double stop = to_double(text.substr(c1 + 1, c2 - c1 - 1));
        const double step = to_double(text.substr(c2 + 1));
        if (!(step > 0.0) || stop < start)
            throw std::invalid_argument("range grid needs step > 0 and stop >= start");
        const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < n; ++i) {
            // snap to 12 decimals so 0.1 * 3 prints as 0.3
            const double v = start + static_cast<double>(i) * step;
            out.push_back(std::round(v * 1e12) / 1e12);
        }
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        if (!item.empty()) out.push_back(to_double(item));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty grid");
    return out;
}

void write_curve_csv(std::ostream& os, const CurveSet& curves) {
    os << "kind,lambda,mu,B,n_samples,p_hat,std_err,seed\n";
    for (const auto& e : curves.estimates) {
        os << to_string(e.spec.kind) << ',';
        if (e.spec.kind == DistributionKind::zipf) os << format_number(e.spec.lambda);
        os << ',';
        if (e.spec.kind == DistributionKind::poisson) os << format_number(e.spec.mu);
        os << ',' << e.spec.B << ',' << e.n_samples << ',' << format_number(e.p_hat) << ','
           << format_number(e.std_err) << ',' << e.seed << '\n';
    }
}

}  // namespace entangle
