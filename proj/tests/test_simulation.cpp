#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "entangle/simulation.hpp"

using namespace entangle;

TEST_CASE("pmf examples") {
    const auto z = distribution_pmf(DistributionSpec::zipf(1.0, 2));
    REQUIRE(z.size() == 2);
    CHECK(z[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(z[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    CHECK(distribution_pmf(DistributionSpec::homogeneous(4)) == std::vector<double>(4, 0.25));

    const auto flat = DistributionSpec::zipf(0.0, 5);
    for (const auto p : distribution_pmf(flat)) CHECK(p == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(distribution_warning(flat).has_value());
    CHECK_FALSE(distribution_warning(DistributionSpec::zipf(0.3, 5)).has_value());

    for (const auto& spec : {DistributionSpec::zipf(2, 1), DistributionSpec::homogeneous(1),
                             DistributionSpec::poisson(3, 1)})
        CHECK(distribution_pmf(spec) == std::vector<double>{1.0});
}

TEST_CASE("pmf normalisation and shape") {
    std::vector<DistributionSpec> specs;
    for (const double lambda : {0.0, 0.1, 0.3, 0.7, 1.0, 2.0, 5.0})
        for (const std::uint32_t b : {1u, 2u, 10u, 100u, 500u, 5000u})
            specs.push_back(DistributionSpec::zipf(lambda, b));
    for (const double mu : {0.5, 1.0, 10.0, 50.0, 400.0})
        for (const std::uint32_t b : {1u, 10u, 100u, 500u})
            specs.push_back(DistributionSpec::poisson(mu, b));
    for (const auto& spec : specs) {
        const auto pmf = distribution_pmf(spec);
        double total = 0.0;
        for (const auto p : pmf) {
            CHECK(p >= 0.0);
            total += p;
        }
        CHECK(std::fabs(total - 1.0) <= 1e-12);
    }

    const auto z = distribution_pmf(DistributionSpec::zipf(0.7, 100));
    CHECK(z[9] / z[0] == doctest::Approx(std::pow(10.0, -0.7)).epsilon(1e-12));
    const auto p = distribution_pmf(DistributionSpec::poisson(10.0, 100));
    for (std::size_t n = 1; n < 40; ++n)
        CHECK(p[n] / p[n - 1] == doctest::Approx(10.0 / static_cast<double>(n + 1)).epsilon(1e-10));
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS(validate(DistributionSpec::zipf(-0.1, 10)), std::invalid_argument);
    CHECK_THROWS_AS(validate(DistributionSpec::zipf(NAN, 10)), std::invalid_argument);
    CHECK_THROWS_AS(validate(DistributionSpec::zipf(1.0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(validate(DistributionSpec::poisson(0.0, 10)), std::invalid_argument);
    CHECK_THROWS_AS(distribution_pmf(DistributionSpec::homogeneous(0)), std::invalid_argument);
    CHECK_NOTHROW(validate(DistributionSpec::zipf(0.0, 10)));
    CHECK(parse_distribution_kind("poisson") == DistributionKind::poisson);
    CHECK(to_string(DistributionKind::homogeneous) == "homogeneous");
    CHECK_THROWS_AS(parse_distribution_kind("pareto"), std::invalid_argument);
}

TEST_CASE("sampler basics") {
    Rng rng(1);
    const auto one = sample_submatrix(DistributionSpec::zipf(0.7, 1), rng);
    for (const auto& row : one.f)
        for (const auto v : row) CHECK(v == 1);
    CHECK(one.rows[0] == "r0");
    CHECK(one.cols[3] == "c3");

    Rng a(123), b(123);
    const auto spec = DistributionSpec::zipf(0.7, 100);
    for (int i = 0; i < 20; ++i) CHECK(sample_submatrix(spec, a).f == sample_submatrix(spec, b).f);

    const CountSampler sampler(spec);
    CHECK(sampler.cdf().back() == 1.0);
    for (int i = 0; i < 10000; ++i) {
        const auto v = sampler(a);
        CHECK(v >= 1);
        CHECK(v <= 100);
    }
    CHECK(uniform01(a) < 1.0);
}

TEST_CASE("sampled counts follow the pmf") {
    for (const auto& spec : {DistributionSpec::zipf(0.7, 10), DistributionSpec::zipf(1.5, 20),
                             DistributionSpec::poisson(5.0, 15)}) {
        const auto pmf = distribution_pmf(spec);
        const CountSampler sampler(spec);
        Rng rng(derive_seed(9, spec.B));
        constexpr int kDraws = 100000;
        std::vector<int> hist(spec.B, 0);
        for (int i = 0; i < kDraws; ++i) ++hist[sampler(rng) - 1];
        double chi2 = 0.0;
        for (std::uint32_t n = 0; n < spec.B; ++n) {
            const double expected = kDraws * pmf[n];
            const double sigma = std::sqrt(kDraws * pmf[n] * (1.0 - pmf[n]));
            CHECK(std::fabs(hist[n] - expected) <= 3.0 * sigma + 1.0);
            if (expected > 0) chi2 += (hist[n] - expected) * (hist[n] - expected) / expected;
        }
        // Generous bound: df = B - 1 <= 19, the 0.999 quantile of chi2(19) is ~43.8.
        CHECK(chi2 < 44.0);
    }
}

TEST_CASE("violation estimates") {
    CHECK(estimate_violation_probability(DistributionSpec::zipf(0.7, 1), 500, 1).p_hat == 0.0);
    CHECK(estimate_violation_probability(DistributionSpec::homogeneous(1), 500, 1).n_violations == 0);
    CHECK_THROWS_AS(estimate_violation_probability(DistributionSpec::zipf(0.7, 10), 0, 1),
                    std::invalid_argument);

    const auto spec = DistributionSpec::zipf(0.7, 50);
    const auto e = estimate_violation_probability(spec, 100, 42);
    CHECK(e.n_samples == 100);
    CHECK(e.seed == 42);
    CHECK(e.p_hat >= 0.0);
    CHECK(e.p_hat <= 1.0);
    CHECK(e.p_hat == static_cast<double>(e.n_violations) / 100.0);
    CHECK(e.std_err == doctest::Approx(std::sqrt(e.p_hat * (1 - e.p_hat) / 100.0)).epsilon(1e-15));

    const auto again = estimate_violation_probability(spec, 100, 42);
    CHECK(again.n_violations == e.n_violations);
    const auto other = estimate_violation_probability(spec, 2000, 43);
    const auto other2 = estimate_violation_probability(spec, 2000, 44);
    CHECK(other.n_violations != other2.n_violations);  // seeds matter
}

TEST_CASE("grid parsing") {
    const auto g = parse_grid("0.1:2.0:0.1");
    REQUIRE(g.size() == 20);
    CHECK(g.front() == 0.1);
    CHECK(g[2] == 0.3);
    CHECK(g[6] == 0.7);
    CHECK(g.back() == 2.0);
    CHECK(parse_grid("0.3, 0.7,1") == std::vector<double>{0.3, 0.7, 1.0});
    CHECK(parse_grid("5") == std::vector<double>{5.0});
    CHECK_THROWS_AS(parse_grid(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_grid("1:0:0.1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_grid("0:1:0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_grid("a,b"), std::invalid_argument);
}

TEST_CASE("parameter sweeps") {
    const std::vector<std::uint32_t> bounds{10, 50, 100, 500};
    const auto grid = parse_grid("0.1:2.0:0.1");
    const auto curves = parameter_sweep(DistributionKind::zipf, grid, bounds, 20, 42);
    REQUIRE(curves.estimates.size() == 80);
    CHECK(curves.grid[0].B == 10);
    CHECK(curves.grid[19].B == 10);
    CHECK(curves.grid[20].B == 50);
    CHECK(curves.grid[21].lambda == grid[1]);
    for (std::size_t i = 0; i < curves.estimates.size(); ++i)
        CHECK(curves.estimates[i].seed == derive_seed(42, i));

    const auto flat = parameter_sweep(DistributionKind::homogeneous, grid, bounds, 20, 42);
    CHECK(flat.estimates.size() == 4);

    const auto pois = parameter_sweep(DistributionKind::poisson, {}, bounds, 20, 42);
    REQUIRE(pois.estimates.size() == 4);
    CHECK(pois.grid[2].mu == 10.0);
    const std::vector<double> mus{2.0, 8.0};
    CHECK(parameter_sweep(DistributionKind::poisson, mus, bounds, 20, 42).estimates.size() == 8);

    CHECK_THROWS_AS(parameter_sweep(DistributionKind::zipf, {}, bounds, 20, 42), std::invalid_argument);
    CHECK_THROWS_AS(parameter_sweep(DistributionKind::zipf, grid, {}, 20, 42), std::invalid_argument);
}

TEST_CASE("curve csv is byte-stable and thread independent") {
    const std::vector<std::uint32_t> bounds{10, 100};
    const std::vector<double> grid{0.3, 0.7};
    auto render = [&](const char* threads) {
        ::setenv("ENTANGLE_THREADS", threads, 1);
        std::ostringstream os;
        write_curve_csv(os, parameter_sweep(DistributionKind::zipf, grid, bounds, 300, 7));
        ::unsetenv("ENTANGLE_THREADS");
        return os.str();
    };
    const auto one = render("1");
    CHECK(one == render("1"));
    CHECK(one == render("3"));
    CHECK(one.rfind("kind,lambda,mu,B,n_samples,p_hat,std_err,seed\nzipf,0.3,,10,300,", 0) == 0);

    std::ostringstream h;
    write_curve_csv(h, parameter_sweep(DistributionKind::homogeneous, grid, bounds, 10, 7));
    CHECK(h.str().find("\nhomogeneous,,,10,10,") != std::string::npos);
    std::ostringstream p;
    write_curve_csv(p, parameter_sweep(DistributionKind::poisson, {}, bounds, 10, 7));
    CHECK(p.str().find("\npoisson,,1,10,10,") != std::string::npos);
}

TEST_CASE("std_err column with 100 samples") {
    std::ostringstream os;
    const auto curves =
        parameter_sweep(DistributionKind::zipf, std::vector<double>{0.7}, std::vector<std::uint32_t>{100}, 100, 42);
    const auto& e = curves.estimates[0];
    CHECK(e.std_err == doctest::Approx(std::sqrt(e.p_hat * (1 - e.p_hat) / 100)).epsilon(1e-15));
}

TEST_SUITE("curve-shape") {
    TEST_CASE("zipf 0.7 at B = 100 sits near one half") {
        const auto e = estimate_violation_probability(DistributionSpec::zipf(0.7, 100), 10000, 42);
        MESSAGE("p_hat = " << e.p_hat);
        CHECK(std::fabs(e.p_hat - 0.5) <= 0.1);
    }

    TEST_CASE("homogeneous stays well below zipf") {
        const auto z = estimate_violation_probability(DistributionSpec::zipf(0.7, 100), 10000, 42);
        const auto h = estimate_violation_probability(DistributionSpec::homogeneous(100), 10000, 42);
        MESSAGE("zipf " << z.p_hat << ", homogeneous " << h.p_hat);
        CHECK(h.p_hat < 0.5 * z.p_hat);
    }

    TEST_CASE("rate grows with B at lambda 0.7") {
        double previous = -1.0;
        for (const std::uint32_t b : {10u, 50u, 100u, 500u}) {
            const auto e = estimate_violation_probability(DistributionSpec::zipf(0.7, b), 10000, 42);
            CHECK(e.p_hat > previous);
            previous = e.p_hat;
        }
    }
}
