#include "exoamp/powerlaw.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <vector>

using namespace exoamp;

namespace {

// subject-average complex stiffness (K_h, H_h) per experiment
constexpr std::array<std::pair<double, double>, 9> kAveragePairs{{{16.35, 5.80},
                                                                  {15.13, 6.64},
                                                                  {12.40, 6.44},
                                                                  {36.52, 13.75},
                                                                  {29.60, 13.57},
                                                                  {24.37, 12.03},
                                                                  {65.12, 23.90},
                                                                  {57.03, 22.97},
                                                                  {48.63, 20.93}}};

} // namespace

TEST_CASE("cohort power law from the nine average pairs")
{
    const PowerLaw law = fit_power_law(kAveragePairs);
    CHECK(law.beta0 == doctest::Approx(-0.23).epsilon(0.05));
    CHECK(law.beta1 == doctest::Approx(0.90).epsilon(0.02));
    CHECK(law.r2 == doctest::Approx(0.95).epsilon(0.02));
    // frozen values from an independent regression of the same pairs
    CHECK(law.beta0 == doctest::Approx(-0.22940).epsilon(1e-4));
    CHECK(law.beta1 == doctest::Approx(0.90173).epsilon(1e-4));
    CHECK(law.r2 == doctest::Approx(0.95488).epsilon(1e-4));
}

TEST_CASE("exact line in log space")
{
    std::vector<std::pair<double, double>> pts;
    for (double K : {2.0, 7.0, 31.0, 120.0})
        pts.emplace_back(K, std::pow(10.0, -0.5) * K);
    const PowerLaw law = fit_power_law(pts);
    CHECK(law.beta0 == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(law.beta1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(law.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two points interpolate exactly")
{
    std::vector<std::pair<double, double>> pts{{4.0, 3.0}, {40.0, 17.0}};
    const PowerLaw law = fit_power_law(pts);
    CHECK(law.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(predict_H(law, 4.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(predict_H(law, 40.0) == doctest::Approx(17.0).epsilon(1e-12));
}

TEST_CASE("domain errors")
{
    std::vector<std::pair<double, double>> one{{4.0, 3.0}};
    CHECK_THROWS_AS(fit_power_law(one), DomainError);
    std::vector<std::pair<double, double>> neg{{4.0, 3.0}, {5.0, -0.2}};
    CHECK_THROWS_AS(fit_power_law(neg), DomainError);
    CHECK_THROWS_AS(geometric_average(std::vector<double>{}), DomainError);
    CHECK_THROWS_AS(geometric_average(std::vector<double>{1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(predict_H(PowerLaw{0, 1, 1}, -1.0), DomainError);
}

TEST_CASE("geometric average")
{
    CHECK(geometric_average(std::vector<double>{10.0, 1000.0}) == doctest::Approx(100.0));
    CHECK(geometric_average(std::vector<double>{7.5, 7.5, 7.5}) == doctest::Approx(7.5));
    // Exp-1 K_h column across the ten subjects
    const std::vector<double> exp1{12.68, 28.67, 17.76, 16.88, 11.55,
                                   13.41, 17.95, 17.37, 18.85, 13.77};
    CHECK(geometric_average(exp1) == doctest::Approx(16.35).epsilon(2e-3));
}

TEST_CASE("predict_H examples")
{
    CHECK(predict_H(PowerLaw{-0.23, 0.90, 0.95}, 32.96) == doctest::Approx(13.68).epsilon(1e-3));
    CHECK(predict_H(PowerLaw{0.0, 1.0, 1.0}, 123.4) == doctest::Approx(123.4));
}

TEST_CASE("sample/refit round trip recovers the law")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> b0(-1.0, 0.5), b1(0.4, 1.4), Kd(5.0, 150.0);
    for (int trial = 0; trial < 200; ++trial) {
        const PowerLaw truth{b0(rng), b1(rng), 1.0};
        std::vector<std::pair<double, double>> pts;
        const int n = 2 + static_cast<int>(rng() % 8);
        for (int i = 0; i < n; ++i) {
            const double K = Kd(rng) * (1.0 + 1e-3 * i); // distinct
            pts.emplace_back(K, predict_H(truth, K));
        }
        const PowerLaw fit = fit_power_law(pts);
        CHECK(fit.beta0 == doctest::Approx(truth.beta0).epsilon(1e-10));
        CHECK(fit.beta1 == doctest::Approx(truth.beta1).epsilon(1e-10));
    }
}

TEST_CASE("stiffness rescaling: slope invariant, predictions consistent")
{
    const PowerLaw base = fit_power_law(kAveragePairs);
    for (double lambda : {0.5, 2.0, 10.0}) {
        std::vector<std::pair<double, double>> scaled;
        for (const auto& [K, H] : kAveragePairs)
            scaled.emplace_back(lambda * K, H);
        const PowerLaw re = fit_power_law(scaled);
        CHECK(re.beta1 == doctest::Approx(base.beta1).epsilon(1e-10));
        for (const auto& [K, H] : kAveragePairs)
            CHECK(predict_H(re, lambda * K) == doctest::Approx(predict_H(base, K)).epsilon(1e-9));
    }
}

TEST_CASE("beta1 classification picks the worst-case stiffness endpoint")
{
    const double Klo = 10.03, Khi = 108.33;
    const PowerLaw dec{-0.1, 0.7, 1.0};  // c_h decreasing in K: minimum at K_high
    const PowerLaw inc{-0.5, 1.2, 1.0};  // c_h increasing in K: minimum at K_low
    const auto c = [](const PowerLaw& law, double K) {
        return std::pow(10.0, law.beta0) * std::pow(K, law.beta1 - 1.0);
    };
    CHECK(c(dec, Khi) < c(dec, Klo));
    CHECK(c(inc, Klo) < c(inc, Khi));
}
