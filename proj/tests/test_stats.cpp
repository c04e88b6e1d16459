#include "exoamp/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace exoamp;

namespace {

RssTable uniform_table(int n_sub, double r1, double r2v, double r3)
{
    RssTable t(n_sub);
    for (int s = 0; s < n_sub; ++s)
        for (int e = 0; e < 9; ++e) {
            t.set(s, e, ModelKind::M1, r1);
            t.set(s, e, ModelKind::M2, r2v);
            t.set(s, e, ModelKind::M3, r3);
        }
    return t;
}

} // namespace

TEST_CASE("aggregation: single cell, uniform table, brute force")
{
    RssTable one(1, 1, 10);
    one.set(0, 0, ModelKind::M1, 3.25);
    CHECK(aggregate_rss(one, Scope::subject, 0, ModelKind::M1) == doctest::Approx(3.25));

    const RssTable t = uniform_table(10, 2.0, 2.0, 1.0);
    CHECK(aggregate_rss(t, Scope::subject, 3, ModelKind::M3) == doctest::Approx(9.0));
    CHECK(aggregate_rss(t, Scope::experiment, 5, ModelKind::M3) == doctest::Approx(10.0));
    CHECK(aggregate_rss(t, Scope::all, -1, ModelKind::M3) == doctest::Approx(90.0));

    // randomized table equals a direct loop
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    RssTable r(4);
    double direct[4] = {0, 0, 0, 0};
    double all = 0.0;
    for (int s = 0; s < 4; ++s)
        for (int e = 0; e < 9; ++e)
            for (ModelKind k : {ModelKind::M1, ModelKind::M2, ModelKind::M3}) {
                const double v = u(rng);
                r.set(s, e, k, v);
                if (k == ModelKind::M2) {
                    direct[s] += v;
                    all += v;
                }
            }
    for (int s = 0; s < 4; ++s)
        CHECK(aggregate_rss(r, Scope::subject, s, ModelKind::M2) == doctest::Approx(direct[s]));
    CHECK(aggregate_rss(r, Scope::all, -1, ModelKind::M2) == doctest::Approx(all));
}

TEST_CASE("missing cell reported by name")
{
    RssTable t(2);
    t.set(0, 0, ModelKind::M1, 1.0);
    try {
        aggregate_rss(t, Scope::subject, 0, ModelKind::M3);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("sub=0") != std::string::npos);
        CHECK(msg.find("M3") != std::string::npos);
    }
}

TEST_CASE("F statistic structure and degrees of freedom")
{
    const RssTable t = uniform_table(10, 2.0, 1.0, 1.0);

    const FTestReport sub = f_statistic(t, Scope::subject, 0, Comparison::M1_vs_M3);
    CHECK(sub.d1 == 9);
    CHECK(sub.d2 == 144);
    CHECK(sub.F == doctest::Approx(16.0)); // R_M1 = 2 R_M3 -> 1 * d2/d1

    const FTestReport exp = f_statistic(t, Scope::experiment, 0, Comparison::M1_vs_M3);
    CHECK(exp.d1 == 10);
    CHECK(exp.d2 == 160);

    const FTestReport all = f_statistic(t, Scope::all, -1, Comparison::M1_vs_M3);
    CHECK(all.d1 == 90);
    CHECK(all.d2 == 1440);
    CHECK(all.F == doctest::Approx(16.0));
    CHECK(all.significant);

    const FTestReport same = f_statistic(t, Scope::subject, 0, Comparison::M2_vs_M3);
    CHECK(same.F == doctest::Approx(0.0));
    CHECK_FALSE(same.significant);
}

TEST_CASE("F statistic is monotone in R_Mi")
{
    double prev = -1.0;
    for (double r1 = 1.0; r1 < 3.0; r1 += 0.1) {
        const RssTable t = uniform_table(3, r1, 1.0, 1.0);
        const double F = f_statistic(t, Scope::all, -1, Comparison::M1_vs_M3).F;
        CHECK(F > prev);
        prev = F;
    }
}

TEST_CASE("degenerate perfect fit")
{
    const RssTable t = uniform_table(2, 1.0, 1.0, 0.0);
    CHECK_THROWS_AS(f_statistic(t, Scope::all, -1, Comparison::M1_vs_M3), NumericError);
}

TEST_CASE("critical values reproduce the reported constants")
{
    CHECK(f_critical(0.05, 9, 144) == doctest::Approx(1.95).epsilon(0.0052));
    CHECK(f_critical(0.05, 10, 160) == doctest::Approx(1.89).epsilon(0.0053));
    CHECK(f_critical(0.05, 90, 1440) == doctest::Approx(1.27).epsilon(0.0079));
    // tighter frozen values (independent quantile oracle)
    CHECK(f_critical(0.05, 9, 144) == doctest::Approx(1.94545).epsilon(2e-4));
    CHECK(f_critical(0.05, 10, 160) == doctest::Approx(1.89031).epsilon(2e-4));
    CHECK(f_critical(0.05, 90, 1440) == doctest::Approx(1.26805).epsilon(2e-4));
}

TEST_CASE("cdf/quantile round trip")
{
    for (double p : {0.2, 0.1, 0.05, 0.01, 0.001})
        for (int d1 : {1, 5, 9, 90})
            for (int d2 : {4, 40, 144, 1440}) {
                const double q = f_critical(p, d1, d2);
                CHECK(f_cdf(q, d1, d2) == doctest::Approx(1.0 - p).epsilon(1e-6));
            }
}

TEST_CASE("incomplete beta sanity")
{
    CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == doctest::Approx(0.0));
    CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == doctest::Approx(1.0));
    // I_x(1,1) = x
    for (double x : {0.1, 0.5, 0.9})
        CHECK(regularized_incomplete_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-12));
    // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
    CHECK(regularized_incomplete_beta(3.5, 1.25, 0.37) ==
          doctest::Approx(1.0 - regularized_incomplete_beta(1.25, 3.5, 0.63)).epsilon(1e-12));
    CHECK_THROWS_AS(regularized_incomplete_beta(-1.0, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 1.0, 1.5), DomainError);
}
