#pragma once

#include "exoamp/types.hpp"

#include <map>
#include <tuple>
#include <vector>

namespace exoamp {

enum class Scope { subject, experiment, all };
enum class Comparison { M1_vs_M3, M2_vs_M3 };

const char* to_string(Scope s);
const char* to_string(Comparison c);

/// Complete (subject, experiment, model) -> RSS grid.  Aggregation and
/// F-statistics require every cell of the grid to be present.
class RssTable {
public:
    RssTable(int n_sub, int n_exp = 9, int n_samples = 10);

    void set(int sub, int exp, ModelKind kind, double rss);
    double get(int sub, int exp, ModelKind kind) const; // throws on missing cell

    int n_sub() const { return n_sub_; }
    int n_exp() const { return n_exp_; }
    int n_samples() const { return n_samples_; }
    bool complete() const;

private:
    int n_sub_, n_exp_, n_samples_;
    std::map<std::tuple<int, int, ModelKind>, double> cells_;
};

/// Sum of per-(subject,experiment) RSS values over the given scope.
/// subject scope: fixed subject `index`, summed over experiments;
/// experiment scope: fixed experiment `index`, summed over subjects;
/// all scope: summed over both (index ignored).
double aggregate_rss(const RssTable& table, Scope scope, int index, ModelKind kind);

struct FTestReport {
    Scope scope;
    int index; // subject or experiment id; -1 for all
    Comparison comparison;
    double F;
    int d1, d2;
    double F_crit;
    bool significant;
};

FTestReport f_statistic(const RssTable& table, Scope scope, int index, Comparison cmp,
                        double p = 0.05);

/// Upper-tail quantile of the F(d1,d2) distribution: P(F > result) = p.
double f_critical(double p, int d1, int d2);

double f_cdf(double x, int d1, int d2);

/// I_x(a, b), continued-fraction evaluation with symmetry switching.
double regularized_incomplete_beta(double a, double b, double x);

} // namespace exoamp
