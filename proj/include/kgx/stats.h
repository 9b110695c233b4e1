#pragma once

#include <vector>

namespace kgx {

struct CorrelationResult {
  double r = 0.0;
  int n = 0;
  double tStat = 0.0;
  double pValue = 1.0;
  int support = 0;  // count of 1s in the indicator
};

// Point-biserial correlation of a binary indicator with real scores:
// Pearson r, tStat = r*sqrt((n-2)/(1-r^2)), two-sided Student-t p-value with
// n-2 degrees of freedom. Throws TooFewSamples for n < 3 and ZeroVariance
// when either vector is constant.
CorrelationResult correlate(const std::vector<int>& indicator, const std::vector<double>& scores);

// Regularized incomplete beta I_x(a, b), evaluated with the standard
// continued fraction (modified Lentz), accurate to ~1e-14.
double incomplete_beta(double a, double b, double x);

// Two-sided tail probability of Student's t with df degrees of freedom.
double student_t_two_sided_p(double t, int df);

}  // namespace kgx
