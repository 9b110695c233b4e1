#include "kgx/stats.h"

#include <cmath>
#include <limits>

#include "kgx/error.h"

namespace kgx {

namespace {

// Continued fraction for I_x(a,b), modified Lentz. Converges fast for
// x < (a+1)/(a+b+2); the symmetry below handles the other half.
double beta_cf(double a, double b, double x) {
  const double tiny = 1e-300;
  const double eps = 1e-15;
  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double lnFront = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                   b * std::log(1.0 - x);
  double front = std::exp(lnFront);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, int df) {
  if (df <= 0) fail(Errc::BadInput, "degrees of freedom must be positive");
  if (std::isinf(t)) return 0.0;
  double x = df / (df + t * t);
  return incomplete_beta(df / 2.0, 0.5, x);
}

CorrelationResult correlate(const std::vector<int>& indicator, const std::vector<double>& scores) {
  if (indicator.size() != scores.size())
    fail(Errc::BadInput, "indicator and score vectors differ in length");
  int n = static_cast<int>(indicator.size());
  if (n < 3) fail(Errc::TooFewSamples, "need at least 3 samples, got " + std::to_string(n));

  int support = 0;
  double sumY = 0.0;
  for (int i = 0; i < n; ++i) {
    support += indicator[i] ? 1 : 0;
    sumY += scores[i];
  }
  if (support == 0 || support == n) fail(Errc::ZeroVariance, "constant indicator");
  bool constantScores = true;
  for (int i = 1; i < n && constantScores; ++i) constantScores = scores[i] == scores[0];
  if (constantScores) fail(Errc::ZeroVariance, "constant scores");

  double meanX = static_cast<double>(support) / n;
  double meanY = sumY / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    double dx = (indicator[i] ? 1.0 : 0.0) - meanX;
    double dy = scores[i] - meanY;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (syy == 0.0) fail(Errc::ZeroVariance, "constant scores");

  CorrelationResult res;
  res.n = n;
  res.support = support;
  res.r = sxy / std::sqrt(sxx * syy);
  if (res.r > 1.0) res.r = 1.0;
  if (res.r < -1.0) res.r = -1.0;

  int df = n - 2;
  double rr = res.r * res.r;
  if (rr >= 1.0) {
    res.tStat = res.r > 0 ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
    res.pValue = 0.0;
  } else {
    res.tStat = res.r * std::sqrt(df / (1.0 - rr));
    res.pValue = student_t_two_sided_p(res.tStat, df);
  }
  return res;
}

}  // namespace kgx
