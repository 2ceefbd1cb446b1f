#include "skyselect/stats.hpp"

#include <cmath>
#include <limits>

#include "skyselect/common.hpp"

namespace skyselect {
namespace {

// Continued fraction for the incomplete beta function, modified Lentz scheme.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;

  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw ValidationError("incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("incomplete beta requires a > 0 and b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("incomplete beta requires x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw ValidationError("t-test requires df > 0");
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return 1.0;
  double x = df / (df + t * t);
  return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

GroupSummary summarize(const std::vector<double>& xs) {
  if (xs.size() < 2) throw ValidationError("group summary requires at least 2 observations");
  GroupSummary g;
  g.n = xs.size();
  double sum = 0.0;
  for (double v : xs) sum += v;
  g.mean = sum / static_cast<double>(g.n);
  double ss = 0.0;
  for (double v : xs) ss += (v - g.mean) * (v - g.mean);
  g.sd = std::sqrt(ss / static_cast<double>(g.n - 1));
  return g;
}

TTestResult t_test(const GroupSummary& a, const GroupSummary& b) {
  if (a.n < 2 || b.n < 2) throw ValidationError("t-test requires n >= 2 per group");
  if (a.sd < 0.0 || b.sd < 0.0) throw ValidationError("t-test requires non-negative SDs");
  TTestResult r;
  r.df = static_cast<double>(a.n + b.n - 2);
  double pooled_var = ((a.n - 1) * a.sd * a.sd + (b.n - 1) * b.sd * b.sd) / r.df;
  double sp = std::sqrt(pooled_var);
  double diff = a.mean - b.mean;
  if (sp == 0.0) {
    if (diff == 0.0) {
      r.t = 0.0;
      r.p = 1.0;
      r.cohen_d = 0.0;
      return r;
    }
    r.infinite = true;
    double sign = diff > 0.0 ? 1.0 : -1.0;
    r.t = sign * std::numeric_limits<double>::infinity();
    r.cohen_d = r.t;
    r.p = 0.0;
    return r;
  }
  double se = sp * std::sqrt(1.0 / static_cast<double>(a.n) + 1.0 / static_cast<double>(b.n));
  r.t = diff / se;
  r.cohen_d = diff / sp;
  r.p = student_t_two_sided_p(r.t, r.df);
  return r;
}

TTestResult t_test_raw(const std::vector<double>& a, const std::vector<double>& b) {
  return t_test(summarize(a), summarize(b));
}

std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

}  // namespace skyselect
