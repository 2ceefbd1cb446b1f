#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace skyselect {

struct GroupSummary {
  size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample SD (n-1 denominator)
};

// Mean and sample SD; n must be >= 2.
GroupSummary summarize(const std::vector<double>& xs);

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
  double cohen_d = 0.0;
  bool infinite = false;  // pooled SD zero with unequal means
};

// Student's two-sample t-test with pooled SD (df = n1 + n2 - 2); the sign of
// t and d follows mean(a) - mean(b). Cohen's d = (mean(a) - mean(b)) / s_p.
// Zero pooled SD: equal means give t = 0, p = 1; unequal means set the
// `infinite` flag with p = 0.
TTestResult t_test(const GroupSummary& a, const GroupSummary& b);
TTestResult t_test_raw(const std::vector<double>& a, const std::vector<double>& b);

// Significance stars: *** p<0.001, ** p<0.01, * p<0.05, empty otherwise.
std::string significance_stars(double p);

// Regularized incomplete beta I_x(a, b) via the continued-fraction (modified
// Lentz) evaluation; absolute accuracy ~1e-14 for moderate a, b.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided Student p-value: I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_sided_p(double t, double df);

}  // namespace skyselect
