#pragma once

#include <span>

namespace memsnn {

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-tailed
};

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_tailed(double t, double df);

// Welch's unequal-variance t-test. Each sample needs >= 2 values
// (std::invalid_argument otherwise). With zero variance in both samples the
// result is t = 0, p = 1 for equal means and t = +-inf, p = 0 otherwise.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> xs);
// Population standard deviation (divides by n).
double population_stddev(std::span<const double> xs);
double sample_variance(std::span<const double> xs);
double median(std::span<const double> xs);

}  // namespace memsnn
