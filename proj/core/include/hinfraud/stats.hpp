#pragma once

namespace hinfraud {

// log of the beta function
double log_beta(double a, double b);

// Regularized incomplete beta function I_x(a, b), evaluated with the
// continued-fraction expansion (modified Lentz). Relative accuracy is driven
// to ~1e-14 terms, comfortably beyond six significant digits.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided p-value of a Student-t statistic with df degrees of freedom:
// I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_sided_p(double t, double df);

}  // namespace hinfraud
