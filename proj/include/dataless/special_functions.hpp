#pragma once

namespace dataless::special {

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

/// P(|T| >= |t|).
double student_t_two_sided_p(double t, double df);

double normal_cdf(double z);

/// P(|Z| >= |z|).
double normal_two_sided_p(double z);

}  // namespace dataless::special
