#pragma once

namespace por {

/// Regularized upper incomplete gamma Q(a, x) = Γ(a, x) / Γ(a), for a > 0, x ≥ 0.
double igamc(double a, double x);

/// Regularized lower incomplete gamma P(a, x) = 1 - Q(a, x).
double igam(double a, double x);

/// Upper-tail probability of a χ² statistic with `dof` degrees of freedom.
double chi_square_sf(double statistic, double dof);

}  // namespace por
