#pragma once

namespace zaremba {

// k-th positive zero of J_nu (k >= 1, nu >= 0).
double bessel_zero(double nu, int k);

// k-th positive zero of J_nu' (k >= 1, nu >= 1; for nu = 0 the zero at the
// origin is skipped).
double bessel_derivative_zero(double nu, int k);

// Reference disk eigenvalues.
double dirichlet_disk_eigenvalue_1();         // j_{0,1}^2
double dirichlet_disk_eigenvalue_2();         // j_{1,1}^2 (double)
double neumann_disk_first_nonzero_eigenvalue();  // (j'_{1,1})^2 (double)

}  // namespace zaremba
