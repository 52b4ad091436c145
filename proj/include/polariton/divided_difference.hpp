// divided_difference.hpp: divided differences of t ↦ e^{x t} at complex nodes.
#pragma once

#include <complex>

namespace polariton {

// e^z − 1 without cancellation near z = 0.
std::complex<double> expm1_complex(std::complex<double> z);

// g[x0, x1] for g(x) = e^{x t}; equals ∫₀ᵗ e^{x0 (t−s)} e^{x1 s} ds.
std::complex<double> exp_divided_difference(std::complex<double> x0, std::complex<double> x1, double t);

// g[x0, x1, x2] for g(x) = e^{x t}; equals the ordered double integral
// ∫₀ᵗ dt1 ∫₀^{t1} dt2 e^{x0 (t−t1)} e^{x1 (t1−t2)} e^{x2 t2}.
// Coincident and nearly coincident nodes are handled by a Taylor expansion.
std::complex<double> exp_divided_difference(std::complex<double> x0, std::complex<double> x1,
                                            std::complex<double> x2, double t);

} // namespace polariton
