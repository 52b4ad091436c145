// spectrum.hpp: absorption spectra from survival amplitudes.
#pragma once

#include "polariton/dynamics.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace polariton {

// HalfCosineTail tapers the final tail_fraction of the grid with a half
// cosine; None applies only the trapezoid end weights.
enum class Window { None, HalfCosineTail };

std::string to_string(Window w);

struct SpectrumOptions {
    double omega_min = 0.0;
    double omega_max = 0.0;
    std::size_t n_omega = 0;
    Window window = Window::HalfCosineTail;
    double tail_fraction = 0.1;

    void validate() const;
};

struct Spectrum {
    std::vector<double> omega;
    std::vector<double> intensity; // normalised to unit maximum
    double scale = 0.0;            // raw value of the maximum before normalisation
    Window window = Window::None;
};

// A(ω) ∝ Re Σ_n w_n c(t_n) e^{iω t_n} dt. Throws when |ω|·dt ≥ π anywhere
// on the requested range.
Spectrum spectrum(std::span<const cplx> c_t, const TimeGrid& grid, const SpectrumOptions& options);

// Unnormalised transform at a single frequency.
double transform_at(std::span<const cplx> c_t, const TimeGrid& grid, double omega, Window window,
                    double tail_fraction = 0.1);

struct Peak {
    double omega = 0.0;
    double height = 0.0; // relative to the spectrum maximum
};

// Local maxima above min_relative_height, refined between grid neighbours
// by Brent minimisation of the negated transform.
std::vector<Peak> find_peaks(const Spectrum& s, std::span<const cplx> c_t, const TimeGrid& grid,
                             double min_relative_height, double tail_fraction = 0.1);

} // namespace polariton
