#include "polariton/spectrum.hpp"

#include "polariton/errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polariton {

std::string to_string(Window w) { return w == Window::None ? "none" : "half-cosine-tail"; }

void SpectrumOptions::validate() const {
    if (n_omega < 2) throw std::invalid_argument("spectrum: need at least two frequencies");
    if (!(omega_max > omega_min)) throw std::invalid_argument("spectrum: omega_max must exceed omega_min");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw std::invalid_argument("spectrum: tail_fraction out of (0, 1]");
}

namespace {

std::vector<double> weights(const TimeGrid& grid, Window window, double tail_fraction) {
    std::vector<double> w(grid.samples(), 1.0);
    w.front() = 0.5;
    w.back() = 0.5;
    if (window == Window::HalfCosineTail) {
        const double t_start = (1.0 - tail_fraction) * grid.t_max;
        const double width = tail_fraction * grid.t_max;
        for (std::size_t n = 0; n < w.size(); ++n) {
            const double t = grid.time(n);
            if (t > t_start) w[n] *= 0.5 * (1.0 + std::cos(std::numbers::pi * (t - t_start) / width));
        }
    }
    return w;
}

double transform(std::span<const cplx> c_t, const std::vector<double>& w, double dt, double omega) {
    // Incremental phasor, renormalised periodically to stop drift.
    const cplx step = std::polar(1.0, omega * dt);
    cplx phase = 1.0;
    double sum = 0.0;
    for (std::size_t n = 0; n < c_t.size(); ++n) {
        if (n % 256 == 0) phase = std::polar(1.0, omega * dt * static_cast<double>(n));
        sum += w[n] * (c_t[n] * phase).real();
        phase *= step;
    }
    return sum * dt;
}

void check(std::span<const cplx> c_t, const TimeGrid& grid, double omega) {
    grid.validate();
    if (c_t.size() != grid.samples()) throw std::invalid_argument("spectrum: amplitude count does not match the grid");
    if (std::abs(omega) * grid.dt() >= std::numbers::pi) {
        throw std::invalid_argument("spectrum: grid too coarse for frequency " + std::to_string(omega));
    }
}

} // namespace

double transform_at(std::span<const cplx> c_t, const TimeGrid& grid, double omega, Window window,
                    double tail_fraction) {
    check(c_t, grid, omega);
    return transform(c_t, weights(grid, window, tail_fraction), grid.dt(), omega);
}

Spectrum spectrum(std::span<const cplx> c_t, const TimeGrid& grid, const SpectrumOptions& options) {
    options.validate();
    check(c_t, grid, options.omega_min);
    check(c_t, grid, options.omega_max);
    const auto w = weights(grid, options.window, options.tail_fraction);
    Spectrum s;
    s.window = options.window;
    s.omega.resize(options.n_omega);
    s.intensity.resize(options.n_omega);
    const double d_omega = (options.omega_max - options.omega_min) / static_cast<double>(options.n_omega - 1);
    for (std::size_t i = 0; i < options.n_omega; ++i) {
        s.omega[i] = options.omega_min + d_omega * static_cast<double>(i);
        s.intensity[i] = transform(c_t, w, grid.dt(), s.omega[i]);
    }
    const double peak = *std::max_element(s.intensity.begin(), s.intensity.end());
    if (!(peak > 0.0) || !std::isfinite(peak)) throw GuardError("spectrum: no positive intensity on the frequency range");
    s.scale = peak;
    for (auto& v : s.intensity) v /= peak;
    return s;
}

std::vector<Peak> find_peaks(const Spectrum& s, std::span<const cplx> c_t, const TimeGrid& grid,
                             double min_relative_height, double tail_fraction) {
    const auto w = weights(grid, s.window, tail_fraction);
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < s.intensity.size(); ++i) {
        if (s.intensity[i] < min_relative_height) continue;
        if (!(s.intensity[i] > s.intensity[i - 1] && s.intensity[i] >= s.intensity[i + 1])) continue;
        const auto neg = [&](double omega) { return -transform(c_t, w, grid.dt(), omega); };
        const auto [x, fx] = boost::math::tools::brent_find_minima(neg, s.omega[i - 1], s.omega[i + 1], 52);
        peaks.push_back({x, -fx / s.scale});
    }
    return peaks;
}

} // namespace polariton
