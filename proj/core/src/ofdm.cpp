#include "fcf/ofdm.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "fcf/fft.hpp"
#include "fcf/numerology.hpp"

namespace fcf {
namespace {

// Gray-mapped PAM levels for one axis of a square QAM constellation.
double gray_pam(unsigned bits, unsigned value) {
    // bits in {1,2,3,4}; value < 2^bits. Gray decode then map to odd levels.
    unsigned g = value;
    for (unsigned shift = 1; shift < bits; shift <<= 1) g ^= g >> shift;
    const int levels = 1 << bits;
    return static_cast<double>(2 * static_cast<int>(g) - levels + 1);
}

cvec de_rotation_table(std::int64_t center_bin, int period) {
    cvec table(static_cast<std::size_t>(period));
    for (int n = 0; n < period; ++n) {
        const std::int64_t idx = mod_floor(center_bin * n, period);
        const double phase = -2.0 * M_PI * static_cast<double>(idx) / static_cast<double>(period);
        table[static_cast<std::size_t>(n)] = std::polar(1.0, phase);
    }
    return table;
}

} // namespace

SymbolGrid random_qam_grid(int l_act, int n_symbols, int bits_per_symbol, std::uint64_t seed) {
    if (bits_per_symbol != 2 && bits_per_symbol != 4 && bits_per_symbol != 6 && bits_per_symbol != 8)
        throw std::invalid_argument("random_qam_grid: bits_per_symbol must be 2, 4, 6 or 8");
    const unsigned axis_bits = static_cast<unsigned>(bits_per_symbol / 2);
    const int m_axis = 1 << axis_bits;
    // unit average power: E|s|^2 = 2 (M^2 - 1) / 3 per axis pair
    const double scale = 1.0 / std::sqrt(2.0 * (m_axis * m_axis - 1) / 3.0);
    std::mt19937_64 rng(seed);
    SymbolGrid g(l_act, n_symbols);
    for (auto& v : g.x) {
        const std::uint64_t r = rng();
        const unsigned i = static_cast<unsigned>(r) & (m_axis - 1);
        const unsigned q = static_cast<unsigned>(r >> 32) & (m_axis - 1);
        v = cplx(gray_pam(axis_bits, i), gray_pam(axis_bits, q)) * scale;
    }
    return g;
}

cvec cp_ofdm_modulate(const SymbolGrid& grid, int l_ofdm, int l_cp) {
    if (l_cp >= l_ofdm) throw ConfigError("cp_ofdm_modulate: l_cp must be smaller than l_ofdm");
    if (grid.l_act > l_ofdm) throw ConfigError("cp_ofdm_modulate: l_act exceeds l_ofdm");
    const int half = grid.l_act / 2;
    const double scale = 1.0 / std::sqrt(static_cast<double>(l_ofdm));
    cvec out;
    out.reserve(static_cast<std::size_t>(grid.n_symbols) * (l_ofdm + l_cp));
    cvec bins(static_cast<std::size_t>(l_ofdm));
    for (int s = 0; s < grid.n_symbols; ++s) {
        std::fill(bins.begin(), bins.end(), cplx(0.0, 0.0));
        for (int k = 0; k < grid.l_act; ++k) {
            const int bin = static_cast<int>(mod_floor(k - half, l_ofdm));
            bins[static_cast<std::size_t>(bin)] = grid.at(k, s);
        }
        cvec t = ifft_unnormalized(bins);
        for (auto& v : t) v *= scale; // unitary IDFT
        for (int n = l_ofdm - l_cp; n < l_ofdm; ++n) out.push_back(t[static_cast<std::size_t>(n)]);
        out.insert(out.end(), t.begin(), t.end());
    }
    return out;
}

SymbolGrid cp_ofdm_demod_highrate(const cvec& signal, int n_ofdm, int n_cp, int l_act,
                                  int n_symbols, std::int64_t center_bin, int n_long,
                                  int timing_advance) {
    const std::size_t want = static_cast<std::size_t>(n_symbols) * (n_ofdm + n_cp);
    if (signal.size() != want)
        throw ConfigError("cp_ofdm_demod_highrate: signal length " + std::to_string(signal.size()) +
                          " does not match n_symbols*(n_ofdm+n_cp) = " + std::to_string(want));
    if (timing_advance < 0 || timing_advance > n_cp)
        throw ConfigError("cp_ofdm_demod_highrate: timing_advance must lie within the CP");
    cvec base;
    const cvec* src = &signal;
    if (center_bin != 0) {
        const cvec rot = de_rotation_table(center_bin, n_long);
        base.resize(signal.size());
        for (std::size_t n = 0; n < signal.size(); ++n)
            base[n] = signal[n] * rot[n % static_cast<std::size_t>(n_long)];
        src = &base;
    }
    const int half = l_act / 2;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_ofdm));
    SymbolGrid g(l_act, n_symbols);
    cvec sym(static_cast<std::size_t>(n_ofdm));
    for (int s = 0; s < n_symbols; ++s) {
        const std::size_t start =
            static_cast<std::size_t>(s) * (n_ofdm + n_cp) + static_cast<std::size_t>(n_cp - timing_advance);
        std::copy(src->begin() + start, src->begin() + start + n_ofdm, sym.begin());
        cvec bins = fft(sym);
        for (int k = 0; k < l_act; ++k) {
            const int bin = static_cast<int>(mod_floor(k - half, n_ofdm));
            g.at(k, s) = bins[static_cast<std::size_t>(bin)] * scale;
        }
    }
    return g;
}

SymbolGrid cp_ofdm_demod_decimated(const cvec& signal, int l_ofdm, int l_cp, int interp,
                                   int l_act, int n_symbols, std::int64_t center_bin,
                                   int n_long, int timing_advance) {
    if (interp < 1) throw ConfigError("cp_ofdm_demod_decimated: interp must be >= 1");
    const std::size_t want = static_cast<std::size_t>(n_symbols) * (l_ofdm + l_cp) *
                             static_cast<std::size_t>(interp);
    if (signal.size() != want)
        throw ConfigError("cp_ofdm_demod_decimated: signal length " + std::to_string(signal.size()) +
                          " does not match interp*n_symbols*(l_ofdm+l_cp) = " + std::to_string(want));
    if (n_long % interp != 0)
        throw ConfigError("cp_ofdm_demod_decimated: n_long must be divisible by interp");
    cvec low(want / static_cast<std::size_t>(interp));
    for (std::size_t k = 0; k < low.size(); ++k) low[k] = signal[k * static_cast<std::size_t>(interp)];
    const double gain = std::sqrt(static_cast<double>(interp));
    for (auto& v : low) v *= gain;
    // at low rate the center-bin rotation advances interp bins per sample
    return cp_ofdm_demod_highrate(low, l_ofdm, l_cp, l_act, n_symbols, center_bin,
                                  n_long / interp, timing_advance);
}

SymbolGrid zf_equalize(const SymbolGrid& rx, const SymbolGrid& tx_ref) {
    if (rx.l_act != tx_ref.l_act || rx.n_symbols != tx_ref.n_symbols)
        throw ConfigError("zf_equalize: grid dimensions mismatch");
    SymbolGrid out(rx.l_act, rx.n_symbols);
    for (int k = 0; k < rx.l_act; ++k) {
        cplx num(0.0, 0.0);
        double den = 0.0;
        for (int s = 0; s < rx.n_symbols; ++s) {
            num += rx.at(k, s) * std::conj(tx_ref.at(k, s));
            den += std::norm(tx_ref.at(k, s));
        }
        if (den == 0.0)
            throw ConfigError("zf_equalize: zero-energy subcarrier " + std::to_string(k) +
                              " in reference grid");
        const cplx gain = num / den;
        for (int s = 0; s < rx.n_symbols; ++s) out.at(k, s) = rx.at(k, s) / gain;
    }
    return out;
}

} // namespace fcf
