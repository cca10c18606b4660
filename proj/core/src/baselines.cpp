#include "fcf/baselines.hpp"

#include <cmath>

#include "fcf/fcfb.hpp"
#include "fcf/numerology.hpp"

namespace fcf {

double wola_ramp(int k, int slope) {
    return 0.5 * (1.0 - std::cos(M_PI * (k + 0.5) / slope));
}

cvec wola_tx(const cvec& x, int sym_len, const WolaConfig& cfg) {
    const int slope = cfg.slope;
    if (slope == 0) return x;
    if (x.size() % static_cast<std::size_t>(sym_len) != 0)
        throw ConfigError("wola_tx: signal is not a whole number of symbols");
    const int n_sym = static_cast<int>(x.size()) / sym_len;
    if (slope < 0 || slope > sym_len)
        throw ConfigError("wola_tx: slope exceeds the symbol length");
    cvec y(x.size() + static_cast<std::size_t>(slope), cplx(0.0, 0.0));
    for (int s = 0; s < n_sym; ++s) {
        const std::size_t base = static_cast<std::size_t>(s) * sym_len;
        for (int n = 0; n < sym_len; ++n) {
            double w = 1.0;
            if (n < slope) w = wola_ramp(n, slope);
            y[base + static_cast<std::size_t>(n)] += x[base + static_cast<std::size_t>(n)] * w;
        }
        // cyclic postfix: first slope samples of the symbol body, faded out
        // over the next symbol's CP head
        for (int k = 0; k < slope; ++k) {
            const double w = 1.0 - wola_ramp(k, slope);
            y[base + static_cast<std::size_t>(sym_len + k)] +=
                x[base + static_cast<std::size_t>(k)] * w;
        }
    }
    return y;
}

cvec wola_rx(const cvec& x, int sym_len, int n_cp, int n_ofdm, const WolaConfig& cfg) {
    const int slope = cfg.slope;
    if (slope == 0) return x;
    if (slope < 0 || slope > n_cp)
        throw ConfigError("wola_rx: slope exceeds the CP length");
    if (x.size() % static_cast<std::size_t>(sym_len) != 0)
        throw ConfigError("wola_rx: signal is not a whole number of symbols");
    const int n_sym = static_cast<int>(x.size()) / sym_len;
    cvec y = x;
    for (int s = 0; s < n_sym; ++s) {
        const std::size_t body = static_cast<std::size_t>(s) * sym_len + n_cp;
        // crossfade the tail of the body with the cyclic copy sitting in the CP
        for (int k = 0; k < slope; ++k) {
            const double w = wola_ramp(k, slope);
            const std::size_t tail = body + static_cast<std::size_t>(n_ofdm - slope + k);
            const std::size_t cp_copy = body - static_cast<std::size_t>(slope) + k;
            y[tail] = (1.0 - w) * x[tail] + w * x[cp_copy];
        }
    }
    return y;
}

FofdmConfig design_fofdm_prototype(int n_filt, Rational fs_hz, Rational cutoff_hz) {
    if (n_filt < 2 || n_filt % 2 != 0)
        throw ConfigError("design_fofdm_prototype: n_filt must be even and positive");
    const double fs = fs_hz.as_double();
    const double fc = cutoff_hz.as_double();
    FofdmConfig cfg;
    cfg.prototype.resize(static_cast<std::size_t>(n_filt) + 1);
    const double mid = n_filt / 2.0;
    double sum = 0.0;
    for (int n = 0; n <= n_filt; ++n) {
        const double t = n - mid;
        const double x = 2.0 * fc / fs;
        const double sinc = t == 0.0 ? x : std::sin(M_PI * x * t) / (M_PI * t);
        const double hann = 0.5 * (1.0 + std::cos(2.0 * M_PI * t / (n_filt + 1)));
        cfg.prototype[static_cast<std::size_t>(n)] = sinc * hann;
        sum += cfg.prototype[static_cast<std::size_t>(n)];
    }
    for (auto& v : cfg.prototype) v /= sum;
    return cfg;
}

cvec fofdm_tx(const cvec& x, const FofdmConfig& cfg) {
    cvec h(cfg.prototype.size());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = cplx(cfg.prototype[i], 0.0);
    const cvec full = linear_convolve(x, h);
    const std::int64_t delay = static_cast<std::int64_t>((cfg.prototype.size() - 1) / 2) -
                               cfg.timing_shift;
    if (delay < 0 || delay + static_cast<std::int64_t>(x.size()) > static_cast<std::int64_t>(full.size()))
        throw ConfigError("fofdm_tx: timing_shift exceeds the filter span");
    return cvec(full.begin() + static_cast<std::ptrdiff_t>(delay),
                full.begin() + static_cast<std::ptrdiff_t>(delay + static_cast<std::int64_t>(x.size())));
}

} // namespace fcf
