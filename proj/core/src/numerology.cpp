#include "fcf/numerology.hpp"

#include <algorithm>
#include <cmath>

namespace fcf {

void SubbandConfig::validate() const {
    if (n_prb < 1) throw ConfigError("subband " + std::to_string(index) + ": n_prb must be >= 1");
    if (l_act != 12 * n_prb)
        throw ConfigError("subband " + std::to_string(index) + ": l_act must equal 12*n_prb");
    if (l_act > l_ofdm)
        throw ConfigError("subband " + std::to_string(index) + ": l_act exceeds l_ofdm");
    if (l_cp < 0 || l_cp >= l_ofdm)
        throw ConfigError("subband " + std::to_string(index) + ": l_cp must satisfy 0 <= l_cp < l_ofdm");
    if (l_ofdm % 2 != 0)
        throw ConfigError("subband " + std::to_string(index) + ": l_ofdm must be even");
    if (n_symbols < 1)
        throw ConfigError("subband " + std::to_string(index) + ": n_symbols must be >= 1");
    if (scs_hz.num <= 0) throw ConfigError("subband " + std::to_string(index) + ": scs_hz must be positive");
}

int derive_ofdm_ifft_length(int n_prb) {
    if (n_prb < 1) throw ConfigError("derive_ofdm_ifft_length: n_prb must be >= 1");
    int want = 12 * n_prb;
    int p = 1;
    while (p < want) p <<= 1;
    return std::max(p, 128);
}

std::int64_t fc_block_count(std::int64_t t_len, int l_short, int l_s) {
    const std::int64_t s_f = l_short - l_s;
    return ceil_div(2 * s_f + t_len - l_short, l_s) + 1;
}

FcConfig derive_fc_params(const std::vector<SubbandConfig>& subbands, int n_long,
                          Rational overlap, Rational fs_hz) {
    if (subbands.empty()) throw ConfigError("derive_fc_params: at least one subband required");
    if (n_long < 2) throw ConfigError("derive_fc_params: n_long must be >= 2");
    if (!(overlap > Rational(0) && overlap < Rational(1)))
        throw ConfigError("derive_fc_params: overlap must lie in (0,1)");
    if (fs_hz.num <= 0) throw ConfigError("derive_fc_params: fs_hz must be positive");

    FcConfig cfg;
    cfg.n_long = n_long;
    cfg.overlap = overlap;
    cfg.fs_hz = fs_hz;
    cfg.subbands = subbands;

    const Rational lam_n = overlap * Rational(n_long);
    if (!lam_n.is_integer())
        throw ConfigError("derive_fc_params: overlap*N = " + lam_n.str() + " is not an integer");
    cfg.n_s = static_cast<int>((Rational(n_long) - lam_n).as_int());

    cfg.per_subband.reserve(subbands.size());
    for (const auto& sb : subbands) {
        sb.validate();
        FcSubbandParams p;
        // Eq. for the subcarrier spacing: f_SCS = (L_m / N) fs / L_OFDM.
        const Rational l_short_r = sb.scs_hz * Rational(n_long) * Rational(sb.l_ofdm) / fs_hz;
        if (!l_short_r.is_integer())
            throw ConfigError("subband " + std::to_string(sb.index) +
                              ": scs*N*L_OFDM/fs = " + l_short_r.str() +
                              " is not an integer short transform length");
        p.l_short = static_cast<int>(l_short_r.as_int());
        if (p.l_short < 2 || p.l_short > n_long)
            throw ConfigError("subband " + std::to_string(sb.index) + ": L_m = " +
                              std::to_string(p.l_short) + " out of range for N = " +
                              std::to_string(n_long));
        if (n_long % p.l_short != 0)
            throw ConfigError("subband " + std::to_string(sb.index) +
                              ": interpolation factor N/L_m = " + std::to_string(n_long) + "/" +
                              std::to_string(p.l_short) + " is not an integer");
        p.interp = n_long / p.l_short;
        const Rational lam_l = overlap * Rational(p.l_short);
        if (!lam_l.is_integer())
            throw ConfigError("subband " + std::to_string(sb.index) + ": overlap*L_m = " +
                              lam_l.str() + " is not an integer");
        p.l_s = static_cast<int>((Rational(p.l_short) - lam_l).as_int());
        p.s_f = p.l_short - p.l_s;
        p.t_len = static_cast<std::int64_t>(sb.n_symbols) * (sb.l_ofdm + sb.l_cp);
        p.r_blocks = fc_block_count(p.t_len, p.l_short, p.l_s);
        cfg.per_subband.push_back(p);
    }
    cfg.r_max = 0;
    for (const auto& p : cfg.per_subband) cfg.r_max = std::max(cfg.r_max, p.r_blocks);
    return cfg;
}

namespace {

/// Active band of a subband in FC bins: (center - w, center + w) with
/// half-width w = l_act * scs / (2 f_BS), exact.
struct BinInterval {
    Rational lo;
    Rational hi;
};

BinInterval active_bin_range(const SubbandConfig& sb, Rational fs_hz, int n_long) {
    const Rational f_bs = fs_hz / Rational(n_long);
    const Rational half = Rational(sb.l_act) * sb.scs_hz / (Rational(2) * f_bs);
    return {Rational(sb.center_bin) - half, Rational(sb.center_bin) + half};
}

} // namespace

Diagnostics validate_mixed_numerology(const std::vector<SubbandSetup>& setups, Rational overlap) {
    Diagnostics d;
    if (setups.empty()) {
        d.ok = false;
        d.errors.push_back("no subbands given");
        return d;
    }
    const int n_ref = setups.front().n_long;
    const Rational fs_ref = setups.front().fs_hz;
    for (const auto& s : setups) {
        if (s.n_long != n_ref) {
            d.ok = false;
            d.errors.push_back("subband " + std::to_string(s.subband.index) +
                               ": N = " + std::to_string(s.n_long) + " mismatches N = " +
                               std::to_string(n_ref) + " of subband " +
                               std::to_string(setups.front().subband.index));
        }
        if (s.fs_hz != fs_ref) {
            d.ok = false;
            d.errors.push_back("subband " + std::to_string(s.subband.index) +
                               ": fs = " + s.fs_hz.str() + " mismatches fs = " + fs_ref.str());
        }
    }
    if (!d.ok) return d;

    std::vector<SubbandConfig> sbs;
    for (const auto& s : setups) sbs.push_back(s.subband);
    FcConfig cfg;
    try {
        cfg = derive_fc_params(sbs, n_ref, overlap, fs_ref);
    } catch (const ConfigError& e) {
        d.ok = false;
        d.errors.push_back(e.what());
        return d;
    }
    for (std::size_t m = 0; m < sbs.size(); ++m) {
        d.notes.push_back("subband " + std::to_string(sbs[m].index) + ": L_m = " +
                          std::to_string(cfg.per_subband[m].l_short) + ", I_m = " +
                          std::to_string(cfg.per_subband[m].interp));
    }
    for (std::size_t a = 0; a < sbs.size(); ++a) {
        for (std::size_t b = a + 1; b < sbs.size(); ++b) {
            const auto ra = active_bin_range(sbs[a], fs_ref, n_ref);
            const auto rb = active_bin_range(sbs[b], fs_ref, n_ref);
            if (ra.lo < rb.hi && rb.lo < ra.hi) {
                d.ok = false;
                d.errors.push_back("subbands " + std::to_string(sbs[a].index) + " and " +
                                   std::to_string(sbs[b].index) +
                                   ": active bin ranges overlap");
            }
        }
    }
    return d;
}

BinPlacement center_frequency_to_bin(Rational f_center_hz, Rational fs_hz, int n_long) {
    const Rational f_bs = fs_hz / Rational(n_long);
    const Rational ratio = f_center_hz / f_bs;
    const std::int64_t lo = floor_div(ratio.num, ratio.den);
    std::int64_t best = lo;
    // round to nearest bin; ties go to the larger magnitude away from zero is
    // not needed, pick the closer of floor/ceil
    const Rational d_lo = ratio - Rational(lo);
    const Rational d_hi = Rational(lo + 1) - ratio;
    if (d_hi < d_lo) best = lo + 1;
    BinPlacement p;
    p.bin = best;
    p.residual_hz = f_center_hz - Rational(best) * f_bs;
    return p;
}

} // namespace fcf
