#include "fcf/complexity.hpp"

#include <cmath>
#include <ostream>

namespace fcf {
namespace {

bool is_pow2(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

int log2i(std::int64_t n) {
    int k = 0;
    while ((std::int64_t{1} << k) < n) ++k;
    return k;
}

} // namespace

OpCount fft_op_count(std::int64_t n) {
    if (is_pow2(n) && n >= 4) {
        const std::int64_t k = log2i(n);
        return {n * (k - 3) + 4, n * (3 * k - 3) + 4};
    }
    if (n % 3 == 0 && is_pow2(n / 3) && n / 3 >= 4) {
        const std::int64_t nh = n / 3;
        const std::int64_t k = log2i(nh);
        return {nh * (3 * k - 7) + 12, nh * (9 * k + 3) + 12};
    }
    throw ConfigError("fft_op_count: unsupported transform length " + std::to_string(n));
}

std::int64_t ChainOpCount::mults_rounded() const {
    return static_cast<std::int64_t>(std::llround(real_mults));
}
std::int64_t ChainOpCount::adds_rounded() const {
    return static_cast<std::int64_t>(std::llround(real_adds));
}

ChainOpCount chain_op_count(const FcConfig& cfg, const ChainWindowFlags& flags) {
    ChainOpCount total;
    const OpCount long_ifft = fft_op_count(cfg.n_long);
    // per-block cost shared by all subbands
    double block_mults = static_cast<double>(long_ifft.real_mults);
    double block_adds = static_cast<double>(long_ifft.real_adds);
    if (flags.synthesis) block_mults += 2.0 * cfg.n_long;
    for (std::size_t m = 0; m < cfg.subbands.size(); ++m) {
        const OpCount short_fft = fft_op_count(cfg.per_subband[m].l_short);
        block_mults += static_cast<double>(short_fft.real_mults);
        block_adds += static_cast<double>(short_fft.real_adds);
    }
    // R_m/B is identical for all subbands of a common burst; use the first.
    const double r_over_b = static_cast<double>(cfg.per_subband.front().r_blocks) /
                            static_cast<double>(cfg.subbands.front().n_symbols);
    total.real_mults = r_over_b * block_mults;
    total.real_adds = r_over_b * block_adds;
    for (std::size_t m = 0; m < cfg.subbands.size(); ++m) {
        const OpCount ofdm_ifft = fft_op_count(cfg.subbands[m].l_ofdm);
        total.real_mults += static_cast<double>(ofdm_ifft.real_mults);
        total.real_adds += static_cast<double>(ofdm_ifft.real_adds);
        if (flags.analysis) total.real_mults += 2.0 * cfg.subbands[m].l_ofdm;
    }
    return total;
}

ChainOpCount baseline_op_count(BaselineKind kind, const BaselineParams& p) {
    ChainOpCount c;
    const OpCount ofdm = fft_op_count(p.n_ofdm);
    switch (kind) {
        case BaselineKind::CpOfdm:
            c.real_mults = static_cast<double>(ofdm.real_mults);
            c.real_adds = static_cast<double>(ofdm.real_adds);
            break;
        case BaselineKind::Wola: {
            const int slope = p.wola_slope >= 0 ? p.wola_slope : p.n_cp / 2;
            c.real_mults = static_cast<double>(ofdm.real_mults) + 2.0 * (2 * slope);
            c.real_adds = static_cast<double>(ofdm.real_adds);
            break;
        }
        case BaselineKind::FOfdm:
            c.real_mults = static_cast<double>(p.n_filt) * (p.n_ofdm + p.n_cp) +
                           static_cast<double>(ofdm.real_mults);
            c.real_adds = static_cast<double>(ofdm.real_adds);
            break;
        case BaselineKind::FOfdmInterp:
            c.real_mults = 2.0 * p.n_filt * (p.n_ofdm + p.n_cp) / p.interp;
            c.real_adds = 0.0;
            break;
    }
    return c;
}

void write_fft_count_csv(std::ostream& os, const std::vector<std::int64_t>& lengths) {
    os << "n,real_mults,real_adds\n";
    for (std::int64_t n : lengths) {
        const OpCount c = fft_op_count(n);
        os << n << "," << c.real_mults << "," << c.real_adds << "\n";
    }
}

void write_chain_count_csv(std::ostream& os, const FcConfig& cfg, const BaselineParams& base) {
    os << "scheme,real_mults,real_adds\n";
    const ChainOpCount prop = chain_op_count(cfg, {true, true});
    const ChainOpCount orig = chain_op_count(cfg, {false, false});
    os << "fc_generalized," << prop.mults_rounded() << "," << prop.adds_rounded() << "\n";
    os << "fc_original," << orig.mults_rounded() << "," << orig.adds_rounded() << "\n";
    const ChainOpCount cp = baseline_op_count(BaselineKind::CpOfdm, base);
    const ChainOpCount wola = baseline_op_count(BaselineKind::Wola, base);
    const ChainOpCount fo = baseline_op_count(BaselineKind::FOfdm, base);
    const ChainOpCount foi = baseline_op_count(BaselineKind::FOfdmInterp, base);
    os << "cp_ofdm," << cp.mults_rounded() << "," << cp.adds_rounded() << "\n";
    os << "wola," << wola.mults_rounded() << "," << wola.adds_rounded() << "\n";
    os << "f_ofdm," << fo.mults_rounded() << "," << fo.adds_rounded() << "\n";
    os << "f_ofdm_interp," << foi.mults_rounded() << "," << foi.adds_rounded() << "\n";
}

} // namespace fcf
