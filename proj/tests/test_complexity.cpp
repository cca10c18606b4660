#include <doctest.h>

#include <sstream>

#include "fcf/complexity.hpp"

using namespace fcf;

namespace {

FcConfig config_120khz(int n_symbols) {
    SubbandConfig sb;
    sb.n_prb = 2;
    sb.l_act = 24;
    sb.scs_hz = Rational(15000);
    sb.l_ofdm = 128;
    sb.l_cp = 9;
    sb.n_symbols = n_symbols;
    return derive_fc_params({sb}, 256, Rational(1, 2), Rational(30720000)); // L_0 = 16
}

FcConfig config_15khz(int n_symbols) {
    SubbandConfig sb;
    sb.n_prb = 2;
    sb.l_act = 24;
    sb.scs_hz = Rational(15000);
    sb.l_ofdm = 128;
    sb.l_cp = 9;
    sb.n_symbols = n_symbols;
    return derive_fc_params({sb}, 2048, Rational(1, 2), Rational(30720000)); // L_0 = 128
}

} // namespace

TEST_CASE("split-radix and prime-factor transform counts") {
    const struct {
        std::int64_t n;
        std::int64_t mults;
        std::int64_t adds;
    } table[] = {
        {16, 20, 148},      {24, 28, 252},      {32, 68, 388},     {48, 92, 636},
        {64, 196, 964},     {128, 516, 2308},   {256, 1284, 5380}, {384, 1804, 8460},
        {512, 3076, 12292}, {768, 4364, 19212}, {1024, 7172, 27652}, {2048, 16388, 61444},
    };
    for (const auto& row : table) {
        const OpCount c = fft_op_count(row.n);
        CHECK(c.real_mults == row.mults);
        CHECK(c.real_adds == row.adds);
    }
}

TEST_CASE("unsupported transform lengths are rejected") {
    CHECK_THROWS_AS(fft_op_count(20), ConfigError);
    CHECK_THROWS_AS(fft_op_count(0), ConfigError);
    CHECK_THROWS_AS(fft_op_count(6), ConfigError);
    CHECK_THROWS_AS(fft_op_count(100), ConfigError);
}

TEST_CASE("chain counts at 120 kHz bin spacing") {
    // proposed (both TD windows) and original (no TD windows), B = 1
    FcConfig cfg = config_120khz(1);
    CHECK(chain_op_count(cfg, {true, true}).mults_rounded() == 35276);
    CHECK(chain_op_count(cfg, {false, false}).mults_rounded() == 25292);

    FcConfig cfg7 = config_120khz(7);
    CHECK(chain_op_count(cfg7, {true, true}).mults_rounded() == 32163);
    CHECK(chain_op_count(cfg7, {false, false}).mults_rounded() == 23057);

    FcConfig cfg14 = config_120khz(14);
    CHECK(chain_op_count(cfg14, {true, true}).mults_rounded() == 32033);
    CHECK(chain_op_count(cfg14, {false, false}).mults_rounded() == 22963);
}

TEST_CASE("chain counts at matched 15 kHz bin spacing") {
    FcConfig cfg = config_15khz(1);
    CHECK(chain_op_count(cfg, {true, true}).mults_rounded() == 84772);
    CHECK(chain_op_count(cfg, {false, false}).mults_rounded() == 68132);
    FcConfig cfg14 = config_15khz(14);
    CHECK(chain_op_count(cfg14, {true, true}).mults_rounded() == 47272);
    CHECK(chain_op_count(cfg14, {false, false}).mults_rounded() == 37946);
}

TEST_CASE("baseline counts") {
    BaselineParams p;
    p.n_ofdm = 2048;
    p.n_cp = 144;
    p.n_filt = 1024;
    p.interp = 16;
    CHECK(baseline_op_count(BaselineKind::CpOfdm, p).mults_rounded() == 16388);
    CHECK(baseline_op_count(BaselineKind::Wola, p).mults_rounded() == 16676);
    CHECK(baseline_op_count(BaselineKind::FOfdm, p).mults_rounded() == 2260996);
    CHECK(baseline_op_count(BaselineKind::FOfdmInterp, p).mults_rounded() == 280576);
}

TEST_CASE("disabling both windows reduces to the original formula") {
    FcConfig cfg = config_120khz(14);
    const ChainOpCount off = chain_op_count(cfg, {false, false});
    const double r_over_b = static_cast<double>(cfg.per_subband[0].r_blocks) / 14.0;
    const double expect = r_over_b * (fft_op_count(16).real_mults + fft_op_count(256).real_mults) +
                          fft_op_count(128).real_mults;
    CHECK(off.real_mults == doctest::Approx(expect));
}

TEST_CASE("chain counts are additive over subbands in the per-subband terms") {
    SubbandConfig a;
    a.n_prb = 2;
    a.l_act = 24;
    a.scs_hz = Rational(15000);
    a.l_ofdm = 128;
    a.l_cp = 9;
    a.n_symbols = 14;
    a.center_bin = -40;
    SubbandConfig b = a;
    b.index = 1;
    b.scs_hz = Rational(30000);
    b.center_bin = 40;
    FcConfig one = derive_fc_params({a}, 2048, Rational(1, 2), Rational(30720000));
    FcConfig two = derive_fc_params({a, b}, 2048, Rational(1, 2), Rational(30720000));
    const double single = chain_op_count(one, {true, true}).real_mults;
    const double pair = chain_op_count(two, {true, true}).real_mults;
    // the second subband adds its short FFT per block and its own OFDM parts
    const double r_over_b = static_cast<double>(one.per_subband[0].r_blocks) / 14.0;
    const double extra = r_over_b * fft_op_count(256).real_mults + fft_op_count(128).real_mults +
                         2.0 * 128;
    CHECK(pair == doctest::Approx(single + extra));
}

TEST_CASE("count table emitters are stable") {
    std::ostringstream fftcsv;
    write_fft_count_csv(fftcsv, {16, 24});
    CHECK(fftcsv.str() == "n,real_mults,real_adds\n16,20,148\n24,28,252\n");

    FcConfig cfg = config_120khz(1);
    BaselineParams p;
    p.n_ofdm = 2048;
    p.n_cp = 144;
    p.n_filt = 1024;
    p.interp = 16;
    std::ostringstream chain;
    write_chain_count_csv(chain, cfg, p);
    const std::string s = chain.str();
    CHECK(s.find("fc_generalized,35276") != std::string::npos);
    CHECK(s.find("fc_original,25292") != std::string::npos);
    CHECK(s.find("cp_ofdm,16388") != std::string::npos);
    CHECK(s.find("wola,16676") != std::string::npos);
    CHECK(s.find("f_ofdm,2260996") != std::string::npos);
    CHECK(s.find("f_ofdm_interp,280576") != std::string::npos);
}
