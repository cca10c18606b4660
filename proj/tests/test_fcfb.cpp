#include <doctest.h>

#include <cmath>
#include <random>

#include "fcf/fcfb.hpp"
#include "fcf/fft.hpp"

using namespace fcf;

namespace {

cvec random_cvec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto u = [&] { return 2.0 * (static_cast<double>(rng()) / 1.8446744073709552e19) - 1.0; };
    cvec v(n);
    for (auto& x : v) x = cplx(u(), u());
    return v;
}

rvec random_rvec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    rvec v(n);
    for (auto& x : v) x = 2.0 * (static_cast<double>(rng()) / 1.8446744073709552e19) - 1.0;
    return v;
}

double max_abs_diff(const cvec& a, const cvec& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

SubbandConfig make_subband(int n_prb, std::int64_t scs, int l_ofdm, int l_cp, int n_sym,
                           std::int64_t center = 0, int index = 0) {
    SubbandConfig sb;
    sb.index = index;
    sb.n_prb = n_prb;
    sb.l_act = 12 * n_prb;
    sb.scs_hz = Rational(scs);
    sb.l_ofdm = l_ofdm;
    sb.l_cp = l_cp;
    sb.n_symbols = n_sym;
    sb.center_bin = center;
    return sb;
}

/// Single subband with L_m = 32 and the requested interpolation factor.
FcConfig config_l32(int interp, Rational overlap, int n_sym, std::int64_t center = 0) {
    auto sb = make_subband(1, 15000, 128, 9, n_sym, center);
    // L_m = scs N L_OFDM / fs = 32 for fs = 1.92 MHz * interp, N = 32 * interp
    return derive_fc_params({sb}, 32 * interp, overlap,
                            Rational(1920000) * Rational(interp));
}

/// Full-band transparent configuration: L_m = N (interpolation one).
FcConfig config_transparent(int n_sym) {
    auto sb = make_subband(2, 15000, 128, 9, n_sym);
    return derive_fc_params({sb}, 128, Rational(1, 2), Rational(1920000));
}

WindowSet flat_fullband(const FcConfig& cfg) {
    WindowSet ws = ols_windows(cfg); // all-ones FD windows already
    return ws;
}

} // namespace

TEST_CASE("linear convolution identities") {
    const cvec h = random_cvec(7, 1);
    const cvec unit{cplx(1.0, 0.0)};
    CHECK(max_abs_diff(linear_convolve(unit, h), h) == 0.0);

    const cvec x4{cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(0, 0)};
    const cvec habcd{cplx(1, 2), cplx(3, -1), cplx(0, 4), cplx(-2, 0)};
    CHECK(max_abs_diff(cyclic_convolve(x4, habcd, 4), habcd) == 0.0);
}

TEST_CASE("cyclic convolution of zero-padded sequences equals linear convolution") {
    const cvec x = random_cvec(11, 2);
    const cvec h = random_cvec(5, 3);
    const int n = static_cast<int>(x.size() + h.size()) - 1;
    const cvec lin = linear_convolve(x, h);
    const cvec cyc = cyclic_convolve(x, h, n);
    CHECK(max_abs_diff(lin, cyc) < 1e-13);
}

TEST_CASE("block synthesis is a pure pass-through for the identity configuration") {
    FcConfig cfg = config_transparent(1);
    FcBlockPipeline p(cfg, flat_fullband(cfg));
    const cvec x = random_cvec(128, 4);
    const cvec frame = fc_synthesize_block(x, 0, 0, p);
    const cvec want = fft(x);
    CHECK(max_abs_diff(frame, want) < 1e-10);
}

TEST_CASE("phase continuity rotation") {
    FcConfig cfg = config_l32(4, Rational(1, 2), 1, 0);
    FcBlockPipeline p(cfg, ols_windows(cfg));
    for (std::int64_t r = 0; r < 8; ++r) CHECK(std::abs(p.theta(0, r) - cplx(1.0, 0.0)) == 0.0);

    FcConfig cfg3 = config_l32(4, Rational(1, 2), 1, 3); // c = 3, L_S = 16, L = 32
    FcBlockPipeline p3(cfg3, ols_windows(cfg3));
    CHECK(std::abs(p3.theta(0, 1) - cplx(-1.0, 0.0)) < 1e-15);
    for (std::int64_t r = 0; r < 64; ++r) CHECK(std::abs(p3.theta(0, r)) == doctest::Approx(1.0));
}

TEST_CASE("transparent configuration reproduces the input") {
    FcConfig cfg = config_transparent(2);
    FcBlockPipeline p(cfg, flat_fullband(cfg));
    const cvec x = random_cvec(static_cast<std::size_t>(cfg.per_subband[0].t_len), 5);
    const ComplexSignal y = fc_synthesize({x}, p);
    REQUIRE(y.samples.size() == x.size());
    CHECK(max_abs_diff(y.samples, x) < 1e-12);
}

TEST_CASE("overlap-add special case is transparent too") {
    FcConfig cfg = config_transparent(2);
    FcBlockPipeline p(cfg, ola_windows(cfg));
    const cvec x = random_cvec(static_cast<std::size_t>(cfg.per_subband[0].t_len), 6);
    const ComplexSignal y = fc_synthesize({x}, p);
    CHECK(max_abs_diff(y.samples, x) < 1e-12);
}

namespace {

/// Zero-phase real FIR with support [-k_half, k_half] and a real centered
/// spectrum; its FD window is d[l] = H(l - ceil(L/2)).
struct ZeroPhaseFir {
    rvec taps; ///< taps[k_half + k] for k in [-k_half, k_half]
    int k_half;
};

ZeroPhaseFir random_zero_phase(int k_half, std::uint64_t seed) {
    ZeroPhaseFir f;
    f.k_half = k_half;
    f.taps = random_rvec(static_cast<std::size_t>(2 * k_half + 1), seed);
    for (int k = 1; k <= k_half; ++k)
        f.taps[static_cast<std::size_t>(k_half - k)] = f.taps[static_cast<std::size_t>(k_half + k)];
    return f;
}

rvec fd_window_of(const ZeroPhaseFir& f, int l_short) {
    const int shift = static_cast<int>(ceil_div(l_short, 2));
    rvec d(static_cast<std::size_t>(l_short));
    for (int l = 0; l < l_short; ++l) {
        const double freq = 2.0 * M_PI * (l - shift) / l_short;
        double acc = f.taps[static_cast<std::size_t>(f.k_half)];
        for (int k = 1; k <= f.k_half; ++k)
            acc += 2.0 * f.taps[static_cast<std::size_t>(f.k_half + k)] * std::cos(freq * k);
        d[static_cast<std::size_t>(l)] = acc;
    }
    return d;
}

cvec zero_phase_reference(const cvec& x, const ZeroPhaseFir& f) {
    cvec y(x.size(), cplx(0.0, 0.0));
    for (std::size_t n = 0; n < x.size(); ++n) {
        cplx acc(0.0, 0.0);
        for (int k = -f.k_half; k <= f.k_half; ++k) {
            const std::int64_t i = static_cast<std::int64_t>(n) - k;
            if (i >= 0 && i < static_cast<std::int64_t>(x.size()))
                acc += f.taps[static_cast<std::size_t>(f.k_half + k)] * x[static_cast<std::size_t>(i)];
        }
        y[n] = acc;
    }
    return y;
}

double ols_exactness_error(Rational overlap, int interp, std::uint64_t seed) {
    FcConfig cfg = config_l32(interp, overlap, 2);
    const int l_o = cfg.per_subband[0].l_short - cfg.per_subband[0].l_s;
    const ZeroPhaseFir fir = random_zero_phase(l_o / 2, seed);
    WindowSet ws = ols_windows(cfg);
    ws.fd[0] = fd_window_of(fir, cfg.per_subband[0].l_short);
    FcBlockPipeline p(cfg, ws);
    const cvec x = random_cvec(static_cast<std::size_t>(cfg.per_subband[0].t_len), seed + 100);
    const ComplexSignal y = fc_synthesize({x}, p);
    const cvec ref = zero_phase_reference(x, fir);
    const double gain = std::sqrt(static_cast<double>(interp));
    double err = 0.0;
    for (std::size_t q = 0; q < ref.size(); ++q)
        err = std::max(err, std::abs(gain * y.samples[q * static_cast<std::size_t>(interp)] - ref[q]));
    return err;
}

} // namespace

TEST_CASE("overlap-save realizes the FIR exactly when the order fits the overlap") {
    for (const auto& overlap : {Rational(1, 2), Rational(1, 4)}) {
        for (int interp : {1, 2, 4}) {
            CAPTURE(overlap.str());
            CAPTURE(interp);
            CHECK(ols_exactness_error(overlap, interp, 17) < 1e-10);
        }
    }
}

TEST_CASE("dense operator matches streaming synthesis with random windows") {
    // two subbands, N = 64
    auto sba = make_subband(1, 15000, 32, 2, 2, -10, 0);
    auto sbb = make_subband(1, 30000, 32, 2, 4, 10, 1);
    FcConfig cfg = derive_fc_params({sba, sbb}, 64, Rational(1, 2), Rational(1920000));
    REQUIRE(cfg.per_subband[0].l_short == 16);
    REQUIRE(cfg.per_subband[1].l_short == 32);
    WindowSet ws;
    ws.fd.push_back(random_rvec(16, 31));
    ws.fd.push_back(random_rvec(32, 32));
    ws.analysis.push_back(random_rvec(32, 33));
    ws.analysis.push_back(random_rvec(32, 34));
    ws.synthesis = random_rvec(64, 35);
    FcBlockPipeline p(cfg, ws);
    std::vector<cvec> in;
    in.push_back(random_cvec(static_cast<std::size_t>(cfg.per_subband[0].t_len), 36));
    in.push_back(random_cvec(static_cast<std::size_t>(cfg.per_subband[1].t_len), 37));
    const ComplexSignal fast = fc_synthesize(in, p);
    const ComplexSignal dense = fc_synthesize_dense(in, p);
    CHECK(max_abs_diff(fast.samples, dense.samples) < 1e-10);
}

TEST_CASE("single-block configuration: the dense operator is one block") {
    auto sb = make_subband(1, 15000, 12, 4, 1);
    FcConfig cfg = derive_fc_params({sb}, 32, Rational(1, 4), Rational(180000));
    REQUIRE(cfg.r_max == 1);
    FcBlockPipeline p(cfg, ols_windows(cfg));
    const cvec x = random_cvec(16, 38);
    const ComplexSignal fast = fc_synthesize({x}, p);
    const ComplexSignal dense = fc_synthesize_dense({x}, p);
    CHECK(max_abs_diff(fast.samples, dense.samples) < 1e-12);
}

TEST_CASE("impulse responses repeat every hop") {
    FcConfig cfg = config_l32(2, Rational(1, 2), 1);
    FcBlockPipeline p(cfg, ols_windows(cfg)); // identical blocks
    const auto f = dense_synthesis_operator(0, p);
    const int s_f = cfg.per_subband[0].s_f;
    const int l_s = cfg.per_subband[0].l_s;
    const int n_s = cfg.n_s;
    // column s_f and column s_f + l_s hold the same impulse response shifted
    // by one output hop
    const std::size_t rows = f.size();
    for (std::size_t row = 0; row + static_cast<std::size_t>(n_s) < rows; ++row) {
        CHECK(std::abs(f[row + static_cast<std::size_t>(n_s)][static_cast<std::size_t>(s_f + l_s)] -
                       f[row][static_cast<std::size_t>(s_f)]) < 1e-12);
    }
}

TEST_CASE("overlap-save and overlap-add window masks") {
    auto sb = make_subband(1, 15000, 16, 2, 1);
    FcConfig cfg = derive_fc_params({sb}, 8, Rational(1, 2), Rational(240000));
    REQUIRE(cfg.per_subband[0].l_short == 8);
    const WindowSet ols = ols_windows(cfg);
    const rvec want{0, 0, 1, 1, 1, 1, 0, 0};
    REQUIRE(ols.synthesis.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) CHECK(ols.synthesis[i] == want[i]);
    for (double v : ols.analysis[0]) CHECK(v == 1.0);
    CHECK_FALSE(ols.block_mask(0));

    const WindowSet ola = ola_windows(cfg);
    for (double v : ola.synthesis) CHECK(v == 1.0);
    CHECK(ola.block_mask(0));
    const rvec amask{0, 0, 1, 1, 1, 1, 0, 0};
    for (std::size_t i = 0; i < 8; ++i) CHECK(ola.analysis[0][i] == amask[i]);
}

TEST_CASE("synthesis is linear in the input") {
    FcConfig cfg = config_l32(2, Rational(1, 2), 2, 7);
    WindowSet ws = ols_windows(cfg);
    ws.fd[0] = random_rvec(32, 40);
    ws.analysis[0] = random_rvec(128, 41);
    ws.synthesis = random_rvec(64, 42);
    FcBlockPipeline p(cfg, ws);
    const std::size_t t = static_cast<std::size_t>(cfg.per_subband[0].t_len);
    const cvec x = random_cvec(t, 43);
    const cvec y = random_cvec(t, 44);
    const cplx a(0.7, -0.3), b(-1.1, 0.2);
    cvec mix(t);
    for (std::size_t i = 0; i < t; ++i) mix[i] = a * x[i] + b * y[i];
    const cvec zx = fc_synthesize({x}, p).samples;
    const cvec zy = fc_synthesize({y}, p).samples;
    const cvec zm = fc_synthesize({mix}, p).samples;
    double err = 0.0;
    for (std::size_t i = 0; i < zm.size(); ++i) err = std::max(err, std::abs(zm[i] - (a * zx[i] + b * zy[i])));
    CHECK(err < 1e-12);
}

TEST_CASE("a nonzero center bin modulates the baseband output exactly") {
    const std::int64_t c = 11;
    FcConfig cfg0 = config_l32(4, Rational(1, 2), 2, 0);
    FcConfig cfgc = config_l32(4, Rational(1, 2), 2, c);
    WindowSet ws = ols_windows(cfg0);
    ws.fd[0] = random_rvec(32, 50);
    ws.analysis[0] = random_rvec(128, 51);
    FcBlockPipeline p0(cfg0, ws);
    FcBlockPipeline pc(cfgc, ws);
    const cvec x = random_cvec(static_cast<std::size_t>(cfg0.per_subband[0].t_len), 52);
    const cvec z0 = fc_synthesize({x}, p0).samples;
    const cvec zc = fc_synthesize({x}, pc).samples;
    const int n = cfg0.n_long;
    const std::int64_t head = n - cfg0.n_s;
    double err = 0.0;
    for (std::size_t g = 0; g < z0.size(); ++g) {
        const std::int64_t idx = mod_floor(c * (static_cast<std::int64_t>(g) + head), n);
        const cplx rot = std::polar(1.0, 2.0 * M_PI * static_cast<double>(idx) / n);
        err = std::max(err, std::abs(zc[g] - z0[g] * rot));
    }
    CHECK(err < 1e-10);
}

TEST_CASE("an in-band exponential passes with continuous phase across blocks") {
    // interpolation one, shifted subband: exercises the per-block rotation
    const std::int64_t c = 37;
    auto sb = make_subband(2, 15000, 128, 9, 3, c);
    FcConfig cfg = derive_fc_params({sb}, 128, Rational(1, 2), Rational(1920000));
    FcBlockPipeline p(cfg, flat_fullband(cfg));
    const int k0 = -3;
    const std::size_t t = static_cast<std::size_t>(cfg.per_subband[0].t_len);
    cvec x(t);
    for (std::size_t n = 0; n < t; ++n)
        x[n] = std::polar(1.0, 2.0 * M_PI * k0 * static_cast<double>(n) / 128.0);
    const cvec z = fc_synthesize({x}, p).samples;
    const std::int64_t head = cfg.n_long - cfg.n_s;
    double err = 0.0;
    for (std::size_t n = 0; n < z.size(); ++n) {
        const double phase = 2.0 * M_PI *
                             (static_cast<double>(k0) * static_cast<double>(n) +
                              static_cast<double>(c) * static_cast<double>(static_cast<std::int64_t>(n) + head)) /
                             128.0;
        err = std::max(err, std::abs(z[n] - std::polar(1.0, phase)));
    }
    CHECK(err < 1e-10);
}

TEST_CASE("input bursts must match the configured length") {
    FcConfig cfg = config_transparent(2);
    FcBlockPipeline p(cfg, flat_fullband(cfg));
    cvec x(static_cast<std::size_t>(cfg.per_subband[0].t_len) - 1);
    CHECK_THROWS_AS(fc_synthesize({x}, p), ConfigError);
    CHECK_THROWS_AS(fc_synthesize({}, p), ConfigError);
}

TEST_CASE("dense and streaming agree across overlap and interpolation sweeps") {
    for (const auto& overlap : {Rational(1, 2), Rational(1, 4)}) {
        for (int interp : {1, 2, 4}) {
            FcConfig cfg = config_l32(interp, overlap, 1, 5);
            WindowSet ws;
            ws.fd.push_back(random_rvec(32, 60 + static_cast<std::uint64_t>(interp)));
            ws.analysis.push_back(random_rvec(128, 61));
            ws.synthesis = random_rvec(static_cast<std::size_t>(cfg.n_long), 62);
            FcBlockPipeline p(cfg, ws);
            const cvec x = random_cvec(static_cast<std::size_t>(cfg.per_subband[0].t_len), 63);
            const ComplexSignal fast = fc_synthesize({x}, p);
            const ComplexSignal dense = fc_synthesize_dense({x}, p);
            CAPTURE(overlap.str());
            CAPTURE(interp);
            CHECK(max_abs_diff(fast.samples, dense.samples) < 1e-10);
        }
    }
}
