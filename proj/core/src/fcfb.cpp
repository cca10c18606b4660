#include "fcf/fcfb.hpp"

#include <algorithm>
#include <cmath>

#include "fcf/fft.hpp"

namespace fcf {

cvec linear_convolve(const cvec& x, const cvec& h) {
    if (x.empty() || h.empty()) return {};
    cvec y(x.size() + h.size() - 1, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t k = 0; k < h.size(); ++k) y[i + k] += x[i] * h[k];
    return y;
}

cvec cyclic_convolve(const cvec& x, const cvec& h, int n) {
    cvec y(static_cast<std::size_t>(n), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t k = 0; k < h.size(); ++k)
            y[static_cast<std::size_t>(mod_floor(static_cast<std::int64_t>(i + k), n))] += x[i] * h[k];
    return y;
}

FcBlockPipeline::FcBlockPipeline(FcConfig cfg, WindowSet windows)
    : cfg_(std::move(cfg)), win_(std::move(windows)) {
    const std::size_t m_count = cfg_.subbands.size();
    if (win_.fd.size() != m_count || win_.analysis.size() != m_count)
        throw ConfigError("FcBlockPipeline: window set does not cover all subbands");
    if (static_cast<int>(win_.synthesis.size()) != cfg_.n_long)
        throw ConfigError("FcBlockPipeline: synthesis window length mismatches N");
    for (std::size_t m = 0; m < m_count; ++m) {
        const auto& p = cfg_.per_subband[m];
        if (static_cast<int>(win_.fd[m].size()) != p.l_short)
            throw ConfigError("FcBlockPipeline: FD window length mismatches L_m for subband " +
                              std::to_string(cfg_.subbands[m].index));
        const int a_len = static_cast<int>(win_.analysis[m].size());
        const int want = win_.block_mask(m) ? p.l_short : cfg_.subbands[m].l_ofdm;
        if (a_len != want)
            throw ConfigError("FcBlockPipeline: analysis window of subband " +
                              std::to_string(cfg_.subbands[m].index) + " must have length " +
                              std::to_string(want));
        scale_.push_back(std::sqrt(static_cast<double>(cfg_.n_long) / p.l_short));
        theta_num_.push_back(cfg_.subbands[m].center_bin * p.l_s);
        theta_den_.push_back(p.l_short);
    }
}

cplx FcBlockPipeline::theta(int m, std::int64_t r) const {
    const std::int64_t num = mod_floor(r * theta_num_[static_cast<std::size_t>(m)],
                                       theta_den_[static_cast<std::size_t>(m)]);
    if (num == 0) return cplx(1.0, 0.0);
    return std::polar(1.0, 2.0 * M_PI * static_cast<double>(num) /
                               static_cast<double>(theta_den_[static_cast<std::size_t>(m)]));
}

cvec fc_synthesize_block(const cvec& x_block, int m, std::int64_t r, const FcBlockPipeline& p) {
    const auto& cfg = p.config();
    const auto& sp = cfg.per_subband[static_cast<std::size_t>(m)];
    const auto& sb = cfg.subbands[static_cast<std::size_t>(m)];
    if (static_cast<int>(x_block.size()) != sp.l_short)
        throw ConfigError("fc_synthesize_block: block must hold L_m samples");
    if (r >= cfg.r_max)
        throw ConfigError("fc_synthesize_block: block index beyond R_max");

    const rvec& proto = p.windows().analysis[static_cast<std::size_t>(m)];
    cvec in(x_block.size());
    if (p.windows().block_mask(static_cast<std::size_t>(m))) {
        for (std::size_t k = 0; k < in.size(); ++k) in[k] = x_block[k] * proto[k];
    } else {
        const rvec win = align_analysis_window(proto, r, sb.l_cp, sp.l_s, sp.s_f,
                                               sp.l_short, cfg.r_max);
        for (std::size_t k = 0; k < in.size(); ++k) in[k] = x_block[k] * win[k];
    }
    const cvec spec = fft(in);

    const int shift = static_cast<int>(ceil_div(sp.l_short, 2));
    const cplx rot = p.theta(m, r) * p.scale(m);
    const rvec& d = p.windows().fd[static_cast<std::size_t>(m)];
    cvec frame(static_cast<std::size_t>(cfg.n_long), cplx(0.0, 0.0));
    for (int l = 0; l < sp.l_short; ++l) {
        const int src = static_cast<int>(mod_floor(l + shift, sp.l_short));
        frame[static_cast<std::size_t>(p.target_bin(m, l))] +=
            d[static_cast<std::size_t>(l)] * spec[static_cast<std::size_t>(src)] * rot;
    }
    return frame;
}

namespace {

struct SynthesisSpan {
    std::int64_t ola_len;   ///< N + (R_max - 1) N_S
    std::int64_t out_len;   ///< max_m I_m T_m
    std::int64_t head;      ///< trimmed head, N - N_S
};

SynthesisSpan synthesis_span(const FcConfig& cfg) {
    SynthesisSpan s;
    s.ola_len = cfg.n_long + (cfg.r_max - 1) * cfg.n_s;
    s.out_len = 0;
    for (std::size_t m = 0; m < cfg.subbands.size(); ++m)
        s.out_len = std::max(s.out_len, static_cast<std::int64_t>(cfg.per_subband[m].interp) *
                                            cfg.per_subband[m].t_len);
    s.head = cfg.n_long - cfg.n_s;
    return s;
}

void check_inputs(const std::vector<cvec>& inputs, const FcConfig& cfg) {
    if (inputs.size() != cfg.subbands.size())
        throw ConfigError("fc_synthesize: expected one input burst per subband");
    for (std::size_t m = 0; m < inputs.size(); ++m) {
        if (static_cast<std::int64_t>(inputs[m].size()) != cfg.per_subband[m].t_len)
            throw ConfigError("fc_synthesize: subband " + std::to_string(cfg.subbands[m].index) +
                              " input length " + std::to_string(inputs[m].size()) +
                              " mismatches T_m = " + std::to_string(cfg.per_subband[m].t_len));
    }
}

/// x_ZP sample of subband m at padded index i (zeros outside the burst).
cplx padded_sample(const cvec& x, std::int64_t i, int s_f) {
    const std::int64_t k = i - s_f;
    if (k < 0 || k >= static_cast<std::int64_t>(x.size())) return cplx(0.0, 0.0);
    return x[static_cast<std::size_t>(k)];
}

} // namespace

ComplexSignal fc_synthesize(const std::vector<cvec>& inputs, const FcBlockPipeline& p) {
    const auto& cfg = p.config();
    check_inputs(inputs, cfg);
    const SynthesisSpan span = synthesis_span(cfg);

    cvec ola(static_cast<std::size_t>(span.ola_len), cplx(0.0, 0.0));
    cvec block(static_cast<std::size_t>(cfg.n_long));
    const rvec& s_win = p.windows().synthesis;
    for (std::int64_t r = 0; r < cfg.r_max; ++r) {
        cvec frame(static_cast<std::size_t>(cfg.n_long), cplx(0.0, 0.0));
        // ascending subband order keeps the accumulation bit-reproducible
        for (std::size_t m = 0; m < inputs.size(); ++m) {
            const auto& sp = cfg.per_subband[m];
            cvec xb(static_cast<std::size_t>(sp.l_short));
            for (int k = 0; k < sp.l_short; ++k)
                xb[static_cast<std::size_t>(k)] = padded_sample(inputs[m], r * sp.l_s + k, sp.s_f);
            const cvec contrib = fc_synthesize_block(xb, static_cast<int>(m), r, p);
            for (std::size_t b = 0; b < frame.size(); ++b) frame[b] += contrib[b];
        }
        block = ifft(frame);
        const std::int64_t off = r * cfg.n_s;
        for (int n = 0; n < cfg.n_long; ++n)
            ola[static_cast<std::size_t>(off + n)] += block[static_cast<std::size_t>(n)] *
                                                      s_win[static_cast<std::size_t>(n)];
    }

    ComplexSignal out;
    out.rate_hz = cfg.fs_hz;
    out.samples.assign(ola.begin() + span.head, ola.begin() + span.head + span.out_len);
    return out;
}

std::vector<cvec> dense_synthesis_operator(int m, const FcBlockPipeline& p) {
    const auto& cfg = p.config();
    const auto& sp = cfg.per_subband[static_cast<std::size_t>(m)];
    const SynthesisSpan span = synthesis_span(cfg);
    const std::int64_t cols = sp.l_short + (cfg.r_max - 1) * sp.l_s;
    if (span.ola_len * cols > (1LL << 26))
        throw ConfigError("dense_synthesis_operator: size exceeds the desk-scale guard");

    // rows of F_m, built column by column from the per-block operator
    std::vector<cvec> f(static_cast<std::size_t>(span.ola_len),
                        cvec(static_cast<std::size_t>(cols), cplx(0.0, 0.0)));
    const rvec& s_win = p.windows().synthesis;
    for (std::int64_t r = 0; r < cfg.r_max; ++r) {
        for (int c = 0; c < sp.l_short; ++c) {
            cvec e(static_cast<std::size_t>(sp.l_short), cplx(0.0, 0.0));
            e[static_cast<std::size_t>(c)] = cplx(1.0, 0.0);
            const cvec frame = fc_synthesize_block(e, m, r, p);
            const cvec col = ifft(frame);
            for (int n = 0; n < cfg.n_long; ++n) {
                f[static_cast<std::size_t>(r * cfg.n_s + n)][static_cast<std::size_t>(r * sp.l_s + c)] +=
                    col[static_cast<std::size_t>(n)] * s_win[static_cast<std::size_t>(n)];
            }
        }
    }
    return f;
}

ComplexSignal fc_synthesize_dense(const std::vector<cvec>& inputs, const FcBlockPipeline& p) {
    const auto& cfg = p.config();
    check_inputs(inputs, cfg);
    const SynthesisSpan span = synthesis_span(cfg);
    cvec ola(static_cast<std::size_t>(span.ola_len), cplx(0.0, 0.0));
    for (std::size_t m = 0; m < inputs.size(); ++m) {
        const auto& sp = cfg.per_subband[m];
        const std::vector<cvec> f = dense_synthesis_operator(static_cast<int>(m), p);
        const std::int64_t cols = sp.l_short + (cfg.r_max - 1) * sp.l_s;
        cvec x_zp(static_cast<std::size_t>(cols));
        for (std::int64_t i = 0; i < cols; ++i) x_zp[static_cast<std::size_t>(i)] = padded_sample(inputs[m], i, sp.s_f);
        for (std::size_t row = 0; row < f.size(); ++row) {
            cplx acc(0.0, 0.0);
            for (std::size_t c = 0; c < x_zp.size(); ++c) acc += f[row][c] * x_zp[c];
            ola[row] += acc;
        }
    }
    ComplexSignal out;
    out.rate_hz = cfg.fs_hz;
    out.samples.assign(ola.begin() + span.head, ola.begin() + span.head + span.out_len);
    return out;
}

WindowSet ols_windows(const FcConfig& cfg) {
    WindowSet ws;
    for (std::size_t m = 0; m < cfg.subbands.size(); ++m) {
        ws.fd.push_back(rvec(static_cast<std::size_t>(cfg.per_subband[m].l_short), 1.0));
        ws.analysis.push_back(rvec(static_cast<std::size_t>(cfg.subbands[m].l_ofdm), 1.0));
    }
    const int n = cfg.n_long;
    const int n_lead = static_cast<int>(ceil_div(n - cfg.n_s, 2));
    const int n_tail = static_cast<int>(floor_div(n - cfg.n_s, 2));
    ws.synthesis.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = n_lead; i < n - n_tail; ++i) ws.synthesis[static_cast<std::size_t>(i)] = 1.0;
    return ws;
}

WindowSet ola_windows(const FcConfig& cfg) {
    WindowSet ws;
    for (std::size_t m = 0; m < cfg.subbands.size(); ++m) {
        const int l = cfg.per_subband[m].l_short;
        const int l_s = cfg.per_subband[m].l_s;
        const int lead = static_cast<int>(ceil_div(l - l_s, 2));
        const int tail = static_cast<int>(floor_div(l - l_s, 2));
        rvec a(static_cast<std::size_t>(l), 0.0);
        for (int i = lead; i < l - tail; ++i) a[static_cast<std::size_t>(i)] = 1.0;
        ws.fd.push_back(rvec(static_cast<std::size_t>(l), 1.0));
        ws.analysis.push_back(std::move(a));
        ws.analysis_is_block_mask.push_back(1);
    }
    ws.synthesis.assign(static_cast<std::size_t>(cfg.n_long), 1.0);
    return ws;
}

} // namespace fcf
