#include "fcf/windowing.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "fcf/fft.hpp"
#include "fcf/numerology.hpp"

namespace fcf {

rvec build_fd_window(const FdWindowSpec& spec) {
    const int lead = static_cast<int>(ceil_div(spec.l_short - spec.l_act, 2));
    const int tail = static_cast<int>(floor_div(spec.l_short - spec.l_act, 2));
    if (spec.l_act < 0 || spec.l_act > spec.l_short)
        throw ConfigError("build_fd_window: l_act out of range");
    if (spec.l_tbw < 0 || lead - spec.l_tbw < 0 || tail - spec.l_tbw < 0)
        throw ConfigError("build_fd_window: transition ramp of " + std::to_string(spec.l_tbw) +
                          " bins does not fit beside a passband of " + std::to_string(spec.l_act) +
                          " bins in " + std::to_string(spec.l_short));
    if (static_cast<int>(spec.xi.size()) != spec.l_tbw)
        throw ConfigError("build_fd_window: xi must hold l_tbw weights");
    rvec d;
    d.reserve(static_cast<std::size_t>(spec.l_short));
    d.insert(d.end(), static_cast<std::size_t>(lead - spec.l_tbw), 0.0);
    for (int p = 0; p < spec.l_tbw; ++p) d.push_back(spec.xi[static_cast<std::size_t>(p)]);
    d.insert(d.end(), static_cast<std::size_t>(spec.l_act), 1.0);
    for (int p = spec.l_tbw - 1; p >= 0; --p) d.push_back(spec.xi[static_cast<std::size_t>(p)]);
    d.insert(d.end(), static_cast<std::size_t>(tail - spec.l_tbw), 0.0);
    return d;
}

int analysis_param_count(int l_ofdm, int l_act) {
    if (l_act >= l_ofdm / 2) return 0;
    return l_ofdm - 2 * l_act + 2;
}

namespace {

rvec real_idft_window(const cvec& spectrum) {
    cvec t = ifft(spectrum);
    rvec w(t.size());
    double max_imag = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        w[i] = t[i].real();
        max_imag = std::max(max_imag, std::abs(t[i].imag()));
    }
    if (max_imag > 1e-9) throw std::logic_error("window spectrum is not conjugate symmetric");
    return w;
}

} // namespace

rvec build_analysis_window(const AnalysisWindowSpec& spec) {
    const int l = spec.l_ofdm;
    if (l < 2 || l % 2 != 0) throw ConfigError("build_analysis_window: l_ofdm must be even");
    const int n_par = analysis_param_count(l, spec.l_act);
    if (n_par == 0) {
        if (!spec.phi.empty())
            throw ConfigError("build_analysis_window: degenerate window (l_act >= l_ofdm/2) "
                              "takes no parameters");
        return rvec(static_cast<std::size_t>(l), 1.0);
    }
    if (static_cast<int>(spec.phi.size()) != n_par)
        throw ConfigError("build_analysis_window: phi must hold l_ofdm - 2*l_act + 2 = " +
                          std::to_string(n_par) + " values, got " +
                          std::to_string(spec.phi.size()));
    const int half = l / 2;
    const int n_mid = half - spec.l_act; // bins l_act .. l/2-1
    cvec alpha(static_cast<std::size_t>(l), cplx(0.0, 0.0));
    alpha[0] = cplx(spec.phi[0], 0.0);
    for (int p = 1; p <= n_mid; ++p) {
        alpha[static_cast<std::size_t>(spec.l_act + p - 1)] =
            cplx(spec.phi[static_cast<std::size_t>(p)],
                 spec.phi[static_cast<std::size_t>(n_mid + 1 + p)]);
    }
    alpha[static_cast<std::size_t>(half)] = cplx(spec.phi[static_cast<std::size_t>(n_mid + 1)], 0.0);
    for (int n = 1; n < half; ++n)
        alpha[static_cast<std::size_t>(l - n)] = std::conj(alpha[static_cast<std::size_t>(n)]);
    return real_idft_window(alpha);
}

rvec analysis_dc_params(int l_ofdm, int l_act) {
    const int n_par = analysis_param_count(l_ofdm, l_act);
    rvec phi(static_cast<std::size_t>(n_par), 0.0);
    if (n_par > 0) phi[0] = static_cast<double>(l_ofdm);
    return phi;
}

rvec build_synthesis_window(const SynthesisWindowSpec& spec) {
    const int n = spec.n_long;
    if (n < 2 || n % 2 != 0) throw ConfigError("build_synthesis_window: n_long must be even");
    if (spec.gamma < 1 || spec.gamma > n / 2)
        throw ConfigError("build_synthesis_window: gamma must satisfy 1 <= gamma <= n_long/2");
    const int n_par = 2 * spec.gamma - 1;
    if (static_cast<int>(spec.psi.size()) != n_par)
        throw ConfigError("build_synthesis_window: psi must hold 2*gamma - 1 = " +
                          std::to_string(n_par) + " values, got " + std::to_string(spec.psi.size()));
    cvec beta(static_cast<std::size_t>(n), cplx(0.0, 0.0));
    beta[0] = cplx(spec.psi[0], 0.0);
    // imaginary parts packed contiguously behind the gamma real parts
    for (int p = 1; p < spec.gamma; ++p)
        beta[static_cast<std::size_t>(p)] = cplx(spec.psi[static_cast<std::size_t>(p)],
                                                 spec.psi[static_cast<std::size_t>(spec.gamma + p - 1)]);
    for (int k = 1; k < n / 2; ++k)
        beta[static_cast<std::size_t>(n - k)] = std::conj(beta[static_cast<std::size_t>(k)]);
    return real_idft_window(beta);
}

rvec synthesis_dc_params(int n_long, int gamma) {
    rvec psi(static_cast<std::size_t>(2 * gamma - 1), 0.0);
    psi[0] = static_cast<double>(n_long);
    return psi;
}

rvec synthesis_params_from_window(const rvec& window, int gamma) {
    cvec t(window.size());
    for (std::size_t i = 0; i < window.size(); ++i) t[i] = cplx(window[i], 0.0);
    cvec spectrum = fft(t);
    rvec psi(static_cast<std::size_t>(2 * gamma - 1), 0.0);
    psi[0] = spectrum[0].real();
    for (int p = 1; p < gamma; ++p) {
        psi[static_cast<std::size_t>(p)] = spectrum[static_cast<std::size_t>(p)].real();
        psi[static_cast<std::size_t>(gamma + p - 1)] = spectrum[static_cast<std::size_t>(p)].imag();
    }
    return psi;
}

rvec align_analysis_window(const rvec& a_hat, std::int64_t r, int l_cp, int l_s, int s_f,
                           int l_short, std::int64_t r_max) {
    if (r < 0 || r >= r_max)
        throw ConfigError("align_analysis_window: block index " + std::to_string(r) +
                          " outside [0, " + std::to_string(r_max) + ")");
    const int l_ofdm = static_cast<int>(a_hat.size());
    const int period = l_ofdm + l_cp;
    // CP extension: last l_cp window samples first, then the window itself
    rvec ext(static_cast<std::size_t>(period));
    for (int i = 0; i < l_cp; ++i) ext[static_cast<std::size_t>(i)] = a_hat[static_cast<std::size_t>(l_ofdm - l_cp + i)];
    for (int i = 0; i < l_ofdm; ++i) ext[static_cast<std::size_t>(l_cp + i)] = a_hat[static_cast<std::size_t>(i)];
    rvec out(static_cast<std::size_t>(l_short));
    for (int k = 0; k < l_short; ++k) {
        const std::int64_t t = r * l_s + k - s_f; // input-stream sample index
        out[static_cast<std::size_t>(k)] = ext[static_cast<std::size_t>(mod_floor(t, period))];
    }
    return out;
}

namespace {

void write_vector(std::ostream& os, const rvec& v) {
    char buf[40];
    for (double x : v) {
        std::snprintf(buf, sizeof buf, "%.17g\n", x);
        os << buf;
    }
}

rvec read_vector(std::istream& is, std::size_t n) {
    rvec v(n);
    for (auto& x : v) {
        if (!(is >> x)) throw std::runtime_error("window file: truncated value list");
    }
    return v;
}

} // namespace

void save_windows(std::ostream& os, const WindowSet& ws) {
    os << "fcfofdm-windows 1\n";
    os << "subbands " << ws.fd.size() << "\n";
    for (std::size_t m = 0; m < ws.fd.size(); ++m) {
        os << "fd " << m << " " << ws.fd[m].size() << "\n";
        write_vector(os, ws.fd[m]);
        os << (ws.block_mask(m) ? "analysismask " : "analysis ") << m << " "
           << ws.analysis[m].size() << "\n";
        write_vector(os, ws.analysis[m]);
    }
    os << "synthesis " << ws.synthesis.size() << "\n";
    write_vector(os, ws.synthesis);
}

WindowSet load_windows(std::istream& is) {
    std::string tag;
    int version = 0;
    if (!(is >> tag >> version) || tag != "fcfofdm-windows" || version != 1)
        throw std::runtime_error("window file: bad header");
    std::size_t m_count = 0;
    if (!(is >> tag >> m_count) || tag != "subbands")
        throw std::runtime_error("window file: missing subband count");
    WindowSet ws;
    ws.fd.resize(m_count);
    ws.analysis.resize(m_count);
    ws.analysis_is_block_mask.assign(m_count, 0);
    for (std::size_t m = 0; m < m_count; ++m) {
        std::size_t idx = 0, n = 0;
        if (!(is >> tag >> idx >> n) || tag != "fd" || idx != m)
            throw std::runtime_error("window file: expected fd block " + std::to_string(m));
        ws.fd[m] = read_vector(is, n);
        if (!(is >> tag >> idx >> n) || (tag != "analysis" && tag != "analysismask") || idx != m)
            throw std::runtime_error("window file: expected analysis block " + std::to_string(m));
        ws.analysis[m] = read_vector(is, n);
        ws.analysis_is_block_mask[m] = (tag == "analysismask") ? 1 : 0;
    }
    std::size_t n = 0;
    if (!(is >> tag >> n) || tag != "synthesis")
        throw std::runtime_error("window file: expected synthesis block");
    ws.synthesis = read_vector(is, n);
    return ws;
}

} // namespace fcf
