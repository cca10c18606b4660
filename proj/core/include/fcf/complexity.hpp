#pragma once

#include <cstdint>
#include <iosfwd>

#include "fcf/numerology.hpp"

namespace fcf {

struct OpCount {
    std::int64_t real_mults{0};
    std::int64_t real_adds{0};

    OpCount& operator+=(const OpCount& o) {
        real_mults += o.real_mults;
        real_adds += o.real_adds;
        return *this;
    }
    friend OpCount operator+(OpCount a, const OpCount& b) { return a += b; }
    friend bool operator==(const OpCount&, const OpCount&) = default;
};

/// Split-radix counts for power-of-two lengths, prime-factor counts for
/// lengths 3*2^k. Other lengths are rejected.
OpCount fft_op_count(std::int64_t n);

struct ChainWindowFlags {
    bool analysis{true};
    bool synthesis{true};
};

/// Fractional operation counts (the per-symbol share R C/B is generally not an
/// integer); round for table comparisons.
struct ChainOpCount {
    double real_mults{0.0};
    double real_adds{0.0};

    std::int64_t mults_rounded() const;
    std::int64_t adds_rounded() const;
};

/// Real operations per CP-OFDM symbol for the FC transmit chain.
///
/// Counting conventions (these reproduce the reference complexity figures
/// exactly): each FC block costs the short FFT per subband, the shared long
/// IFFT, and 2N real multiplications for the synthesis window when enabled;
/// the analysis window costs 2 L_OFDM,m per OFDM symbol when enabled; the FD
/// window weights are folded into the transform and cost nothing; additions
/// come from the transforms only.
ChainOpCount chain_op_count(const FcConfig& cfg, const ChainWindowFlags& flags);

enum class BaselineKind { CpOfdm, Wola, FOfdm, FOfdmInterp };

struct BaselineParams {
    int n_ofdm{2048};
    int n_cp{144};
    int n_filt{1024};     ///< f-OFDM filter length (symmetric coefficients)
    int interp{16};       ///< interpolation factor of the polyphase variant
    int wola_slope{-1};   ///< raised-cosine slope; -1 means n_cp/2
};

/// Per-symbol real multiplications of the reference schemes. The
/// interpolating f-OFDM figure is the bare polyphase filtering cost, matching
/// the published table rather than the companion formula that also adds the
/// low-rate IFFT.
ChainOpCount baseline_op_count(BaselineKind kind, const BaselineParams& p);

/// CSV emitters mirroring the published table layouts.
void write_fft_count_csv(std::ostream& os, const std::vector<std::int64_t>& lengths);
void write_chain_count_csv(std::ostream& os, const FcConfig& cfg, const BaselineParams& base);

} // namespace fcf
