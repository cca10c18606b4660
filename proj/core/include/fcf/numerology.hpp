#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fcf/rational.hpp"

namespace fcf {

/// Raised on structurally invalid configurations. The message names the
/// violated constraint.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Per-subband OFDM numerology. Lengths are in low-rate samples, the center
/// bin is in fast-convolution bins relative to DC (may be negative).
struct SubbandConfig {
    int index{0};
    int n_prb{1};
    Rational scs_hz{15000};
    int l_ofdm{128};
    int l_cp{9};
    int l_act{12};
    std::int64_t center_bin{0};
    int n_symbols{1};

    void validate() const;
};

/// Minimum OFDM IFFT length for a PRB count: max(2^ceil(log2(12 n_prb)), 128).
int derive_ofdm_ifft_length(int n_prb);

/// Quantities derived per subband by derive_fc_params().
struct FcSubbandParams {
    int l_short{0};            ///< short transform length L_m
    int l_s{0};                ///< non-overlapping hop L_S,m
    int s_f{0};                ///< zero-padding S_F,m = L_m - L_S,m
    int interp{1};             ///< interpolation factor I_m = N / L_m
    std::int64_t t_len{0};     ///< burst length T_m = B (L_OFDM + L_CP)
    std::int64_t r_blocks{0};  ///< processing block count R_m
};

/// Filter-bank geometry shared by all subbands plus per-subband derived values.
struct FcConfig {
    int n_long{0};
    Rational overlap{1, 2};
    Rational fs_hz{0};
    int n_s{0};                ///< long-transform hop N_S = (1 - overlap) N
    std::int64_t r_max{0};
    std::vector<SubbandConfig> subbands;
    std::vector<FcSubbandParams> per_subband;

    Rational bin_spacing_hz() const { return fs_hz / Rational(n_long); }
};

/// Number of FC processing blocks needed to cover a zero-padded burst.
std::int64_t fc_block_count(std::int64_t t_len, int l_short, int l_s);

/// Derives the full filter-bank geometry from subband numerologies. The short
/// transform length of each subband follows from the subcarrier-spacing
/// relation f_SCS = (L_m / N) fs / L_OFDM; all divisibility requirements are
/// checked exactly.
FcConfig derive_fc_params(const std::vector<SubbandConfig>& subbands, int n_long,
                          Rational overlap, Rational fs_hz);

/// One subband together with the FC engine geometry it believes in. Used by
/// validate_mixed_numerology to cross-check independently declared subbands.
struct SubbandSetup {
    SubbandConfig subband;
    int n_long{0};
    Rational fs_hz{0};
};

struct Diagnostics {
    bool ok{true};
    std::vector<std::string> errors;
    std::vector<std::string> notes;      ///< per-subband L_m reports etc.
};

/// Confirms all subbands agree on (N, fs), reports each derived L_m, and flags
/// overlapping active-bin ranges.
Diagnostics validate_mixed_numerology(const std::vector<SubbandSetup>& setups,
                                      Rational overlap = Rational(1, 2));

struct BinPlacement {
    std::int64_t bin{0};
    Rational residual_hz{0};
};

/// Nearest representable FC bin for a desired center frequency, with the
/// leftover offset that cannot be expressed on the bin grid.
BinPlacement center_frequency_to_bin(Rational f_center_hz, Rational fs_hz, int n_long);

} // namespace fcf
