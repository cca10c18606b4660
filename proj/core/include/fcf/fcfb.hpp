#pragma once

#include "fcf/numerology.hpp"
#include "fcf/signal.hpp"
#include "fcf/windowing.hpp"

namespace fcf {

/// Direct-sum aperiodic convolution, O(n^2). Test oracle grade.
cvec linear_convolve(const cvec& x, const cvec& h);

/// Direct-sum cyclic convolution of length n. Inputs shorter than n are
/// treated as zero-padded.
cvec cyclic_convolve(const cvec& x, const cvec& h, int n);

/// Prepared synthesis filter bank: geometry, windows, per-subband bin mapping
/// and phase-continuity rotation. Immutable after construction; all
/// processing entry points are const and thread-safe.
class FcBlockPipeline {
  public:
    FcBlockPipeline(FcConfig cfg, WindowSet windows);

    const FcConfig& config() const { return cfg_; }
    const WindowSet& windows() const { return win_; }

    /// Phase-continuity rotation Theta_m(r), exp(j 2 pi r c_m L_S / L_m),
    /// accumulated as an exact rational so long runs do not drift.
    cplx theta(int m, std::int64_t r) const;

    /// Target bin of element l of subband m's shifted spectrum.
    int target_bin(int m, int l) const {
        return static_cast<int>(mod_floor(cfg_.subbands[static_cast<std::size_t>(m)].center_bin -
                                              ceil_div(cfg_.per_subband[static_cast<std::size_t>(m)].l_short, 2) + l,
                                          cfg_.n_long));
    }

    double scale(int m) const { return scale_[static_cast<std::size_t>(m)]; }

  private:
    FcConfig cfg_;
    WindowSet win_;
    std::vector<double> scale_;
    std::vector<std::int64_t> theta_num_; ///< c_m * L_S,m
    std::vector<std::int64_t> theta_den_; ///< L_m
};

/// One FC processing block of one subband: windowed, transformed, DFT
/// shifted, FD weighted, scaled, rotated, mapped into the N-bin frame.
/// Returns the frequency-domain contribution before subband combining.
cvec fc_synthesize_block(const cvec& x_block, int m, std::int64_t r, const FcBlockPipeline& p);

/// Full streaming synthesis: per-block subband accumulation in frequency
/// domain, one shared long inverse transform, synthesis windowing, and
/// overlap-add. Inputs are the raw CP-OFDM bursts (length T_m each); the
/// zero-padding of S_F,m samples is applied internally and the canonical
/// output drops I_m S_F,m samples at both ends (length max_m I_m T_m).
ComplexSignal fc_synthesize(const std::vector<cvec>& subband_inputs, const FcBlockPipeline& p);

/// Dense reference model: materializes the block-diagonal operator F_m of
/// each subband (column overlap L_O,m, row overlap N_O) and multiplies.
/// Desk-scale sizes only.
ComplexSignal fc_synthesize_dense(const std::vector<cvec>& subband_inputs, const FcBlockPipeline& p);

/// Dense operator of one subband, for structural tests. Rows cover the full
/// overlap-add span, columns the zero-padded input span.
std::vector<cvec> dense_synthesis_operator(int m, const FcBlockPipeline& p);

/// Multirate overlap-save special case: analysis all-ones, synthesis keeps
/// the middle N_S samples of each output block.
WindowSet ols_windows(const FcConfig& cfg);

/// Multirate overlap-add special case: analysis keeps the middle L_S,m input
/// samples, synthesis all-ones.
WindowSet ola_windows(const FcConfig& cfg);

} // namespace fcf
