#include "fcf/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace fcf {
namespace {

// FFTW planning is not thread-safe; executions on distinct buffers are.
// Each thread keeps its own plan/buffer cache and only the planner is locked.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanEntry {
    fftw_plan plan{nullptr};
    fftw_complex* in{nullptr};
    fftw_complex* out{nullptr};
    std::size_t n{0};

    PlanEntry(std::size_t size, int sign) : n(size) {
        in = fftw_alloc_complex(size);
        out = fftw_alloc_complex(size);
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(size), in, out, sign, FFTW_ESTIMATE);
        if (!plan) throw std::runtime_error("fftw: failed to create plan");
    }
    PlanEntry(const PlanEntry&) = delete;
    PlanEntry& operator=(const PlanEntry&) = delete;
    ~PlanEntry() {
        if (plan) {
            std::lock_guard<std::mutex> lock(planner_mutex());
            fftw_destroy_plan(plan);
        }
        fftw_free(in);
        fftw_free(out);
    }
};

cvec transform(const cvec& x, int sign) {
    if (x.empty()) return {};
    thread_local std::map<std::pair<std::size_t, int>, std::unique_ptr<PlanEntry>> cache;
    auto& slot = cache[{x.size(), sign}];
    if (!slot) slot = std::make_unique<PlanEntry>(x.size(), sign);
    for (std::size_t i = 0; i < x.size(); ++i) {
        slot->in[i][0] = x[i].real();
        slot->in[i][1] = x[i].imag();
    }
    fftw_execute(slot->plan);
    cvec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = cplx(slot->out[i][0], slot->out[i][1]);
    return y;
}

} // namespace

cvec fft(const cvec& x) { return transform(x, FFTW_FORWARD); }

cvec ifft_unnormalized(const cvec& x) { return transform(x, FFTW_BACKWARD); }

cvec ifft(const cvec& x) {
    cvec y = transform(x, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(x.size());
    for (auto& v : y) v *= scale;
    return y;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace fcf
