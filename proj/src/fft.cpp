#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace fekdisc::detail {
namespace {

enum class Kind { r2c, c2r, c2c };

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(Kind kind, int n) {
        std::lock_guard lock(mutex_);
        auto it = plans_.find({kind, n});
        if (it != plans_.end()) return it->second;
        // Scratch buffers only define the plan's layout; execution uses the
        // new-array interface on caller storage.
        std::vector<double> r(static_cast<std::size_t>(n));
        std::vector<std::complex<double>> c(static_cast<std::size_t>(n));
        auto* cc = reinterpret_cast<fftw_complex*>(c.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = nullptr;
        switch (kind) {
            case Kind::r2c: plan = fftw_plan_dft_r2c_1d(n, r.data(), cc, flags); break;
            case Kind::c2r: plan = fftw_plan_dft_c2r_1d(n, cc, r.data(), flags); break;
            case Kind::c2c: {
                std::vector<std::complex<double>> c2(static_cast<std::size_t>(n));
                plan = fftw_plan_dft_1d(n, cc, reinterpret_cast<fftw_complex*>(c2.data()),
                                        FFTW_FORWARD, flags);
                break;
            }
        }
        plans_.emplace(std::pair{kind, n}, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<Kind, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

void fft_r2c(std::span<const double> in, std::span<std::complex<double>> out) {
    const int n = static_cast<int>(in.size());
    fftw_plan plan = cache().get(Kind::r2c, n);
    // FFTW's r2c does not write its input but is not declared const.
    fftw_execute_dft_r2c(plan, const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void fft_c2r(std::span<const std::complex<double>> in, std::span<double> out) {
    const int n = static_cast<int>(out.size());
    fftw_plan plan = cache().get(Kind::c2r, n);
    std::vector<std::complex<double>> scratch(in.begin(), in.end());
    fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

void fft_c2c_forward(std::span<const std::complex<double>> in,
                     std::span<std::complex<double>> out) {
    const int n = static_cast<int>(in.size());
    fftw_plan plan = cache().get(Kind::c2c, n);
    std::vector<std::complex<double>> scratch(in.begin(), in.end());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(scratch.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace fekdisc::detail
