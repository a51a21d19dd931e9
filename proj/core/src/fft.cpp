#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace dynsamp::detail {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (howmany, n, sign) and kept for the
// life of the process.
class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t howmany, std::size_t n, int sign)
    {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(howmany, n, sign);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;

        const std::size_t len = howmany * n;
        std::vector<std::complex<double>> in(len), out(len);
        int dims[1] = {static_cast<int>(n)};
        const int stride = static_cast<int>(howmany);
        // FFTW_UNALIGNED keeps the chosen codelets independent of the
        // alignment of the arrays passed at execution time.
        fftw_plan plan = fftw_plan_many_dft(
            1, dims, static_cast<int>(howmany),
            reinterpret_cast<fftw_complex*>(in.data()), nullptr, stride, 1,
            reinterpret_cast<fftw_complex*>(out.data()), nullptr, stride, 1,
            sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr)
            throw std::runtime_error("fftw: failed to create plan");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache()
{
    static PlanCache cache;
    return cache;
}

} // namespace

void tube_dft(std::span<const std::complex<double>> in, std::span<std::complex<double>> out,
              std::size_t howmany, std::size_t n, int sign)
{
    if (howmany == 0 || n == 0)
        return;
    if (n == 1) {
        std::copy(in.begin(), in.end(), out.begin());
        return;
    }
    fftw_plan plan = plan_cache().get(howmany, n, sign);
    // Out-of-place execution leaves the input untouched for complex DFTs.
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

} // namespace dynsamp::detail
