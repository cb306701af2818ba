#include "fft.hpp"

#include <mutex>

#include <fftw3.h>

namespace tensorfun::detail {

namespace {

// Only fftw_execute* is thread safe; planning and destruction are not.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

void tube_fft(std::span<Scalar> data, Index count, Index p, bool inverse) {
    if (p <= 1 || count == 0)
        return;
    if (static_cast<Index>(data.size()) != count * p)
        throw DimensionError("tube_fft: buffer size does not match count * p");

    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    const int n = static_cast<int>(p);
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_many_dft(1, &n, static_cast<int>(count), buf, nullptr,
                                  static_cast<int>(count), 1, buf, nullptr,
                                  static_cast<int>(count), 1,
                                  inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                  FFTW_ESTIMATE);
    }
    if (plan == nullptr)
        throw Error("tube_fft: FFTW planning failed");
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(p);
        for (auto& z : data)
            z *= scale;
    }
}

}  // namespace tensorfun::detail
