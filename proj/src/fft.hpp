#pragma once

#include <span>

#include "tensorfun/tensor3.hpp"

namespace tensorfun::detail {

/// In-place length-p DFT of `count` interleaved tubes: element k of tube t
/// lives at data[k * count + t]. The forward transform is unnormalized with
/// omega = exp(-2 pi i / p); the inverse carries the 1/p factor.
void tube_fft(std::span<Scalar> data, Index count, Index p, bool inverse);

}  // namespace tensorfun::detail
