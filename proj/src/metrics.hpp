#ifndef EKD_METRICS_HPP
#define EKD_METRICS_HPP

#include "field.hpp"

namespace ekd {

// MSE over all channels: sum of squared differences / (channels * pixels).
double mean_square_error(const PixelField& a, const PixelField& b);

// 10 log10(255^2 / mse); +infinity for mse = 0.
double psnr_from_mse(double mse);

}  // namespace ekd

#endif
