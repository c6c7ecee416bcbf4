#include "metrics.hpp"

#include <cmath>
#include <limits>

#include "error.hpp"

namespace ekd {

double mean_square_error(const PixelField& a, const PixelField& b) {
    if (!a.same_shape(b))
        fail(ErrorCode::Invalid, "mean_square_error: image shapes differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.values.size());
}

double psnr_from_mse(double mse) {
    if (mse <= 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace ekd
