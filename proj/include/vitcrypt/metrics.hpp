#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "vitcrypt/image.hpp"

namespace vitcrypt {

// SSIM protocol: BT.601 luma for colour input, 11x11 Gaussian window with
// sigma 1.5, valid windows only, C1 = (0.01*255)^2, C2 = (0.03*255)^2,
// result is the mean of the local SSIM map. All arithmetic in double.
inline constexpr std::size_t kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimC1 = (0.01 * 255.0) * (0.01 * 255.0);
inline constexpr double kSsimC2 = (0.03 * 255.0) * (0.03 * 255.0);

/// round(0.299 R + 0.587 G + 0.114 B); single-channel input is returned unchanged.
Image to_luma(const Image& img);

double ssim(const Image& a, const Image& b);

using Histogram = std::array<std::size_t, 256>;

/// One 256-bin histogram per channel.
std::vector<Histogram> histogram(const Image& img);

struct LeakageReport {
    double ssim = 0.0;
    std::vector<bool> histogram_preserved;  // per channel
    double mean_abs_diff = 0.0;

    bool all_histograms_preserved() const noexcept;
};

LeakageReport leakage_report(const Image& plain, const Image& processed);

}  // namespace vitcrypt
