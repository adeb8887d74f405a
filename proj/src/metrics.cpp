#include "vitcrypt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "vitcrypt/error.hpp"

namespace vitcrypt {

namespace {

void require_same_shape(const Image& a, const Image& b) {
    if (!a.same_shape(b)) {
        throw GeometryError("image shapes differ: " + std::to_string(a.height()) + "x" + std::to_string(a.width()) +
                            "x" + std::to_string(a.channels()) + " vs " + std::to_string(b.height()) + "x" +
                            std::to_string(b.width()) + "x" + std::to_string(b.channels()));
    }
}

std::array<double, kSsimWindow> gaussian_taps() {
    std::array<double, kSsimWindow> taps{};
    const double centre = static_cast<double>(kSsimWindow / 2);
    double sum = 0.0;
    for (std::size_t i = 0; i < kSsimWindow; ++i) {
        const double d = static_cast<double>(i) - centre;
        taps[i] = std::exp(-(d * d) / (2.0 * kSsimSigma * kSsimSigma));
        sum += taps[i];
    }
    for (double& t : taps) t /= sum;
    return taps;
}

// Separable valid-mode filtering of a single-channel plane.
std::vector<double> filter_valid(const std::vector<double>& plane, std::size_t height, std::size_t width,
                                 const std::array<double, kSsimWindow>& taps) {
    const std::size_t out_w = width - kSsimWindow + 1;
    const std::size_t out_h = height - kSsimWindow + 1;
    std::vector<double> horiz(height * out_w);
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < out_w; ++x) {
            double acc = 0.0;
            for (std::size_t k = 0; k < kSsimWindow; ++k) acc += taps[k] * plane[y * width + x + k];
            horiz[y * out_w + x] = acc;
        }
    }
    std::vector<double> out(out_h * out_w);
    for (std::size_t y = 0; y < out_h; ++y) {
        for (std::size_t x = 0; x < out_w; ++x) {
            double acc = 0.0;
            for (std::size_t k = 0; k < kSsimWindow; ++k) acc += taps[k] * horiz[(y + k) * out_w + x];
            out[y * out_w + x] = acc;
        }
    }
    return out;
}

}  // namespace

Image to_luma(const Image& img) {
    if (img.channels() == 1) return img;
    Image out(img.height(), img.width(), 1);
    const auto src = img.data();
    auto dst = out.data();
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
        const double y = 0.299 * src[3 * p] + 0.587 * src[3 * p + 1] + 0.114 * src[3 * p + 2];
        dst[p] = static_cast<std::uint8_t>(std::clamp(std::lround(y), 0L, 255L));
    }
    return out;
}

double ssim(const Image& a, const Image& b) {
    require_same_shape(a, b);
    if (a.height() < kSsimWindow || a.width() < kSsimWindow) {
        throw GeometryError("SSIM needs images of at least 11x11 pixels");
    }
    const Image la = to_luma(a);
    const Image lb = to_luma(b);
    const std::size_t h = la.height(), w = la.width(), n = h * w;

    std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = la.data()[i];
        y[i] = lb.data()[i];
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    const auto taps = gaussian_taps();
    const auto mu_x = filter_valid(x, h, w, taps);
    const auto mu_y = filter_valid(y, h, w, taps);
    const auto e_xx = filter_valid(xx, h, w, taps);
    const auto e_yy = filter_valid(yy, h, w, taps);
    const auto e_xy = filter_valid(xy, h, w, taps);

    double total = 0.0;
    for (std::size_t i = 0; i < mu_x.size(); ++i) {
        const double mx = mu_x[i], my = mu_y[i];
        const double var_x = e_xx[i] - mx * mx;
        const double var_y = e_yy[i] - my * my;
        const double cov = e_xy[i] - mx * my;
        const double num = (2.0 * mx * my + kSsimC1) * (2.0 * cov + kSsimC2);
        const double den = (mx * mx + my * my + kSsimC1) * (var_x + var_y + kSsimC2);
        total += num / den;
    }
    return total / static_cast<double>(mu_x.size());
}

std::vector<Histogram> histogram(const Image& img) {
    std::vector<Histogram> bins(img.channels(), Histogram{});
    const auto data = img.data();
    for (std::size_t i = 0; i < data.size(); ++i) ++bins[i % img.channels()][data[i]];
    return bins;
}

bool LeakageReport::all_histograms_preserved() const noexcept {
    return std::all_of(histogram_preserved.begin(), histogram_preserved.end(), [](bool v) { return v; });
}

LeakageReport leakage_report(const Image& plain, const Image& processed) {
    require_same_shape(plain, processed);
    LeakageReport report;
    report.ssim = ssim(plain, processed);

    const auto hp = histogram(plain);
    const auto hq = histogram(processed);
    for (std::size_t c = 0; c < hp.size(); ++c) report.histogram_preserved.push_back(hp[c] == hq[c]);

    const auto pa = plain.data();
    const auto pb = processed.data();
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < pa.size(); ++i) sum += static_cast<std::uint64_t>(std::abs(pa[i] - pb[i]));
    report.mean_abs_diff = static_cast<double>(sum) / static_cast<double>(pa.size());
    return report;
}

}  // namespace vitcrypt
