#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace vitcrypt {

/// 8-bit raster, row-major with interleaved channels: pixel (y, x) occupies
/// `channels` consecutive samples starting at ((y * width) + x) * channels.
class Image {
public:
    Image() = default;
    /// Zero-filled image. Throws GeometryError on empty dims or channels not in {1, 3}.
    Image(std::size_t height, std::size_t width, std::size_t channels);
    /// Takes ownership of `data`; its size must equal height * width * channels.
    Image(std::size_t height, std::size_t width, std::size_t channels, std::vector<std::uint8_t> data);

    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }
    std::size_t channels() const noexcept { return channels_; }
    std::size_t pixel_count() const noexcept { return height_ * width_; }

    std::span<const std::uint8_t> data() const noexcept { return data_; }
    std::span<std::uint8_t> data() noexcept { return data_; }

    std::uint8_t at(std::size_t y, std::size_t x, std::size_t c = 0) const {
        return data_[(y * width_ + x) * channels_ + c];
    }
    std::uint8_t& at(std::size_t y, std::size_t x, std::size_t c = 0) {
        return data_[(y * width_ + x) * channels_ + c];
    }

    bool same_shape(const Image& other) const noexcept {
        return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
    }

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::size_t channels_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Row-major tiling of an image into square blocks of side `block_size`.
struct BlockGrid {
    std::size_t block_size = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t channels = 0;
    std::vector<Image> blocks;

    std::size_t count() const noexcept { return blocks.size(); }
};

/// Throws GeometryError unless block_size is even and >= 2 and divides both dims.
void validate_block_geometry(std::size_t block_size, std::size_t height, std::size_t width);

// Binary PPM (P6) / PGM (P5), maxval 255.
Image load_ppm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> save_ppm(const Image& img);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
Image load_image_file(const std::filesystem::path& path);
void save_image_file(const std::filesystem::path& path, const Image& img);

// CIFAR-10 binary batches: records of 1 label byte followed by R, G and B
// planes of 32x32 bytes each.
inline constexpr std::size_t kCifarSide = 32;
inline constexpr std::size_t kCifarRecordBytes = 1 + 3 * kCifarSide * kCifarSide;

struct LabeledImage {
    std::uint8_t label = 0;
    Image image;
};

std::vector<LabeledImage> load_cifar10_batch(std::span<const std::uint8_t> bytes);
/// Inverse of one record of load_cifar10_batch; the image must be 32x32x3.
std::vector<std::uint8_t> to_cifar10_record(std::uint8_t label, const Image& img);

/// Integer-factor nearest-neighbour upscale.
Image resize_nearest(const Image& img, std::size_t factor);

BlockGrid divide_blocks(const Image& img, std::size_t block_size);
Image assemble_blocks(const BlockGrid& grid);

}  // namespace vitcrypt
