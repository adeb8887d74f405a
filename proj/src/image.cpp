#include "vitcrypt/image.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "vitcrypt/error.hpp"

namespace vitcrypt {

namespace {

void check_shape(std::size_t height, std::size_t width, std::size_t channels) {
    if (height == 0 || width == 0) {
        throw GeometryError("image dimensions must be positive");
    }
    if (channels != 1 && channels != 3) {
        throw GeometryError("image must have 1 or 3 channels, got " + std::to_string(channels));
    }
}

// Cursor over a PNM header: tokens separated by whitespace, '#' comments to end of line.
class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::optional<std::size_t> read_uint() {
        skip_separators();
        std::size_t value = 0;
        std::size_t digits = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (++digits > 9) return std::nullopt;
            ++pos_;
        }
        if (digits == 0) return std::nullopt;
        return value;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    bool consume_single_whitespace() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) return false;
        ++pos_;
        return true;
    }

    std::size_t position() const noexcept { return pos_; }

private:
    void skip_separators() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 2;
};

}  // namespace

Image::Image(std::size_t height, std::size_t width, std::size_t channels)
    : height_(height), width_(width), channels_(channels) {
    check_shape(height, width, channels);
    data_.assign(height * width * channels, 0);
}

Image::Image(std::size_t height, std::size_t width, std::size_t channels, std::vector<std::uint8_t> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
    check_shape(height, width, channels);
    if (data_.size() != height * width * channels) {
        throw GeometryError("image payload has " + std::to_string(data_.size()) + " samples, expected " +
                            std::to_string(height * width * channels));
    }
}

void validate_block_geometry(std::size_t block_size, std::size_t height, std::size_t width) {
    if (block_size < 2 || block_size % 2 != 0) {
        throw GeometryError("block size must be even and at least 2, got " + std::to_string(block_size));
    }
    if (height == 0 || width == 0 || height % block_size != 0 || width % block_size != 0) {
        throw GeometryError("image " + std::to_string(height) + "x" + std::to_string(width) +
                            " is not divisible into " + std::to_string(block_size) + "x" +
                            std::to_string(block_size) + " blocks");
    }
}

Image load_ppm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 3 || bytes[0] != 'P' || (bytes[1] != '6' && bytes[1] != '5') || !std::isspace(bytes[2])) {
        throw FormatError("not a binary PPM/PGM file (expected P6 or P5 magic)");
    }
    const std::size_t channels = bytes[1] == '6' ? 3 : 1;

    HeaderReader header(bytes);
    const auto width = header.read_uint();
    const auto height = header.read_uint();
    const auto maxval = header.read_uint();
    if (!width || !height || !maxval || *width == 0 || *height == 0) {
        throw FormatError("malformed PPM/PGM header");
    }
    if (*maxval != 255) {
        throw FormatError("unsupported maxval " + std::to_string(*maxval) + " (only 255 is supported)");
    }
    if (!header.consume_single_whitespace()) {
        throw FormatError("malformed PPM/PGM header: missing whitespace after maxval");
    }

    const std::size_t payload = *height * *width * channels;
    const std::size_t offset = header.position();
    if (bytes.size() - offset < payload) {
        throw FormatError("truncated raster: need " + std::to_string(payload) + " bytes, have " +
                          std::to_string(bytes.size() - offset));
    }
    const auto first = bytes.begin() + static_cast<std::ptrdiff_t>(offset);
    return Image(*height, *width, channels,
                 std::vector<std::uint8_t>(first, first + static_cast<std::ptrdiff_t>(payload)));
}

std::vector<std::uint8_t> save_ppm(const Image& img) {
    const std::string header = std::string(img.channels() == 3 ? "P6" : "P5") + "\n" +
                               std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.data().begin(), img.data().end());
    return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed on '" + path.string() + "'");
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed on '" + path.string() + "'");
}

Image load_image_file(const std::filesystem::path& path) { return load_ppm(read_file(path)); }

void save_image_file(const std::filesystem::path& path, const Image& img) { write_file(path, save_ppm(img)); }

std::vector<LabeledImage> load_cifar10_batch(std::span<const std::uint8_t> bytes) {
    if (bytes.size() % kCifarRecordBytes != 0) {
        throw FormatError("CIFAR-10 batch length " + std::to_string(bytes.size()) + " is not a multiple of " +
                          std::to_string(kCifarRecordBytes));
    }
    constexpr std::size_t plane = kCifarSide * kCifarSide;
    const std::size_t count = bytes.size() / kCifarRecordBytes;

    std::vector<LabeledImage> records;
    records.reserve(count);
    for (std::size_t r = 0; r < count; ++r) {
        const auto record = bytes.subspan(r * kCifarRecordBytes, kCifarRecordBytes);
        if (record[0] > 9) {
            throw FormatError("record " + std::to_string(r) + " has label " + std::to_string(record[0]) +
                              " outside 0..9");
        }
        std::vector<std::uint8_t> interleaved(3 * plane);
        for (std::size_t p = 0; p < plane; ++p) {
            for (std::size_t c = 0; c < 3; ++c) {
                interleaved[p * 3 + c] = record[1 + c * plane + p];
            }
        }
        records.push_back({record[0], Image(kCifarSide, kCifarSide, 3, std::move(interleaved))});
    }
    return records;
}

std::vector<std::uint8_t> to_cifar10_record(std::uint8_t label, const Image& img) {
    if (img.height() != kCifarSide || img.width() != kCifarSide || img.channels() != 3) {
        throw GeometryError("CIFAR-10 records hold 32x32x3 images");
    }
    if (label > 9) throw FormatError("CIFAR-10 label must be in 0..9");
    constexpr std::size_t plane = kCifarSide * kCifarSide;
    std::vector<std::uint8_t> record(kCifarRecordBytes);
    record[0] = label;
    const auto data = img.data();
    for (std::size_t p = 0; p < plane; ++p) {
        for (std::size_t c = 0; c < 3; ++c) {
            record[1 + c * plane + p] = data[p * 3 + c];
        }
    }
    return record;
}

Image resize_nearest(const Image& img, std::size_t factor) {
    if (factor == 0) throw ConfigError("resize factor must be at least 1");
    const std::size_t channels = img.channels();
    Image out(img.height() * factor, img.width() * factor, channels);
    const auto src = img.data();
    auto dst = out.data();
    for (std::size_t y = 0; y < out.height(); ++y) {
        const std::size_t sy = y / factor;
        for (std::size_t x = 0; x < out.width(); ++x) {
            const std::size_t sx = x / factor;
            std::copy_n(src.begin() + static_cast<std::ptrdiff_t>((sy * img.width() + sx) * channels), channels,
                        dst.begin() + static_cast<std::ptrdiff_t>((y * out.width() + x) * channels));
        }
    }
    return out;
}

BlockGrid divide_blocks(const Image& img, std::size_t block_size) {
    validate_block_geometry(block_size, img.height(), img.width());
    BlockGrid grid;
    grid.block_size = block_size;
    grid.rows = img.height() / block_size;
    grid.cols = img.width() / block_size;
    grid.channels = img.channels();
    grid.blocks.reserve(grid.rows * grid.cols);

    const std::size_t row_bytes = block_size * img.channels();
    const auto src = img.data();
    for (std::size_t br = 0; br < grid.rows; ++br) {
        for (std::size_t bc = 0; bc < grid.cols; ++bc) {
            Image block(block_size, block_size, img.channels());
            auto dst = block.data();
            for (std::size_t y = 0; y < block_size; ++y) {
                const std::size_t offset = ((br * block_size + y) * img.width() + bc * block_size) * img.channels();
                std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(offset), row_bytes,
                            dst.begin() + static_cast<std::ptrdiff_t>(y * row_bytes));
            }
            grid.blocks.push_back(std::move(block));
        }
    }
    return grid;
}

Image assemble_blocks(const BlockGrid& grid) {
    const std::size_t m = grid.block_size;
    if (m == 0 || grid.rows == 0 || grid.cols == 0 || grid.blocks.size() != grid.rows * grid.cols) {
        throw GeometryError("block grid is inconsistent: expected " + std::to_string(grid.rows * grid.cols) +
                            " blocks, have " + std::to_string(grid.blocks.size()));
    }
    for (std::size_t i = 0; i < grid.blocks.size(); ++i) {
        const Image& b = grid.blocks[i];
        if (b.height() != m || b.width() != m || b.channels() != grid.channels) {
            throw GeometryError("block " + std::to_string(i) + " does not match the grid's block shape");
        }
    }

    Image out(grid.rows * m, grid.cols * m, grid.channels);
    const std::size_t row_bytes = m * grid.channels;
    auto dst = out.data();
    for (std::size_t br = 0; br < grid.rows; ++br) {
        for (std::size_t bc = 0; bc < grid.cols; ++bc) {
            const auto src = grid.blocks[br * grid.cols + bc].data();
            for (std::size_t y = 0; y < m; ++y) {
                const std::size_t offset = ((br * m + y) * out.width() + bc * m) * grid.channels;
                std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(y * row_bytes), row_bytes,
                            dst.begin() + static_cast<std::ptrdiff_t>(offset));
            }
        }
    }
    return out;
}

}  // namespace vitcrypt
