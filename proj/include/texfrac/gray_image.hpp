#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace texfrac {

/// 8-bit grayscale raster, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // size == width * height

    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::size_t size() const { return pixels.size(); }

    bool operator==(const GrayImage&) const = default;
};

/// Parse failure in a PGM stream. `offset` is the byte position the
/// parser was looking at when it gave up; the message repeats it.
class PgmError : public std::runtime_error {
public:
    PgmError(const std::string& what, std::size_t offset);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Decode a PGM image (P2 ASCII or P5 binary, maxval <= 255).
/// '#' comments are recognized between header tokens. P5 pixel bytes are
/// taken verbatim; a maxval below 255 does not rescale them.
GrayImage read_pgm(std::span<const std::uint8_t> bytes);

/// Encode as binary P5 with maxval 255. read_pgm(write_pgm(img)) == img.
std::vector<std::uint8_t> write_pgm(const GrayImage& img);

GrayImage load_pgm(const std::filesystem::path& path);
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

struct Sample {
    GrayImage image;
    int class_id = 0;
    std::string name;
};

struct LabeledDataset {
    std::vector<Sample> samples;
    std::vector<std::string> class_names;
};

struct TileSize {
    int width = 0;
    int height = 0;
};

/// Ingest `root/<class_name>/<image>.pgm` into a labeled dataset.
/// Class ids follow lexicographic subdirectory order; samples are ordered
/// lexicographically by path, then tile index. When `tile` is set each
/// source image is cut into non-overlapping tiles scanned row-major and
/// partial edge tiles are dropped; an image smaller than the tile
/// contributes nothing and a warning is appended to `warnings`.
LabeledDataset ingest_dataset(const std::filesystem::path& root,
                              std::optional<TileSize> tile = std::nullopt,
                              std::vector<std::string>* warnings = nullptr);

}  // namespace texfrac
