#include "texfrac/gray_image.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace texfrac {

namespace {

std::string with_offset(const std::string& what, std::size_t offset) {
    std::ostringstream os;
    os << what << " (at byte " << offset << ")";
    return os.str();
}

bool is_pgm_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

/// Cursor over the PGM byte stream; every failure reports the position.
class Scanner {
public:
    explicit Scanner(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t pos() const { return pos_; }
    bool eof() const { return pos_ >= bytes_.size(); }
    std::uint8_t peek() const { return bytes_[pos_]; }
    std::uint8_t take() { return bytes_[pos_++]; }

    /// Whitespace runs and '#' comment lines between header tokens.
    void skip_separators() {
        while (!eof()) {
            if (is_pgm_space(peek())) {
                ++pos_;
            } else if (peek() == '#') {
                while (!eof() && take() != '\n') {
                }
            } else {
                break;
            }
        }
    }

    /// Unsigned decimal token. Its start offset is kept for error reports.
    long next_int(const char* what) {
        skip_separators();
        last_token_at_ = pos_;
        if (eof())
            throw PgmError(std::string("unexpected end of data reading ") + what, last_token_at_);
        if (!std::isdigit(peek()))
            throw PgmError(std::string("expected digit for ") + what, last_token_at_);
        long value = 0;
        while (!eof() && std::isdigit(peek())) {
            value = value * 10 + (take() - '0');
            if (value > 1'000'000'000L)
                throw PgmError(std::string("absurdly large value for ") + what, last_token_at_);
        }
        return value;
    }

    std::size_t last_token_at() const { return last_token_at_; }

    std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

PgmError::PgmError(const std::string& what, std::size_t offset)
    : std::runtime_error(with_offset(what, offset)), offset_(offset) {}

GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
    Scanner sc(bytes);
    if (bytes.size() < 2) throw PgmError("not a PGM: data too short for magic number", 0);
    const char m0 = static_cast<char>(sc.take());
    const char m1 = static_cast<char>(sc.take());
    if (m0 != 'P' || (m1 != '2' && m1 != '5')) {
        throw PgmError(std::string("unsupported magic number \"") + m0 + m1 +
                           "\" (want P2 or P5)",
                       0);
    }
    const bool binary = m1 == '5';

    const std::size_t width_at = sc.pos();
    const long width = sc.next_int("width");
    const std::size_t height_at = sc.pos();
    const long height = sc.next_int("height");
    if (width == 0) throw PgmError("zero width", width_at);
    if (height == 0) throw PgmError("zero height", height_at);

    const std::size_t maxval_at = sc.pos();
    const long maxval = sc.next_int("maxval");
    if (maxval > 255) throw PgmError("maxval exceeds 255", maxval_at);
    if (maxval == 0) throw PgmError("zero maxval", maxval_at);

    GrayImage img;
    img.width = static_cast<int>(width);
    img.height = static_cast<int>(height);
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    img.pixels.reserve(count);

    if (binary) {
        // Exactly one whitespace byte separates maxval from the raster.
        if (sc.eof()) throw PgmError("unexpected end of data after maxval", sc.pos());
        if (!is_pgm_space(sc.peek()))
            throw PgmError("expected single whitespace after maxval", sc.pos());
        sc.take();
        auto raster = sc.rest();
        if (raster.size() < count)
            throw PgmError("truncated pixel data", bytes.size());
        img.pixels.assign(raster.begin(), raster.begin() + count);
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            sc.skip_separators();
            const std::size_t at = sc.pos();
            if (sc.eof()) throw PgmError("truncated pixel data", at);
            const long v = sc.next_int("pixel");
            if (v > maxval) throw PgmError("pixel value exceeds maxval", at);
            img.pixels.push_back(static_cast<std::uint8_t>(v));
        }
    }
    return img;
}

std::vector<std::uint8_t> write_pgm(const GrayImage& img) {
    std::ostringstream header;
    header << "P5\n" << img.width << " " << img.height << "\n255\n";
    const std::string h = header.str();
    std::vector<std::uint8_t> out;
    out.reserve(h.size() + img.pixels.size());
    out.insert(out.end(), h.begin(), h.end());
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

GrayImage load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    try {
        return read_pgm(bytes);
    } catch (const PgmError& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
    const auto bytes = write_pgm(img);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to " + path.string());
}

namespace {

bool has_pgm_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".pgm";
}

}  // namespace

LabeledDataset ingest_dataset(const std::filesystem::path& root, std::optional<TileSize> tile,
                              std::vector<std::string>* warnings) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root))
        throw std::runtime_error("dataset root is not a directory: " + root.string());
    if (tile && (tile->width < 1 || tile->height < 1))
        throw std::invalid_argument("tile dimensions must be positive");

    std::vector<fs::path> class_dirs;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) class_dirs.push_back(entry.path());
    }
    std::sort(class_dirs.begin(), class_dirs.end());
    if (class_dirs.empty())
        throw std::runtime_error("dataset root has no class subdirectories: " + root.string());

    LabeledDataset out;
    for (int class_id = 0; class_id < static_cast<int>(class_dirs.size()); ++class_id) {
        const auto& dir = class_dirs[class_id];
        out.class_names.push_back(dir.filename().string());

        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_regular_file() && has_pgm_extension(entry.path()))
                files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        if (files.empty())
            throw std::runtime_error("class directory has no PGM files: " + dir.string());

        std::size_t produced = 0;
        for (const auto& file : files) {
            const GrayImage img = load_pgm(file);
            const std::string stem = dir.filename().string() + "/" + file.stem().string();
            if (!tile) {
                out.samples.push_back({img, class_id, stem});
                ++produced;
                continue;
            }
            const int nx = img.width / tile->width;
            const int ny = img.height / tile->height;
            if (nx == 0 || ny == 0) {
                if (warnings)
                    warnings->push_back("tile larger than image, skipping " + file.string());
                continue;
            }
            int index = 0;
            for (int ty = 0; ty < ny; ++ty) {
                for (int tx = 0; tx < nx; ++tx, ++index) {
                    GrayImage t;
                    t.width = tile->width;
                    t.height = tile->height;
                    t.pixels.resize(static_cast<std::size_t>(t.width) * t.height);
                    for (int y = 0; y < t.height; ++y) {
                        const auto* src = &img.pixels[(static_cast<std::size_t>(ty) * tile->height + y) *
                                                          img.width +
                                                      static_cast<std::size_t>(tx) * tile->width];
                        std::copy(src, src + t.width, &t.pixels[static_cast<std::size_t>(y) * t.width]);
                    }
                    out.samples.push_back({std::move(t), class_id, stem + "#" + std::to_string(index)});
                    ++produced;
                }
            }
        }
        if (produced == 0)
            throw std::runtime_error("class produced no samples (all images smaller than tile): " +
                                     dir.string());
    }
    return out;
}

}  // namespace texfrac
