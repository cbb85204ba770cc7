#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

#include "texfrac/gray_image.hpp"

using namespace texfrac;
namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) {
    return {s.begin(), s.end()};
}

GrayImage random_image(int w, int h, std::uint64_t seed) {
    GrayImage img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    std::mt19937_64 rng(seed);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng() & 0xFF);
    return img;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("texfrac_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE("imgio") {

TEST_CASE("P2 ASCII parse") {
    const auto img = read_pgm(bytes_of("P2\n2 2\n255\n0 64 128 255"));
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.pixels == std::vector<std::uint8_t>{0, 64, 128, 255});
}

TEST_CASE("P5 binary parse, single byte") {
    auto data = bytes_of("P5\n1 1\n255\n");
    data.push_back(0x7F);
    const auto img = read_pgm(data);
    CHECK(img.width == 1);
    CHECK(img.height == 1);
    CHECK(img.pixels == std::vector<std::uint8_t>{127});
}

TEST_CASE("comments between header tokens") {
    const auto img = read_pgm(bytes_of("P2 # a comment\n# another\n2 1 # sizes\n255\n7 9"));
    CHECK(img.width == 2);
    CHECK(img.pixels == std::vector<std::uint8_t>{7, 9});
}

TEST_CASE("P5 maxval below 255 is not rescaled") {
    auto data = bytes_of("P5\n2 1\n15\n");
    data.push_back(3);
    data.push_back(15);
    const auto img = read_pgm(data);
    CHECK(img.pixels == std::vector<std::uint8_t>{3, 15});
}

TEST_CASE("parse errors carry byte offsets") {
    SUBCASE("color PPM rejected") {
        CHECK_THROWS_WITH_AS(read_pgm(bytes_of("P3\n1 1\n255\n0 0 0")),
                             doctest::Contains("magic"), PgmError);
        try {
            read_pgm(bytes_of("P3\n1 1\n255\n0 0 0"));
        } catch (const PgmError& e) {
            CHECK(e.offset() == 0);
        }
    }
    SUBCASE("maxval too large") {
        try {
            read_pgm(bytes_of("P2\n1 1\n65535\n0"));
            FAIL("expected PgmError");
        } catch (const PgmError& e) {
            CHECK(e.offset() == 8);  // position of the maxval token
            CHECK(std::string(e.what()).find("maxval") != std::string::npos);
            CHECK(std::string(e.what()).find("byte 8") != std::string::npos);
        }
    }
    SUBCASE("truncated P5 raster") {
        auto data = bytes_of("P5\n2 2\n255\n");
        data.push_back(0x00);
        CHECK_THROWS_WITH_AS(read_pgm(data), doctest::Contains("truncated"), PgmError);
    }
    SUBCASE("truncated P2 raster") {
        CHECK_THROWS_WITH_AS(read_pgm(bytes_of("P2\n2 2\n255\n0 1 2")),
                             doctest::Contains("truncated"), PgmError);
    }
    SUBCASE("zero dimensions") {
        CHECK_THROWS_WITH_AS(read_pgm(bytes_of("P2\n0 2\n255\n")), doctest::Contains("zero width"),
                             PgmError);
        CHECK_THROWS_WITH_AS(read_pgm(bytes_of("P2\n2 0\n255\n")), doctest::Contains("zero height"),
                             PgmError);
    }
    SUBCASE("pixel above maxval") {
        CHECK_THROWS_WITH_AS(read_pgm(bytes_of("P2\n1 1\n15\n16")),
                             doctest::Contains("exceeds maxval"), PgmError);
    }
}

TEST_CASE("write_pgm emits P5 with maxval 255") {
    const GrayImage img{1, 1, {0}};
    auto expected = bytes_of("P5\n1 1\n255\n");
    expected.push_back(0x00);
    CHECK(write_pgm(img) == expected);

    const GrayImage two{2, 1, {255, 0}};
    const auto out = write_pgm(two);
    CHECK(out[out.size() - 2] == 0xFF);
    CHECK(out[out.size() - 1] == 0x00);
}

TEST_CASE("round-trip identity on random images") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto img = random_image(16, 16, seed);
        CHECK(read_pgm(write_pgm(img)) == img);
    }
    // non-square as well
    const auto img = random_image(7, 3, 99);
    CHECK(read_pgm(write_pgm(img)) == img);
}

TEST_CASE("ingest: one sample per file without tiling") {
    TempDir tmp;
    for (const char* cls : {"bark", "sand"}) {
        fs::create_directories(tmp.path / cls);
        for (int i = 0; i < 3; ++i)
            save_pgm(random_image(8, 8, i), tmp.path / cls / ("img" + std::to_string(i) + ".pgm"));
    }
    const auto ds = ingest_dataset(tmp.path);
    CHECK(ds.class_names == std::vector<std::string>{"bark", "sand"});
    CHECK(ds.samples.size() == 6);
    CHECK(ds.samples[0].class_id == 0);
    CHECK(ds.samples[0].name == "bark/img0");
    CHECK(ds.samples[5].class_id == 1);
}

TEST_CASE("ingest: tiling discards partial tiles") {
    TempDir tmp;
    fs::create_directories(tmp.path / "a");
    fs::create_directories(tmp.path / "b");
    save_pgm(random_image(65, 64, 1), tmp.path / "a" / "big.pgm");
    save_pgm(random_image(64, 64, 2), tmp.path / "b" / "big.pgm");
    const auto ds = ingest_dataset(tmp.path, TileSize{32, 32});
    // 65x64 -> 2x2 tiles (the 1-pixel right margin is dropped), 64x64 -> 2x2
    CHECK(ds.samples.size() == 8);
    CHECK(ds.samples[0].name == "a/big#0");
    CHECK(ds.samples[3].name == "a/big#3");
    for (const auto& s : ds.samples) {
        CHECK(s.image.width == 32);
        CHECK(s.image.height == 32);
    }
}

TEST_CASE("ingest: tile content matches source region") {
    TempDir tmp;
    fs::create_directories(tmp.path / "a");
    fs::create_directories(tmp.path / "b");
    const auto src = random_image(8, 4, 3);
    save_pgm(src, tmp.path / "a" / "img.pgm");
    save_pgm(src, tmp.path / "b" / "img.pgm");
    const auto ds = ingest_dataset(tmp.path, TileSize{4, 4});
    REQUIRE(ds.samples.size() == 4);
    // second tile of the first image is the right half, row-major scan
    const auto& t1 = ds.samples[1].image;
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) CHECK(t1.at(x, y) == src.at(x + 4, y));
}

TEST_CASE("ingest: tile larger than image warns and skips") {
    TempDir tmp;
    fs::create_directories(tmp.path / "a");
    fs::create_directories(tmp.path / "b");
    save_pgm(random_image(8, 8, 1), tmp.path / "a" / "small.pgm");
    save_pgm(random_image(32, 32, 2), tmp.path / "a" / "zbig.pgm");
    save_pgm(random_image(32, 32, 3), tmp.path / "b" / "big.pgm");
    std::vector<std::string> warnings;
    const auto ds = ingest_dataset(tmp.path, TileSize{16, 16}, &warnings);
    CHECK(ds.samples.size() == 8);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("small.pgm") != std::string::npos);
}

TEST_CASE("ingest: empty class directory is an error") {
    TempDir tmp;
    fs::create_directories(tmp.path / "a");
    fs::create_directories(tmp.path / "empty");
    save_pgm(random_image(8, 8, 1), tmp.path / "a" / "img.pgm");
    CHECK_THROWS_WITH_AS(ingest_dataset(tmp.path), doctest::Contains("empty"),
                         std::runtime_error);
}

TEST_CASE("ingest: deterministic ordering") {
    TempDir tmp;
    for (const char* cls : {"c", "a", "b"}) {
        fs::create_directories(tmp.path / cls);
        save_pgm(random_image(8, 8, 1), tmp.path / cls / "y.pgm");
        save_pgm(random_image(8, 8, 2), tmp.path / cls / "x.pgm");
    }
    const auto d1 = ingest_dataset(tmp.path);
    const auto d2 = ingest_dataset(tmp.path);
    CHECK(d1.class_names == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(d1.samples.size() == d2.samples.size());
    for (std::size_t i = 0; i < d1.samples.size(); ++i) {
        CHECK(d1.samples[i].name == d2.samples[i].name);
        CHECK(d1.samples[i].class_id == d2.samples[i].class_id);
        CHECK(d1.samples[i].image == d2.samples[i].image);
    }
    CHECK(d1.samples[0].name == "a/x");
}

}  // TEST_SUITE
