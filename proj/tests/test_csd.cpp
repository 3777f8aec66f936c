#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>

#include "prman/csd.hpp"
#include "prman/image_io.hpp"

using namespace prman;
using namespace prman::csd;

namespace {

// Independent oracle: re-scan every 8x8 window from scratch.
ColorStructureHistogram brute_force_csd(const ImageFrame& f, const Quantizer& q) {
    ColorStructureHistogram h;
    h.bins.assign(q.levels, 0);
    for (int wy = 0; wy + kStructuringWidth <= f.height; ++wy)
        for (int wx = 0; wx + kStructuringWidth <= f.width; ++wx) {
            std::vector<bool> present(q.levels, false);
            for (int y = wy; y < wy + kStructuringWidth; ++y)
                for (int x = wx; x < wx + kStructuringWidth; ++x)
                    present[q.bin_of(f, x, y)] = true;
            for (int c = 0; c < q.levels; ++c)
                if (present[c]) ++h.bins[c];
        }
    return h;
}

ImageFrame random_frame(std::mt19937& rng, int w, int h, bool rgb) {
    ImageFrame f;
    f.width = w;
    f.height = h;
    f.rgb = rgb;
    f.pixels.resize(size_t(w) * h * (rgb ? 3 : 1));
    for (auto& p : f.pixels) p = uint8_t(rng());
    return f;
}

ImageFrame solid_rgb(int w, int h, Rgb c) {
    ImageFrame f;
    f.width = w;
    f.height = h;
    f.rgb = true;
    for (int i = 0; i < w * h; ++i) {
        f.pixels.push_back(c.r);
        f.pixels.push_back(c.g);
        f.pixels.push_back(c.b);
    }
    return f;
}

} // namespace

TEST_CASE("position counts for reference frame sizes") {
    CHECK(num_positions(480, 640) == 299409);
    CHECK(num_positions(8, 8) == 1);
    CHECK(num_positions(10, 786) == 2337);
    CHECK_THROWS_AS(num_positions(7, 640), FrameTooSmall);
    CHECK_THROWS_AS(num_positions(480, 7), FrameTooSmall);
}

TEST_CASE("counter width covers the position count") {
    CHECK(counter_width(299409) == 19);
    CHECK(counter_width(1) == 0);
    CHECK(counter_width(2337) == 12);
    CHECK(counter_width(2048) == 11);
    CHECK(counter_width(2049) == 12);
}

TEST_CASE("gray quantizer splits the intensity range evenly") {
    Quantizer q{8, QuantizerMode::Gray};
    CHECK(q.quantize_gray(0) == 0);
    CHECK(q.quantize_gray(31) == 0);
    CHECK(q.quantize_gray(32) == 1);
    CHECK(q.quantize_gray(255) == 7);
    Quantizer q32{32, QuantizerMode::Gray};
    CHECK(q32.quantize_gray(255) == 31);
    CHECK(q32.quantize_gray(8) == 1);
}

TEST_CASE("rgb quantizer packs per-channel bits") {
    Quantizer q8{8, QuantizerMode::Rgb};
    CHECK(q8.quantize_rgb({255, 0, 0}) == 4);
    CHECK(q8.quantize_rgb({0, 255, 0}) == 2);
    CHECK(q8.quantize_rgb({0, 0, 255}) == 1);
    CHECK(q8.quantize_rgb({255, 255, 255}) == 7);
    Quantizer q16{16, QuantizerMode::Rgb};
    CHECK(q16.quantize_rgb({255, 255, 255}) == 15);
    CHECK(q16.quantize_rgb({192, 0, 0}) == 12);
    Quantizer q32{32, QuantizerMode::Rgb};
    CHECK(q32.quantize_rgb({255, 255, 255}) == 31);
    CHECK(q32.quantize_rgb({0, 64, 128}) == 3);
    Quantizer bad{24, QuantizerMode::Rgb};
    CHECK_THROWS_AS(bad.quantize_rgb({0, 0, 0}), ConfigError);
}

TEST_CASE("uniform frame fills exactly one bin with the position count") {
    Quantizer q{8, QuantizerMode::Gray};
    ImageFrame f;
    f.width = 20;
    f.height = 12;
    f.pixels.assign(size_t(f.width) * f.height, 200); // bin 6
    auto h = extract_csd(f, q);
    CHECK(h.bins[6] == num_positions(f.height, f.width));
    for (int c = 0; c < 8; ++c)
        if (c != 6) CHECK(h.bins[c] == 0);
}

TEST_CASE("sliding extraction matches the brute-force oracle") {
    std::mt19937 rng(20260824);
    for (int levels : {8, 16, 32})
        for (int i = 0; i < 6; ++i) {
            bool rgb = i % 2 == 0;
            Quantizer q{levels, rgb ? QuantizerMode::Rgb : QuantizerMode::Gray};
            auto f = random_frame(rng, 8 + int(rng() % 40), 8 + int(rng() % 40), rgb);
            auto fast = extract_csd(f, q);
            auto slow = brute_force_csd(f, q);
            CHECK(fast.bins == slow.bins);
        }
}

TEST_CASE("each bin is bounded by the number of positions") {
    std::mt19937 rng(7);
    Quantizer q{16, QuantizerMode::Gray};
    auto f = random_frame(rng, 33, 17, false);
    auto h = extract_csd(f, q);
    long np = num_positions(f.height, f.width);
    for (long b : h.bins) {
        CHECK(b >= 0);
        CHECK(b <= np);
    }
    CHECK(h.sum() >= np); // every position contributes to >= 1 bin
    CHECK(h.sum() <= np * q.levels);
}

TEST_CASE("manhattan distance is a metric on histograms") {
    ColorStructureHistogram a{{3, 0, 5}}, b{{1, 2, 5}}, c{{0, 0, 0}};
    CHECK(manhattan_distance(a, a) == 0);
    CHECK(manhattan_distance(a, b) == 4);
    CHECK(manhattan_distance(b, a) == 4);
    CHECK(manhattan_distance(a, c) == 8);
    CHECK(manhattan_distance(a, c) <= manhattan_distance(a, b) + manhattan_distance(b, c));
    ColorStructureHistogram other{{1, 2}};
    CHECK_THROWS_AS(manhattan_distance(a, other), DimensionMismatch);
}

TEST_CASE("cut detection on a red/blue sequence") {
    Quantizer q{8, QuantizerMode::Rgb};
    std::vector<ImageFrame> frames;
    for (int i = 0; i < 3; ++i) frames.push_back(solid_rgb(16, 16, {250, 5, 5}));
    for (int i = 0; i < 2; ++i) frames.push_back(solid_rgb(16, 16, {5, 5, 250}));
    long np = num_positions(16, 16);
    auto report = detect_cuts(frames, q, 0.5 * double(np));

    REQUIRE(report.distances.size() == 4);
    CHECK(report.distances[0] == 0);
    CHECK(report.distances[1] == 0);
    CHECK(report.distances[2] == 2 * np); // full swap between two bins
    CHECK(report.distances[3] == 0);
    CHECK(report.cuts == std::vector<size_t>{3});
    CHECK(report.key_frames == std::vector<size_t>{0, 3});
}

TEST_CASE("threshold comparison is strict") {
    Quantizer q{8, QuantizerMode::Rgb};
    std::vector<ImageFrame> frames{solid_rgb(16, 16, {250, 5, 5}),
                                   solid_rgb(16, 16, {5, 5, 250})};
    long d = 2 * num_positions(16, 16);
    CHECK(detect_cuts(frames, q, double(d)).cuts.empty());     // d > d is false
    CHECK(detect_cuts(frames, q, double(d) - 1).cuts.size() == 1);
}

TEST_CASE("cut detection input validation") {
    Quantizer q{8, QuantizerMode::Gray};
    std::mt19937 rng(2);
    std::vector<ImageFrame> one{random_frame(rng, 16, 16, false)};
    CHECK_THROWS_AS(detect_cuts(one, q, 0), FrameTooSmall);
    std::vector<ImageFrame> mixed{random_frame(rng, 16, 16, false),
                                  random_frame(rng, 16, 8, false)};
    CHECK_THROWS_AS(detect_cuts(mixed, q, 0), DimensionMismatch);
}

TEST_CASE("pnm files round-trip through write and read") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "prman_pnm_test";
    fs::create_directories(dir);
    std::mt19937 rng(11);

    auto gray = random_frame(rng, 19, 13, false);
    auto color = random_frame(rng, 10, 9, true);
    image_io::write_pnm((dir / "b_color.ppm").string(), color);
    image_io::write_pnm((dir / "a_gray.pgm").string(), gray);

    auto gray2 = image_io::read_pnm((dir / "a_gray.pgm").string());
    CHECK(gray2.width == 19);
    CHECK(gray2.height == 13);
    CHECK_FALSE(gray2.rgb);
    CHECK(gray2.pixels == gray.pixels);
    auto color2 = image_io::read_pnm((dir / "b_color.ppm").string());
    CHECK(color2.rgb);
    CHECK(color2.pixels == color.pixels);

    std::vector<std::string> names;
    auto frames = image_io::read_frame_directory(dir.string(), &names);
    REQUIRE(frames.size() == 2);
    CHECK(names == std::vector<std::string>{"a_gray.pgm", "b_color.ppm"});
    CHECK_FALSE(frames[0].rgb);
    CHECK(frames[1].rgb);

    std::ofstream(dir / "bad.pgm") << "P3\n1 1\n255\n0";
    CHECK_THROWS_AS(image_io::read_pnm((dir / "bad.pgm").string()), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("pnm header comments are skipped") {
    namespace fs = std::filesystem;
    auto path = (fs::temp_directory_path() / "prman_comment.pgm").string();
    std::ofstream out(path, std::ios::binary);
    out << "P5\n# a comment line\n2 1\n255\n";
    out.put(char(10));
    out.put(char(250));
    out.close();
    auto f = image_io::read_pnm(path);
    CHECK(f.width == 2);
    CHECK(f.pixels == std::vector<uint8_t>{10, 250});
    fs::remove(path);
}
