#ifndef PRMAN_IMAGE_IO_HPP
#define PRMAN_IMAGE_IO_HPP

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "prman/csd.hpp"
#include "prman/errors.hpp"

// Binary PGM (P5) / PPM (P6) readers and writers, 8 bits per sample.

namespace prman::image_io {

namespace detail {

inline int read_pnm_int(std::istream& in) {
    // Skips whitespace and '#' comment lines.
    int c = in.get();
    while (c == '#' || std::isspace(c)) {
        if (c == '#')
            while (c != '\n' && c != EOF) c = in.get();
        c = in.get();
    }
    int v = 0;
    bool any = false;
    while (c >= '0' && c <= '9') {
        v = v * 10 + (c - '0');
        any = true;
        c = in.get();
    }
    if (!any) throw ConfigError("malformed PNM header");
    return v;
}

} // namespace detail

inline csd::ImageFrame read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    char magic[2];
    in.read(magic, 2);
    bool rgb;
    if (magic[0] == 'P' && magic[1] == '5') rgb = false;
    else if (magic[0] == 'P' && magic[1] == '6') rgb = true;
    else throw ConfigError(path + ": not a binary PGM/PPM file");

    csd::ImageFrame f;
    f.rgb = rgb;
    f.width = detail::read_pnm_int(in);
    f.height = detail::read_pnm_int(in);
    int maxval = detail::read_pnm_int(in);
    if (maxval != 255) throw ConfigError(path + ": only maxval 255 supported");
    size_t n = size_t(f.width) * f.height * (rgb ? 3 : 1);
    f.pixels.resize(n);
    in.read(reinterpret_cast<char*>(f.pixels.data()), std::streamsize(n));
    if (size_t(in.gcount()) != n) throw ConfigError(path + ": truncated pixel data");
    return f;
}

inline void write_pnm(const std::string& path, const csd::ImageFrame& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << (f.rgb ? "P6" : "P5") << "\n" << f.width << " " << f.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(f.pixels.data()),
              std::streamsize(f.pixels.size()));
}

// Frames of a directory in lexicographic filename order.
inline std::vector<csd::ImageFrame> read_frame_directory(const std::string& dir,
                                                         std::vector<std::string>* names = nullptr) {
    std::vector<std::string> paths;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        auto ext = e.path().extension().string();
        if (e.is_regular_file() && (ext == ".pgm" || ext == ".ppm"))
            paths.push_back(e.path().string());
    }
    std::sort(paths.begin(), paths.end());
    std::vector<csd::ImageFrame> frames;
    for (const auto& p : paths) {
        frames.push_back(read_pnm(p));
        if (names) names->push_back(std::filesystem::path(p).filename().string());
    }
    return frames;
}

} // namespace prman::image_io

#endif
