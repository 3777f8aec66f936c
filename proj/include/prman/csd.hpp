#ifndef PRMAN_CSD_HPP
#define PRMAN_CSD_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "prman/errors.hpp"

// Functional model of the CSD-based cut detector: quantization, 8x8
// structuring-element histogram, L1 distance, thresholded cut detection and
// key-frame selection.

namespace prman::csd {

inline constexpr int kStructuringWidth = 8;

struct Rgb {
    uint8_t r = 0, g = 0, b = 0;
};

// Row-major 8-bit frame, gray or RGB.
struct ImageFrame {
    int width = 0;
    int height = 0;
    bool rgb = false;
    std::vector<uint8_t> pixels; // 1 or 3 samples per pixel

    uint8_t gray_at(int x, int y) const { return pixels[size_t(y) * width + x]; }
    Rgb rgb_at(int x, int y) const {
        size_t i = (size_t(y) * width + x) * 3;
        return {pixels[i], pixels[i + 1], pixels[i + 2]};
    }
};

// Number of structuring-element positions for a frame (stride 1 both axes).
inline long num_positions(int height, int width, int sw = kStructuringWidth) {
    if (height < sw || width < sw)
        throw FrameTooSmall(std::to_string(width) + "x" + std::to_string(height) +
                            " below " + std::to_string(sw) + "x" + std::to_string(sw));
    return long(height - sw + 1) * long(width - sw + 1);
}

// Smallest counter width C with 2^C >= np.
inline int counter_width(long np) {
    int c = 0;
    while ((1L << c) < np) ++c;
    return c;
}

enum class QuantizerMode { Gray, Rgb };

// Maps 8-bit samples to [0, n) bins. RGB splits the log2(n) bit budget
// R-first: n=8 R1G1B1, n=16 R2G1B1, n=32 R2G2B1.
struct Quantizer {
    int levels = 8; // 8, 16 or 32
    QuantizerMode mode = QuantizerMode::Gray;

    int quantize_gray(uint8_t v) const { return int(v) * levels / 256; }

    int quantize_rgb(Rgb p) const {
        switch (levels) {
        case 8: return (p.r >> 7) << 2 | (p.g >> 7) << 1 | (p.b >> 7);
        case 16: return (p.r >> 6) << 2 | (p.g >> 7) << 1 | (p.b >> 7);
        case 32: return (p.r >> 6) << 3 | (p.g >> 6) << 1 | (p.b >> 7);
        default: throw ConfigError("quantization levels must be 8, 16 or 32");
        }
    }

    int bin_of(const ImageFrame& f, int x, int y) const {
        return mode == QuantizerMode::Rgb ? quantize_rgb(f.rgb_at(x, y))
                                          : quantize_gray(f.gray_at(x, y));
    }
};

// n-bin histogram; each bin counts the window positions containing the color.
struct ColorStructureHistogram {
    std::vector<long> bins;

    long sum() const {
        long s = 0;
        for (long b : bins) s += b;
        return s;
    }
};

// Sliding-window extraction keeping per-color pixel counts for the current
// window: a bin is bumped once per position where its count is nonzero.
inline ColorStructureHistogram extract_csd(const ImageFrame& frame, const Quantizer& q) {
    num_positions(frame.height, frame.width); // validates size
    const int sw = kStructuringWidth;
    std::vector<int> bin_map(size_t(frame.width) * frame.height);
    for (int y = 0; y < frame.height; ++y)
        for (int x = 0; x < frame.width; ++x)
            bin_map[size_t(y) * frame.width + x] = q.bin_of(frame, x, y);

    ColorStructureHistogram h;
    h.bins.assign(q.levels, 0);
    std::vector<int> counts(q.levels);
    for (int wy = 0; wy + sw <= frame.height; ++wy) {
        std::fill(counts.begin(), counts.end(), 0);
        // Seed the leftmost window of this row band, then slide right.
        for (int y = wy; y < wy + sw; ++y)
            for (int x = 0; x < sw; ++x)
                ++counts[bin_map[size_t(y) * frame.width + x]];
        for (int wx = 0;; ++wx) {
            for (int c = 0; c < q.levels; ++c)
                if (counts[c] > 0) ++h.bins[c];
            if (wx + sw >= frame.width) break;
            for (int y = wy; y < wy + sw; ++y) {
                --counts[bin_map[size_t(y) * frame.width + wx]];
                ++counts[bin_map[size_t(y) * frame.width + wx + sw]];
            }
        }
    }
    return h;
}

// Eq. 1: L1 distance between two histograms of equal bin count.
inline long manhattan_distance(const ColorStructureHistogram& a,
                               const ColorStructureHistogram& b) {
    if (a.bins.size() != b.bins.size())
        throw DimensionMismatch(std::to_string(a.bins.size()) + " vs " +
                                std::to_string(b.bins.size()) + " bins");
    long d = 0;
    for (size_t i = 0; i < a.bins.size(); ++i)
        d += a.bins[i] > b.bins[i] ? a.bins[i] - b.bins[i] : b.bins[i] - a.bins[i];
    return d;
}

struct CutReport {
    std::vector<long> distances;  // distances[i] = d(frame i+1, frame i)
    std::vector<size_t> cuts;     // frame indices where d > threshold
    std::vector<size_t> key_frames; // first frame of each shot
};

// Cut at index i iff d(F_i, F_{i-1}) > threshold (strict).
inline CutReport detect_cuts(const std::vector<ImageFrame>& frames, const Quantizer& q,
                             double threshold) {
    if (frames.size() < 2) throw FrameTooSmall("need at least 2 frames");
    for (const auto& f : frames)
        if (f.width != frames[0].width || f.height != frames[0].height ||
            f.rgb != frames[0].rgb)
            throw DimensionMismatch("frame dimensions differ across sequence");

    CutReport report;
    report.key_frames.push_back(0);
    ColorStructureHistogram prev = extract_csd(frames[0], q);
    for (size_t i = 1; i < frames.size(); ++i) {
        ColorStructureHistogram cur = extract_csd(frames[i], q);
        long d = manhattan_distance(cur, prev);
        report.distances.push_back(d);
        if (double(d) > threshold) {
            report.cuts.push_back(i);
            report.key_frames.push_back(i);
        }
        prev = std::move(cur);
    }
    return report;
}

} // namespace prman::csd

#endif
