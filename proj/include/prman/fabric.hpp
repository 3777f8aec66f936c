#ifndef PRMAN_FABRIC_HPP
#define PRMAN_FABRIC_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "prman/errors.hpp"

// Virtual device geometry and frame addressing: column layout by resource
// type, FAR pack/unpack, frame enumeration and column signatures.

namespace prman::fabric {

enum class ResourceType : uint8_t { CLB, DSP, BRAM, IOB, GCLK };

// Minor (configuration) frames per column of each resource type.
inline constexpr int minor_frame_count(ResourceType t) {
    switch (t) {
    case ResourceType::CLB: return 36;
    case ResourceType::DSP: return 26;
    case ResourceType::BRAM: return 30;
    case ResourceType::IOB: return 54;
    case ResourceType::GCLK: return 4;
    }
    return 0;
}

// LUT positions usable as partition-pin BELs in one column.
inline constexpr int bel_capacity(ResourceType t) {
    return t == ResourceType::CLB ? 160 : 0;
}

inline const char* to_string(ResourceType t) {
    switch (t) {
    case ResourceType::CLB: return "CLB";
    case ResourceType::DSP: return "DSP";
    case ResourceType::BRAM: return "BRAM";
    case ResourceType::IOB: return "IOB";
    case ResourceType::GCLK: return "GCLK";
    }
    return "?";
}

inline ResourceType resource_type_from_string(const std::string& s) {
    if (s == "CLB") return ResourceType::CLB;
    if (s == "DSP") return ResourceType::DSP;
    if (s == "BRAM") return ResourceType::BRAM;
    if (s == "IOB") return ResourceType::IOB;
    if (s == "GCLK") return ResourceType::GCLK;
    throw ConfigError("unknown resource type '" + s + "'");
}

enum class Half : uint8_t { Top = 0, Bottom = 1 };

// Decoded frame address. block_type 0 is logic configuration; 1-7 reserved.
struct FrameAddress {
    uint8_t block_type = 0; // 3 bits
    Half half = Half::Top;  // 1 bit
    uint8_t row = 0;        // 5 bits
    uint8_t major = 0;      // 8 bits, global column index within the row
    uint8_t minor = 0;      // 7 bits, frame index within the column

    friend bool operator==(const FrameAddress&, const FrameAddress&) = default;
};

// Packed layout: block_type<<21 | half<<20 | row<<15 | major<<7 | minor.
// Bits 31..24 are always zero.
inline uint32_t pack_far(const FrameAddress& fa) {
    if (fa.block_type > 0x7) throw FieldOverflow("block_type > 3 bits");
    if (fa.row > 0x1F) throw FieldOverflow("row > 5 bits");
    if (fa.minor > 0x7F) throw FieldOverflow("minor > 7 bits");
    return uint32_t(fa.block_type) << 21 | uint32_t(fa.half) << 20 |
           uint32_t(fa.row) << 15 | uint32_t(fa.major) << 7 | uint32_t(fa.minor);
}

inline FrameAddress unpack_far(uint32_t word) {
    if (word & 0xFF000000u)
        throw ReservedBitsSet("bits 31..24 nonzero in FAR word");
    FrameAddress fa;
    fa.block_type = (word >> 21) & 0x7;
    fa.half = static_cast<Half>((word >> 20) & 0x1);
    fa.row = (word >> 15) & 0x1F;
    fa.major = (word >> 7) & 0xFF;
    fa.minor = word & 0x7F;
    return fa;
}

// Rectangular footprint of a region/partition: contiguous columns in one row.
struct RegionSpan {
    Half half = Half::Top;
    int row = 0;
    int col_start = 0;
    int col_count = 0;

    friend bool operator==(const RegionSpan&, const RegionSpan&) = default;
};

inline constexpr int kFrameWords = 41; // 32-bit words per configuration frame

// Homogeneous device: every row carries the same column layout.
class DeviceGeometry {
public:
    DeviceGeometry(int rows_top, int rows_bottom, std::vector<ResourceType> columns)
        : rows_top_(rows_top), rows_bottom_(rows_bottom), columns_(std::move(columns)) {
        if (rows_top_ < 1) throw ConfigError("rows_top must be >= 1");
        if (rows_bottom_ < 0) throw ConfigError("rows_bottom must be >= 0");
        if (columns_.empty()) throw ConfigError("column list empty");
    }

    int rows_top() const { return rows_top_; }
    int rows_bottom() const { return rows_bottom_; }
    const std::vector<ResourceType>& columns() const { return columns_; }
    int column_count() const { return static_cast<int>(columns_.size()); }
    ResourceType column_type(int major) const { return columns_.at(major); }

    int rows(Half half) const {
        return half == Half::Top ? rows_top_ : rows_bottom_;
    }

    void validate_span(const RegionSpan& span) const {
        if (span.col_count < 1)
            throw SpanOutOfBounds("zero-width span");
        if (span.col_start < 0 ||
            span.col_start + span.col_count > column_count())
            throw SpanOutOfBounds("columns [" + std::to_string(span.col_start) +
                                  ", " + std::to_string(span.col_start + span.col_count) +
                                  ") outside device");
        if (span.row < 0 || span.row >= rows(span.half))
            throw SpanOutOfBounds("row " + std::to_string(span.row) +
                                  " outside " +
                                  (span.half == Half::Top ? "top" : "bottom") +
                                  " half");
    }

private:
    int rows_top_;
    int rows_bottom_;
    std::vector<ResourceType> columns_;
};

// Left-to-right resource-type sequence of a span's columns.
inline std::vector<ResourceType> column_signature(const DeviceGeometry& geom,
                                                  const RegionSpan& span) {
    geom.validate_span(span);
    auto first = geom.columns().begin() + span.col_start;
    return {first, first + span.col_count};
}

// Per column left-to-right, minors ascending; all addresses carry the span's
// half/row. Block type fixed at 0 (logic configuration).
inline std::vector<FrameAddress> enumerate_frames(const DeviceGeometry& geom,
                                                  const RegionSpan& span) {
    geom.validate_span(span);
    std::vector<FrameAddress> out;
    for (int c = 0; c < span.col_count; ++c) {
        int major = span.col_start + c;
        int minors = minor_frame_count(geom.column_type(major));
        for (int m = 0; m < minors; ++m) {
            FrameAddress fa;
            fa.half = span.half;
            fa.row = static_cast<uint8_t>(span.row);
            fa.major = static_cast<uint8_t>(major);
            fa.minor = static_cast<uint8_t>(m);
            out.push_back(fa);
        }
    }
    return out;
}

inline int frame_count(const DeviceGeometry& geom, const RegionSpan& span) {
    geom.validate_span(span);
    int n = 0;
    for (int c = 0; c < span.col_count; ++c)
        n += minor_frame_count(geom.column_type(span.col_start + c));
    return n;
}

} // namespace prman::fabric

#endif
