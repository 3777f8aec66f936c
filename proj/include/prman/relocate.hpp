#ifndef PRMAN_RELOCATE_HPP
#define PRMAN_RELOCATE_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "prman/bitstream.hpp"
#include "prman/errors.hpp"
#include "prman/fabric.hpp"

// Compatibility checking (resource signature, pin anchors, route anchors) and
// the FAR-rewriting relocation transform.

namespace prman::relocate {

enum class PinDirection : uint8_t { In, Out };

// Partition pin backed by one LUT; rel_col is the offset from the span's
// col_start once normalized.
struct PinAnchor {
    std::string signal_name;
    int rel_col = 0;
    int bel_index = 0;
    PinDirection direction = PinDirection::In;

    friend bool operator==(const PinAnchor&, const PinAnchor&) = default;
};

struct RouteSegment {
    int dcol = 0; // signed offset from span origin
    int drow = 0;
    int wire_id = 0;

    friend bool operator==(const RouteSegment&, const RouteSegment&) = default;
};

// Crossing-wire route of an interface signal, origin-relative.
struct RouteAnchor {
    std::string signal_name;
    std::vector<RouteSegment> segments;

    friend bool operator==(const RouteAnchor&, const RouteAnchor&) = default;
};

struct InterfaceMap {
    std::vector<PinAnchor> pins;
    std::vector<RouteAnchor> routes;

    friend bool operator==(const InterfaceMap&, const InterfaceMap&) = default;
};

namespace detail {

// Classifies the pin columns: inputs whose columns all sit inside the span's
// absolute window are absolute; inputs already in [0, col_count) that do not
// fit the absolute window are relative and pass through unchanged.
inline bool pins_absolute(const std::vector<PinAnchor>& pins,
                          const fabric::RegionSpan& origin) {
    if (origin.col_start == 0) return false; // conversion is the identity
    bool all_absolute = std::all_of(pins.begin(), pins.end(), [&](const PinAnchor& p) {
        return p.rel_col >= origin.col_start &&
               p.rel_col < origin.col_start + origin.col_count;
    });
    bool all_relative = std::all_of(pins.begin(), pins.end(), [&](const PinAnchor& p) {
        return p.rel_col >= 0 && p.rel_col < origin.col_count;
    });
    return all_absolute || !all_relative;
}

} // namespace detail

// Converts absolute column coordinates to offsets from the span origin.
// Already-relative input (every pin column inside [0, col_count)) is passed
// through unchanged, so the conversion is idempotent. Route segments may
// reach one column/row beyond the span (the crossing into the static side).
inline InterfaceMap normalize_anchors(std::vector<PinAnchor> pins,
                                      std::vector<RouteAnchor> routes,
                                      const fabric::RegionSpan& origin) {
    if (detail::pins_absolute(pins, origin)) {
        for (auto& p : pins) p.rel_col -= origin.col_start;
        for (auto& r : routes)
            for (auto& s : r.segments) {
                s.dcol -= origin.col_start;
                s.drow -= origin.row;
            }
    }
    for (const auto& p : pins)
        if (p.rel_col < 0 || p.rel_col >= origin.col_count)
            throw AnchorOutsideSpan("pin '" + p.signal_name + "' at relative column " +
                                    std::to_string(p.rel_col));
    for (const auto& r : routes)
        for (const auto& s : r.segments)
            if (s.dcol < -1 || s.dcol > origin.col_count || s.drow < -1 || s.drow > 1)
                throw AnchorOutsideSpan("route '" + r.signal_name + "' segment at (" +
                                        std::to_string(s.dcol) + ", " +
                                        std::to_string(s.drow) + ")");
    // Every routed signal needs a pin anchor.
    for (const auto& r : routes)
        if (std::none_of(pins.begin(), pins.end(),
                         [&](const PinAnchor& p) { return p.signal_name == r.signal_name; }))
            throw AnchorOutsideSpan("route '" + r.signal_name + "' has no pin anchor");
    return InterfaceMap{std::move(pins), std::move(routes)};
}

enum class ViolationKind {
    ColumnCountMismatch,
    ColumnSignatureMismatch,
    OverlappingSpans,
    PinOutsideTarget,
    BelUnavailable,
};

inline const char* to_string(ViolationKind k) {
    switch (k) {
    case ViolationKind::ColumnCountMismatch: return "ColumnCountMismatch";
    case ViolationKind::ColumnSignatureMismatch: return "ColumnSignatureMismatch";
    case ViolationKind::OverlappingSpans: return "OverlappingSpans";
    case ViolationKind::PinOutsideTarget: return "PinOutsideTarget";
    case ViolationKind::BelUnavailable: return "BelUnavailable";
    }
    return "?";
}

struct Violation {
    ViolationKind kind;
    std::string detail;
};

inline std::vector<Violation> check_compatibility(const fabric::DeviceGeometry& geom,
                                                  const fabric::RegionSpan& source,
                                                  const fabric::RegionSpan& target,
                                                  const InterfaceMap& iface) {
    geom.validate_span(source);
    geom.validate_span(target);
    std::vector<Violation> out;

    if (source.col_count != target.col_count) {
        out.push_back({ViolationKind::ColumnCountMismatch,
                       std::to_string(source.col_count) + " vs " +
                           std::to_string(target.col_count) + " columns"});
    } else {
        auto sig_a = column_signature(geom, source);
        auto sig_b = column_signature(geom, target);
        for (size_t i = 0; i < sig_a.size(); ++i)
            if (sig_a[i] != sig_b[i]) {
                out.push_back({ViolationKind::ColumnSignatureMismatch,
                               "at relative column " + std::to_string(i) + ": " +
                                   fabric::to_string(sig_a[i]) + " vs " +
                                   fabric::to_string(sig_b[i])});
                break;
            }
    }

    // Identity relocation is allowed; any other overlap is rejected.
    if (source != target &&
        source.half == target.half && source.row == target.row &&
        source.col_start < target.col_start + target.col_count &&
        target.col_start < source.col_start + source.col_count)
        out.push_back({ViolationKind::OverlappingSpans,
                       "target columns [" + std::to_string(target.col_start) + ", " +
                           std::to_string(target.col_start + target.col_count) +
                           ") intersect source"});

    for (const auto& p : iface.pins) {
        if (p.rel_col < 0 || p.rel_col >= target.col_count) {
            out.push_back({ViolationKind::PinOutsideTarget,
                           "pin '" + p.signal_name + "' relative column " +
                               std::to_string(p.rel_col)});
            continue;
        }
        int major = target.col_start + p.rel_col;
        if (major < geom.column_count()) {
            int cap = fabric::bel_capacity(geom.column_type(major));
            if (p.bel_index < 0 || p.bel_index >= cap)
                out.push_back({ViolationKind::BelUnavailable,
                               "pin '" + p.signal_name + "' BEL " +
                                   std::to_string(p.bel_index) + " in " +
                                   fabric::to_string(geom.column_type(major)) +
                                   " column " + std::to_string(major)});
        }
    }
    return out;
}

inline std::string describe(const std::vector<Violation>& vs) {
    std::string s;
    for (const auto& v : vs) {
        if (!s.empty()) s += "; ";
        s += to_string(v.kind);
        s += " (" + v.detail + ")";
    }
    return s;
}

// Rewrites every FAR word for the target span (major shifted, row/half
// replaced, minor and block type kept), leaves frame payloads byte-identical
// and recomputes the CRC.
inline bitstream::PartialBitstream relocate_bitstream(const bitstream::PartialBitstream& bs,
                                                      const fabric::DeviceGeometry& geom,
                                                      const fabric::RegionSpan& target,
                                                      const InterfaceMap& iface) {
    // Source invariants must hold before rewriting.
    try {
        bitstream::parse(bitstream::serialize(bs));
    } catch (const Error& e) {
        throw MalformedSource(e.what());
    }
    auto violations = check_compatibility(geom, bs.span, target, iface);
    if (!violations.empty()) throw IncompatibleTarget(describe(violations));

    int col_delta = target.col_start - bs.span.col_start;
    bitstream::PartialBitstream out = bs;
    out.span = target;
    for (auto& p : out.body) {
        if (auto* far = std::get_if<bitstream::WriteFar>(&p)) {
            fabric::FrameAddress fa = fabric::unpack_far(far->word);
            fa.major = uint8_t(int(fa.major) + col_delta);
            fa.row = uint8_t(target.row);
            fa.half = target.half;
            far->word = fabric::pack_far(fa);
        } else if (auto* crc = std::get_if<bitstream::WriteCrc>(&p)) {
            crc->word = bitstream::compute_crc(out.body);
        }
    }
    return out;
}

} // namespace prman::relocate

#endif
