#ifndef PRMAN_BITSTREAM_HPP
#define PRMAN_BITSTREAM_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "prman/errors.hpp"
#include "prman/fabric.hpp"

// Partial-bitstream wire format: synthesis (bitgen), serialization, parsing,
// CRC and the size model.
//
// Word layout (all words big-endian on the wire):
//   header    8 dummy words 0xFFFFFFFF, then sync 0xAA995566
//   type-1    [31:29]=1 [28:27]=opcode(write=2) [26:13]=register [10:0]=count
//   type-2    [31:29]=2 [28:27]=opcode [26:0]=count
//             (used after a type-1 with count 0 when count > 2047)
//   registers CRC=0x00 FAR=0x01 FDRI=0x02 CMD=0x04
//   desync    write CMD, one word 0x0000000D

namespace prman::bitstream {

inline constexpr uint32_t kDummyWord = 0xFFFFFFFFu;
inline constexpr uint32_t kSyncWord = 0xAA995566u;
inline constexpr uint32_t kDesyncCommand = 0x0000000Du;
inline constexpr int kHeaderWords = 9; // 8 dummy + sync

enum class Register : uint16_t { CRC = 0x00, FAR = 0x01, FDRI = 0x02, CMD = 0x04 };

struct WriteFar {
    uint32_t word = 0;
    friend bool operator==(const WriteFar&, const WriteFar&) = default;
};

struct WriteFdri {
    std::vector<uint32_t> words; // multiple of 41
    friend bool operator==(const WriteFdri&, const WriteFdri&) = default;
};

struct WriteCrc {
    uint32_t word = 0;
    friend bool operator==(const WriteCrc&, const WriteCrc&) = default;
};

struct Desync {
    friend bool operator==(const Desync&, const Desync&) = default;
};

using Packet = std::variant<WriteFar, WriteFdri, WriteCrc, Desync>;

struct PartialBitstream {
    fabric::RegionSpan span; // declared source span
    std::vector<Packet> body;

    friend bool operator==(const PartialBitstream&, const PartialBitstream&) = default;
};

// CRC-32, polynomial 0x04C11DB7 reflected, init/final-xor 0xFFFFFFFF.
inline uint32_t crc32(const uint8_t* data, size_t len, uint32_t crc = 0) {
    static const auto table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int k = 0; k < 8; ++k)
                c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    crc = ~crc;
    for (size_t i = 0; i < len; ++i)
        crc = table[(crc ^ data[i]) & 0xFF] ^ (crc >> 8);
    return ~crc;
}

inline uint32_t crc32(const std::vector<uint8_t>& bytes) {
    return crc32(bytes.data(), bytes.size());
}

namespace detail {

inline void put_word(std::vector<uint8_t>& out, uint32_t w) {
    out.push_back(uint8_t(w >> 24));
    out.push_back(uint8_t(w >> 16));
    out.push_back(uint8_t(w >> 8));
    out.push_back(uint8_t(w));
}

inline uint32_t header_word1(Register reg, uint32_t count) {
    return 1u << 29 | 2u << 27 | (uint32_t(reg) & 0x3FFF) << 13 | (count & 0x7FF);
}

inline uint32_t header_word2(uint32_t count) {
    return 2u << 29 | 2u << 27 | (count & 0x07FFFFFF);
}

inline void put_packet(std::vector<uint8_t>& out, Register reg,
                       const uint32_t* words, size_t count) {
    if (count <= 2047) {
        put_word(out, header_word1(reg, uint32_t(count)));
    } else {
        put_word(out, header_word1(reg, 0));
        put_word(out, header_word2(uint32_t(count)));
    }
    for (size_t i = 0; i < count; ++i) put_word(out, words[i]);
}

inline void serialize_packet(std::vector<uint8_t>& out, const Packet& p) {
    if (auto* far = std::get_if<WriteFar>(&p)) {
        put_packet(out, Register::FAR, &far->word, 1);
    } else if (auto* fdri = std::get_if<WriteFdri>(&p)) {
        put_packet(out, Register::FDRI, fdri->words.data(), fdri->words.size());
    } else if (auto* crc = std::get_if<WriteCrc>(&p)) {
        put_packet(out, Register::CRC, &crc->word, 1);
    } else {
        uint32_t cmd = kDesyncCommand;
        put_packet(out, Register::CMD, &cmd, 1);
    }
}

} // namespace detail

// CRC over the serialized bytes of the body packets preceding the CRC packet.
inline uint32_t compute_crc(const std::vector<Packet>& body) {
    std::vector<uint8_t> bytes;
    for (const auto& p : body) {
        if (std::holds_alternative<WriteCrc>(p)) break;
        detail::serialize_packet(bytes, p);
    }
    return crc32(bytes);
}

inline std::vector<uint8_t> serialize(const PartialBitstream& bs) {
    std::vector<uint8_t> out;
    for (int i = 0; i < 8; ++i) detail::put_word(out, kDummyWord);
    detail::put_word(out, kSyncWord);
    for (const auto& p : bs.body) detail::serialize_packet(out, p);
    return out;
}

namespace detail {

class WordReader {
public:
    WordReader(const uint8_t* data, size_t len) : data_(data), len_(len) {}

    uint32_t next() {
        if (pos_ + 4 > len_)
            throw TruncatedStream("at byte offset " + std::to_string(pos_));
        uint32_t w = uint32_t(data_[pos_]) << 24 | uint32_t(data_[pos_ + 1]) << 16 |
                     uint32_t(data_[pos_ + 2]) << 8 | uint32_t(data_[pos_ + 3]);
        pos_ += 4;
        return w;
    }

    bool at_end() const { return pos_ >= len_; }

private:
    const uint8_t* data_;
    size_t len_;
    size_t pos_ = 0;
};

} // namespace detail

// Inverse of serialize. Recovers the declared span from the FAR sequence and
// validates sync, packet grammar, frame multiples and the CRC word.
inline PartialBitstream parse(const std::vector<uint8_t>& bytes) {
    detail::WordReader rd(bytes.data(), bytes.size());
    for (int i = 0; i < 8; ++i)
        if (rd.next() != kDummyWord) throw MissingSync("dummy word " + std::to_string(i));
    if (rd.next() != kSyncWord) throw MissingSync("sync word mismatch");

    PartialBitstream bs;
    bool desynced = false;
    while (!desynced) {
        if (rd.at_end())
            throw InvalidBitstream("stream ends before CRC and desync");
        uint32_t hdr = rd.next();
        uint32_t type = hdr >> 29;
        uint32_t opcode = (hdr >> 27) & 0x3;
        if (type != 1 || opcode != 2)
            throw InvalidBitstream("unexpected packet header");
        uint32_t regcode = (hdr >> 13) & 0x3FFF;
        uint32_t count = hdr & 0x7FF;
        if (count == 0) {
            uint32_t hdr2 = rd.next();
            if (hdr2 >> 29 != 2)
                throw BadWordCount("type-2 header expected after zero count");
            count = hdr2 & 0x07FFFFFF;
            if (count <= 2047)
                throw BadWordCount("type-2 header with short count");
        }
        switch (regcode) {
        case uint32_t(Register::FAR):
            if (count != 1) throw BadWordCount("FAR write must be 1 word");
            bs.body.emplace_back(WriteFar{rd.next()});
            break;
        case uint32_t(Register::FDRI): {
            if (count % fabric::kFrameWords != 0)
                throw BadWordCount("FDRI payload not a multiple of 41 words");
            WriteFdri fdri;
            fdri.words.reserve(count);
            for (uint32_t i = 0; i < count; ++i) fdri.words.push_back(rd.next());
            bs.body.emplace_back(std::move(fdri));
            break;
        }
        case uint32_t(Register::CRC):
            if (count != 1) throw BadWordCount("CRC write must be 1 word");
            bs.body.emplace_back(WriteCrc{rd.next()});
            break;
        case uint32_t(Register::CMD): {
            if (count != 1) throw BadWordCount("CMD write must be 1 word");
            uint32_t cmd = rd.next();
            if (cmd != kDesyncCommand)
                throw InvalidBitstream("unknown command word");
            bs.body.emplace_back(Desync{});
            desynced = true;
            break;
        }
        default:
            throw UnknownRegister("register code 0x" + std::to_string(regcode));
        }
    }
    if (!rd.at_end()) throw InvalidBitstream("trailing bytes after desync");

    // Structural invariants.
    size_t n = bs.body.size();
    if (n < 2 || !std::holds_alternative<WriteCrc>(bs.body[n - 2]))
        throw InvalidBitstream("CRC packet must be last before desync");
    uint32_t stored = std::get<WriteCrc>(bs.body[n - 2]).word;
    for (size_t i = 0; i + 2 < n; ++i) {
        if (std::holds_alternative<WriteCrc>(bs.body[i]))
            throw InvalidBitstream("multiple CRC packets");
        if (std::holds_alternative<WriteFar>(bs.body[i]) &&
            !std::holds_alternative<WriteFdri>(bs.body[i + 1]))
            throw InvalidBitstream("FAR write not followed by FDRI write");
        if (std::holds_alternative<WriteFdri>(bs.body[i]) &&
            (i == 0 || !std::holds_alternative<WriteFar>(bs.body[i - 1])))
            throw InvalidBitstream("FDRI write without preceding FAR write");
    }
    uint32_t computed = compute_crc(bs.body);
    if (computed != stored) throw CrcMismatch(computed, stored);

    // Recover the declared span: one FAR per column, contiguous ascending
    // majors, identical half/row, minor 0.
    std::vector<fabric::FrameAddress> fars;
    for (const auto& p : bs.body)
        if (auto* far = std::get_if<WriteFar>(&p))
            fars.push_back(fabric::unpack_far(far->word));
    if (fars.empty()) throw InvalidBitstream("no FAR writes");
    for (size_t i = 0; i < fars.size(); ++i) {
        if (fars[i].minor != 0)
            throw InvalidBitstream("column FAR not at minor 0");
        if (fars[i].half != fars[0].half || fars[i].row != fars[0].row)
            throw InvalidBitstream("FARs span multiple rows");
        if (fars[i].major != fars[0].major + i)
            throw InvalidBitstream("FAR majors not contiguous ascending");
    }
    bs.span.half = fars[0].half;
    bs.span.row = fars[0].row;
    bs.span.col_start = fars[0].major;
    bs.span.col_count = static_cast<int>(fars.size());
    return bs;
}

// Deterministic, location-tagged frame payload: each word is a splitmix64
// digest of (seed, packed FAR of the frame, word index).
inline uint32_t payload_word(uint32_t seed, uint32_t far_word, int word_index) {
    uint64_t x = (uint64_t(far_word) << 32 | seed) + uint64_t(word_index) * 0x9E3779B97F4A7C15ull;
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return uint32_t((x ^ (x >> 31)) >> 16);
}

// One (FAR, FDRI) pair per column: FAR at the column's minor 0, FDRI carrying
// all the column's frames; terminated by CRC + desync.
inline PartialBitstream bitgen(const fabric::DeviceGeometry& geom,
                               const fabric::RegionSpan& span, uint32_t payload_seed) {
    geom.validate_span(span);
    PartialBitstream bs;
    bs.span = span;
    for (int c = 0; c < span.col_count; ++c) {
        int major = span.col_start + c;
        fabric::FrameAddress col_fa{0, span.half, uint8_t(span.row), uint8_t(major), 0};
        bs.body.emplace_back(WriteFar{fabric::pack_far(col_fa)});
        WriteFdri fdri;
        int minors = fabric::minor_frame_count(geom.column_type(major));
        fdri.words.reserve(size_t(minors) * fabric::kFrameWords);
        for (int m = 0; m < minors; ++m) {
            fabric::FrameAddress fa = col_fa;
            fa.minor = uint8_t(m);
            uint32_t fw = fabric::pack_far(fa);
            for (int i = 0; i < fabric::kFrameWords; ++i)
                fdri.words.push_back(payload_word(payload_seed, fw, i));
        }
        bs.body.emplace_back(std::move(fdri));
    }
    bs.body.emplace_back(WriteCrc{compute_crc(bs.body)});
    bs.body.emplace_back(Desync{});
    return bs;
}

inline int total_frames(const PartialBitstream& bs) {
    int n = 0;
    for (const auto& p : bs.body)
        if (auto* fdri = std::get_if<WriteFdri>(&p))
            n += int(fdri->words.size()) / fabric::kFrameWords;
    return n;
}

// Reconciles reported bitstream sizes with frame arithmetic. Overrides win;
// otherwise size = (frames + overhead + bram_cols * content_words) * 4 bytes.
struct SizeModel {
    int overhead_words = 0;
    int content_words_per_bram_column = 0;

    size_t size_bytes(const fabric::DeviceGeometry& geom,
                      const fabric::RegionSpan& span,
                      std::optional<size_t> override_bytes = {}) const {
        geom.validate_span(span);
        if (override_bytes) return *override_bytes;
        int bram_cols = 0;
        for (int c = 0; c < span.col_count; ++c)
            if (geom.column_type(span.col_start + c) == fabric::ResourceType::BRAM)
                ++bram_cols;
        size_t words = size_t(fabric::frame_count(geom, span)) * fabric::kFrameWords +
                       size_t(overhead_words) +
                       size_t(bram_cols) * size_t(content_words_per_bram_column);
        return words * 4;
    }
};

} // namespace prman::bitstream

#endif
