#ifndef PRMAN_ERRORS_HPP
#define PRMAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace prman {

// Base for all domain errors. name() is the stable identifier printed by the
// CLI; what() carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& msg)
        : std::runtime_error(name + ": " + msg), name_(std::move(name)) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

#define PRMAN_DEFINE_ERROR(NAME)                                \
    class NAME : public Error {                                 \
    public:                                                     \
        explicit NAME(const std::string& msg = "")              \
            : Error(#NAME, msg) {}                              \
    }

// fabric
PRMAN_DEFINE_ERROR(FieldOverflow);
PRMAN_DEFINE_ERROR(ReservedBitsSet);
PRMAN_DEFINE_ERROR(SpanOutOfBounds);

// bitstream
PRMAN_DEFINE_ERROR(MissingSync);
PRMAN_DEFINE_ERROR(TruncatedStream);
PRMAN_DEFINE_ERROR(BadWordCount);
PRMAN_DEFINE_ERROR(UnknownRegister);
PRMAN_DEFINE_ERROR(InvalidBitstream);

class CrcMismatch : public Error {
public:
    CrcMismatch(uint32_t expected, uint32_t found)
        : Error("CrcMismatch",
                "expected 0x" + to_hex(expected) + ", found 0x" + to_hex(found)),
          expected_(expected), found_(found) {}
    uint32_t expected() const { return expected_; }
    uint32_t found() const { return found_; }

private:
    static std::string to_hex(uint32_t v) {
        static const char* digits = "0123456789ABCDEF";
        std::string s(8, '0');
        for (int i = 7; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xF];
        return s;
    }
    uint32_t expected_;
    uint32_t found_;
};

// relocate
PRMAN_DEFINE_ERROR(AnchorOutsideSpan);
PRMAN_DEFINE_ERROR(IncompatibleTarget);
PRMAN_DEFINE_ERROR(MalformedSource);

// floorplan
PRMAN_DEFINE_ERROR(InfeasibleRequirement);
PRMAN_DEFINE_ERROR(NonTilable);
PRMAN_DEFINE_ERROR(DivisionByZeroReservation);
PRMAN_DEFINE_ERROR(UnknownModule);
PRMAN_DEFINE_ERROR(InvalidBusWidth);

// csd
PRMAN_DEFINE_ERROR(FrameTooSmall);
PRMAN_DEFINE_ERROR(DimensionMismatch);

// simrt
PRMAN_DEFINE_ERROR(InfeasibleRequest);
PRMAN_DEFINE_ERROR(PredictorSlotConflict);

// cli / config
PRMAN_DEFINE_ERROR(ConfigError);

#undef PRMAN_DEFINE_ERROR

} // namespace prman

#endif
