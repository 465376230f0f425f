// Ordered bit sequences with explicit length and a canonical hex encoding.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bpkcnm {

// Bit 0 is the most significant (leftmost) position for integer and hex
// conversions.  The hex form is length-prefixed: "<bit count>:<hex>", with
// bits packed MSB-first and the final nibble zero-padded.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::vector<uint8_t> bits);

    static BitString zeros(size_t len);
    static BitString from_uint(uint64_t value, size_t len);
    static BitString parse_hex(const std::string& text);

    size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    uint8_t bit(size_t i) const;
    void set_bit(size_t i, uint8_t v);
    void append_bit(uint8_t v);

    uint64_t to_uint() const;  // requires size() <= 64
    std::string to_hex() const;

    BitString slice(size_t from, size_t len) const;
    BitString concat(const BitString& other) const;
    BitString xored(const BitString& other) const;  // lengths must match

    bool operator==(const BitString&) const = default;
    bool operator<(const BitString& other) const;

    const std::vector<uint8_t>& raw() const { return bits_; }

private:
    std::vector<uint8_t> bits_;  // each element 0 or 1
};

}  // namespace bpkcnm
