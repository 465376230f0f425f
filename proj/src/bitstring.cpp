#include "bitstring.hpp"

#include <stdexcept>

namespace bpkcnm {

namespace {

int hex_digit_value(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

BitString::BitString(std::vector<uint8_t> bits) : bits_(std::move(bits))
{
    for (uint8_t b : bits_) {
        if (b > 1) throw std::domain_error("BitString: bit values must be 0 or 1");
    }
}

BitString BitString::zeros(size_t len)
{
    BitString out;
    out.bits_.assign(len, 0);
    return out;
}

BitString BitString::from_uint(uint64_t value, size_t len)
{
    if (len < 64 && (value >> len) != 0)
        throw std::domain_error("BitString::from_uint: value does not fit in requested width");
    BitString out;
    out.bits_.resize(len);
    for (size_t i = 0; i < len; ++i)
        out.bits_[i] = static_cast<uint8_t>((value >> (len - 1 - i)) & 1u);
    return out;
}

BitString BitString::parse_hex(const std::string& text)
{
    const size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw std::domain_error("BitString::parse_hex: missing length prefix");
    size_t len = 0;
    try {
        len = std::stoul(text.substr(0, colon));
    } catch (const std::exception&) {
        throw std::domain_error("BitString::parse_hex: bad length prefix");
    }
    const std::string hex = text.substr(colon + 1);
    if (hex.size() != (len + 3) / 4)
        throw std::domain_error("BitString::parse_hex: hex length does not match bit count");
    BitString out;
    out.bits_.resize(len);
    for (size_t i = 0; i < len; ++i) {
        const int v = hex_digit_value(hex[i / 4]);
        if (v < 0) throw std::domain_error("BitString::parse_hex: bad hex digit");
        out.bits_[i] = static_cast<uint8_t>((v >> (3 - (i % 4))) & 1);
    }
    // Reject nonzero padding bits so parse(to_hex(x)) == x is the only fixpoint.
    if (len % 4 != 0) {
        const int v = hex_digit_value(hex.back());
        if (v < 0 || (v & ((1 << (4 - (len % 4))) - 1)) != 0)
            throw std::domain_error("BitString::parse_hex: nonzero padding bits");
    }
    return out;
}

uint8_t BitString::bit(size_t i) const
{
    if (i >= bits_.size()) throw std::out_of_range("BitString::bit: index out of range");
    return bits_[i];
}

void BitString::set_bit(size_t i, uint8_t v)
{
    if (i >= bits_.size()) throw std::out_of_range("BitString::set_bit: index out of range");
    if (v > 1) throw std::domain_error("BitString::set_bit: bit values must be 0 or 1");
    bits_[i] = v;
}

void BitString::append_bit(uint8_t v)
{
    if (v > 1) throw std::domain_error("BitString::append_bit: bit values must be 0 or 1");
    bits_.push_back(v);
}

uint64_t BitString::to_uint() const
{
    if (bits_.size() > 64) throw std::domain_error("BitString::to_uint: wider than 64 bits");
    uint64_t v = 0;
    for (uint8_t b : bits_) v = (v << 1) | b;
    return v;
}

std::string BitString::to_hex() const
{
    static const char* digits = "0123456789abcdef";
    std::string out = std::to_string(bits_.size()) + ":";
    int nibble = 0;
    for (size_t i = 0; i < bits_.size(); ++i) {
        nibble = (nibble << 1) | bits_[i];
        if (i % 4 == 3) {
            out.push_back(digits[nibble]);
            nibble = 0;
        }
    }
    if (bits_.size() % 4 != 0) {
        nibble <<= 4 - (bits_.size() % 4);
        out.push_back(digits[nibble]);
    }
    return out;
}

BitString BitString::slice(size_t from, size_t len) const
{
    if (from + len > bits_.size()) throw std::out_of_range("BitString::slice: range out of bounds");
    BitString out;
    out.bits_.assign(bits_.begin() + from, bits_.begin() + from + len);
    return out;
}

BitString BitString::concat(const BitString& other) const
{
    BitString out;
    out.bits_.reserve(bits_.size() + other.bits_.size());
    out.bits_ = bits_;
    out.bits_.insert(out.bits_.end(), other.bits_.begin(), other.bits_.end());
    return out;
}

BitString BitString::xored(const BitString& other) const
{
    if (bits_.size() != other.bits_.size())
        throw std::domain_error("BitString::xored: length mismatch");
    BitString out;
    out.bits_.resize(bits_.size());
    for (size_t i = 0; i < bits_.size(); ++i)
        out.bits_[i] = bits_[i] ^ other.bits_[i];
    return out;
}

bool BitString::operator<(const BitString& other) const
{
    if (bits_.size() != other.bits_.size()) return bits_.size() < other.bits_.size();
    return bits_ < other.bits_;
}

}  // namespace bpkcnm
