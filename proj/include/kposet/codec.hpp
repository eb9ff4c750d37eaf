#pragma once

// Word codings over {0,1}: Bin, the length-increasing bijection b : N -> 2*,
// the padded codes 0^n 1 p and 0^i 1^(k-i) p, and the pairing c(p,q).
// The bit layouts here are a compatibility contract for witness files.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "kposet/error.hpp"

namespace kposet {

/// A finite word over {0,1}, stored as its ASCII '0'/'1' text.
class BinaryWord {
public:
    BinaryWord() = default;

    explicit BinaryWord(std::string_view bits) : bits_(bits) {
        if (!std::all_of(bits_.begin(), bits_.end(), [](char c) { return c == '0' || c == '1'; }))
            throw ParseError("binary word may only contain '0' and '1': \"" + bits_ + "\"");
    }

    static BinaryWord repeat(char bit, std::size_t count) {
        BinaryWord w;
        w.bits_.assign(count, bit);
        return w;
    }

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    char operator[](std::size_t i) const { return bits_[i]; }
    const std::string& str() const noexcept { return bits_; }

    BinaryWord substr(std::size_t pos, std::size_t len = std::string::npos) const {
        BinaryWord w;
        w.bits_ = bits_.substr(pos, len);
        return w;
    }

    BinaryWord& operator+=(const BinaryWord& rhs) {
        bits_ += rhs.bits_;
        return *this;
    }
    BinaryWord& push_back(char bit) {
        bits_.push_back(bit == '1' ? '1' : '0');
        return *this;
    }

    friend BinaryWord operator+(BinaryWord lhs, const BinaryWord& rhs) { return lhs += rhs; }
    friend bool operator==(const BinaryWord&, const BinaryWord&) = default;
    friend auto operator<=>(const BinaryWord&, const BinaryWord&) = default;
    friend std::ostream& operator<<(std::ostream& os, const BinaryWord& w) { return os << w.bits_; }

private:
    std::string bits_;
};

/// Ordering used for tie-breaking witnesses: shorter first, then
/// numerically smaller.
inline bool shortlex_less(const BinaryWord& a, const BinaryWord& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.str() < b.str();
}

/// Most-significant-bit-first binary representation, bin(0) = "0".
inline BinaryWord bin(std::uint64_t x) {
    if (x == 0) return BinaryWord("0");
    std::string s;
    for (; x != 0; x >>= 1) s.push_back((x & 1U) ? '1' : '0');
    std::reverse(s.begin(), s.end());
    return BinaryWord(s);
}

/// Inverse of bin on canonical representations (no leading zero except "0").
inline std::optional<std::uint64_t> parse_bin(const BinaryWord& w) {
    if (w.empty() || w.size() > 64) return std::nullopt;
    if (w.size() > 1 && w[0] == '0') return std::nullopt;
    std::uint64_t v = 0;
    for (char c : w.str()) v = (v << 1) | static_cast<std::uint64_t>(c == '1');
    return v;
}

/// floor(log2(x)) with the convention log(0) = 0.
constexpr std::uint64_t floor_log2(std::uint64_t x) noexcept {
    std::uint64_t r = 0;
    while (x > 1) {
        x >>= 1;
        ++r;
    }
    return r;
}

/// b(0) = empty, b(2n+1) = b(n)0, b(2n+2) = b(n)1. Equivalently: the binary
/// representation of i+1 with its leading 1 removed.
inline BinaryWord b_word(std::uint64_t i) {
    if (i == UINT64_MAX) throw ArgumentError("b_word: index overflows");
    return bin(i + 1).substr(1);
}

inline std::uint64_t b_index(const BinaryWord& w) {
    if (w.size() > 63) throw ArgumentError("b_index: word longer than 63 bits");
    std::uint64_t v = 1;
    for (char c : w.str()) v = (v << 1) | static_cast<std::uint64_t>(c == '1');
    return v - 1;
}

/// 0^n 1 p
inline BinaryWord encode_padded(std::uint64_t n, const BinaryWord& p) {
    return BinaryWord::repeat('0', n) + BinaryWord("1") + p;
}

/// Inverse of encode_padded; empty when w contains no 1.
inline std::optional<std::pair<std::uint64_t, BinaryWord>> decode_padded(const BinaryWord& w) {
    const auto pos = w.str().find('1');
    if (pos == std::string::npos) return std::nullopt;
    return std::pair{static_cast<std::uint64_t>(pos), w.substr(pos + 1)};
}

/// 0^i 1^(k-i) p, for 1 <= i <= k.
inline BinaryWord encode_split(std::uint64_t i, std::uint64_t k, const BinaryWord& p) {
    if (i < 1 || i > k) throw ArgumentError("encode_split: need 1 <= i <= k");
    return BinaryWord::repeat('0', i) + BinaryWord::repeat('1', k - i) + p;
}

inline std::optional<std::pair<std::uint64_t, BinaryWord>> decode_split(const BinaryWord& w,
                                                                        std::uint64_t k) {
    if (k == 0 || w.size() < k) return std::nullopt;
    std::uint64_t i = 0;
    while (i < k && w[i] == '0') ++i;
    if (i == 0) return std::nullopt;
    for (std::uint64_t j = i; j < k; ++j)
        if (w[j] != '1') return std::nullopt;
    return std::pair{i, w.substr(k)};
}

/// c(p,q) = 0^|bin(|p|)| 1 bin(|p|) p q   if |p| <= |q|
///          1^|bin(|q|)| 0 bin(|q|) p q   otherwise
inline BinaryWord encode_pair(const BinaryWord& p, const BinaryWord& q) {
    const bool left = p.size() <= q.size();
    const BinaryWord len = bin(left ? p.size() : q.size());
    const char run = left ? '0' : '1';
    const char stop = left ? '1' : '0';
    return BinaryWord::repeat(run, len.size()) + BinaryWord(std::string(1, stop)) + len + p + q;
}

/// Inverse of encode_pair. Rejects every word outside the range of c, so
/// that encode_pair(decode_pair(r)) == r whenever decoding succeeds.
inline std::optional<std::pair<BinaryWord, BinaryWord>> decode_pair(const BinaryWord& r) {
    if (r.empty()) return std::nullopt;
    const char run = r[0];
    std::size_t m = 0;
    while (m < r.size() && r[m] == run) ++m;
    if (m == r.size()) return std::nullopt;  // no terminating bit
    std::size_t pos = m + 1;
    if (pos + m > r.size()) return std::nullopt;
    const auto len = parse_bin(r.substr(pos, m));
    if (!len) return std::nullopt;
    pos += m;
    const std::size_t rest = r.size() - pos;
    if (*len > rest) return std::nullopt;
    const std::size_t other = rest - *len;
    if (run == '0') {
        // |p| = len <= |q|
        if (*len > other) return std::nullopt;
        return std::pair{r.substr(pos, *len), r.substr(pos + *len)};
    }
    // |q| = len < |p|
    if (other <= *len) return std::nullopt;
    return std::pair{r.substr(pos, other), r.substr(pos + other)};
}

/// |c(p,q)| computed from the closed form |p|+|q|+2*floor(log2 min)+3.
constexpr std::uint64_t pair_length(std::uint64_t p_len, std::uint64_t q_len) noexcept {
    return p_len + q_len + 2 * floor_log2(std::min(p_len, q_len)) + 3;
}

}  // namespace kposet
