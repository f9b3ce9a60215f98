#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace polyuniv {

// Fixed-size bitset over [0, size).
class Bitmap {
public:
    Bitmap() = default;
    explicit Bitmap(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    std::size_t size() const { return size_; }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t(1) << (i & 63); }
    std::size_t count() const;
    // first index >= from that is not set, or size() if none
    std::size_t first_zero(std::size_t from) const;

    // this |= (src << shift), truncated to size()
    void or_shifted(const Bitmap& src, std::size_t shift);

    std::vector<std::uint64_t>& words() { return words_; }
    const std::vector<std::uint64_t>& words() const { return words_; }
    bool operator==(const Bitmap& o) const { return size_ == o.size_ && words_ == o.words_; }

    void clear_tail();

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

// Word of src starting at bit offset `bit` (may be negative); bits outside src read as 0.
std::uint64_t window_word(const Bitmap& src, long long bit);

}  // namespace polyuniv
