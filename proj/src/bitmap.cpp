#include "polyuniv/bitmap.hpp"

namespace polyuniv {

std::size_t Bitmap::count() const {
    std::size_t c = 0;
    for (auto w : words_) c += __builtin_popcountll(w);
    return c;
}

std::size_t Bitmap::first_zero(std::size_t from) const {
    for (std::size_t i = from; i < size_;) {
        std::size_t wi = i >> 6;
        std::uint64_t w = ~words_[wi] >> (i & 63);
        if (w) {
            std::size_t j = i + __builtin_ctzll(w);
            return j < size_ ? j : size_;
        }
        i = (wi + 1) << 6;
    }
    return size_;
}

void Bitmap::clear_tail() {
    std::size_t r = size_ & 63;
    if (r && !words_.empty()) words_.back() &= (std::uint64_t(1) << r) - 1;
}

std::uint64_t window_word(const Bitmap& src, long long bit) {
    const auto& w = src.words();
    long long n = static_cast<long long>(w.size());
    if (bit <= -64 || bit >= n * 64) return 0;
    long long wi = bit >= 0 ? bit / 64 : -1;
    int off = static_cast<int>(bit - wi * 64);
    std::uint64_t lo = (wi >= 0 && wi < n) ? w[wi] : 0;
    if (off == 0) return lo;
    std::uint64_t hi = (wi + 1 >= 0 && wi + 1 < n) ? w[wi + 1] : 0;
    return (lo >> off) | (hi << (64 - off));
}

void Bitmap::or_shifted(const Bitmap& src, std::size_t shift) {
    if (shift >= size_) return;
    std::size_t n = words_.size();
    std::size_t ws = shift >> 6;
    for (std::size_t i = ws; i < n; ++i)
        words_[i] |= window_word(src, static_cast<long long>(i * 64) - static_cast<long long>(shift));
    clear_tail();
}

}  // namespace polyuniv
