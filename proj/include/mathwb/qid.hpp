#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mathwb {

/// Knowledge-base item identifier: 'Q' followed by 1-10 digits.
/// Orders numerically (Q9 < Q10).
class Qid {
public:
    static std::optional<Qid> parse(std::string_view text);
    /// Throws std::invalid_argument on malformed input.
    static Qid from(std::string_view text);

    static bool is_valid(std::string_view text) { return parse(text).has_value(); }

    const std::string& str() const noexcept { return text_; }
    std::uint64_t number() const noexcept { return number_; }

    friend bool operator==(const Qid& a, const Qid& b) { return a.text_ == b.text_; }
    friend std::strong_ordering operator<=>(const Qid& a, const Qid& b) {
        if (auto c = a.number_ <=> b.number_; c != 0) return c;
        return a.text_ <=> b.text_;
    }

private:
    Qid(std::string text, std::uint64_t number) : text_(std::move(text)), number_(number) {}

    std::string text_;
    std::uint64_t number_;
};

}  // namespace mathwb
