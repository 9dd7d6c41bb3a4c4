#include "mathwb/qid.hpp"

namespace mathwb {

std::optional<Qid> Qid::parse(std::string_view text) {
    if (text.size() < 2 || text.size() > 11 || text.front() != 'Q') return std::nullopt;
    std::uint64_t n = 0;
    for (char c : text.substr(1)) {
        if (c < '0' || c > '9') return std::nullopt;
        n = n * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return Qid(std::string(text), n);
}

Qid Qid::from(std::string_view text) {
    if (auto q = parse(text)) return *q;
    throw std::invalid_argument("malformed qid: " + std::string(text));
}

}  // namespace mathwb
