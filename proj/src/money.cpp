#include "era/money.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace era {

Money Money::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty money literal");
    if (text == "inf") return infinity();
    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    std::int64_t whole = 0;
    bool any_digit = false;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
        whole = whole * 10 + (text[i] - '0');
        any_digit = true;
    }
    std::int64_t frac = 0;
    if (i < text.size() && text[i] == '.') {
        ++i;
        int digits = 0;
        for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
            if (++digits > 4) throw std::invalid_argument("money literal has more than 4 decimal places: " + text);
            frac = frac * 10 + (text[i] - '0');
            any_digit = true;
        }
        for (; digits < 4; ++digits) frac *= 10;
    }
    if (!any_digit || i != text.size())
        throw std::invalid_argument("malformed money literal: " + text);
    std::int64_t raw = whole * kScale + frac;
    return from_raw(negative ? -raw : raw);
}

Money Money::from_double(double v) {
    if (std::isinf(v)) return infinity();
    return from_raw(static_cast<std::int64_t>(std::llround(v * kScale)));
}

std::string Money::str() const {
    if (is_infinite()) return "inf";
    std::int64_t r = raw_;
    std::string sign;
    if (r < 0) {
        sign = "-";
        r = -r;
    }
    std::string frac = std::to_string(r % kScale);
    frac.insert(0, 4 - frac.size(), '0');
    return sign + std::to_string(r / kScale) + "." + frac;
}

Money Money::div(std::int64_t k) const {
    if (k <= 0) throw std::invalid_argument("Money::div requires positive divisor");
    if (is_infinite()) return infinity();
    std::int64_t r = raw_;
    std::int64_t q = (r >= 0) ? (r + k / 2) / k : -((-r + k / 2) / k);
    return from_raw(q);
}

}  // namespace era
