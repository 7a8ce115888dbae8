#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace era {

/// Fixed-point money with 4 decimal places. Comparisons are exact; the
/// maximum representable raw value doubles as an infinity sentinel used
/// for reject prices and the "any price sells zero" answer.
class Money {
public:
    static constexpr std::int64_t kScale = 10000;

    constexpr Money() : raw_(0) {}

    static constexpr Money from_raw(std::int64_t raw) {
        Money m;
        m.raw_ = raw;
        return m;
    }

    static constexpr Money from_units(std::int64_t units) {
        return from_raw(units * kScale);
    }

    static constexpr Money infinity() {
        return from_raw(std::numeric_limits<std::int64_t>::max());
    }

    static constexpr Money zero() { return Money(); }

    /// Parse a decimal string like "100", "-3.5" or "0.6500".
    /// More than 4 fractional digits is an error.
    static Money parse(const std::string& text);

    /// Nearest fixed-point value; ties round away from zero.
    static Money from_double(double v);

    std::int64_t raw() const { return raw_; }
    bool is_infinite() const { return raw_ == infinity().raw_; }
    double to_double() const { return static_cast<double>(raw_) / kScale; }

    /// Always four fractional digits, e.g. "100.0000"; "inf" for the sentinel.
    std::string str() const;

    /// Saturating: infinity absorbs.
    Money operator+(Money o) const {
        if (is_infinite() || o.is_infinite()) return infinity();
        return from_raw(raw_ + o.raw_);
    }
    Money& operator+=(Money o) { return *this = *this + o; }

    Money operator-(Money o) const {
        if (is_infinite()) return infinity();
        return from_raw(raw_ - o.raw_);
    }

    Money operator*(std::int64_t k) const {
        if (is_infinite()) return infinity();
        return from_raw(raw_ * k);
    }

    /// Divide by a positive integer, rounding to nearest (ties away from zero).
    Money div(std::int64_t k) const;

    auto operator<=>(const Money&) const = default;

private:
    std::int64_t raw_;
};

}  // namespace era
