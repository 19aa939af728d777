#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace adjrisk {

// Extended real number. Infinities are explicit tags rather than IEEE
// values so that subtraction can follow the inf - inf = -inf convention.
class ExtReal {
public:
    enum class Kind : std::uint8_t { NegInf, Finite, PosInf };

    constexpr ExtReal() noexcept = default;
    // Accepts IEEE +/-inf as the matching tag; NaN throws std::invalid_argument.
    ExtReal(double v);  // NOLINT(google-explicit-constructor)

    static constexpr ExtReal pos_inf() noexcept { return ExtReal(Kind::PosInf); }
    static constexpr ExtReal neg_inf() noexcept { return ExtReal(Kind::NegInf); }

    [[nodiscard]] constexpr Kind kind() const noexcept { return kind_; }
    [[nodiscard]] constexpr bool is_finite() const noexcept { return kind_ == Kind::Finite; }
    [[nodiscard]] constexpr bool is_pos_inf() const noexcept { return kind_ == Kind::PosInf; }
    [[nodiscard]] constexpr bool is_neg_inf() const noexcept { return kind_ == Kind::NegInf; }

    // Finite payload; throws std::domain_error on an infinity.
    [[nodiscard]] double value() const;
    // IEEE view, for plotting and interop only.
    [[nodiscard]] double to_double() const noexcept;

    friend std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b) noexcept;
    friend bool operator==(const ExtReal& a, const ExtReal& b) noexcept;

private:
    explicit constexpr ExtReal(Kind k) noexcept : kind_(k) {}

    Kind kind_ = Kind::Finite;
    double v_ = 0.0;
};

ExtReal ext_sub(const ExtReal& a, const ExtReal& b);
ExtReal ext_mul_indicator(const ExtReal& c, int ind);

// a + m for finite m; infinities absorb the shift.
ExtReal ext_shift(const ExtReal& a, double m);
// lambda * a for lambda > 0.
ExtReal ext_scale(const ExtReal& a, double lambda);

// Largest element; throws std::invalid_argument on an empty range.
ExtReal ext_max(std::span<const ExtReal> xs);

// "inf", "-inf" or the shortest round-trip decimal.
std::string to_string(const ExtReal& x);
// Same tokens, but finite values printed with `digits` significant digits.
std::string format_significant(const ExtReal& x, int digits);
// Accepts "inf", "+inf", "-inf", "infinity" (any case) or a decimal.
ExtReal parse_ext_real(std::string_view text);

std::ostream& operator<<(std::ostream& os, const ExtReal& x);

}  // namespace adjrisk
