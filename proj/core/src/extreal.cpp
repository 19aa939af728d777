#include "adjrisk/extreal.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace adjrisk {

ExtReal::ExtReal(double v) {
    if (std::isnan(v)) {
        throw std::invalid_argument("ExtReal: NaN is not an extended real");
    }
    if (std::isinf(v)) {
        kind_ = v > 0 ? Kind::PosInf : Kind::NegInf;
    } else {
        v_ = v;
    }
}

double ExtReal::value() const {
    if (kind_ != Kind::Finite) {
        throw std::domain_error("ExtReal::value: infinite value has no finite payload");
    }
    return v_;
}

double ExtReal::to_double() const noexcept {
    switch (kind_) {
        case Kind::PosInf: return HUGE_VAL;
        case Kind::NegInf: return -HUGE_VAL;
        case Kind::Finite: break;
    }
    return v_;
}

std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b) noexcept {
    if (a.kind_ != b.kind_) {
        return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    }
    if (a.kind_ != ExtReal::Kind::Finite || a.v_ == b.v_) {
        return std::strong_ordering::equal;
    }
    return a.v_ < b.v_ ? std::strong_ordering::less : std::strong_ordering::greater;
}

bool operator==(const ExtReal& a, const ExtReal& b) noexcept {
    return (a <=> b) == std::strong_ordering::equal;
}

ExtReal ext_sub(const ExtReal& a, const ExtReal& b) {
    if (b.is_pos_inf()) {
        return ExtReal::neg_inf();
    }
    if (a.is_pos_inf()) {
        return ExtReal::pos_inf();
    }
    if (a.is_neg_inf()) {
        if (b.is_neg_inf()) {
            throw std::domain_error("ext_sub: (-inf) - (-inf) is undefined");
        }
        return ExtReal::neg_inf();
    }
    if (b.is_neg_inf()) {
        return ExtReal::pos_inf();
    }
    return ExtReal(a.value() - b.value());
}

ExtReal ext_mul_indicator(const ExtReal& c, int ind) {
    if (ind != 0 && ind != 1) {
        throw std::invalid_argument("ext_mul_indicator: indicator must be 0 or 1");
    }
    return ind == 0 ? ExtReal(0.0) : c;
}

ExtReal ext_shift(const ExtReal& a, double m) {
    if (!std::isfinite(m)) {
        throw std::invalid_argument("ext_shift: shift must be finite");
    }
    return a.is_finite() ? ExtReal(a.value() + m) : a;
}

ExtReal ext_scale(const ExtReal& a, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("ext_scale: factor must be finite and positive");
    }
    return a.is_finite() ? ExtReal(a.value() * lambda) : a;
}

ExtReal ext_max(std::span<const ExtReal> xs) {
    if (xs.empty()) {
        throw std::invalid_argument("ext_max: empty range");
    }
    return *std::max_element(xs.begin(), xs.end());
}

std::string to_string(const ExtReal& x) {
    if (x.is_pos_inf()) {
        return "inf";
    }
    if (x.is_neg_inf()) {
        return "-inf";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x.value());
    return std::string(buf, res.ptr);
}

std::string format_significant(const ExtReal& x, int digits) {
    if (!x.is_finite()) {
        return to_string(x);
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x.value());
    return buf;
}

ExtReal parse_ext_real(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "inf" || lower == "+inf" || lower == "infinity" || lower == "+infinity") {
        return ExtReal::pos_inf();
    }
    if (lower == "-inf" || lower == "-infinity") {
        return ExtReal::neg_inf();
    }
    std::string_view body = text;
    if (!body.empty() && body.front() == '+') {
        body.remove_prefix(1);
    }
    double v = 0.0;
    auto res = std::from_chars(body.data(), body.data() + body.size(), v);
    if (body.empty() || res.ec != std::errc() || res.ptr != body.data() + body.size() ||
        !std::isfinite(v)) {
        throw std::invalid_argument("parse_ext_real: not an extended real: '" +
                                    std::string(text) + "'");
    }
    return ExtReal(v);
}

std::ostream& operator<<(std::ostream& os, const ExtReal& x) {
    return os << to_string(x);
}

}  // namespace adjrisk
