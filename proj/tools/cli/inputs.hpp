#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "adjrisk/distributions.hpp"
#include "adjrisk/profiles.hpp"

namespace adjrisk::cli {

// Bad invocation, bad configuration or unreadable input: exit status 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One number per line; blank and '#' lines skipped.
SampleWindow read_window_file(const std::string& path);
// "value<TAB>prob" per line; prob may be written as a fraction "a/b".
DiscreteDistribution read_distribution_file(const std::string& path);
// "0.95:0,0.99:0.01" -> step profile with those (level, value) jumps.
TargetRiskProfile parse_step_spec(std::string_view text);
// Decimal or fraction "a/b".
double parse_number(std::string_view text);

}  // namespace adjrisk::cli
