#include "cli/inputs.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace adjrisk::cli {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_plain(std::string_view s) {
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() ||
        !std::isfinite(v)) {
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    }
    return v;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open '" + path + "'");
    }
    return in;
}

}  // namespace

double parse_number(std::string_view text) {
    text = trim(text);
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return parse_plain(text);
    }
    const double num = parse_plain(trim(text.substr(0, slash)));
    const double den = parse_plain(trim(text.substr(slash + 1)));
    if (den == 0.0) {
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    }
    return num / den;
}

SampleWindow read_window_file(const std::string& path) {
    std::ifstream in = open_input(path);
    std::vector<double> points;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        try {
            points.push_back(parse_plain(t));
        } catch (const std::invalid_argument& e) {
            throw UsageError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (points.empty()) {
        throw UsageError(path + ": no data points");
    }
    return SampleWindow(std::move(points));
}

DiscreteDistribution read_distribution_file(const std::string& path) {
    std::ifstream in = open_input(path);
    std::vector<Atom> atoms;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        std::istringstream row{std::string(t)};
        std::string value;
        std::string prob;
        std::string extra;
        if (!(row >> value >> prob) || (row >> extra)) {
            throw UsageError(path + ":" + std::to_string(line_no) +
                             ": expected 'value<TAB>probability'");
        }
        try {
            atoms.push_back({parse_number(value), parse_number(prob)});
        } catch (const std::invalid_argument& e) {
            throw UsageError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    try {
        return DiscreteDistribution(std::move(atoms));
    } catch (const std::invalid_argument& e) {
        throw UsageError(path + ": " + e.what());
    }
}

TargetRiskProfile parse_step_spec(std::string_view text) {
    std::vector<double> levels;
    std::vector<double> values;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const std::string_view item = trim(text.substr(0, comma));
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw UsageError("step profile items must look like 'level:value', got '" +
                             std::string(item) + "'");
        }
        try {
            levels.push_back(parse_number(item.substr(0, colon)));
            values.push_back(parse_number(item.substr(colon + 1)));
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("step profile: ") + e.what());
        }
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    try {
        return step_profile(levels, values);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

}  // namespace adjrisk::cli
