#include "zerocorr/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "zerocorr/error.hpp"

namespace zerocorr {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& s, int line) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw InputError("line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

Complex parse_complex(const std::string& token, int line) {
    const auto comma = token.find(',');
    if (comma == std::string::npos || token.find(',', comma + 1) != std::string::npos) {
        throw InputError("line " + std::to_string(line) + ": expected re,im but got '" + token + "'");
    }
    return {parse_real(token.substr(0, comma), line), parse_real(token.substr(comma + 1), line)};
}

std::ifstream open(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return in;
}

}  // namespace

std::vector<PointConfiguration> read_points(std::istream& is) {
    std::vector<PointConfiguration> out;
    std::vector<std::vector<Complex>> current;
    auto flush = [&] {
        if (!current.empty()) out.emplace_back(std::move(current));
        current.clear();
    };
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const std::string text = trim(raw);
        if (text.empty()) {
            flush();
            continue;
        }
        if (text[0] == '#') continue;
        std::istringstream tokens(text);
        std::vector<Complex> point;
        for (std::string tok; tokens >> tok;) point.push_back(parse_complex(tok, line));
        if (!current.empty() && point.size() != current.front().size()) {
            throw InputError("line " + std::to_string(line) + ": dimension differs from previous points");
        }
        current.push_back(std::move(point));
    }
    flush();
    if (out.empty()) throw InputError("points input holds no configuration");
    return out;
}

std::vector<PointConfiguration> read_points_file(const std::string& path) {
    auto in = open(path);
    return read_points(in);
}

std::vector<std::pair<std::string, std::string>> read_config(std::istream& is) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const std::string text = trim(raw);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos || trim(text.substr(0, eq)).empty()) {
            throw InputError("config line " + std::to_string(line) + ": expected key=value");
        }
        out.emplace_back(trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    auto in = open(path);
    return read_config(in);
}

}  // namespace zerocorr
