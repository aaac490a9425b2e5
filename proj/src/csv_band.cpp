#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "vegidx/error.hpp"
#include "vegidx/vgr_io.hpp"

namespace vegidx {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_nan_token(std::string_view s) {
    return s.size() == 3 && std::tolower(static_cast<unsigned char>(s[0])) == 'n' &&
           std::tolower(static_cast<unsigned char>(s[1])) == 'a' &&
           std::tolower(static_cast<unsigned char>(s[2])) == 'n';
}

float parse_token(std::string_view tok, std::size_t row, std::size_t col) {
    if (is_nan_token(tok)) return std::nanf("");
    double v = 0.0;
    const char* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    const float f = static_cast<float>(v);
    if (tok.empty() || ec != std::errc() || ptr != end || !std::isfinite(f))
        throw Error(ErrorCode::NonNumericToken, "'" + std::string(tok) + "' at row " + std::to_string(row) +
                                                    ", column " + std::to_string(col));
    return f;
}

} // namespace

RasterGrid parse_csv_band(const std::string& text) {
    std::vector<float> data;
    std::size_t width = 0;
    std::size_t height = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto row_text = trim(line);
        if (row_text.empty()) continue;
        std::size_t cols = 0;
        std::size_t start = 0;
        while (true) {
            const auto comma = row_text.find(',', start);
            const auto tok = trim(row_text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                          : comma - start));
            data.push_back(parse_token(tok, height, cols));
            ++cols;
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (height == 0)
            width = cols;
        else if (cols != width)
            throw Error(ErrorCode::RaggedRows, "row " + std::to_string(height) + " has " + std::to_string(cols) +
                                                   " values, expected " + std::to_string(width));
        ++height;
    }
    if (height == 0) throw Error(ErrorCode::RaggedRows, "no rows");
    return RasterGrid(width, height, {"band_0"}, std::move(data));
}

RasterGrid read_csv_band(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv_band(ss.str());
}

} // namespace vegidx
