#pragma once

#include <charconv>
#include <ostream>
#include <string>
#include <string_view>

namespace symhyp::csv {

/// Shortest decimal representation that parses back to the same double.
inline std::string format(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Streams comma separated cells; numbers use `format`.
class Row {
public:
    explicit Row(std::ostream& os) : os_(os) {}
    ~Row() { os_ << '\n'; }
    Row(const Row&) = delete;
    Row& operator=(const Row&) = delete;

    Row& operator<<(double v) { return cell(format(v)); }
    Row& operator<<(int v) { return cell(std::to_string(v)); }
    Row& operator<<(std::size_t v) { return cell(std::to_string(v)); }
    Row& operator<<(std::string_view v) { return cell(v); }
    Row& operator<<(const char* v) { return cell(v); }

private:
    Row& cell(std::string_view text) {
        if (!first_) os_ << ',';
        first_ = false;
        os_ << text;
        return *this;
    }

    std::ostream& os_;
    bool first_ = true;
};

}  // namespace symhyp::csv
