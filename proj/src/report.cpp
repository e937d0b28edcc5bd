#include "perov/report.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace perov {

namespace {

std::string to_chars_string(double x, bool shortest)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = shortest
                         ? std::to_chars(buf.data(), buf.data() + buf.size(), x)
                         : std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                         std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

} // namespace

std::string format_real(double x) { return to_chars_string(x, false); }

std::string format_shortest(double x) { return to_chars_string(x, true); }

std::string format_vector(const ModuleVector& v, bool shortest)
{
    std::string out;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (i) out += ',';
        out += to_chars_string(v[i], shortest);
    }
    return out;
}

std::string format_matrix(const SquareMatrix& m, bool shortest)
{
    std::string out;
    for (std::size_t i = 0; i < m.dim(); ++i) {
        if (i) out += shortest ? "; " : ";";
        for (std::size_t j = 0; j < m.dim(); ++j) {
            if (j) out += ',';
            out += to_chars_string(m(i, j), shortest);
        }
    }
    return out;
}

Record::Record(std::string_view section) { add("section", std::string(section)); }

Record& Record::add(std::string_view key, std::string value)
{
    fields_.emplace_back(std::string(key), std::move(value));
    return *this;
}

Record& Record::add(std::string_view key, double value) { return add(key, format_real(value)); }

Record& Record::add(std::string_view key, long long value)
{
    return add(key, std::to_string(value));
}

Record& Record::add(std::string_view key, unsigned long long value)
{
    return add(key, std::to_string(value));
}

Record& Record::add(std::string_view key, unsigned long value)
{
    return add(key, std::to_string(value));
}

Record& Record::add(std::string_view key, int value) { return add(key, std::to_string(value)); }

Record& Record::add(std::string_view key, bool value)
{
    return add(key, std::string(value ? "true" : "false"));
}

Record& Record::add(std::string_view key, const ModuleVector& value)
{
    return add(key, format_vector(value));
}

Record& Record::add(std::string_view key, const SquareMatrix& value)
{
    return add(key, format_matrix(value));
}

std::string Record::str() const
{
    std::string out = "#REC";
    for (const auto& [k, v] : fields_) {
        out += ' ';
        out += k;
        out += '=';
        out += v;
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const Record& r) { return os << r.str(); }

} // namespace perov
