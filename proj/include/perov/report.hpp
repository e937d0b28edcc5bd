#pragma once

// Report output. Human-readable lines are free-form; machine-readable lines
// start with "#REC " and carry space-separated key=value pairs. Numbers in
// records use 17 significant digits via std::to_chars, so the output does not
// depend on the C locale. Vectors are comma-joined, matrix rows ';'-joined.

#include "perov/ordered_algebra.hpp"

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace perov {

/// 17 significant digits, %g style.
std::string format_real(double x);
/// Shortest representation that parses back to the same double.
std::string format_shortest(double x);

std::string format_vector(const ModuleVector& v, bool shortest = false);
std::string format_matrix(const SquareMatrix& m, bool shortest = false);

class Record {
public:
    explicit Record(std::string_view section);

    Record& add(std::string_view key, std::string value);
    Record& add(std::string_view key, double value);
    Record& add(std::string_view key, long long value);
    Record& add(std::string_view key, unsigned long long value);
    Record& add(std::string_view key, unsigned long value);
    Record& add(std::string_view key, int value);
    Record& add(std::string_view key, bool value);
    Record& add(std::string_view key, const ModuleVector& value);
    Record& add(std::string_view key, const SquareMatrix& value);

    std::string str() const;

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

std::ostream& operator<<(std::ostream& os, const Record& r);

} // namespace perov
