#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "keller/polymap.hpp"

namespace keller::mapfile {

/// Reads a map document:
///   {"n": 2, "d": 2, "components": [[{"coeff": "1/2", "exps": [0, 2]}], []]}
/// Coefficients are strings ("p/q" or "p"). Repeated monomials are summed and
/// zero terms dropped. Throws ParseError with 1-based line and column.
PolyMap parse(std::string_view text);

/// Reads a file; a missing file is a ParseError at line 0.
PolyMap read_file(const std::string& path);

/// Canonical text: fixed key order, monomials in ascending graded order,
/// reduced fractions, trailing newline. parse(write(m)) == m and the text is
/// a fixed point of write(parse(.)).
std::string write(const PolyMap& map);

void write_file(const std::string& path, const PolyMap& map);

/// One step of a path into a JSON document: an object key or an array index.
using PathStep = std::variant<std::string, std::size_t>;

/// Byte offset of the value at `path` in a syntactically valid JSON text.
std::size_t locate(std::string_view text, const std::vector<PathStep>& path);

struct Position {
    std::size_t line = 1;
    std::size_t column = 1;
};

Position position_of(std::string_view text, std::size_t offset);

} // namespace keller::mapfile
