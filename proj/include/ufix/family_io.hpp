#pragma once

#include <string>
#include <vector>

#include "ufix/family.hpp"

namespace ufix {

/// Parse or validation failure in an input file, located by line and column
/// (both 1-based; 0 when unknown).
class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// A file could not be read or written (exit code 2).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Family document: {"name": "...", "rules": [[[dx,dy], ...], ...]}.
UpdateFamily parse_family(const std::string& text);
UpdateFamily load_family(const std::string& path);
std::string family_to_json(const UpdateFamily& family);

// Resolves a catalog name first, then a file path.
UpdateFamily resolve_family(const std::string& name_or_path);

// One "x y" integer pair per line; blank lines and '#' comments are skipped.
std::vector<LatticeVector> parse_seed_points(const std::string& text);
std::vector<LatticeVector> load_seed_points(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace ufix
