#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rpm/types.hpp"

namespace rpm {

/// Shortest decimal string that round-trips to the same double ("inf", "-inf", "nan" included).
std::string format_double(double value);

/// Strict parse of a full token; throws std::invalid_argument otherwise.
double parse_double(std::string_view token);

std::vector<std::string> split_fields(std::string_view line, char sep = ',');

/// Headerless numeric CSV, one matrix row per line.
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& M);

/// Accepts either a single column or a single row.
Vector read_vector_csv(const std::filesystem::path& path);

/// One entry per line.
void write_vector_csv(const std::filesystem::path& path, const Vector& v);

}  // namespace rpm
