#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "mteq/tensor.hpp"

namespace mteq {

// Tensor text format (.mtns): first line "m n", then one "i1 ... im value"
// line per nonzero entry with 1-based indices. Missing entries are zero.
// Vector text format (.vec): first line "n", then n values, one per line.
// Blank lines and lines starting with '#' are ignored by the readers.

DenseTensor read_tensor(std::istream& in);
void write_tensor(std::ostream& out, const DenseTensor& A);
DenseTensor read_tensor_file(const std::filesystem::path& path);
void write_tensor_file(const std::filesystem::path& path, const DenseTensor& A);

std::vector<double> read_vector(std::istream& in);
void write_vector(std::ostream& out, const std::vector<double>& v);
std::vector<double> read_vector_file(const std::filesystem::path& path);
void write_vector_file(const std::filesystem::path& path, const std::vector<double>& v);

}  // namespace mteq
