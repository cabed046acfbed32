#include "mteq/tensor_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include "mteq/errors.hpp"

namespace mteq {

namespace {

bool next_content_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

[[noreturn]] void parse_error(int lineno, const std::string& msg) {
  throw ConfigError("line " + std::to_string(lineno) + ": " + msg);
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace

DenseTensor read_tensor(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!next_content_line(in, line, lineno)) parse_error(lineno, "missing 'm n' header");
  int m = 0, n = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> m >> n)) parse_error(lineno, "expected 'm n'");
  }
  DenseTensor A(m, n);
  std::vector<int> idx(static_cast<std::size_t>(m));
  auto data = A.mutable_data();
  while (next_content_line(in, line, lineno)) {
    std::istringstream ls(line);
    for (auto& i : idx)
      if (!(ls >> i)) parse_error(lineno, "expected " + std::to_string(m) + " indices and a value");
    double v = 0.0;
    if (!(ls >> v)) parse_error(lineno, "missing value");
    if (!std::isfinite(v)) parse_error(lineno, "non-finite value");
    try {
      data[A.offset(idx)] = v;
    } catch (const DimensionError& e) {
      parse_error(lineno, e.what());
    }
  }
  return A;
}

void write_tensor(std::ostream& out, const DenseTensor& A) {
  out << A.order() << ' ' << A.dim() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  std::vector<int> idx(static_cast<std::size_t>(A.order()));
  const auto data = A.data();
  for (std::size_t off = 0; off < data.size(); ++off) {
    if (data[off] == 0.0) continue;
    A.multi_index(off, idx);
    for (int i : idx) out << i << ' ';
    out << data[off] << '\n';
  }
}

std::vector<double> read_vector(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!next_content_line(in, line, lineno)) parse_error(lineno, "missing length header");
  long n = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> n) || n < 1) parse_error(lineno, "expected a positive length");
  }
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(n));
  while (static_cast<long>(v.size()) < n && next_content_line(in, line, lineno)) {
    std::istringstream ls(line);
    double x = 0.0;
    if (!(ls >> x) || !std::isfinite(x)) parse_error(lineno, "expected a finite value");
    v.push_back(x);
  }
  if (static_cast<long>(v.size()) != n)
    throw ConfigError("vector file: expected " + std::to_string(n) + " values, found " +
                      std::to_string(v.size()));
  return v;
}

void write_vector(std::ostream& out, const std::vector<double>& v) {
  out << v.size() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (double x : v) out << x << '\n';
}

DenseTensor read_tensor_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_tensor(in);
}

void write_tensor_file(const std::filesystem::path& path, const DenseTensor& A) {
  auto out = open_out(path);
  write_tensor(out, A);
}

std::vector<double> read_vector_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_vector(in);
}

void write_vector_file(const std::filesystem::path& path, const std::vector<double>& v) {
  auto out = open_out(path);
  write_vector(out, v);
}

}  // namespace mteq
