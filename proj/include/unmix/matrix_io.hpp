#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "unmix/types.hpp"

namespace unmix {

/// Text formats:
///   matrix: first line "m N", then m lines of N whitespace-separated values
///   vector: length on the first line, one value per subsequent line
/// Values are written with 17 significant digits so round trips are exact.

std::string format_value(double v, int significant_digits);

void write_matrix(std::ostream& out, const Matrix& a);
void write_matrix_file(const std::string& path, const Matrix& a);
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);

void write_vector(std::ostream& out, const Vector& v);
void write_vector_file(const std::string& path, const Vector& v);
Vector read_vector(std::istream& in);
Vector read_vector_file(const std::string& path);

/// CSV report writer. Emits a leading "# config: ..." provenance comment,
/// then a header row. Cell values formatted with 6 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& config_echo,
            const std::vector<std::string>& header);
  ~CsvWriter();

  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<std::string>& cells);
  static std::string cell(double v);

 private:
  struct Impl;
  Impl* impl_;
  std::size_t columns_;
};

}  // namespace unmix
