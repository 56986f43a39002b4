#include "unmix/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace unmix {

std::string format_value(double v, int significant_digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, v);
  return buf;
}

namespace {

constexpr int kFullPrecision = 17;
constexpr int kReportPrecision = 6;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

double parse_value(std::istream& in, const char* what) {
  double v;
  if (!(in >> v)) throw std::runtime_error(std::string("malformed ") + what);
  return v;
}

}  // namespace

void write_matrix(std::ostream& out, const Matrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << format_value(a(i, j), kFullPrecision);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("matrix write failed");
}

void write_matrix_file(const std::string& path, const Matrix& a) {
  auto out = open_output(path);
  write_matrix(out, a);
}

Matrix read_matrix(std::istream& in) {
  long long rows, cols;
  if (!(in >> rows >> cols) || rows < 1 || cols < 1) {
    throw std::runtime_error("malformed matrix header (expected \"m N\")");
  }
  Matrix a(rows, cols);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      a(i, j) = parse_value(in, "matrix entry");
      if (!std::isfinite(a(i, j))) throw std::runtime_error("non-finite matrix entry");
    }
  }
  return a;
}

Matrix read_matrix_file(const std::string& path) {
  auto in = open_input(path);
  return read_matrix(in);
}

void write_vector(std::ostream& out, const Vector& v) {
  out << v.size() << '\n';
  for (Index i = 0; i < v.size(); ++i) {
    out << format_value(v(i), kFullPrecision) << '\n';
  }
  if (!out) throw std::runtime_error("vector write failed");
}

void write_vector_file(const std::string& path, const Vector& v) {
  auto out = open_output(path);
  write_vector(out, v);
}

Vector read_vector(std::istream& in) {
  long long size;
  if (!(in >> size) || size < 0) throw std::runtime_error("malformed vector header");
  Vector v(size);
  for (Index i = 0; i < v.size(); ++i) {
    v(i) = parse_value(in, "vector entry");
    if (!std::isfinite(v(i))) throw std::runtime_error("non-finite vector entry");
  }
  return v;
}

Vector read_vector_file(const std::string& path) {
  auto in = open_input(path);
  return read_vector(in);
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path, const std::string& config_echo,
                     const std::vector<std::string>& header)
    : impl_(new Impl{open_output(path)}), columns_(header.size()) {
  impl_->out << "# config: " << config_echo << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) impl_->out << ',';
    impl_->out << header[i];
  }
  impl_->out << '\n';
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::logic_error("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) impl_->out << ',';
    impl_->out << cells[i];
  }
  impl_->out << '\n';
  if (!impl_->out) throw std::runtime_error("report write failed");
}

std::string CsvWriter::cell(double v) { return format_value(v, kReportPrecision); }

}  // namespace unmix
