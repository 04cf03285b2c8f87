#pragma once

// File formats: complex arrays as little-endian float64 (re,im) pairs in
// row-major order in a `.cplx` file with a JSON sidecar `<file>.json`
// describing {"n","M","kind",...}; numeric tables as CSV with %.17g
// formatting so reruns are byte-identical.

#include <string>
#include <vector>

#include "pdo/grid.hpp"
#include "pdo/operators.hpp"
#include "pdo/symbols.hpp"

namespace pdo {

void save_samples(const std::string& path, const GridFunction& u);
void save_spectrum(const std::string& path, const Spectrum& s);
void save_symbol(const std::string& path, const Symbol& a);
void save_opmatrix(const std::string& path, const OperatorMatrix& m);

GridFunction load_samples(const std::string& path);
Spectrum load_spectrum(const std::string& path);
Symbol load_symbol(const std::string& path);
OperatorMatrix load_opmatrix(const std::string& path);

std::string format_double(double v);  // shortest round-trip-stable form

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<std::string>& cells);
  // Convenience: doubles are formatted with format_double.
  void row_values(const std::vector<double>& cells);

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace pdo
