#include "pdo/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace pdo {

using nlohmann::json;

namespace {

void write_raw(const std::string& path, const std::vector<cplx>& v) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  // Little-endian host assumed (x86/ARM); doubles written verbatim.
  f.write(reinterpret_cast<const char*>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(cplx)));
}

std::vector<cplx> read_raw(const std::string& path, std::size_t count) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::vector<cplx> v(count);
  f.read(reinterpret_cast<char*>(v.data()),
         static_cast<std::streamsize>(count * sizeof(cplx)));
  if (!f) throw std::runtime_error("short read: " + path);
  return v;
}

void write_sidecar(const std::string& path, const json& j) {
  std::ofstream f(path + ".json");
  if (!f) throw std::runtime_error("cannot open for writing: " + path + ".json");
  f << j.dump(2) << "\n";
}

json read_sidecar(const std::string& path) {
  std::ifstream f(path + ".json");
  if (!f) throw std::runtime_error("missing sidecar: " + path + ".json");
  json j;
  f >> j;
  return j;
}

}  // namespace

void save_samples(const std::string& path, const GridFunction& u) {
  write_raw(path, u.values);
  write_sidecar(path, json{{"n", u.grid.n}, {"M", u.grid.M}, {"kind", "samples"}});
}

void save_spectrum(const std::string& path, const Spectrum& s) {
  write_raw(path, s.coef);
  write_sidecar(path, json{{"n", s.grid.n}, {"M", s.grid.M}, {"kind", "spectrum"}});
}

void save_symbol(const std::string& path, const Symbol& a) {
  write_raw(path, a.values());
  json j{{"n", a.grid().n},
         {"M", a.grid().M},
         {"kind", "symbol"},
         {"d", a.order()},
         {"eta_band", {a.band().lo, a.band().hi}}};
  if (a.ching)
    j["ching"] = {{"d", a.ching->d},
                  {"sigma", a.ching->sigma},
                  {"theta", a.ching->theta},
                  {"jmax", a.ching->jmax}};
  if (a.tdc_B) j["tdc_B"] = *a.tdc_B;
  write_sidecar(path, j);
}

void save_opmatrix(const std::string& path, const OperatorMatrix& m) {
  write_raw(path, m.m);
  write_sidecar(path, json{{"n", m.grid.n},
                           {"M", m.grid.M},
                           {"kind", "opmatrix"},
                           {"eta_band", {m.cols.lo, m.cols.hi}},
                           {"zeta_band", {m.rows.lo, m.rows.hi}}});
}

GridFunction load_samples(const std::string& path) {
  json j = read_sidecar(path);
  if (j.at("kind") != "samples") throw std::runtime_error("sidecar kind mismatch: " + path);
  TorusGrid g = TorusGrid::make(j.at("n"), j.at("M"));
  GridFunction u(g);
  u.values = read_raw(path, g.points());
  return u;
}

Spectrum load_spectrum(const std::string& path) {
  json j = read_sidecar(path);
  if (j.at("kind") != "spectrum") throw std::runtime_error("sidecar kind mismatch: " + path);
  TorusGrid g = TorusGrid::make(j.at("n"), j.at("M"));
  Spectrum s(g);
  s.coef = read_raw(path, g.points());
  return s;
}

Symbol load_symbol(const std::string& path) {
  json j = read_sidecar(path);
  if (j.at("kind") != "symbol") throw std::runtime_error("sidecar kind mismatch: " + path);
  TorusGrid g = TorusGrid::make(j.at("n"), j.at("M"));
  EtaBand band{j.at("eta_band")[0], j.at("eta_band")[1]};
  std::size_t cnt = (g.n == 1) ? band.count1()
                               : static_cast<std::size_t>(band.count1()) * band.count1();
  Symbol a(g, j.at("d"), band, read_raw(path, cnt * g.points()));
  if (j.contains("ching"))
    a.ching = ChingParams{j["ching"].at("d"), j["ching"].at("sigma"),
                          j["ching"].at("theta"), j["ching"].at("jmax")};
  if (j.contains("tdc_B")) a.tdc_B = j["tdc_B"].get<double>();
  return a;
}

OperatorMatrix load_opmatrix(const std::string& path) {
  json j = read_sidecar(path);
  if (j.at("kind") != "opmatrix") throw std::runtime_error("sidecar kind mismatch: " + path);
  TorusGrid g = TorusGrid::make(j.at("n"), j.at("M"));
  OperatorMatrix m{g,
                   EtaBand{j.at("zeta_band")[0], j.at("zeta_band")[1]},
                   EtaBand{j.at("eta_band")[0], j.at("eta_band")[1]},
                   {}};
  m.m = read_raw(path, m.nrows() * m.ncols());
  return m;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CsvWriter::Impl {
  std::ofstream f;
  std::size_t ncols;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : impl_(new Impl) {
  impl_->f.open(path);
  if (!impl_->f) {
    delete impl_;
    throw std::runtime_error("cannot open for writing: " + path);
  }
  impl_->ncols = columns.size();
  for (std::size_t i = 0; i < columns.size(); ++i)
    impl_->f << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != impl_->ncols) throw std::invalid_argument("CsvWriter: column count");
  for (std::size_t i = 0; i < cells.size(); ++i)
    impl_->f << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

void CsvWriter::row_values(const std::vector<double>& cells) {
  std::vector<std::string> s;
  s.reserve(cells.size());
  for (double v : cells) s.push_back(format_double(v));
  row(s);
}

}  // namespace pdo
