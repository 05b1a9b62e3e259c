#include "mwlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace mwlab {

namespace {

std::map<std::string, std::string> parse_header(const std::string& line, const std::string& kind,
                                                const std::string& path) {
  std::istringstream in(line);
  std::string hash, tag, what;
  in >> hash >> tag >> what;
  if (hash != "#" || tag != "mwlab" || what != kind)
    throw ConfigError("bad header in " + path + ": expected '# mwlab " + kind + "'");
  std::map<std::string, std::string> out;
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ConfigError("bad header token '" + token + "' in " + path);
    out[token.substr(0, eq)] = token.substr(eq + 1);
  }
  for (const char* key : {"dimension", "depth", "n"})
    if (!out.count(key)) throw ConfigError(std::string("missing header key '") + key + "' in " + path);
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return in;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

GridSpec header_grid(const std::map<std::string, std::string>& h) {
  GridSpec grid{std::stoi(h.at("dimension")), std::stoi(h.at("depth"))};
  grid.validate();
  return grid;
}

}  // namespace

void write_weight_table(const std::string& path, const MatrixField& field, bool complex) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  const GridSpec& g = field.grid();
  out << "# mwlab weight dimension=" << g.dimension << " depth=" << g.depth << " n=" << field.rows()
      << " format=" << (complex ? "complex" : "real") << "\n";
  for (int c = 0; c < field.cell_count(); ++c) {
    out << c;
    for (int i = 0; i < field.rows(); ++i) {
      for (int j = 0; j < field.cols(); ++j) {
        const cplx z = field[c](i, j);
        out << ' ' << format_double(z.real());
        if (complex) out << ' ' << format_double(z.imag());
      }
    }
    out << '\n';
  }
}

MatrixField read_matrix_table(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty weight table " + path);
  const auto h = parse_header(line, "weight", path);
  const GridSpec grid = header_grid(h);
  const int n = std::stoi(h.at("n"));
  if (n < 1 || n > kMaxMatrixSize) throw ConfigError("weight table n out of range in " + path);
  const bool complex = h.count("format") && h.at("format") == "complex";
  std::vector<Mat> cells(grid.cell_count());
  std::vector<bool> seen(grid.cell_count(), false);
  int records = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    int index = -1;
    row >> index;
    if (!row || index < 0 || index >= grid.cell_count() || seen[index])
      throw ConfigError("bad or duplicate cell index in " + path + ": " + line);
    Mat m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double re = 0.0, im = 0.0;
        row >> re;
        if (complex) row >> im;
        if (!row) throw ConfigError("short record for cell " + std::to_string(index) + " in " + path);
        m(i, j) = cplx(re, im);
      }
    }
    cells[index] = m;
    seen[index] = true;
    ++records;
  }
  if (records != grid.cell_count()) throw ConfigError("weight table " + path + " does not cover every cell");
  return MatrixField(grid, std::move(cells));
}

MatrixWeight read_weight_table(const std::string& path) {
  MatrixField f = read_matrix_table(path);
  return MatrixWeight(f.grid(), f.cells());
}

void write_field(const std::string& path, const VectorField& f) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  const GridSpec& g = f.grid();
  out << "# mwlab field dimension=" << g.dimension << " depth=" << g.depth << " n=" << f.size() << "\n";
  for (int c = 0; c < f.cell_count(); ++c) {
    out << c;
    for (int i = 0; i < f.size(); ++i)
      out << ' ' << format_double(f(c, i).real()) << ' ' << format_double(f(c, i).imag());
    out << '\n';
  }
}

VectorField read_field(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty field file " + path);
  const auto h = parse_header(line, "field", path);
  const GridSpec grid = header_grid(h);
  const int n = std::stoi(h.at("n"));
  VectorField f(grid, n);
  std::vector<bool> seen(grid.cell_count(), false);
  int records = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    int index = -1;
    row >> index;
    if (!row || index < 0 || index >= grid.cell_count() || seen[index])
      throw ConfigError("bad or duplicate cell index in " + path + ": " + line);
    for (int i = 0; i < n; ++i) {
      double re = 0.0, im = 0.0;
      row >> re >> im;
      if (!row) throw ConfigError("short record for cell " + std::to_string(index) + " in " + path);
      f(index, i) = cplx(re, im);
    }
    seen[index] = true;
    ++records;
  }
  if (records != grid.cell_count()) throw ConfigError("field file " + path + " does not cover every cell");
  return f;
}

}  // namespace mwlab
