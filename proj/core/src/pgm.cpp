#include "msmooth/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace msmooth {

namespace {

[[noreturn]] void fail_at(const std::string& path, std::istream& in,
                          const std::string& what) {
  const auto pos = in.tellg();
  std::ostringstream msg;
  msg << path << ": " << what << " (byte offset "
      << (pos < 0 ? -1 : static_cast<long long>(pos)) << ")";
  throw IoError(msg.str());
}

// Skips whitespace and '#' comment lines between header tokens.
void skip_separators(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      while (in.good() && in.get() != '\n') {
      }
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_int(std::istream& in, const std::string& path,
                    const char* what) {
  skip_separators(in);
  int v = 0;
  if (!(in >> v) || v < 0) fail_at(path, in, std::string("bad ") + what);
  return v;
}

}  // namespace

Field read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open for reading");

  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (!in || m0 != 'P' || (m1 != '2' && m1 != '5'))
    fail_at(path, in, "not a P2/P5 PGM header");
  const bool binary = m1 == '5';

  const int width = read_header_int(in, path, "width");
  const int height = read_header_int(in, path, "height");
  const int maxval = read_header_int(in, path, "maxval");
  if (width < 2 || height < 2)
    fail_at(path, in, "image must be at least 2x2");
  if (maxval < 1 || maxval > 65535) fail_at(path, in, "maxval out of range");

  Field f(width, height);
  if (binary) {
    // exactly one whitespace byte separates the header from the payload
    const int sep = in.get();
    if (sep != ' ' && sep != '\t' && sep != '\r' && sep != '\n')
      fail_at(path, in, "missing header terminator");
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> row(static_cast<size_t>(width) * bytes);
    for (int j = 0; j < height; ++j) {
      in.read(reinterpret_cast<char*>(row.data()),
              static_cast<std::streamsize>(row.size()));
      if (!in) fail_at(path, in, "truncated pixel payload");
      for (int i = 0; i < width; ++i) {
        const int v = bytes == 1
                          ? row[i]
                          : (row[2 * i] << 8) | row[2 * i + 1];
        if (v > maxval) fail_at(path, in, "sample exceeds maxval");
        f(i, j) = static_cast<double>(v);
      }
    }
  } else {
    for (int j = 0; j < height; ++j)
      for (int i = 0; i < width; ++i) {
        skip_separators(in);
        long v = 0;
        if (!(in >> v) || v < 0 || v > maxval)
          fail_at(path, in, "bad ASCII sample");
        f(i, j) = static_cast<double>(v);
      }
  }
  return f;
}

void write_pgm(const Field& f, const std::string& path, int maxval,
               bool binary) {
  if (f.rank() != 2) throw ConfigError("write_pgm expects a 2D field");
  if (maxval < 1 || maxval > 65535)
    throw ConfigError("maxval must be in [1, 65535]");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");

  const int nx = f.extent(0);
  const int ny = f.extent(1);
  out << (binary ? "P5" : "P2") << "\n" << nx << " " << ny << "\n" << maxval
      << "\n";
  auto quantise = [&](double v) {
    const long q = std::lround(std::clamp(v, 0.0, static_cast<double>(maxval)));
    return static_cast<int>(q);
  };
  if (binary) {
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> row(static_cast<size_t>(nx) * bytes);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const int v = quantise(f(i, j));
        if (bytes == 1) {
          row[i] = static_cast<unsigned char>(v);
        } else {
          row[2 * i] = static_cast<unsigned char>(v >> 8);
          row[2 * i + 1] = static_cast<unsigned char>(v & 0xff);
        }
      }
      out.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(row.size()));
    }
  } else {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i)
        out << quantise(f(i, j)) << (i + 1 == nx ? '\n' : ' ');
    }
  }
  if (!out) throw IoError(path + ": write failed");
}

Field read_csv_1d(const std::string& path, double h) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open for reading");
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      values.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw IoError(path + ": bad sample '" + line + "'");
    }
  }
  if (values.size() < 2) throw IoError(path + ": need at least 2 samples");
  Field f(static_cast<int>(values.size()), h);
  std::copy(values.begin(), values.end(), f.data());
  return f;
}

void write_csv_1d(const Field& f, const std::string& path) {
  if (f.rank() != 1) throw ConfigError("write_csv_1d expects a 1D field");
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  char buf[64];
  for (int i = 0; i < f.extent(0); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g\n", f(i));
    out << buf;
  }
  if (!out) throw IoError(path + ": write failed");
}

}  // namespace msmooth
