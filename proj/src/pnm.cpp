#include "pars/pnm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pars/errors.hpp"

namespace pars {

void write_pgm16(const std::string& path, int nx, int ny,
                 const std::vector<std::uint16_t>& pixels) {
  if (pixels.size() != static_cast<std::size_t>(nx) * ny)
    throw ShapeError("pixel buffer does not match dimensions");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "P5\n" << nx << " " << ny << "\n65535\n";
  std::vector<std::uint8_t> row(static_cast<std::size_t>(nx) * 2);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::uint16_t v = pixels[static_cast<std::size_t>(j) * nx + i];
      row[2 * i] = static_cast<std::uint8_t>(v >> 8);  // big-endian per netpbm
      row[2 * i + 1] = static_cast<std::uint8_t>(v & 0xff);
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw IoError("write failed: " + path);
}

namespace {

int next_pnm_int(std::istream& in) {
  // skips whitespace and '#' comments
  while (true) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  int v;
  if (!(in >> v)) throw UnsupportedFormatError("malformed PNM header");
  return v;
}

}  // namespace

Pgm16 read_pgm16(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::string magic(2, '\0');
  in.read(magic.data(), 2);
  if (magic != "P5") throw UnsupportedFormatError("not a P5 graymap: " + path);
  Pgm16 img;
  img.nx = next_pnm_int(in);
  img.ny = next_pnm_int(in);
  const int maxval = next_pnm_int(in);
  if (maxval != 65535) throw UnsupportedFormatError("expected 16-bit graymap (maxval 65535)");
  in.get();  // single whitespace after maxval
  img.pixels.resize(static_cast<std::size_t>(img.nx) * img.ny);
  std::vector<std::uint8_t> raw(img.pixels.size() * 2);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw UnsupportedFormatError("truncated graymap: " + path);
  for (std::size_t k = 0; k < img.pixels.size(); ++k)
    img.pixels[k] = static_cast<std::uint16_t>((raw[2 * k] << 8) | raw[2 * k + 1]);
  return img;
}

void write_grid_pgm(const std::string& path, const AmplitudeGrid& grid) {
  double max_amp = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (grid.state[k] != NodeState::missing) max_amp = std::max(max_amp, grid.values[k]);

  std::vector<std::uint16_t> pixels(grid.size(), 0);
  if (max_amp > 0.0) {
    const double scale = 65535.0 / max_amp;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (grid.state[k] == NodeState::missing) continue;
      const double v = std::clamp(grid.values[k] * scale, 0.0, 65535.0);
      pixels[k] = static_cast<std::uint16_t>(std::llround(v));
    }
  }
  write_pgm16(path, grid.spec.nx, grid.spec.ny, pixels);

  std::ofstream side(path + ".txt");
  if (!side) throw IoError("cannot open for writing: " + path + ".txt");
  side << "origin_x_um = " << grid.spec.origin_x_um << "\n";
  side << "origin_y_um = " << grid.spec.origin_y_um << "\n";
  side << "pitch_um = " << grid.spec.pitch_um << "\n";
  side << "wavelength_nm = " << grid.wavelength_nm << "\n";
  side << "nx = " << grid.spec.nx << "\n";
  side << "ny = " << grid.spec.ny << "\n";
  side << "max_amplitude = " << std::hexfloat << max_amp << std::defaultfloat << "\n";
}

AmplitudeGrid read_grid_pgm(const std::string& path) {
  const Pgm16 img = read_pgm16(path);
  const Config side = Config::load(path + ".txt");
  AmplitudeGrid grid;
  grid.spec.nx = img.nx;
  grid.spec.ny = img.ny;
  grid.spec.origin_x_um = side.get_double("origin_x_um", 0.0);
  grid.spec.origin_y_um = side.get_double("origin_y_um", 0.0);
  grid.spec.pitch_um = side.get_double("pitch_um", 1.0);
  grid.wavelength_nm = side.get_double("wavelength_nm", 0.0);
  const double max_amp = side.get_double("max_amplitude", 1.0);
  grid.values.resize(img.pixels.size());
  grid.state.assign(img.pixels.size(), NodeState::direct);
  const double scale = max_amp / 65535.0;
  for (std::size_t k = 0; k < img.pixels.size(); ++k)
    grid.values[k] = static_cast<double>(img.pixels[k]) * scale;
  return grid;
}

void write_field_pgm(const std::string& path, const Field2D& field) {
  std::vector<std::uint16_t> pixels(field.v.size());
  for (std::size_t k = 0; k < field.v.size(); ++k) {
    const double v = std::clamp(static_cast<double>(field.v[k]), 0.0, 1.0);
    pixels[k] = static_cast<std::uint16_t>(std::llround(v * 65535.0));
  }
  write_pgm16(path, field.nx, field.ny, pixels);
}

void write_ppm8(const std::string& path, const RgbImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "P6\n" << image.nx << " " << image.ny << "\n255\n";
  std::vector<std::uint8_t> row(static_cast<std::size_t>(image.nx) * 3);
  for (int j = 0; j < image.ny; ++j) {
    for (int i = 0; i < image.nx; ++i) {
      const auto& px = image.at(i, j);
      for (int c = 0; c < 3; ++c) {
        const float v = std::clamp(px[c], 0.0f, 1.0f);
        row[3 * i + c] = static_cast<std::uint8_t>(std::lround(v * 255.0f));
      }
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace pars
