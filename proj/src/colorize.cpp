#include "pars/colorize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pars/errors.hpp"
#include "pars/kernels/kernels.hpp"
#include "pars/parallel.hpp"

namespace pars {

ColormapName colormap_from_name(const std::string& name) {
  if (name == "gray" || name == "grey") return ColormapName::gray;
  if (name == "gray_inv" || name == "grey_inv") return ColormapName::gray_inv;
  if (name == "hot") return ColormapName::hot;
  throw ConfigError("unknown colormap '" + name + "' (gray, gray_inv, hot)");
}

std::array<float, 3> colormap_color(ColormapName map, double t) {
  t = std::clamp(t, 0.0, 1.0);
  switch (map) {
    case ColormapName::gray:
      return {static_cast<float>(t), static_cast<float>(t), static_cast<float>(t)};
    case ColormapName::gray_inv:
      return {static_cast<float>(1.0 - t), static_cast<float>(1.0 - t),
              static_cast<float>(1.0 - t)};
    case ColormapName::hot: {
      const double r = std::clamp(3.0 * t, 0.0, 1.0);
      const double g = std::clamp(3.0 * t - 1.0, 0.0, 1.0);
      const double b = std::clamp(3.0 * t - 2.0, 0.0, 1.0);
      return {static_cast<float>(r), static_cast<float>(g), static_cast<float>(b)};
    }
  }
  return {0.0f, 0.0f, 0.0f};
}

namespace {

// Nearest-rank percentile over the filled nodes.
double percentile(std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  const double pos = p / 100.0 * static_cast<double>(n - 1);
  const std::size_t idx =
      std::min<std::size_t>(n - 1, static_cast<std::size_t>(std::llround(pos)));
  return sorted[idx];
}

std::vector<double> filled_values(const AmplitudeGrid& grid) {
  std::vector<double> vals;
  vals.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (grid.state[k] != NodeState::missing) vals.push_back(grid.values[k]);
  return vals;
}

void resolve_range(const AmplitudeGrid& grid, const ValueRange& range, double& lo, double& hi) {
  if (range.auto_percentile) {
    std::vector<double> vals = filled_values(grid);
    if (vals.empty()) throw EmptyGridError("grid has no filled nodes");
    std::sort(vals.begin(), vals.end());
    lo = percentile(vals, range.p_lo);
    hi = percentile(vals, range.p_hi);
  } else {
    lo = range.min;
    hi = range.max;
  }
}

/// Normalized [0,1] copy of the grid over (lo, hi); missing nodes get 0.
std::vector<double> normalize_grid(const AmplitudeGrid& grid, double lo, double hi) {
  std::vector<double> out(grid.size());
  const double scale = 1.0 / (hi - lo);
  simd::affine_clamp01(grid.values.data(), out.data(), grid.size(), lo, scale);
  for (std::size_t k = 0; k < out.size(); ++k)
    if (grid.state[k] == NodeState::missing) out[k] = 0.0;
  return out;
}

}  // namespace

RgbImage apply_colormap(const AmplitudeGrid& grid, ColormapName map, const ValueRange& range,
                        bool* degenerate_range) {
  double lo, hi;
  resolve_range(grid, range, lo, hi);
  RgbImage img(grid.spec.nx, grid.spec.ny);

  if (degenerate_range) *degenerate_range = false;
  if (!(hi > lo)) {
    if (degenerate_range) *degenerate_range = true;
    const auto mid = colormap_color(map, 0.5);
    for (std::size_t k = 0; k < img.pixels.size(); ++k)
      img.pixels[k] = grid.state[k] == NodeState::missing ? std::array<float, 3>{0, 0, 0} : mid;
    return img;
  }

  std::vector<double> t(grid.size());
  simd::affine_clamp01(grid.values.data(), t.data(), grid.size(), lo, 1.0 / (hi - lo));
  parallel_for(static_cast<std::size_t>(grid.spec.ny), [&](std::size_t j) {
    for (int i = 0; i < grid.spec.nx; ++i) {
      const std::size_t k = j * grid.spec.nx + i;
      img.pixels[k] = grid.state[k] == NodeState::missing ? std::array<float, 3>{0, 0, 0}
                                                          : colormap_color(map, t[k]);
    }
  });
  return img;
}

double otsu_threshold(const std::vector<double>& values) {
  constexpr int kBins = 256;
  double lo = values[0], hi = values[0];
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) return lo;  // flat histogram: everything one class

  std::array<std::uint64_t, kBins> hist{};
  const double scale = kBins / (hi - lo);
  for (double v : values) {
    int b = static_cast<int>((v - lo) * scale);
    b = std::clamp(b, 0, kBins - 1);
    ++hist[b];
  }

  const double total = static_cast<double>(values.size());
  double sum_all = 0.0;
  for (int b = 0; b < kBins; ++b) sum_all += static_cast<double>(b) * static_cast<double>(hist[b]);

  double w0 = 0.0, sum0 = 0.0, best_var = -1.0;
  int best_bin = 0;
  for (int b = 0; b < kBins - 1; ++b) {
    w0 += static_cast<double>(hist[b]);
    if (w0 == 0.0) continue;
    const double w1 = total - w0;
    if (w1 == 0.0) break;
    sum0 += static_cast<double>(b) * static_cast<double>(hist[b]);
    const double mu0 = sum0 / w0;
    const double mu1 = (sum_all - sum0) / w1;
    const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (var > best_var) {
      best_var = var;
      best_bin = b;
    }
  }
  // threshold at the upper edge of the argmax bin
  return lo + (static_cast<double>(best_bin) + 1.0) / kBins * (hi - lo);
}

namespace {

// 3x3 closing; outside-image neighbors count as background for the dilation
// and as tissue for the erosion so the border does not creep.
std::vector<std::uint8_t> morph_close_3x3(const std::vector<std::uint8_t>& mask, int nx, int ny) {
  std::vector<std::uint8_t> dil(mask.size(), 0), out(mask.size(), 0);
  auto at = [&](const std::vector<std::uint8_t>& m, int i, int j, std::uint8_t outside) {
    if (i < 0 || i >= nx || j < 0 || j >= ny) return outside;
    return m[static_cast<std::size_t>(j) * nx + i];
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      std::uint8_t v = 0;
      for (int dj = -1; dj <= 1 && !v; ++dj)
        for (int di = -1; di <= 1 && !v; ++di) v = at(mask, i + di, j + dj, 0);
      dil[static_cast<std::size_t>(j) * nx + i] = v;
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      std::uint8_t v = 1;
      for (int dj = -1; dj <= 1 && v; ++dj)
        for (int di = -1; di <= 1 && v; ++di) v = at(dil, i + di, j + dj, 1);
      out[static_cast<std::size_t>(j) * nx + i] = v;
    }
  return out;
}

}  // namespace

std::vector<std::uint8_t> segment_tissue(const AmplitudeGrid& nuclear_grid,
                                         const SegmentationOptions& opts) {
  const int nx = nuclear_grid.spec.nx;
  const int ny = nuclear_grid.spec.ny;
  if (opts.window_um < nuclear_grid.spec.pitch_um)
    throw InvalidWindowError("density window smaller than one grid pitch");

  const int half = std::max(1, static_cast<int>(std::llround(
                                   0.5 * opts.window_um / nuclear_grid.spec.pitch_um)));

  // summed-area table for the box mean
  std::vector<double> sat(static_cast<std::size_t>(nx + 1) * (ny + 1), 0.0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      sat[static_cast<std::size_t>(j + 1) * (nx + 1) + (i + 1)] =
          nuclear_grid.value(i, j) + sat[static_cast<std::size_t>(j) * (nx + 1) + (i + 1)] +
          sat[static_cast<std::size_t>(j + 1) * (nx + 1) + i] -
          sat[static_cast<std::size_t>(j) * (nx + 1) + i];

  std::vector<double> density(nuclear_grid.size());
  parallel_for(static_cast<std::size_t>(ny), [&](std::size_t j) {
    const int j0 = std::max(0, static_cast<int>(j) - half);
    const int j1 = std::min(ny - 1, static_cast<int>(j) + half);
    for (int i = 0; i < nx; ++i) {
      const int i0 = std::max(0, i - half);
      const int i1 = std::min(nx - 1, i + half);
      const double sum = sat[static_cast<std::size_t>(j1 + 1) * (nx + 1) + (i1 + 1)] -
                         sat[static_cast<std::size_t>(j0) * (nx + 1) + (i1 + 1)] -
                         sat[static_cast<std::size_t>(j1 + 1) * (nx + 1) + i0] +
                         sat[static_cast<std::size_t>(j0) * (nx + 1) + i0];
      const double area = static_cast<double>((i1 - i0 + 1)) * (j1 - j0 + 1);
      density[j * nx + i] = sum / area;
    }
  });

  const double threshold = opts.otsu ? otsu_threshold(density) : opts.explicit_threshold;

  std::vector<std::uint8_t> mask(density.size());
  for (std::size_t k = 0; k < density.size(); ++k) mask[k] = density[k] > threshold ? 1 : 0;
  return morph_close_3x3(mask, nx, ny);
}

StainProfile StainProfile::from_config(const Config& cfg) {
  StainProfile p;
  auto triple = [&cfg](const std::string& key, std::array<float, 3> fallback) {
    const std::vector<double> fb{fallback[0], fallback[1], fallback[2]};
    const auto v = cfg.get_doubles(key, fb);
    if (v.size() != 3) throw ConfigError(key + " needs exactly 3 values");
    return std::array<float, 3>{static_cast<float>(v[0]), static_cast<float>(v[1]),
                                static_cast<float>(v[2])};
  };
  p.hematoxylin_absorbance = triple("hematoxylin_absorbance", p.hematoxylin_absorbance);
  p.eosin_absorbance = triple("eosin_absorbance", p.eosin_absorbance);
  p.k_h = static_cast<float>(cfg.get_double("k_h", p.k_h));
  p.k_e = static_cast<float>(cfg.get_double("k_e", p.k_e));
  p.background_color = triple("background_color", p.background_color);
  p.validate();
  return p;
}

std::string StainProfile::dump() const {
  std::ostringstream os;
  os << "hematoxylin_absorbance = " << hematoxylin_absorbance[0] << " "
     << hematoxylin_absorbance[1] << " " << hematoxylin_absorbance[2] << "\n";
  os << "eosin_absorbance = " << eosin_absorbance[0] << " " << eosin_absorbance[1] << " "
     << eosin_absorbance[2] << "\n";
  os << "k_h = " << k_h << "\n";
  os << "k_e = " << k_e << "\n";
  os << "background_color = " << background_color[0] << " " << background_color[1] << " "
     << background_color[2] << "\n";
  return os.str();
}

void StainProfile::validate() const {
  auto norm2 = [](const std::array<float, 3>& a) {
    return static_cast<double>(a[0]) * a[0] + static_cast<double>(a[1]) * a[1] +
           static_cast<double>(a[2]) * a[2];
  };
  const double nh = norm2(hematoxylin_absorbance);
  const double ne = norm2(eosin_absorbance);
  if (nh <= 0.0 || ne <= 0.0) throw ConfigError("stain absorbance vectors must be non-zero");
  const double dot = static_cast<double>(hematoxylin_absorbance[0]) * eosin_absorbance[0] +
                     static_cast<double>(hematoxylin_absorbance[1]) * eosin_absorbance[1] +
                     static_cast<double>(hematoxylin_absorbance[2]) * eosin_absorbance[2];
  if (dot * dot >= nh * ne * (1.0 - 1e-6))
    throw ConfigError("stain absorbance vectors must not be parallel");
  if (k_h < 0.0f || k_e < 0.0f) throw ConfigError("mixing gains must be >= 0");
}

RgbImage mix_hne(const AmplitudeGrid& grid_250, const AmplitudeGrid& grid_420,
                 const std::vector<std::uint8_t>& mask, const StainProfile& profile) {
  if (grid_250.spec.nx != grid_420.spec.nx || grid_250.spec.ny != grid_420.spec.ny)
    throw ShapeError("dual-wavelength grids differ in geometry");
  if (mask.size() != grid_250.size()) throw ShapeError("mask size does not match grids");
  profile.validate();

  // The two channels come from lasers with very different pulse energies;
  // raw amplitudes are not commensurable, so normalize each on its own.
  double lo_n, hi_n, lo_e, hi_e;
  const ValueRange auto_range;
  resolve_range(grid_250, auto_range, lo_n, hi_n);
  resolve_range(grid_420, auto_range, lo_e, hi_e);
  if (!(hi_n > lo_n)) hi_n = lo_n + 1.0;
  if (!(hi_e > lo_e)) hi_e = lo_e + 1.0;
  const std::vector<double> n01 = normalize_grid(grid_250, lo_n, hi_n);
  const std::vector<double> e01 = normalize_grid(grid_420, lo_e, hi_e);

  RgbImage img(grid_250.spec.nx, grid_250.spec.ny);
  parallel_for(static_cast<std::size_t>(grid_250.spec.ny), [&](std::size_t j) {
    for (int i = 0; i < grid_250.spec.nx; ++i) {
      const std::size_t k = j * grid_250.spec.nx + i;
      if (!mask[k]) {
        img.pixels[k] = profile.background_color;
        continue;
      }
      const double n = n01[k];
      const double e = e01[k];
      for (int c = 0; c < 3; ++c) {
        const double od = profile.k_h * n * profile.hematoxylin_absorbance[c] +
                          profile.k_e * e * profile.eosin_absorbance[c];
        img.pixels[k][c] = static_cast<float>(std::exp(-od));
      }
    }
  });
  return img;
}

}  // namespace pars
