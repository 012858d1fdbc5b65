#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "eegcloak/delaunay.hpp"
#include "eegcloak/electrodes.hpp"
#include "eegcloak/errors.hpp"
#include "eegcloak/io_util.hpp"
#include "eegcloak/spectral.hpp"

namespace eegcloak {

inline constexpr int kDefaultImageSize = 32;

// Azimuthal equidistant projection about the vertex: radius from the origin
// equals the great-circle distance from (0,0,1).
inline Point2 project_azimuthal(const Vec3& v) {
  const double n = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
  if (std::abs(n - 1.0) > 1e-6) throw NonUnitVector("project_azimuthal expects a unit vector");
  const double r = std::acos(std::clamp(v.z, -1.0, 1.0));
  if (r < 1e-12) return {0.0, 0.0};
  const double phi = std::atan2(v.y, v.x);
  return {r * std::cos(phi), r * std::sin(phi)};
}

// Piecewise-linear interpolation over the Delaunay triangulation of fixed
// sites; outside the convex hull pixels take the nearest site's value.
// Weights are precomputed once so per-trial application is a sparse product.
class GridInterpolator {
 public:
  GridInterpolator(const std::vector<Point2>& sites, int h, int w) : h_(h), w_(w) {
    const auto tris = delaunay_triangulate(sites);

    double xmin = sites[0][0], xmax = xmin, ymin = sites[0][1], ymax = ymin;
    for (const auto& p : sites) {
      xmin = std::min(xmin, p[0]);
      xmax = std::max(xmax, p[0]);
      ymin = std::min(ymin, p[1]);
      ymax = std::max(ymax, p[1]);
    }
    // tight bounding box padded 5% per side, then squared up
    const double pad = 0.05;
    double dx = xmax - xmin, dy = ymax - ymin;
    xmin -= pad * dx;
    xmax += pad * dx;
    ymin -= pad * dy;
    ymax += pad * dy;
    const double side = std::max(xmax - xmin, ymax - ymin);
    const double mx = (xmin + xmax) / 2.0, my = (ymin + ymax) / 2.0;
    x0_ = mx - side / 2.0;
    y0_ = my - side / 2.0;
    side_ = side;

    weights_.resize(static_cast<std::size_t>(h) * w);
    for (int i = 0; i < h; ++i) {
      for (int j = 0; j < w; ++j) {
        const Point2 p = pixel_center(i, j);
        auto& cell = weights_[static_cast<std::size_t>(i) * w + j];
        bool found = false;
        for (const auto& t : tris) {
          const Point2 &a = sites[static_cast<std::size_t>(t.a)],
                       &b = sites[static_cast<std::size_t>(t.b)],
                       &c = sites[static_cast<std::size_t>(t.c)];
          const double area = detail::orient2d(a, b, c);
          if (std::abs(area) < 1e-24) continue;
          const double wa = detail::orient2d(p, b, c) / area;
          const double wb = detail::orient2d(a, p, c) / area;
          const double wc = 1.0 - wa - wb;
          const double tol = -1e-10;
          if (wa >= tol && wb >= tol && wc >= tol) {
            cell = {{t.a, t.b, t.c}, {wa, wb, wc}};
            found = true;
            break;
          }
        }
        if (!found) {
          int best = 0;
          double bd = 1e300;
          for (int s = 0; s < static_cast<int>(sites.size()); ++s) {
            const double ddx = sites[static_cast<std::size_t>(s)][0] - p[0];
            const double ddy = sites[static_cast<std::size_t>(s)][1] - p[1];
            const double d = ddx * ddx + ddy * ddy;
            if (d < bd) {
              bd = d;
              best = s;
            }
          }
          cell = {{best, best, best}, {1.0, 0.0, 0.0}};
        }
      }
    }
  }

  int height() const { return h_; }
  int width() const { return w_; }

  Point2 pixel_center(int i, int j) const {
    // row 0 is the top of the image (largest y, toward the nasion)
    const double x = x0_ + side_ * (w_ > 1 ? static_cast<double>(j) / (w_ - 1) : 0.5);
    const double y = y0_ + side_ * (h_ > 1 ? 1.0 - static_cast<double>(i) / (h_ - 1) : 0.5);
    return {x, y};
  }

  std::vector<double> apply(const std::vector<double>& values) const {
    std::vector<double> grid(static_cast<std::size_t>(h_) * w_);
    for (std::size_t px = 0; px < grid.size(); ++px) {
      const auto& cell = weights_[px];
      grid[px] = cell.w[0] * values[static_cast<std::size_t>(cell.idx[0])] +
                 cell.w[1] * values[static_cast<std::size_t>(cell.idx[1])] +
                 cell.w[2] * values[static_cast<std::size_t>(cell.idx[2])];
    }
    return grid;
  }

 private:
  struct Cell {
    std::array<int, 3> idx{};
    std::array<double, 3> w{};
  };
  int h_, w_;
  double x0_ = 0.0, y0_ = 0.0, side_ = 1.0;
  std::vector<Cell> weights_;
};

inline std::vector<double> interpolate_grid(const std::vector<Point2>& sites,
                                            const std::vector<double>& values, int h, int w) {
  if (sites.size() != values.size()) throw ShapeMismatch("sites/values length mismatch");
  return GridInterpolator(sites, h, w).apply(values);
}

// Per-band affine normalization parameters fit on the training split:
// lo/hi are the 1st/99th percentiles of log(1+power).
struct Normalizer {
  std::array<double, kBands> lo{};
  std::array<double, kBands> hi{};
  double p_lo = 1.0, p_hi = 99.0;
  std::string fit_split = "train";

  double apply(int band, double power) const {
    const double v = std::log1p(power);
    const auto b = static_cast<std::size_t>(band);
    return std::clamp((v - lo[b]) / (hi[b] - lo[b]), 0.0, 1.0);
  }
};

// linearly interpolated percentile, rank = p/100 * (n-1) over sorted values
inline double percentile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double rank = p / 100.0 * static_cast<double>(n - 1);
  const auto i = static_cast<std::size_t>(std::floor(rank));
  if (i + 1 >= n) return sorted[n - 1];
  const double f = rank - static_cast<double>(i);
  return sorted[i] * (1.0 - f) + sorted[i + 1] * f;
}

inline Normalizer fit_normalizer(const std::vector<BandFeatures>& train_features,
                                 double p_lo = 1.0, double p_hi = 99.0) {
  if (train_features.empty()) throw EmptyTrainingSet("no training features to fit normalizer");
  Normalizer norm;
  norm.p_lo = p_lo;
  norm.p_hi = p_hi;
  for (int b = 0; b < kBands; ++b) {
    std::vector<double> vals;
    vals.reserve(train_features.size() * kChannels);
    for (const auto& f : train_features)
      for (int ch = 0; ch < kChannels; ++ch) vals.push_back(std::log1p(f.at(ch, b)));
    std::sort(vals.begin(), vals.end());
    const auto bi = static_cast<std::size_t>(b);
    norm.lo[bi] = percentile_sorted(vals, p_lo);
    norm.hi[bi] = percentile_sorted(vals, p_hi);
    if (!(norm.hi[bi] - norm.lo[bi] > 1e-12))
      throw DegenerateRange(std::string("degenerate normalizer range for band ") +
                            kBandTable[b].name);
  }
  return norm;
}

enum class Provenance : std::uint8_t { real = 0, dummy = 1, disguised = 2 };

// 3-channel float image in [0,1]; channels are theta, alpha, beta -> R, G, B.
struct EEGImage {
  int h = kDefaultImageSize, w = kDefaultImageSize;
  std::vector<float> pixels;  // 3 * h * w, channel-major
  std::string subject_id;
  int alcoholism = 0;
  int stimulus = -1;
  Provenance provenance = Provenance::real;

  float at(int c, int i, int j) const {
    return pixels[(static_cast<std::size_t>(c) * h + i) * w + j];
  }
};

inline std::vector<Point2> project_electrodes(const ElectrodeTable& table) {
  std::vector<Point2> sites;
  sites.reserve(static_cast<std::size_t>(table.size()));
  for (int i = 0; i < table.size(); ++i) sites.push_back(project_azimuthal(table.coord(i)));
  return sites;
}

inline EEGImage assemble_image(const BandFeatures& features, const GridInterpolator& interp,
                               const Normalizer& norm) {
  EEGImage img;
  img.h = interp.height();
  img.w = interp.width();
  img.pixels.resize(static_cast<std::size_t>(kBands) * img.h * img.w);
  std::vector<double> values(kChannels);
  for (int b = 0; b < kBands; ++b) {
    for (int ch = 0; ch < kChannels; ++ch)
      values[static_cast<std::size_t>(ch)] = norm.apply(b, features.at(ch, b));
    const auto grid = interp.apply(values);
    float* dst = img.pixels.data() + static_cast<std::size_t>(b) * img.h * img.w;
    for (std::size_t px = 0; px < grid.size(); ++px)
      dst[px] = static_cast<float>(std::clamp(grid[px], 0.0, 1.0));
  }
  img.subject_id = features.subject_id;
  img.alcoholism = features.alcoholism;
  img.stimulus = features.stimulus;
  img.provenance = Provenance::real;
  return img;
}

inline EEGImage assemble_image(const BandFeatures& features, const ElectrodeTable& table,
                               const Normalizer& norm, int h = kDefaultImageSize,
                               int w = kDefaultImageSize) {
  GridInterpolator interp(project_electrodes(table), h, w);
  return assemble_image(features, interp, norm);
}

// ---- EEGIMG container (bit-exact format) ----
// magic "EIMG", version u32 = 1, H u16, W u16, C u8 = 3, provenance u8,
// alcoholism u8, stimulus u8, length-prefixed subject id, C*H*W float32 LE.

inline std::string eegimg_encode(const EEGImage& img) {
  BinWriter w;
  w.put_bytes("EIMG", 4);
  w.put<std::uint32_t>(1);
  w.put<std::uint16_t>(static_cast<std::uint16_t>(img.h));
  w.put<std::uint16_t>(static_cast<std::uint16_t>(img.w));
  w.put<std::uint8_t>(3);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(img.provenance));
  w.put<std::uint8_t>(static_cast<std::uint8_t>(img.alcoholism));
  w.put<std::uint8_t>(static_cast<std::uint8_t>(img.stimulus));
  w.put_string(img.subject_id);
  w.put_bytes(img.pixels.data(), img.pixels.size() * sizeof(float));
  return std::move(w.buf);
}

inline EEGImage eegimg_decode(const std::string& bytes) {
  BinReader r(bytes);
  char magic[4];
  r.get_bytes(magic, 4);
  if (std::string(magic, 4) != "EIMG") throw IoError("bad EEGIMG magic");
  if (r.get<std::uint32_t>() != 1) throw IoError("unsupported EEGIMG version");
  EEGImage img;
  img.h = r.get<std::uint16_t>();
  img.w = r.get<std::uint16_t>();
  const int c = r.get<std::uint8_t>();
  if (c != 3) throw IoError("EEGIMG channel count must be 3");
  img.provenance = static_cast<Provenance>(r.get<std::uint8_t>());
  img.alcoholism = r.get<std::uint8_t>();
  img.stimulus = static_cast<std::int8_t>(r.get<std::uint8_t>());
  img.subject_id = r.get_string();
  img.pixels.resize(static_cast<std::size_t>(3) * img.h * img.w);
  r.get_bytes(img.pixels.data(), img.pixels.size() * sizeof(float));
  return img;
}

inline void save_eegimg(const std::filesystem::path& p, const EEGImage& img) {
  write_file(p, eegimg_encode(img));
}

inline EEGImage load_eegimg(const std::filesystem::path& p) {
  return eegimg_decode(read_file(p));
}

}  // namespace eegcloak
