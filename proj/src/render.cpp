#include "henon/render.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "henon/parallel.hpp"

namespace henon {

AlphaCurve compute_alpha_curve(CocycleEngine& engine, int n,
                               Trivialization triv, bool divide_by_a) {
  AlphaCurve curve;
  curve.rows.resize(n);
  parallel_for(n, engine.workers(), [&](int i) {
    const Angle t = Angle::rational(i, n);
    AlphaRow row{t.turns(), Complex(std::numeric_limits<double>::quiet_NaN(),
                                    std::numeric_limits<double>::quiet_NaN()),
                 false};
    try {
      const CocycleSample s = triv == Trivialization::Standard
                                  ? engine.alpha_std(t)
                                  : engine.alpha_normalized(t);
      row.value = divide_by_a ? s.alpha / engine.params().a : s.alpha;
      row.ok = s.converged;
    } catch (const Error&) {
    }
    curve.rows[i] = row;
  });
  return curve;
}

AlphaCurve limit_alpha_curve(const BoettcherContext& ctx, int n,
                             Trivialization triv) {
  AlphaCurve curve;
  curve.rows.resize(n);
  for (int i = 0; i < n; ++i) {
    const Angle t = Angle::rational(i, n);
    const Complex g1 = caratheodory(ctx, t).value;
    const Complex g2 = caratheodory(ctx, t.doubled()).value;
    // normalized gauge u = gamma^2 turns gamma/(2 gamma(2theta)^2) into
    // 1/(2 gamma(theta))
    const Complex v = triv == Trivialization::Standard
                          ? g1 / (2.0 * g2 * g2)
                          : 1.0 / (2.0 * g1);
    curve.rows[i] = {t.turns(), v, true};
  }
  return curve;
}

namespace {

double arg_turns(Complex v) {
  double t = std::arg(v) / kTwoPi;  // (-1/2, 1/2]
  if (t >= 0.5) t -= 1.0;
  return t;
}

}  // namespace

void write_alpha_csv(const AlphaCurve& curve, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::fputs("theta,re,im,abs,arg,flag\n", f);
  for (const AlphaRow& r : curve.rows)
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.theta,
                 r.value.real(), r.value.imag(), std::abs(r.value),
                 arg_turns(r.value), r.ok ? 1 : 0);
  if (std::fclose(f) != 0) throw std::runtime_error("write failed: " + path);
}

AlphaCurve read_alpha_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  std::getline(in, line);  // header
  AlphaCurve curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    // strtod-based split so that nan/inf fields (failed rows) parse
    double v[6];
    const char* p = line.c_str();
    bool ok = true;
    for (int i = 0; i < 6 && ok; ++i) {
      char* end = nullptr;
      v[i] = std::strtod(p, &end);
      if (end == p || (i < 5 && *end != ',')) ok = false;
      p = end + 1;
    }
    if (!ok) throw std::runtime_error("bad CSV row in " + path + ": " + line);
    curve.rows.push_back({v[0], Complex(v[1], v[2]), v[5] != 0.0});
  }
  return curve;
}

void Image::set(int x, int y, unsigned char r, unsigned char g,
                unsigned char b) {
  if (x < 0 || y < 0 || x >= w || y >= h) return;
  const std::size_t i = (std::size_t(y) * w + x) * 3;
  rgb[i] = r;
  rgb[i + 1] = g;
  rgb[i + 2] = b;
}

void Image::line(double x0, double y0, double x1, double y1, unsigned char r,
                 unsigned char g, unsigned char b) {
  const double dx = x1 - x0, dy = y1 - y0;
  const int steps = std::max(1, int(std::ceil(std::max(std::abs(dx), std::abs(dy)))));
  for (int i = 0; i <= steps; ++i) {
    const double t = double(i) / steps;
    set(int(std::lround(x0 + t * dx)), int(std::lround(y0 + t * dy)), r, g, b);
  }
}

namespace {

void put_be32(std::vector<unsigned char>& v, std::uint32_t x) {
  v.push_back(x >> 24);
  v.push_back((x >> 16) & 0xff);
  v.push_back((x >> 8) & 0xff);
  v.push_back(x & 0xff);
}

void put_chunk(std::vector<unsigned char>& out, const char type[4],
               const std::vector<unsigned char>& data) {
  put_be32(out, std::uint32_t(data.size()));
  const std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const uLong crc = crc32(0, out.data() + start, uInt(out.size() - start));
  put_be32(out, std::uint32_t(crc));
}

}  // namespace

void write_png(const Image& img, const std::string& path) {
  // filter byte 0 per scanline
  std::vector<unsigned char> raw;
  raw.reserve(std::size_t(img.h) * (1 + std::size_t(img.w) * 3));
  for (int y = 0; y < img.h; ++y) {
    raw.push_back(0);
    const unsigned char* row = img.rgb.data() + std::size_t(y) * img.w * 3;
    raw.insert(raw.end(), row, row + std::size_t(img.w) * 3);
  }
  uLongf bound = compressBound(uLong(raw.size()));
  std::vector<unsigned char> comp(bound);
  if (compress2(comp.data(), &bound, raw.data(), uLong(raw.size()), 9) != Z_OK)
    throw std::runtime_error("zlib compression failed");
  comp.resize(bound);

  std::vector<unsigned char> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  std::vector<unsigned char> ihdr;
  put_be32(ihdr, std::uint32_t(img.w));
  put_be32(ihdr, std::uint32_t(img.h));
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(2);  // RGB
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT", comp);
  put_chunk(out, "IEND", {});

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(out.data()), std::streamsize(out.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

namespace {

struct Box {
  double xmin, xmax, ymin, ymax;
  void grow(double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  void pad() {
    const double mx = 0.05 * std::max(xmax - xmin, 1e-12);
    const double my = 0.05 * std::max(ymax - ymin, 1e-12);
    xmin -= mx;
    xmax += mx;
    ymin -= my;
    ymax += my;
  }
};

Box empty_box() {
  const double inf = std::numeric_limits<double>::infinity();
  return {inf, -inf, inf, -inf};
}

void draw_axes(Image& img, const Box& b, double px_per_x, double px_per_y) {
  // zero lines if they cross the window, plus a frame
  auto sx = [&](double x) { return (x - b.xmin) * px_per_x; };
  auto sy = [&](double y) { return img.h - 1 - (y - b.ymin) * px_per_y; };
  if (b.xmin < 0 && b.xmax > 0)
    img.line(sx(0), 0, sx(0), img.h - 1, 200, 200, 200);
  if (b.ymin < 0 && b.ymax > 0)
    img.line(0, sy(0), img.w - 1, sy(0), 200, 200, 200);
  img.line(0, 0, img.w - 1, 0, 120, 120, 120);
  img.line(0, img.h - 1, img.w - 1, img.h - 1, 120, 120, 120);
  img.line(0, 0, 0, img.h - 1, 120, 120, 120);
  img.line(img.w - 1, 0, img.w - 1, img.h - 1, 120, 120, 120);
  // edge ticks at quarters
  for (int i = 1; i < 4; ++i) {
    img.line(img.w * i / 4, img.h - 1, img.w * i / 4, img.h - 6, 120, 120, 120);
    img.line(0, img.h * i / 4, 5, img.h * i / 4, 120, 120, 120);
  }
}

void plot_xy(const std::vector<std::pair<double, double>>& pts,
             const std::vector<bool>& ok, const std::string& path, int w,
             int h) {
  Box b = empty_box();
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (ok[i]) b.grow(pts[i].first, pts[i].second);
  if (!(b.xmin <= b.xmax)) throw std::runtime_error("no finite points to plot");
  b.pad();
  Image img(w, h);
  const double px = (w - 1) / (b.xmax - b.xmin);
  const double py = (h - 1) / (b.ymax - b.ymin);
  draw_axes(img, b, px, py);
  auto sx = [&](double x) { return (x - b.xmin) * px; };
  auto sy = [&](double y) { return h - 1 - (y - b.ymin) * py; };
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!ok[i] || !ok[i + 1]) continue;  // gap at failed rows
    img.line(sx(pts[i].first), sy(pts[i].second), sx(pts[i + 1].first),
             sy(pts[i + 1].second), 30, 30, 140);
  }
  write_png(img, path);
}

}  // namespace

void render_plane_curve(const AlphaCurve& curve, const std::string& path,
                        int size) {
  std::vector<std::pair<double, double>> pts;
  std::vector<bool> ok;
  for (const AlphaRow& r : curve.rows) {
    pts.emplace_back(r.value.real(), r.value.imag());
    ok.push_back(r.ok && std::isfinite(r.value.real()) &&
                 std::isfinite(r.value.imag()));
  }
  // close the loop
  if (!pts.empty()) {
    pts.push_back(pts.front());
    ok.push_back(ok.front());
  }
  plot_xy(pts, ok, path, size, size);
}

void render_graph(const AlphaCurve& curve, GraphField field,
                  const std::string& path, int width, int height) {
  std::vector<std::pair<double, double>> pts;
  std::vector<bool> ok;
  for (const AlphaRow& r : curve.rows) {
    const double v = field == GraphField::Abs ? std::abs(r.value)
                                              : arg_turns(r.value);
    pts.emplace_back(r.theta, v);
    ok.push_back(r.ok && std::isfinite(v));
  }
  plot_xy(pts, ok, path, width, height);
}

}  // namespace henon
