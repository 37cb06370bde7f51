#ifndef HENON_RENDER_HPP
#define HENON_RENDER_HPP

#include <string>
#include <vector>

#include "henon/cocycle.hpp"

namespace henon {

struct AlphaRow {
  double theta;   // turns, [0,1)
  Complex value;  // alpha (or alpha/a)
  bool ok;
};

struct AlphaCurve {
  std::vector<AlphaRow> rows;
};

/// alpha on the n-point uniform grid; failed angles become ok=false rows.
/// divide_by_a rescales by 1/a for small-Jacobian figures.
AlphaCurve compute_alpha_curve(CocycleEngine& engine, int n,
                               Trivialization triv, bool divide_by_a = false);

/// Degenerate a=0 curve from the limit formula gamma(theta)/(2 gamma(2theta)^2)
/// (standard) or 1/(2 gamma(theta)) (normalized).
AlphaCurve limit_alpha_curve(const BoettcherContext& ctx, int n,
                             Trivialization triv);

/// CSV schema: theta,re,im,abs,arg,flag with arg in turns in [-1/2, 1/2) and
/// 17 significant digits; bit-faithful round trip.
void write_alpha_csv(const AlphaCurve& curve, const std::string& path);
AlphaCurve read_alpha_csv(const std::string& path);

struct Image {
  int w, h;
  std::vector<unsigned char> rgb;  // w*h*3, row-major

  Image(int w_, int h_) : w(w_), h(h_), rgb(std::size_t(w_) * h_ * 3, 255) {}
  void set(int x, int y, unsigned char r, unsigned char g, unsigned char b);
  void line(double x0, double y0, double x1, double y1, unsigned char r,
            unsigned char g, unsigned char b);
};

/// Minimal PNG encoder (8-bit RGB, single zlib IDAT, no ancillary chunks,
/// byte-stable output).
void write_png(const Image& img, const std::string& path);

/// Curve in the plane (re vs im), polyline in theta order with gaps at
/// failed rows.
void render_plane_curve(const AlphaCurve& curve, const std::string& path,
                        int size = 800);

enum class GraphField { Abs, ArgTurns };

/// Scalar graph vs theta; no unwrapping of the argument.
void render_graph(const AlphaCurve& curve, GraphField field,
                  const std::string& path, int width = 900, int height = 600);

}  // namespace henon

#endif
