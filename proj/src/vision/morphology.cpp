#include "fftg/vision.hpp"

namespace fftg::vision {
namespace {

PixelSet cross_step(const PixelSet& in, bool grow) {
  const int w = in.width(), h = in.height();
  PixelSet out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const bool c = in.test(x, y);
      const bool l = in.contains(x - 1, y), r = in.contains(x + 1, y);
      const bool u = in.contains(x, y - 1), d = in.contains(x, y + 1);
      out.set(x, y, grow ? (c || l || r || u || d) : (c && l && r && u && d));
    }
  }
  return out;
}

PixelSet iterate(const PixelSet& mask, int radius, bool grow) {
  if (radius < 0) throw Error(ErrorCode::InvalidArgument, "morphology radius must be non-negative");
  PixelSet out = mask;
  for (int i = 0; i < radius; ++i) out = cross_step(out, grow);
  return out;
}

}  // namespace

PixelSet dilate(const PixelSet& mask, int radius) { return iterate(mask, radius, true); }
PixelSet erode(const PixelSet& mask, int radius) { return iterate(mask, radius, false); }

}  // namespace fftg::vision
