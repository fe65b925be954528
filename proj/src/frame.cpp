#include "vwmark/frame.hpp"

namespace vwmark {

std::string colorspace_name(Colorspace cs) {
  switch (cs) {
    case Colorspace::GRAY8: return "GRAY8";
    case Colorspace::RGB8: return "RGB8";
    case Colorspace::YCBCR8: return "YCBCR8";
  }
  return "?";
}

static int plane_count_for(Colorspace cs) {
  return cs == Colorspace::GRAY8 ? 1 : 3;
}

Frame Frame::make(int w, int h, Colorspace cs, uint8_t fill) {
  if (w < 1 || h < 1) throw UsageError("Frame::make: empty dimensions");
  Frame f;
  f.width = w;
  f.height = h;
  f.colorspace = cs;
  f.planes.assign(plane_count_for(cs), Plane(w, h, fill));
  return f;
}

void Frame::validate() const {
  if (static_cast<int>(planes.size()) != plane_count_for(colorspace))
    throw DimensionError("Frame: plane count does not match colorspace");
  for (const Plane& p : planes) {
    if (p.width != width || p.height != height ||
        p.samples.size() != static_cast<size_t>(width) * height)
      throw DimensionError("Frame: plane dimensions disagree");
  }
}

void VideoClip::validate() const {
  for (const Frame& f : frames) {
    f.validate();
    if (f.width != width() || f.height != height() ||
        f.colorspace != colorspace())
      throw DimensionError("VideoClip: frames disagree in shape/colorspace");
  }
}

namespace {

struct Ycc {
  double y, cb, cr;
};

inline Ycc rgb_to_ycc(double r, double g, double b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  return {y, 128.0 + (b - y) * 0.564, 128.0 + (r - y) * 0.713};
}

inline void ycc_to_rgb(double y, double cb, double cr, double& r, double& g,
                       double& b) {
  b = (cb - 128.0) / 0.564 + y;
  r = (cr - 128.0) / 0.713 + y;
  g = (y - 0.299 * r - 0.114 * b) / 0.587;
}

}  // namespace

Frame convert_colorspace(const Frame& f, Colorspace target) {
  f.validate();
  if (f.colorspace == target) return f;

  const int w = f.width, h = f.height;
  if (f.colorspace == Colorspace::RGB8 && target == Colorspace::YCBCR8) {
    Frame out = Frame::make(w, h, target);
    for (size_t i = 0; i < f.planes[0].samples.size(); ++i) {
      const Ycc c = rgb_to_ycc(f.planes[0].samples[i], f.planes[1].samples[i],
                               f.planes[2].samples[i]);
      out.planes[0].samples[i] = quantize_u8(c.y);
      out.planes[1].samples[i] = quantize_u8(c.cb);
      out.planes[2].samples[i] = quantize_u8(c.cr);
    }
    return out;
  }
  if (f.colorspace == Colorspace::YCBCR8 && target == Colorspace::RGB8) {
    Frame out = Frame::make(w, h, target);
    for (size_t i = 0; i < f.planes[0].samples.size(); ++i) {
      double r, g, b;
      ycc_to_rgb(f.planes[0].samples[i], f.planes[1].samples[i],
                 f.planes[2].samples[i], r, g, b);
      out.planes[0].samples[i] = quantize_u8(r);
      out.planes[1].samples[i] = quantize_u8(g);
      out.planes[2].samples[i] = quantize_u8(b);
    }
    return out;
  }
  if (f.colorspace == Colorspace::RGB8 && target == Colorspace::GRAY8) {
    Frame out = Frame::make(w, h, target);
    for (size_t i = 0; i < f.planes[0].samples.size(); ++i) {
      const Ycc c = rgb_to_ycc(f.planes[0].samples[i], f.planes[1].samples[i],
                               f.planes[2].samples[i]);
      out.planes[0].samples[i] = quantize_u8(c.y);
    }
    return out;
  }
  if (f.colorspace == Colorspace::GRAY8 && target == Colorspace::RGB8) {
    Frame out = Frame::make(w, h, target);
    out.planes[0] = f.planes[0];
    out.planes[1] = f.planes[0];
    out.planes[2] = f.planes[0];
    return out;
  }
  throw UsageError("convert_colorspace: unsupported pair " +
                   colorspace_name(f.colorspace) + " -> " +
                   colorspace_name(target));
}

VideoClip convert_colorspace(const VideoClip& clip, Colorspace target) {
  VideoClip out;
  out.fps = clip.fps;
  out.label = clip.label;
  out.frames.reserve(clip.frames.size());
  for (const Frame& f : clip.frames) out.frames.push_back(convert_colorspace(f, target));
  return out;
}

Mat luma_matrix(const Frame& f) {
  f.validate();
  Mat m(f.height, f.width);
  if (f.colorspace == Colorspace::RGB8) {
    for (int y = 0; y < f.height; ++y)
      for (int x = 0; x < f.width; ++x)
        m.at(y, x) = 0.299 * f.planes[0].at(x, y) + 0.587 * f.planes[1].at(x, y) +
                     0.114 * f.planes[2].at(x, y);
  } else {
    for (int y = 0; y < f.height; ++y)
      for (int x = 0; x < f.width; ++x) m.at(y, x) = f.planes[0].at(x, y);
  }
  return m;
}

Frame with_luma(const Frame& f, const Mat& luma) {
  f.validate();
  if (luma.rows() != f.height || luma.cols() != f.width)
    throw DimensionError("with_luma: luma shape mismatch");

  if (f.colorspace == Colorspace::RGB8) {
    Frame ycc = convert_colorspace(f, Colorspace::YCBCR8);
    for (int y = 0; y < f.height; ++y)
      for (int x = 0; x < f.width; ++x)
        ycc.planes[0].at(x, y) = quantize_u8(luma.at(y, x));
    return convert_colorspace(ycc, Colorspace::RGB8);
  }
  Frame out = f;
  for (int y = 0; y < f.height; ++y)
    for (int x = 0; x < f.width; ++x)
      out.planes[0].at(x, y) = quantize_u8(luma.at(y, x));
  return out;
}

}  // namespace vwmark
