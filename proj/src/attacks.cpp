#include "vwmark/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <json.hpp>

#include "vwmark/dct.hpp"
#include "vwmark/prng.hpp"

namespace vwmark {

namespace {

const char* kKindNames[] = {
    "FRAME_DROP",   "FRAME_AVERAGE",  "FRAME_SWAP", "GAUSSIAN_NOISE",
    "SALT_PEPPER",  "LOSSY_COMPRESS", "CROP",       "SCALE",
    "ROTATE",       "MEDIAN_FILTER",  "LOW_PASS",   "ROW_COL_REMOVAL",
    "IDENTITY",
};

}  // namespace

std::string attack_kind_name(AttackKind k) {
  return kKindNames[static_cast<int>(k)];
}

AttackKind parse_attack_kind(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(AttackKind::IDENTITY); ++i)
    if (name == kKindNames[i]) return static_cast<AttackKind>(i);
  throw UsageError("unknown attack kind '" + name + "'");
}

double AttackSpec::param(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end())
    throw UsageError("attack " + attack_kind_name(kind) +
                     ": missing parameter '" + key + "'");
  return it->second;
}

double AttackSpec::param_or(const std::string& key, double d) const {
  auto it = params.find(key);
  return it == params.end() ? d : it->second;
}

std::string AttackSpec::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = attack_kind_name(kind);
  for (const auto& [k, v] : params) {
    // Integers render without a decimal point so specs round-trip textually.
    if (v == std::floor(v) && std::abs(v) < 1e15)
      j[k] = static_cast<long long>(v);
    else
      j[k] = v;
  }
  if (rng_seed != 0) j["seed"] = rng_seed;
  return j.dump();
}

AttackSpec AttackSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("attack spec: bad JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw FormatError("attack spec: object with a 'kind' string required");
  AttackSpec spec;
  spec.kind = parse_attack_kind(j["kind"].get<std::string>());
  for (const auto& [k, v] : j.items()) {
    if (k == "kind") continue;
    if (k == "seed") {
      if (!v.is_number_unsigned() && !v.is_number_integer())
        throw FormatError("attack spec: 'seed' must be an integer");
      spec.rng_seed = v.get<uint64_t>();
      continue;
    }
    if (!v.is_number())
      throw FormatError("attack spec: parameter '" + k + "' must be numeric");
    spec.params[k] = v.get<double>();
  }
  return spec;
}

std::string AttackSpec::display_name() const {
  if (params.empty()) return attack_kind_name(kind);
  std::string out = attack_kind_name(kind) + "(";
  bool first = true;
  for (const auto& [k, v] : params) {
    if (!first) out += ",";
    first = false;
    char buf[48];
    if (v == std::floor(v) && std::abs(v) < 1e15)
      std::snprintf(buf, sizeof(buf), "%s=%lld", k.c_str(),
                    static_cast<long long>(v));
    else
      std::snprintf(buf, sizeof(buf), "%s=%g", k.c_str(), v);
    out += buf;
  }
  return out + ")";
}

std::vector<AttackSpec> load_attack_list(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("attack list: bad JSON: ") + e.what());
  }
  std::vector<AttackSpec> out;
  if (j.is_object()) {
    out.push_back(AttackSpec::from_json(j.dump()));
    return out;
  }
  if (!j.is_array()) throw FormatError("attack list: array expected");
  for (const auto& item : j) out.push_back(AttackSpec::from_json(item.dump()));
  return out;
}

namespace {

// Derives one RNG stream per (frame, plane) so per-plane work is
// order-independent.
uint64_t plane_stream(const AttackSpec& spec, int frame, int plane) {
  return splitmix64_at(spec.rng_seed,
                       static_cast<uint64_t>(frame) * 4 + plane + 1);
}

void add_gaussian(Plane& p, double sigma, uint64_t seed) {
  GaussianSource g(seed);
  for (uint8_t& s : p.samples)
    s = quantize_u8(static_cast<double>(s) + sigma * g.next());
}

void salt_pepper(Plane& p, double density, uint64_t seed) {
  uint64_t state = seed;
  for (uint8_t& s : p.samples) {
    const double u = uniform01(state);
    if (u < density) s = (uniform01(state) < 0.5) ? 0 : 255;
  }
}

// Standard luminance quantization table, row-major.
const int kQuantTable[64] = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99,
};

void lossy_compress(Plane& p, int quality) {
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  int q[64];
  for (int i = 0; i < 64; ++i)
    q[i] = std::clamp((kQuantTable[i] * scale + 50) / 100, 1, 255);

  const int bw = (p.width + 7) / 8, bh = (p.height + 7) / 8;
  for (int by = 0; by < bh; ++by) {
    for (int bx = 0; bx < bw; ++bx) {
      double block[64];
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
          // Edge replication for partial border blocks.
          const int sx = std::min(bx * 8 + x, p.width - 1);
          const int sy = std::min(by * 8 + y, p.height - 1);
          block[y * 8 + x] = p.at(sx, sy) - 128.0;
        }
      dct8_forward(block);
      for (int i = 0; i < 64; ++i)
        block[i] = std::round(block[i] / q[i]) * q[i];
      dct8_inverse(block);
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
          const int dx = bx * 8 + x, dy = by * 8 + y;
          if (dx < p.width && dy < p.height)
            p.at(dx, dy) = quantize_u8(block[y * 8 + x] + 128.0);
        }
    }
  }
}

void crop_zero_fill(Plane& p, int rx, int ry, int rw, int rh) {
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x)
      if (x < rx || x >= rx + rw || y < ry || y >= ry + rh) p.at(x, y) = 0;
}

// Center-aligned bilinear sample with edge clamping.
double bilinear_at(const std::vector<double>& src, int sw, int sh, double fx,
                   double fy) {
  fx = std::clamp(fx, 0.0, static_cast<double>(sw - 1));
  fy = std::clamp(fy, 0.0, static_cast<double>(sh - 1));
  const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy);
  const int x1 = std::min(x0 + 1, sw - 1), y1 = std::min(y0 + 1, sh - 1);
  const double ax = fx - x0, ay = fy - y0;
  const double top = src[y0 * sw + x0] * (1 - ax) + src[y0 * sw + x1] * ax;
  const double bot = src[y1 * sw + x0] * (1 - ax) + src[y1 * sw + x1] * ax;
  return top * (1 - ay) + bot * ay;
}

std::vector<double> resize_bilinear(const std::vector<double>& src, int sw,
                                    int sh, int dw, int dh) {
  std::vector<double> dst(static_cast<size_t>(dw) * dh);
  for (int y = 0; y < dh; ++y) {
    const double fy = (y + 0.5) * sh / dh - 0.5;
    for (int x = 0; x < dw; ++x) {
      const double fx = (x + 0.5) * sw / dw - 0.5;
      dst[static_cast<size_t>(y) * dw + x] = bilinear_at(src, sw, sh, fx, fy);
    }
  }
  return dst;
}

std::vector<double> plane_to_doubles(const Plane& p) {
  std::vector<double> v(p.samples.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = p.samples[i];
  return v;
}

void doubles_to_plane(const std::vector<double>& v, Plane& p) {
  for (size_t i = 0; i < v.size(); ++i) p.samples[i] = quantize_u8(v[i]);
}

void scale_down_up(Plane& p, double s) {
  const int dw = std::max(1, static_cast<int>(std::lround(p.width * s)));
  const int dh = std::max(1, static_cast<int>(std::lround(p.height * s)));
  auto small = resize_bilinear(plane_to_doubles(p), p.width, p.height, dw, dh);
  auto back = resize_bilinear(small, dw, dh, p.width, p.height);
  doubles_to_plane(back, p);
}

void rotate_bilinear(Plane& p, double theta_deg) {
  const double th = theta_deg * 3.14159265358979323846 / 180.0;
  const double cs = std::cos(th), sn = std::sin(th);
  const double cx = (p.width - 1) / 2.0, cy = (p.height - 1) / 2.0;
  const auto src = plane_to_doubles(p);
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      // Inverse map: rotate destination coordinates back by -theta.
      const double dx = x - cx, dy = y - cy;
      const double sx = cs * dx + sn * dy + cx;
      const double sy = -sn * dx + cs * dy + cy;
      if (sx < 0 || sx > p.width - 1 || sy < 0 || sy > p.height - 1)
        p.at(x, y) = 0;
      else
        p.at(x, y) = quantize_u8(bilinear_at(src, p.width, p.height, sx, sy));
    }
  }
}

void median_filter(Plane& p, int k) {
  const int r = k / 2;
  const Plane src = p;
  std::vector<uint8_t> window;
  window.reserve(static_cast<size_t>(k) * k);
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      window.clear();
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const int sx = std::clamp(x + dx, 0, p.width - 1);
          const int sy = std::clamp(y + dy, 0, p.height - 1);
          window.push_back(src.at(sx, sy));
        }
      std::nth_element(window.begin(), window.begin() + window.size() / 2,
                       window.end());
      p.at(x, y) = window[window.size() / 2];
    }
  }
}

void box_blur(Plane& p, int k) {
  const int r = k / 2;
  const Plane src = p;
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      double acc = 0.0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const int sx = std::clamp(x + dx, 0, p.width - 1);
          const int sy = std::clamp(y + dy, 0, p.height - 1);
          acc += src.at(sx, sy);
        }
      p.at(x, y) = quantize_u8(acc / (k * k));
    }
  }
}

void row_col_removal(Plane& p, int n, uint64_t seed) {
  // Keyed choice of n distinct rows and n distinct columns, shared across
  // planes via the caller's per-frame stream.
  auto pick = [&](int total, uint64_t s) {
    std::vector<int> idx(total);
    for (int i = 0; i < total; ++i) idx[i] = i;
    uint64_t state = s;
    for (int i = 0; i < n; ++i) {
      const int j =
          i + static_cast<int>(splitmix64_next(state) %
                               static_cast<uint64_t>(total - i));
      std::swap(idx[i], idx[j]);
    }
    std::vector<bool> removed(total, false);
    for (int i = 0; i < n; ++i) removed[idx[i]] = true;
    return removed;
  };
  const auto rows_gone = pick(p.height, seed);
  const auto cols_gone = pick(p.width, seed ^ 0x9E3779B97F4A7C15ULL);

  const int sw = p.width - n, sh = p.height - n;
  std::vector<double> shrunk(static_cast<size_t>(sw) * sh);
  int oy = 0;
  for (int y = 0; y < p.height; ++y) {
    if (rows_gone[y]) continue;
    int ox = 0;
    for (int x = 0; x < p.width; ++x) {
      if (cols_gone[x]) continue;
      shrunk[static_cast<size_t>(oy) * sw + ox] = p.at(x, y);
      ++ox;
    }
    ++oy;
  }
  doubles_to_plane(resize_bilinear(shrunk, sw, sh, p.width, p.height), p);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

}  // namespace

VideoClip apply_attack(const VideoClip& clip, const AttackSpec& spec) {
  clip.validate();
  if (clip.frames.empty()) throw UsageError("apply_attack: empty clip");

  VideoClip out = clip;
  switch (spec.kind) {
    case AttackKind::IDENTITY:
      return out;

    case AttackKind::FRAME_DROP: {
      const double p = spec.param("p");
      require(p >= 0.0 && p < 1.0, "FRAME_DROP: p must be in [0,1)");
      uint64_t state = splitmix64_at(spec.rng_seed, 0);
      VideoClip kept;
      kept.fps = clip.fps;
      kept.label = clip.label;
      for (const Frame& f : clip.frames)
        if (uniform01(state) >= p) kept.frames.push_back(f);
      // Never hand back an empty clip; the first frame survives as anchor.
      if (kept.frames.empty()) kept.frames.push_back(clip.frames.front());
      return kept;
    }

    case AttackKind::FRAME_AVERAGE: {
      const int w = static_cast<int>(spec.param("w"));
      require(w >= 3 && w % 2 == 1, "FRAME_AVERAGE: w must be odd and >= 3");
      const int r = w / 2, n = clip.frame_count();
      for (int i = 0; i < n; ++i) {
        for (size_t pl = 0; pl < out.frames[i].planes.size(); ++pl) {
          auto& dst = out.frames[i].planes[pl].samples;
          std::vector<double> acc(dst.size(), 0.0);
          int cnt = 0;
          for (int j = std::max(0, i - r); j <= std::min(n - 1, i + r); ++j) {
            const auto& src = clip.frames[j].planes[pl].samples;
            for (size_t k = 0; k < src.size(); ++k) acc[k] += src[k];
            ++cnt;
          }
          for (size_t k = 0; k < dst.size(); ++k)
            dst[k] = quantize_u8(acc[k] / cnt);
        }
      }
      return out;
    }

    case AttackKind::FRAME_SWAP: {
      const double p = spec.param("p");
      require(p >= 0.0 && p <= 1.0, "FRAME_SWAP: p must be in [0,1]");
      uint64_t state = splitmix64_at(spec.rng_seed, 0);
      // Disjoint adjacent pairs (2k, 2k+1), each swapped independently.
      for (int k = 0; 2 * k + 1 < clip.frame_count(); ++k)
        if (uniform01(state) < p)
          std::swap(out.frames[2 * k], out.frames[2 * k + 1]);
      return out;
    }

    case AttackKind::GAUSSIAN_NOISE: {
      const double sigma = spec.param("sigma");
      require(sigma >= 0.0, "GAUSSIAN_NOISE: sigma must be >= 0");
      for (int i = 0; i < out.frame_count(); ++i)
        for (size_t pl = 0; pl < out.frames[i].planes.size(); ++pl)
          add_gaussian(out.frames[i].planes[pl], sigma,
                       plane_stream(spec, i, static_cast<int>(pl)));
      return out;
    }

    case AttackKind::SALT_PEPPER: {
      const double d = spec.param("d");
      require(d >= 0.0 && d <= 1.0, "SALT_PEPPER: d must be in [0,1]");
      for (int i = 0; i < out.frame_count(); ++i)
        for (size_t pl = 0; pl < out.frames[i].planes.size(); ++pl)
          salt_pepper(out.frames[i].planes[pl], d,
                      plane_stream(spec, i, static_cast<int>(pl)));
      return out;
    }

    case AttackKind::LOSSY_COMPRESS: {
      const int q = static_cast<int>(spec.param("q"));
      require(q >= 1 && q <= 100, "LOSSY_COMPRESS: q must be in [1,100]");
      for (Frame& f : out.frames)
        for (Plane& pl : f.planes) lossy_compress(pl, q);
      return out;
    }

    case AttackKind::CROP: {
      const int x = static_cast<int>(spec.param("x"));
      const int y = static_cast<int>(spec.param("y"));
      const int w = static_cast<int>(spec.param("w"));
      const int h = static_cast<int>(spec.param("h"));
      require(x >= 0 && y >= 0 && w >= 1 && h >= 1 && x + w <= clip.width() &&
                  y + h <= clip.height(),
              "CROP: rectangle out of bounds");
      for (Frame& f : out.frames)
        for (Plane& pl : f.planes) crop_zero_fill(pl, x, y, w, h);
      return out;
    }

    case AttackKind::SCALE: {
      const double s = spec.param("s");
      require(s > 0.0 && s <= 8.0, "SCALE: s must be in (0,8]");
      for (Frame& f : out.frames)
        for (Plane& pl : f.planes) scale_down_up(pl, s);
      return out;
    }

    case AttackKind::ROTATE: {
      const double theta = spec.param("theta");
      for (Frame& f : out.frames)
        for (Plane& pl : f.planes) rotate_bilinear(pl, theta);
      return out;
    }

    case AttackKind::MEDIAN_FILTER: {
      const int k = static_cast<int>(spec.param("k"));
      require(k >= 3 && k % 2 == 1, "MEDIAN_FILTER: k must be odd and >= 3");
      for (Frame& f : out.frames)
        for (Plane& pl : f.planes) median_filter(pl, k);
      return out;
    }

    case AttackKind::LOW_PASS: {
      const int k = static_cast<int>(spec.param("k"));
      require(k >= 3 && k % 2 == 1, "LOW_PASS: k must be odd and >= 3");
      for (Frame& f : out.frames)
        for (Plane& pl : f.planes) box_blur(pl, k);
      return out;
    }

    case AttackKind::ROW_COL_REMOVAL: {
      const int n = static_cast<int>(spec.param("n"));
      require(n >= 1 && n < std::min(clip.width(), clip.height()),
              "ROW_COL_REMOVAL: n must be in [1, min(dims))");
      for (int i = 0; i < out.frame_count(); ++i) {
        const uint64_t fs = plane_stream(spec, i, 0);
        for (Plane& pl : out.frames[i].planes) row_col_removal(pl, n, fs);
      }
      return out;
    }
  }
  throw UsageError("apply_attack: unhandled kind");
}

}  // namespace vwmark
