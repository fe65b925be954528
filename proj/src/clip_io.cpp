#include "vwmark/clip_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <png.h>

namespace fs = std::filesystem;

namespace vwmark {

namespace {

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("short write to '" + path + "'");
}

[[noreturn]] void y4m_fail(const std::string& what, size_t offset) {
  throw FormatError("y4m: " + what + " at byte " + std::to_string(offset));
}

struct Y4mHeader {
  int width = 0;
  int height = 0;
  double fps = 30.0;
  size_t body_start = 0;
};

Y4mHeader parse_y4m_header(const std::string& bytes) {
  const std::string magic = "YUV4MPEG2";
  if (bytes.rfind(magic, 0) != 0) y4m_fail("bad magic", 0);
  const size_t eol = bytes.find('\n', magic.size());
  if (eol == std::string::npos) y4m_fail("unterminated header", magic.size());

  Y4mHeader h;
  h.body_start = eol + 1;
  std::istringstream tags(bytes.substr(magic.size(), eol - magic.size()));
  std::string tag;
  bool have_w = false, have_h = false;
  while (tags >> tag) {
    switch (tag[0]) {
      case 'W':
        h.width = std::atoi(tag.c_str() + 1);
        have_w = true;
        break;
      case 'H':
        h.height = std::atoi(tag.c_str() + 1);
        have_h = true;
        break;
      case 'F': {
        int num = 0, den = 1;
        if (std::sscanf(tag.c_str() + 1, "%d:%d", &num, &den) == 2 && den > 0 &&
            num > 0)
          h.fps = static_cast<double>(num) / den;
        else
          y4m_fail("bad frame-rate tag '" + tag + "'", magic.size());
        break;
      }
      case 'C':
        // 4:2:0 variants only.
        if (tag.rfind("C420", 0) != 0)
          y4m_fail("unsupported chroma tag '" + tag + "'", magic.size());
        break;
      default:
        break;  // I/A/X tags carry nothing we need
    }
  }
  if (!have_w || !have_h || h.width < 1 || h.height < 1)
    y4m_fail("missing or invalid W/H", magic.size());
  return h;
}

}  // namespace

VideoClip load_clip(const std::string& path, ClipFormat format) {
  if (format == ClipFormat::Y4M_I420) {
    const std::string bytes = read_file_bytes(path);
    const Y4mHeader h = parse_y4m_header(bytes);
    const int w = h.width, ht = h.height;
    const int cw = (w + 1) / 2, ch = (ht + 1) / 2;
    const size_t ysz = static_cast<size_t>(w) * ht;
    const size_t csz = static_cast<size_t>(cw) * ch;

    VideoClip clip;
    clip.fps = h.fps;
    size_t pos = h.body_start;
    while (pos < bytes.size()) {
      if (bytes.compare(pos, 5, "FRAME") != 0) y4m_fail("expected FRAME", pos);
      const size_t eol = bytes.find('\n', pos);
      if (eol == std::string::npos) y4m_fail("unterminated FRAME line", pos);
      pos = eol + 1;
      if (pos + ysz + 2 * csz > bytes.size())
        y4m_fail("truncated frame payload", pos);

      Frame f = Frame::make(w, ht, Colorspace::YCBCR8);
      std::copy_n(bytes.data() + pos, ysz,
                  reinterpret_cast<char*>(f.planes[0].samples.data()));
      // Upsample 4:2:0 chroma by replication.
      for (int plane = 1; plane <= 2; ++plane) {
        const uint8_t* src = reinterpret_cast<const uint8_t*>(
            bytes.data() + pos + ysz + (plane - 1) * csz);
        for (int y = 0; y < ht; ++y)
          for (int x = 0; x < w; ++x)
            f.planes[plane].at(x, y) = src[(y / 2) * cw + (x / 2)];
      }
      pos += ysz + 2 * csz;
      clip.frames.push_back(std::move(f));
    }
    if (clip.frames.empty()) y4m_fail("no frames", h.body_start);
    clip.validate();
    return clip;
  }

  // PNG_DIR
  if (!fs::is_directory(path))
    throw FormatError("png dir: '" + path + "' is not a directory");
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") files.push_back(entry.path().string());
  }
  if (files.empty()) throw FormatError("png dir: no .png files in '" + path + "'");
  std::sort(files.begin(), files.end());

  VideoClip clip;
  for (const std::string& file : files) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, file.c_str()))
      throw FormatError("png: cannot read '" + file + "': " + image.message);
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

    const int w = static_cast<int>(image.width);
    const int ht = static_cast<int>(image.height);
    const int channels = color ? 3 : 1;
    std::vector<uint8_t> buf(static_cast<size_t>(w) * ht * channels);
    if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
      png_image_free(&image);
      throw FormatError("png: decode failed for '" + file + "': " +
                        image.message);
    }

    Frame f = Frame::make(w, ht, color ? Colorspace::RGB8 : Colorspace::GRAY8);
    if (color) {
      for (size_t i = 0; i < static_cast<size_t>(w) * ht; ++i) {
        f.planes[0].samples[i] = buf[3 * i];
        f.planes[1].samples[i] = buf[3 * i + 1];
        f.planes[2].samples[i] = buf[3 * i + 2];
      }
    } else {
      f.planes[0].samples.assign(buf.begin(), buf.end());
    }
    if (!clip.frames.empty() &&
        (f.width != clip.width() || f.height != clip.height() ||
         f.colorspace != clip.colorspace()))
      throw DimensionError("png dir: '" + file + "' disagrees with earlier frames");
    clip.frames.push_back(std::move(f));
  }
  clip.validate();
  return clip;
}

void save_clip(const VideoClip& clip, const std::string& path,
               ClipFormat format) {
  if (clip.frames.empty()) throw UsageError("save_clip: empty clip");
  clip.validate();

  if (format == ClipFormat::Y4M_I420) {
    if (clip.colorspace() != Colorspace::YCBCR8)
      throw UsageError("save_clip: Y4M requires a YCBCR8 clip (convert first)");
    const int w = clip.width(), ht = clip.height();
    const int cw = (w + 1) / 2, ch = (ht + 1) / 2;

    // fps as a rational; trims trailing zeros via the x1000 form.
    int num = static_cast<int>(std::lround(clip.fps * 1000.0));
    int den = 1000;
    if (num % 1000 == 0) {
      num /= 1000;
      den = 1;
    }
    std::ostringstream out;
    out << "YUV4MPEG2 W" << w << " H" << ht << " F" << num << ":" << den
        << " Ip A1:1 C420jpeg\n";
    for (const Frame& f : clip.frames) {
      out << "FRAME\n";
      out.write(reinterpret_cast<const char*>(f.planes[0].samples.data()),
                static_cast<std::streamsize>(f.planes[0].samples.size()));
      // 4:2:0 subsampling: top-left sample of each 2x2 block.
      for (int plane = 1; plane <= 2; ++plane) {
        std::vector<uint8_t> sub(static_cast<size_t>(cw) * ch);
        for (int y = 0; y < ch; ++y)
          for (int x = 0; x < cw; ++x)
            sub[static_cast<size_t>(y) * cw + x] =
                f.planes[plane].at(2 * x, 2 * y);
        out.write(reinterpret_cast<const char*>(sub.data()),
                  static_cast<std::streamsize>(sub.size()));
      }
    }
    write_file_bytes(path, out.str());
    return;
  }

  // PNG_DIR
  if (clip.colorspace() == Colorspace::YCBCR8)
    throw UsageError("save_clip: PNG_DIR takes GRAY8 or RGB8 (convert first)");
  fs::create_directories(path);
  const bool color = clip.colorspace() == Colorspace::RGB8;
  for (int i = 0; i < clip.frame_count(); ++i) {
    const Frame& f = clip.frames[i];
    char name[32];
    std::snprintf(name, sizeof(name), "%06d.png", i);
    const std::string file = (fs::path(path) / name).string();

    std::vector<uint8_t> buf;
    if (color) {
      buf.resize(static_cast<size_t>(f.width) * f.height * 3);
      for (size_t k = 0; k < static_cast<size_t>(f.width) * f.height; ++k) {
        buf[3 * k] = f.planes[0].samples[k];
        buf[3 * k + 1] = f.planes[1].samples[k];
        buf[3 * k + 2] = f.planes[2].samples[k];
      }
    } else {
      buf = f.planes[0].samples;
    }

    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(f.width);
    image.height = static_cast<png_uint_32>(f.height);
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, file.c_str(), 0, buf.data(), 0,
                                 nullptr))
      throw FormatError("png: write failed for '" + file + "': " +
                        image.message);
  }
}

namespace {

Plane load_pgm(const std::string& path) {
  const std::string bytes = read_file_bytes(path);
  if (bytes.rfind("P5", 0) != 0)
    throw FormatError("pgm: '" + path + "' is not binary P5");
  size_t pos = 2;
  auto next_int = [&]() -> int {
    // Skip whitespace and '#' comment lines.
    while (pos < bytes.size()) {
      if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
    size_t start = pos;
    while (pos < bytes.size() &&
           std::isdigit(static_cast<unsigned char>(bytes[pos])))
      ++pos;
    if (start == pos)
      throw FormatError("pgm: bad header in '" + path + "' at byte " +
                        std::to_string(start));
    return std::atoi(bytes.substr(start, pos - start).c_str());
  };
  const int w = next_int();
  const int h = next_int();
  const int maxval = next_int();
  if (w < 1 || h < 1 || maxval != 255)
    throw FormatError("pgm: unsupported geometry/maxval in '" + path + "'");
  ++pos;  // single whitespace byte after maxval
  if (pos + static_cast<size_t>(w) * h > bytes.size())
    throw FormatError("pgm: truncated payload in '" + path + "'");
  Plane out(w, h);
  std::copy_n(bytes.data() + pos, static_cast<size_t>(w) * h,
              reinterpret_cast<char*>(out.samples.data()));
  return out;
}

void save_pgm(const Plane& image, const std::string& path) {
  std::ostringstream out;
  out << "P5\n" << image.width << " " << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.samples.data()),
            static_cast<std::streamsize>(image.samples.size()));
  write_file_bytes(path, out.str());
}

bool has_ext(const std::string& path, const std::string& ext) {
  std::string e = fs::path(path).extension().string();
  std::transform(e.begin(), e.end(), e.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return e == ext;
}

}  // namespace

Plane load_gray_image(const std::string& path) {
  if (has_ext(path, ".pgm")) return load_pgm(path);
  if (!has_ext(path, ".png"))
    throw UsageError("load_gray_image: expected .pgm or .png, got '" + path +
                     "'");
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw FormatError("png: cannot read '" + path + "': " + image.message);
  if ((image.format & PNG_FORMAT_FLAG_COLOR) != 0) {
    png_image_free(&image);
    throw FormatError("png: '" + path + "' is not grayscale");
  }
  image.format = PNG_FORMAT_GRAY;
  Plane out(static_cast<int>(image.width), static_cast<int>(image.height));
  if (!png_image_finish_read(&image, nullptr, out.samples.data(), 0, nullptr))
    throw FormatError("png: decode failed for '" + path + "': " +
                      image.message);
  return out;
}

void save_gray_image(const Plane& image, const std::string& path) {
  if (image.width < 1 || image.height < 1)
    throw UsageError("save_gray_image: empty image");
  if (has_ext(path, ".pgm")) {
    save_pgm(image, path);
    return;
  }
  if (!has_ext(path, ".png"))
    throw UsageError("save_gray_image: expected .pgm or .png, got '" + path +
                     "'");
  png_image out;
  std::memset(&out, 0, sizeof(out));
  out.version = PNG_IMAGE_VERSION;
  out.width = static_cast<png_uint_32>(image.width);
  out.height = static_cast<png_uint_32>(image.height);
  out.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&out, path.c_str(), 0, image.samples.data(), 0,
                               nullptr))
    throw FormatError("png: write failed for '" + path + "': " + out.message);
}

}  // namespace vwmark
