#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "vwmark/clip_io.hpp"
#include "vwmark/errors.hpp"
#include "vwmark/frame.hpp"
#include "vwmark/metrics.hpp"
#include "vwmark/prng.hpp"
#include "vwmark/testclip.hpp"

using namespace vwmark;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / (tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

bool clips_equal(const VideoClip& a, const VideoClip& b) {
  if (a.frame_count() != b.frame_count()) return false;
  for (int i = 0; i < a.frame_count(); ++i) {
    if (a.frames[i].colorspace != b.frames[i].colorspace) return false;
    if (a.frames[i].planes.size() != b.frames[i].planes.size()) return false;
    for (size_t p = 0; p < a.frames[i].planes.size(); ++p)
      if (a.frames[i].planes[p].samples != b.frames[i].planes[p].samples)
        return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("media") {

TEST_CASE("frame validation catches plane mismatches") {
  Frame f = Frame::make(8, 4, Colorspace::RGB8);
  CHECK_NOTHROW(f.validate());
  f.planes.pop_back();
  CHECK_THROWS_AS(f.validate(), DimensionError);

  Frame g = Frame::make(8, 4, Colorspace::GRAY8);
  g.planes[0].width = 7;
  CHECK_THROWS_AS(g.validate(), DimensionError);

  VideoClip clip;
  clip.frames.push_back(Frame::make(8, 4, Colorspace::GRAY8));
  clip.frames.push_back(Frame::make(8, 5, Colorspace::GRAY8));
  CHECK_THROWS_AS(clip.validate(), DimensionError);
}

TEST_CASE("primary colors land on the BT.601 luma values") {
  Frame f = Frame::make(4, 1, Colorspace::RGB8);
  const uint8_t rgb[4][3] = {{255, 0, 0}, {0, 255, 0}, {0, 0, 255}, {255, 255, 255}};
  for (int x = 0; x < 4; ++x)
    for (int p = 0; p < 3; ++p) f.planes[p].at(x, 0) = rgb[x][p];
  const Frame gray = convert_colorspace(f, Colorspace::GRAY8);
  CHECK(gray.planes[0].at(0, 0) == 76);    // 0.299 * 255
  CHECK(gray.planes[0].at(1, 0) == 150);   // 0.587 * 255
  CHECK(gray.planes[0].at(2, 0) == 29);    // 0.114 * 255
  CHECK(gray.planes[0].at(3, 0) == 255);
}

TEST_CASE("rgb <-> ycbcr round trip stays within quantization error") {
  // Sweep the RGB cube on a coarse lattice.
  Frame f = Frame::make(18 * 18, 18, Colorspace::RGB8);
  for (int b = 0; b < 18; ++b)
    for (int g = 0; g < 18; ++g)
      for (int r = 0; r < 18; ++r) {
        const int x = r * 18 + g;
        f.planes[0].at(x, b) = static_cast<uint8_t>(std::min(255, r * 15));
        f.planes[1].at(x, b) = static_cast<uint8_t>(std::min(255, g * 15));
        f.planes[2].at(x, b) = static_cast<uint8_t>(std::min(255, b * 15));
      }
  const Frame back =
      convert_colorspace(convert_colorspace(f, Colorspace::YCBCR8), Colorspace::RGB8);
  int max_dev = 0;
  double sum_dev = 0;
  size_t n = 0;
  for (int p = 0; p < 3; ++p)
    for (size_t i = 0; i < f.planes[p].samples.size(); ++i) {
      const int d = std::abs(static_cast<int>(f.planes[p].samples[i]) -
                             static_cast<int>(back.planes[p].samples[i]));
      max_dev = std::max(max_dev, d);
      sum_dev += d;
      ++n;
    }
  CHECK(max_dev <= 3);
  CHECK(sum_dev / static_cast<double>(n) <= 1.0);
}

TEST_CASE("gray to rgb replicates channels; converting in place copies") {
  Frame g = Frame::make(3, 2, Colorspace::GRAY8, 90);
  const Frame rgb = convert_colorspace(g, Colorspace::RGB8);
  for (int p = 0; p < 3; ++p)
    CHECK(rgb.planes[p].samples == g.planes[0].samples);
  const Frame same = convert_colorspace(g, Colorspace::GRAY8);
  CHECK(same.planes[0].samples == g.planes[0].samples);
}

TEST_CASE("luma_matrix and with_luma invert on plane-0 colorspaces") {
  VideoClip clip = make_noise_clip(16, 12, 1, 5);
  const Frame& f = clip.frames[0];
  const Mat luma = luma_matrix(f);
  REQUIRE(luma.rows() == 12);
  REQUIRE(luma.cols() == 16);
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 16; ++x) CHECK(luma.at(y, x) == f.planes[0].at(x, y));
  const Frame back = with_luma(f, luma);
  CHECK(back.planes[0].samples == f.planes[0].samples);
}

TEST_CASE("with_luma on rgb preserves the written luma") {
  VideoClip clip = make_acceptance_clip();
  const Frame& f = clip.frames[0];
  Mat luma = luma_matrix(f);
  for (size_t i = 0; i < luma.size(); ++i) luma.data()[i] += 3.0;
  const Frame shifted = with_luma(f, luma);
  const Mat got = luma_matrix(shifted);
  // Chroma quantization perturbs the realized luma slightly.
  CHECK(max_abs_diff(got, luma) < 2.0);
}

TEST_CASE("y4m round trip is exact for block-constant chroma") {
  VideoClip clip;
  uint64_t state = 99;
  for (int i = 0; i < 3; ++i) {
    Frame f = Frame::make(12, 8, Colorspace::YCBCR8);
    const uint64_t chroma_seed = 7000 + i;
    for (int y = 0; y < 8; ++y)
      for (int x = 0; x < 12; ++x) {
        f.planes[0].at(x, y) = static_cast<uint8_t>(splitmix64_next(state) % 256);
        // Chroma constant on each 2x2 block survives 4:2:0 exactly.
        uint64_t c = splitmix64_at(chroma_seed, (y / 2) * 100 + x / 2);
        f.planes[1].at(x, y) = static_cast<uint8_t>(c % 256);
        f.planes[2].at(x, y) = static_cast<uint8_t>((c >> 8) % 256);
      }
    clip.frames.push_back(std::move(f));
  }
  clip.fps = 25.0;

  TempDir dir("vwmark-y4m");
  const std::string path = (dir.path / "clip.y4m").string();
  save_clip(clip, path, ClipFormat::Y4M_I420);
  const VideoClip back = load_clip(path, ClipFormat::Y4M_I420);
  REQUIRE(back.colorspace() == Colorspace::YCBCR8);
  CHECK(back.fps == doctest::Approx(25.0));
  CHECK(clips_equal(clip, back));
}

TEST_CASE("y4m rejects garbage with a byte offset") {
  TempDir dir("vwmark-y4m-bad");
  const std::string path = (dir.path / "bad.y4m").string();
  std::ofstream(path) << "YUV4MPEG3 W4 H4 F30:1\nFRAME\n";
  CHECK_THROWS_AS(load_clip(path, ClipFormat::Y4M_I420), FormatError);
  try {
    load_clip(path, ClipFormat::Y4M_I420);
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
  CHECK_THROWS_AS(load_clip((dir.path / "absent.y4m").string(),
                            ClipFormat::Y4M_I420), FormatError);
}

TEST_CASE("y4m writer requires ycbcr input") {
  TempDir dir("vwmark-y4m-cs");
  VideoClip gray = make_constant_clip(4, 4, 2);
  CHECK_THROWS_AS(save_clip(gray, (dir.path / "x.y4m").string(),
                            ClipFormat::Y4M_I420), UsageError);
}

TEST_CASE("png directory round trip, gray and rgb") {
  TempDir dir("vwmark-pngdir");
  VideoClip gray = make_noise_clip(10, 6, 4, 21);
  const std::string gpath = (dir.path / "gray").string();
  save_clip(gray, gpath, ClipFormat::PNG_DIR);
  CHECK(clips_equal(gray, load_clip(gpath, ClipFormat::PNG_DIR)));

  VideoClip rgb = make_acceptance_clip();
  rgb.frames.resize(2);
  const std::string cpath = (dir.path / "rgb").string();
  save_clip(rgb, cpath, ClipFormat::PNG_DIR);
  const VideoClip back = load_clip(cpath, ClipFormat::PNG_DIR);
  REQUIRE(back.colorspace() == Colorspace::RGB8);
  CHECK(clips_equal(rgb, back));
}

TEST_CASE("png directory rejects mixed dimensions") {
  TempDir dir("vwmark-pngmix");
  save_gray_image(Plane(8, 8, 10), (dir.path / "000001.png").string());
  save_gray_image(Plane(9, 8, 10), (dir.path / "000002.png").string());
  CHECK_THROWS_AS(load_clip(dir.str(), ClipFormat::PNG_DIR), DimensionError);
}

TEST_CASE("png directory edge errors") {
  TempDir dir("vwmark-pngempty");
  CHECK_THROWS_AS(load_clip(dir.str(), ClipFormat::PNG_DIR), FormatError);
  CHECK_THROWS_AS(load_clip((dir.path / "nope").string(), ClipFormat::PNG_DIR),
                  FormatError);
}

TEST_CASE("gray image io round trips through pgm and png") {
  TempDir dir("vwmark-gray");
  Plane img = make_watermark_image(32, 20);
  for (const char* name : {"wm.pgm", "wm.png"}) {
    const std::string path = (dir.path / name).string();
    save_gray_image(img, path);
    const Plane back = load_gray_image(path);
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    CHECK(back.samples == img.samples);
  }
  CHECK_THROWS_AS(load_gray_image((dir.path / "wm.bmp").string()), UsageError);
  CHECK_THROWS_AS(load_gray_image((dir.path / "absent.pgm").string()),
                  FormatError);
}

TEST_CASE("psnr basics") {
  VideoClip a = make_constant_clip(8, 8, 2, 100);
  const FidelityScore same = psnr(a, a);
  CHECK(std::isinf(same.mean_psnr));

  VideoClip b = a;
  for (auto& s : b.frames[0].planes[0].samples) s += 10;
  for (auto& s : b.frames[1].planes[0].samples) s += 10;
  const FidelityScore off = psnr(a, b);
  CHECK(off.mean_mse == doctest::Approx(100.0));
  CHECK(off.mean_psnr == doctest::Approx(10.0 * std::log10(255.0 * 255.0 / 100.0)));

  VideoClip c = make_constant_clip(8, 8, 3, 100);
  CHECK_THROWS_AS(psnr(a, c), DimensionError);
}

TEST_CASE("ber counts mismatches over either alphabet") {
  CHECK(ber({1, 0, 1, 1}, {1, 0, 1, 1}) == 0.0);
  CHECK(ber({1, 0, 1, 1}, {0, 1, 0, 0}) == 1.0);
  CHECK(ber({1, 1, 1, 1, 1, 1, 1, 1}, {1, 1, 1, 1, 1, 1, 1, 0}) ==
        doctest::Approx(0.125));
  // {-1,+1} and {0,1} codings agree.
  CHECK(ber({-1, 1, -1, 1}, {0, 1, 0, 1}) == 0.0);
  CHECK_THROWS_AS(ber({1, 0}, {1}), UsageError);
  CHECK_THROWS_AS(ber({}, {}), UsageError);
}

TEST_CASE("bundled clips are deterministic") {
  const VideoClip a = make_acceptance_clip();
  const VideoClip b = make_acceptance_clip();
  REQUIRE(a.frame_count() == 64);
  REQUIRE(a.width() == 128);
  REQUIRE(a.height() == 128);
  REQUIRE(a.colorspace() == Colorspace::RGB8);
  CHECK(clips_equal(a, b));

  const VideoClip n1 = make_noise_clip(8, 8, 2, 7);
  const VideoClip n2 = make_noise_clip(8, 8, 2, 7);
  CHECK(clips_equal(n1, n2));

  const Plane w1 = make_watermark_image();
  const Plane w2 = make_watermark_image();
  CHECK(w1.samples == w2.samples);
}

}  // TEST_SUITE
