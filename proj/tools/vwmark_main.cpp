// Command-line front end: embed, extract, attack, bench, psnr, scenes.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vwmark/attacks.hpp"
#include "vwmark/bench.hpp"
#include "vwmark/clip_io.hpp"
#include "vwmark/errors.hpp"
#include "vwmark/frame.hpp"
#include "vwmark/metrics.hpp"
#include "vwmark/prng.hpp"
#include "vwmark/scene.hpp"
#include "vwmark/scheme_dct.hpp"
#include "vwmark/scheme_dwt.hpp"
#include "vwmark/scheme_pca.hpp"
#include "vwmark/scheme_ss.hpp"
#include "vwmark/scheme_svd.hpp"
#include "vwmark/scheme_wms.hpp"
#include "vwmark/testclip.hpp"

namespace {

using namespace vwmark;
using nlohmann::ordered_json;

uint64_t parse_key_hex(const std::string& text) {
  std::string t = text;
  if (t.size() > 2 && (t[0] == '0') && (t[1] == 'x' || t[1] == 'X')) {
    t = t.substr(2);
  }
  if (t.empty() || t.size() > 16) {
    throw UsageError("key must be 1..16 hex digits, got '" + text + "'");
  }
  uint64_t value = 0;
  for (char c : t) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
    else throw UsageError("key must be hex, got '" + text + "'");
    value = (value << 4) | static_cast<uint64_t>(d);
  }
  return value;
}

bool ends_with_ci(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  for (size_t i = 0; i < suffix.size(); ++i) {
    char a = static_cast<char>(std::tolower(static_cast<unsigned char>(
        s[s.size() - suffix.size() + i])));
    if (a != suffix[i]) return false;
  }
  return true;
}

// "@acceptance" names the bundled synthetic clip; otherwise the extension
// picks the container (.y4m file vs. PNG directory).
VideoClip load_any(const std::string& path) {
  if (path == "@acceptance") return make_acceptance_clip();
  if (ends_with_ci(path, ".y4m")) return load_clip(path, ClipFormat::Y4M_I420);
  return load_clip(path, ClipFormat::PNG_DIR);
}

void save_any(const VideoClip& clip, const std::string& path) {
  if (ends_with_ci(path, ".y4m")) {
    save_clip(clip.colorspace() == Colorspace::YCBCR8
                  ? clip
                  : convert_colorspace(clip, Colorspace::YCBCR8),
              path, ClipFormat::Y4M_I420);
    return;
  }
  save_clip(clip.colorspace() == Colorspace::YCBCR8
                ? convert_colorspace(clip, Colorspace::RGB8)
                : clip,
            path, ClipFormat::PNG_DIR);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<int> read_payload_bits01(const std::string& path) {
  std::vector<int> bits;
  for (char c : read_text_file(path)) {
    if (c == '0') bits.push_back(0);
    else if (c == '1') bits.push_back(1);
    else if (!std::isspace(static_cast<unsigned char>(c)))
      throw UsageError("payload file " + path + " must hold ASCII 0/1 bits");
  }
  if (bits.empty()) throw UsageError("payload file " + path + " is empty");
  return bits;
}

std::vector<int> to_pm1(const std::vector<int>& bits01) {
  std::vector<int> out(bits01.size());
  for (size_t i = 0; i < bits01.size(); ++i) out[i] = bits01[i] > 0 ? 1 : -1;
  return out;
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) {
    size_t a = item.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    size_t b = item.find_last_not_of(" \t");
    out.push_back(item.substr(a, b - a + 1));
  }
  return out;
}

// Shared per-scheme parameter flags; each subcommand materializes only what
// its --scheme uses, everything else keeps the library default.
struct SchemeOpts {
  CLI::App* cmd = nullptr;
  std::string scheme;
  std::string key_text = "0";
  int cr = 0;
  double beta = 0.0;
  std::string band;
  int segment_frames = 0;
  int chips = 0;
  int positions = 0;
  int templates = 0;
  int sync_copies = 0;
  double alpha = 0.0;
  std::string matrix;
  int bits_per_frame = 0;
  double scene_threshold = 0.0;
  int window = 0;
  int tile_side = 0;
  int levels = 0;
  std::string bands;
  std::string highpass;

  bool given(const std::string& name) const { return cmd->count(name) > 0; }
};

void add_scheme_options(CLI::App* cmd, SchemeOpts& s) {
  s.cmd = cmd;
  cmd->add_option("--scheme", s.scheme, "watermarking scheme")
      ->required()
      ->check(CLI::IsMember({"ss", "wms", "dct", "dwt", "pca", "svd"}));
  cmd->add_option("--key", s.key_text, "watermark key, hex64 (default 0)");
  cmd->add_option("--cr", s.cr, "chip rate (ss, dct)");
  cmd->add_option("--beta", s.beta, "embedding strength (ss, dct, wms)");
  cmd->add_option("--band", s.band, "dct zig-zag band as lo..hi");
  cmd->add_option("--N", s.segment_frames, "wms segment length in frames");
  cmd->add_option("--M", s.chips,
                  "wms chips per bit / pca watermark length");
  cmd->add_option("--positions", s.positions,
                  "wms payload positions per segment");
  cmd->add_option("--templates", s.templates, "wms template count");
  cmd->add_option("--sync", s.sync_copies, "wms extra sync position sets");
  cmd->add_option("--alpha", s.alpha, "pca relative strength");
  cmd->add_option("--matrix", s.matrix, "svd factor carrying bits")
      ->check(CLI::IsMember({"S", "U", "V"}));
  cmd->add_option("--bits-per-frame", s.bits_per_frame,
                  "svd diagonal entries used per frame");
  cmd->add_option("--scene-threshold", s.scene_threshold,
                  "scene cut threshold (dwt, pca, svd)");
  cmd->add_option("--window", s.window, "dwt coefficient group size");
  cmd->add_option("--tile-side", s.tile_side, "dwt watermark tile side");
  cmd->add_option("--levels", s.levels, "dwt decomposition depth");
  cmd->add_option("--bands", s.bands, "dwt target bands, e.g. LH3,HL3");
  cmd->add_option("--highpass", s.highpass, "ss detector filter")
      ->check(CLI::IsMember({"laplacian", "temporal"}));
}

std::vector<int> parse_band_range(const std::string& text) {
  size_t dots = text.find("..");
  int lo = 0, hi = 0;
  try {
    if (dots == std::string::npos) throw std::invalid_argument("");
    lo = std::stoi(text.substr(0, dots));
    hi = std::stoi(text.substr(dots + 2));
  } catch (const std::exception&) {
    throw UsageError("--band expects lo..hi, got '" + text + "'");
  }
  if (lo < 1 || hi < lo || hi > 63) {
    throw UsageError("--band range must satisfy 1 <= lo <= hi <= 63");
  }
  std::vector<int> band;
  for (int i = lo; i <= hi; ++i) band.push_back(i);
  return band;
}

std::vector<SubbandRef> parse_bands(const std::string& text) {
  std::vector<SubbandRef> out;
  for (const std::string& token : split_list(text)) {
    if (token.size() < 3) throw UsageError("bad subband '" + token + "'");
    std::string kind = token.substr(0, 2);
    SubbandRef ref;
    if (kind == "LL") ref.kind = SubbandKind::LL;
    else if (kind == "LH") ref.kind = SubbandKind::LH;
    else if (kind == "HL") ref.kind = SubbandKind::HL;
    else if (kind == "HH") ref.kind = SubbandKind::HH;
    else throw UsageError("bad subband '" + token + "'");
    try {
      ref.level = std::stoi(token.substr(2));
    } catch (const std::exception&) {
      throw UsageError("bad subband level in '" + token + "'");
    }
    if (ref.level < 1 || ref.level > 10) {
      throw UsageError("subband level out of range in '" + token + "'");
    }
    out.push_back(ref);
  }
  if (out.empty()) throw UsageError("--bands list is empty");
  return out;
}

SpreadParams make_ss_params(const SchemeOpts& o) {
  SpreadParams p;
  if (o.given("--cr")) p.chip_rate = o.cr;
  if (o.given("--beta")) p.amplitude = o.beta;
  if (o.given("--highpass")) {
    p.highpass = o.highpass == "temporal" ? HighpassKind::TEMPORAL_DIFF
                                          : HighpassKind::LAPLACIAN3X3;
  }
  return p;
}

DctParams make_dct_params(const SchemeOpts& o) {
  DctParams p;
  if (o.given("--cr")) p.chip_rate = o.cr;
  if (o.given("--beta")) p.amplitude = o.beta;
  if (o.given("--band")) p.band = parse_band_range(o.band);
  return p;
}

WmsParams make_wms_params(const SchemeOpts& o) {
  WmsParams p;
  if (o.given("--N")) p.segment_frames = o.segment_frames;
  if (o.given("--M")) p.chips_per_bit = o.chips;
  if (o.given("--beta")) p.beta = o.beta;
  if (o.given("--positions")) p.payload_positions = o.positions;
  if (o.given("--templates")) p.template_count = o.templates;
  if (o.given("--sync")) p.sync_copies = o.sync_copies;
  return p;
}

DwtParams make_dwt_params(const SchemeOpts& o) {
  DwtParams p;
  if (o.given("--levels")) p.levels = o.levels;
  if (o.given("--bands")) p.target_bands = parse_bands(o.bands);
  if (o.given("--window")) p.window = o.window;
  if (o.given("--scene-threshold")) p.scene_threshold = o.scene_threshold;
  if (o.given("--tile-side")) p.tile_side = o.tile_side;
  return p;
}

PcaParams make_pca_params(const SchemeOpts& o) {
  PcaParams p;
  if (o.given("--alpha")) p.alpha = o.alpha;
  if (o.given("--M")) p.chip_count = o.chips;
  if (o.given("--scene-threshold")) p.scene_threshold = o.scene_threshold;
  return p;
}

SvdParams make_svd_params(const SchemeOpts& o) {
  SvdParams p;
  if (o.given("--matrix")) {
    p.matrix_choice = o.matrix == "S"   ? SvdMatrixChoice::S
                      : o.matrix == "U" ? SvdMatrixChoice::U
                                        : SvdMatrixChoice::V;
  }
  if (o.given("--bits-per-frame")) p.per_frame_bits = o.bits_per_frame;
  if (o.given("--scene-threshold")) p.scene_threshold = o.scene_threshold;
  return p;
}

ordered_json db_or_inf(double v) {
  if (std::isinf(v)) return ordered_json("inf");
  return ordered_json(v);
}

std::string bits_to_string(const std::vector<int>& bits) {
  std::string s;
  s.reserve(bits.size());
  for (int b : bits) s.push_back(b > 0 ? '1' : '0');
  return s;
}

void parse_size(const std::string& text, int* w, int* h) {
  size_t x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument("");
    *w = std::stoi(text.substr(0, x));
    *h = std::stoi(text.substr(x + 1));
  } catch (const std::exception&) {
    throw UsageError("--wm-size expects WxH, got '" + text + "'");
  }
  if (*w < 1 || *h < 1) throw UsageError("--wm-size must be positive");
}

struct EmbedOpts {
  SchemeOpts s;
  std::string in, out, payload, watermark;
};

int run_embed(const EmbedOpts& e) {
  VideoClip clip = load_any(e.in);
  WatermarkKey key{parse_key_hex(e.s.key_text)};
  VideoClip reference = clip;
  VideoClip out;
  long long payload_bits = 0;

  if (e.s.scheme == "ss" || e.s.scheme == "dct" || e.s.scheme == "wms" ||
      e.s.scheme == "svd") {
    if (e.payload.empty()) {
      throw UsageError("--payload is required for scheme " + e.s.scheme);
    }
    std::vector<int> bits01 = read_payload_bits01(e.payload);
    payload_bits = static_cast<long long>(bits01.size());
    if (e.s.scheme == "ss") {
      out = ss_embed(clip, to_pm1(bits01), key, make_ss_params(e.s));
    } else if (e.s.scheme == "dct") {
      out = dct_embed(clip, to_pm1(bits01), key, make_dct_params(e.s));
    } else if (e.s.scheme == "wms") {
      out = wms_embed(clip, to_pm1(bits01), key, make_wms_params(e.s));
    } else {
      out = svd_embed(clip, bits01, key, make_svd_params(e.s));
    }
  } else if (e.s.scheme == "dwt") {
    DwtParams p = make_dwt_params(e.s);
    Plane image = e.watermark.empty() ? make_watermark_image()
                                      : load_gray_image(e.watermark);
    int scenes = detect_scenes(clip, p.scene_threshold).scene_count();
    BitplaneWatermark wm = watermark_preprocess(image, scenes, p.tile_side);
    out = dwt_embed(clip, wm, key, p);
    payload_bits =
        static_cast<long long>(wm.tile_count()) * wm.pattern_bits();
  } else {  // pca
    if (clip.colorspace() != Colorspace::RGB8) {
      reference = convert_colorspace(clip, Colorspace::RGB8);
    }
    PcaEmbedRecord rec = pca_embed(reference, key, make_pca_params(e.s));
    out = std::move(rec.clip);
    payload_bits = static_cast<long long>(rec.chips.size());
  }

  save_any(out, e.out);
  FidelityScore f = psnr(reference, out);
  ordered_json j;
  j["scheme"] = e.s.scheme;
  j["payload_bits"] = payload_bits;
  j["frames"] = out.frames.size();
  j["mean_psnr"] = db_or_inf(f.mean_psnr);
  std::cout << j.dump() << "\n";
  return 0;
}

struct ExtractOpts {
  SchemeOpts s;
  std::string in, payload, watermark, wm_out;
  std::string wm_size = "64x64";
  int nbits = 16;
  int scenes = 0;
  bool audit = false;
};

int run_extract(const ExtractOpts& e) {
  VideoClip clip = load_any(e.in);
  WatermarkKey key{parse_key_hex(e.s.key_text)};
  std::optional<std::vector<int>> truth;
  if (!e.payload.empty()) truth = to_pm1(read_payload_bits01(e.payload));
  if (e.nbits < 1) throw UsageError("--nbits must be >= 1");

  if (e.s.scheme == "ss") {
    std::cout << ss_detect(clip, key, make_ss_params(e.s), e.nbits, truth)
                     .to_json()
              << "\n";
  } else if (e.s.scheme == "dct") {
    std::cout << dct_detect(clip, key, make_dct_params(e.s), e.nbits, truth)
                     .to_json()
              << "\n";
  } else if (e.s.scheme == "wms") {
    WmsParams p = make_wms_params(e.s);
    if (e.audit) {
      SceneSegmentation segs = wms_segments(clip, p.segment_frames);
      for (const auto& [begin, end] : segs.scenes) {
        std::cout << detect_template(clip, begin, end, key, p).to_json()
                  << "\n";
      }
    }
    std::cout << wms_detect(clip, key, p, e.nbits, truth).to_json() << "\n";
  } else if (e.s.scheme == "pca") {
    VideoClip rgb = clip.colorspace() == Colorspace::RGB8
                        ? clip
                        : convert_colorspace(clip, Colorspace::RGB8);
    std::cout << pca_detect(rgb, key, make_pca_params(e.s)).to_json() << "\n";
  } else if (e.s.scheme == "svd") {
    SvdExtraction ex = svd_extract(clip, key, make_svd_params(e.s), e.nbits);
    ordered_json j;
    j["bits"] = bits_to_string(ex.bits);
    j["scenes"] = ex.scene_bits.size();
    if (truth) {
      // Missing bits count as half an error each, mismatches as one.
      double errors =
          0.5 * static_cast<double>(e.nbits - static_cast<int>(ex.bits.size()));
      for (size_t i = 0; i < ex.bits.size() && i < truth->size(); ++i) {
        int t = (*truth)[i] > 0 ? 1 : 0;
        if (ex.bits[i] != t) errors += 1.0;
      }
      j["ber_vs_truth"] = errors / static_cast<double>(e.nbits);
    } else {
      j["ber_vs_truth"] = nullptr;
    }
    std::cout << j.dump() << "\n";
  } else {  // dwt
    DwtParams p = make_dwt_params(e.s);
    int scene_count = e.scenes > 0
                          ? e.scenes
                          : detect_scenes(clip, p.scene_threshold).scene_count();
    int wm_w = 0, wm_h = 0;
    parse_size(e.wm_size, &wm_w, &wm_h);
    BitplaneWatermark truth_wm;
    const BitplaneWatermark* truth_ptr = nullptr;
    if (!e.watermark.empty()) {
      truth_wm = watermark_preprocess(load_gray_image(e.watermark),
                                      scene_count, p.tile_side);
      truth_ptr = &truth_wm;
      wm_w = truth_wm.source_width;
      wm_h = truth_wm.source_height;
    }
    DwtDetection det =
        dwt_detect(clip, key, p, scene_count, wm_w, wm_h, truth_ptr);
    if (!e.wm_out.empty()) save_gray_image(det.image, e.wm_out);
    ordered_json j;
    j["scenes_used"] = det.scenes_used;
    j["sync_warning"] = det.sync_warning;
    if (truth_ptr) {
      j["mean_ber"] = det.mean_ber;
    } else {
      j["mean_ber"] = nullptr;
    }
    if (!e.wm_out.empty()) j["watermark"] = e.wm_out;
    std::cout << j.dump() << "\n";
  }
  return 0;
}

struct AttackOpts {
  std::string in, out, spec;
};

int run_attack(const AttackOpts& a) {
  VideoClip clip = load_any(a.in);
  std::vector<AttackSpec> specs = load_attack_list(read_text_file(a.spec));
  for (const AttackSpec& spec : specs) clip = apply_attack(clip, spec);
  save_any(clip, a.out);
  ordered_json j;
  j["attacks"] = specs.size();
  j["frames"] = clip.frames.size();
  std::cout << j.dump() << "\n";
  return 0;
}

struct BenchOpts {
  std::string in = "@acceptance";
  std::string schemes;
  std::string attacks;
  std::string master = "0";
  std::string report = "report.json";
  std::string format;
  std::string timestamp;
  std::string payload;
  int keys = 5;
};

int run_bench(const BenchOpts& b) {
  if (b.keys < 1) throw UsageError("--keys must be >= 1");
  VideoClip clip = load_any(b.in);
  std::vector<std::string> schemes = split_list(b.schemes);
  std::vector<AttackSpec> attacks = load_attack_list(read_text_file(b.attacks));
  std::vector<WatermarkKey> keys =
      derive_keys(WatermarkKey{parse_key_hex(b.master)}, b.keys);
  BenchConfig config;
  if (!b.payload.empty()) {
    config.payload_bits = to_pm1(read_payload_bits01(b.payload));
  }
  RobustnessReport report = run_matrix(clip, schemes, attacks, keys, config);
  report.timestamp = b.timestamp;

  ReportFormat fmt = ReportFormat::JSON;
  if (!b.format.empty()) {
    fmt = b.format == "csv" ? ReportFormat::CSV : ReportFormat::JSON;
  } else if (ends_with_ci(b.report, ".csv")) {
    fmt = ReportFormat::CSV;
  }
  std::string bytes = render_report(report, fmt);
  if (b.report == "-") {
    std::cout << bytes;
    return 0;
  }
  std::ofstream out(b.report, std::ios::binary);
  if (!out) throw UsageError("cannot write " + b.report);
  out << bytes;
  out.close();
  std::cerr << "wrote " << b.report << " (" << report.rows.size()
            << " rows)\n";
  return 0;
}

struct PsnrOpts {
  std::string ref, in;
};

int run_psnr(const PsnrOpts& p) {
  VideoClip ref = load_any(p.ref);
  VideoClip test = load_any(p.in);
  if (test.colorspace() != ref.colorspace()) {
    test = convert_colorspace(test, ref.colorspace());
  }
  FidelityScore f = psnr(ref, test);
  ordered_json j;
  j["frames"] = ref.frames.size();
  j["mean_mse"] = f.mean_mse;
  j["mean_psnr"] = db_or_inf(f.mean_psnr);
  std::cout << j.dump() << "\n";
  return 0;
}

struct ScenesOpts {
  std::string in;
  double threshold = 0.35;
};

int run_scenes(const ScenesOpts& s) {
  VideoClip clip = load_any(s.in);
  std::cout << detect_scenes(clip, s.threshold).to_json() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"video watermarking toolkit"};
  app.require_subcommand(1);

  EmbedOpts embed;
  CLI::App* cmd_embed =
      app.add_subcommand("embed", "embed a watermark into a clip");
  add_scheme_options(cmd_embed, embed.s);
  cmd_embed->add_option("--in", embed.in, "input clip (.y4m, PNG dir, or @acceptance)")
      ->required();
  cmd_embed->add_option("--out", embed.out, "output clip path")->required();
  cmd_embed->add_option("--payload", embed.payload,
                        "payload file of ASCII 0/1 bits (ss, dct, wms, svd)");
  cmd_embed->add_option("--watermark", embed.watermark,
                        "watermark image, PGM/PNG (dwt; default built-in)");

  ExtractOpts extract;
  CLI::App* cmd_extract =
      app.add_subcommand("extract", "detect/extract a watermark");
  add_scheme_options(cmd_extract, extract.s);
  cmd_extract->add_option("--in", extract.in, "input clip")->required();
  cmd_extract->add_option("--nbits", extract.nbits, "payload length in bits");
  cmd_extract->add_option("--payload", extract.payload,
                          "ground-truth payload file for BER");
  cmd_extract->add_option("--watermark", extract.watermark,
                          "ground-truth watermark image (dwt)");
  cmd_extract->add_option("--wm-out", extract.wm_out,
                          "write the recovered watermark image here (dwt)");
  cmd_extract->add_option("--wm-size", extract.wm_size,
                          "recovered watermark size WxH (dwt)");
  cmd_extract->add_option("--scenes", extract.scenes,
                          "embed-time scene count (dwt; default: detect)");
  cmd_extract->add_flag("--audit", extract.audit,
                        "print per-segment template detection JSON (wms)");

  AttackOpts attack;
  CLI::App* cmd_attack =
      app.add_subcommand("attack", "apply an attack spec to a clip");
  cmd_attack->add_option("--in", attack.in, "input clip")->required();
  cmd_attack->add_option("--out", attack.out, "output clip path")->required();
  cmd_attack->add_option("--spec", attack.spec,
                         "JSON attack spec (object or array)")
      ->required();

  BenchOpts bench;
  CLI::App* cmd_bench =
      app.add_subcommand("bench", "run the scheme x attack robustness matrix");
  cmd_bench->add_option("--in", bench.in,
                        "clip to bench (default @acceptance)");
  cmd_bench->add_option("--schemes", bench.schemes,
                        "comma-separated scheme list")
      ->required();
  cmd_bench->add_option("--attacks", bench.attacks, "JSON attack list file")
      ->required();
  cmd_bench->add_option("--keys", bench.keys, "number of derived keys");
  cmd_bench->add_option("--master", bench.master, "master key, hex64");
  cmd_bench->add_option("--report", bench.report,
                        "report path, '-' for stdout (default report.json)");
  cmd_bench->add_option("--format", bench.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_bench->add_option("--timestamp", bench.timestamp,
                        "timestamp string for the report header");
  cmd_bench->add_option("--payload", bench.payload,
                        "payload file of ASCII 0/1 bits (default built-in)");

  PsnrOpts psnr_opts;
  CLI::App* cmd_psnr = app.add_subcommand("psnr", "PSNR between two clips");
  cmd_psnr->add_option("--ref", psnr_opts.ref, "reference clip")->required();
  cmd_psnr->add_option("--in", psnr_opts.in, "test clip")->required();

  ScenesOpts scenes;
  CLI::App* cmd_scenes =
      app.add_subcommand("scenes", "print scene segmentation JSON");
  cmd_scenes->add_option("--in", scenes.in, "input clip")->required();
  cmd_scenes->add_option("--threshold", scenes.threshold,
                         "scene cut threshold in (0, 1]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*cmd_embed) return run_embed(embed);
    if (*cmd_extract) return run_extract(extract);
    if (*cmd_attack) return run_attack(attack);
    if (*cmd_bench) return run_bench(bench);
    if (*cmd_psnr) return run_psnr(psnr_opts);
    if (*cmd_scenes) return run_scenes(scenes);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
