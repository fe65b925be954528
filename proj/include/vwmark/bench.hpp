#pragma once

#include <string>
#include <vector>

#include "vwmark/attacks.hpp"
#include "vwmark/frame.hpp"
#include "vwmark/prng.hpp"
#include "vwmark/scheme_dct.hpp"
#include "vwmark/scheme_dwt.hpp"
#include "vwmark/scheme_pca.hpp"
#include "vwmark/scheme_ss.hpp"
#include "vwmark/scheme_svd.hpp"
#include "vwmark/scheme_wms.hpp"

namespace vwmark {

// Everything run_matrix needs besides the clip: payload, per-scheme
// parameters (defaults tuned for the bundled 128x128 clip), master key.
struct BenchConfig {
  std::vector<int> payload_bits;   // empty -> 16 keyed default bits
  Plane watermark_image;           // empty -> bundled default pattern
  SpreadParams ss;
  WmsParams wms;
  DctParams dct;
  DwtParams dwt;
  PcaParams pca;
  SvdParams svd;

  BenchConfig();
};

struct ReportRow {
  std::string scheme;
  std::string attack;        // display form, e.g. GAUSSIAN_NOISE(sigma=5)
  std::string params;        // attack spec JSON echo
  bool has_ber = false;
  double ber = 0.0;          // mean over keys
  bool has_detect_rate = false;
  double detect_rate = 0.0;  // presence rate over keys
  double psnr_embed = 0.0;   // mean PSNR(original, watermarked), dB
  bool has_psnr_attack = false;
  double psnr_attack = 0.0;  // mean PSNR(original, attacked), dB
  bool robust = false;       // ber <= 0.2 or detect_rate >= 0.8
  bool skipped = false;
  std::string skip_reason;
};

struct RobustnessReport {
  std::vector<ReportRow> rows;  // sorted by (scheme, attack)
  std::string clip_id;
  int key_count = 0;
  std::string timestamp;        // empty by default: reports stay byte-stable
};

// Scheme names accepted everywhere: ss, wms, dct, dwt, pca, svd.
bool known_scheme(const std::string& name);

// Embed -> attack -> detect for every (scheme, attack) over all keys and
// aggregate. Per-cell capacity failures mark that row skipped with the
// reason; they never disturb other cells. Unknown scheme names throw
// UsageError up front.
RobustnessReport run_matrix(const VideoClip& clip,
                            const std::vector<std::string>& schemes,
                            const std::vector<AttackSpec>& attacks,
                            const std::vector<WatermarkKey>& keys,
                            const BenchConfig& config);

enum class ReportFormat { JSON, CSV };

// Stable-ordered rendering; same report always yields identical bytes.
// CSV columns: scheme,attack,params,ber,detect_rate,psnr_embed,psnr_attack.
std::string render_report(const RobustnessReport& report, ReportFormat fmt);

}  // namespace vwmark
