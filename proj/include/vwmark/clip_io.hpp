#pragma once

#include <string>

#include "vwmark/frame.hpp"

namespace vwmark {

enum class ClipFormat { Y4M_I420, PNG_DIR };

// Y4M_I420: `path` is a .y4m file, YUV4MPEG2 with C420 chroma (C420,
// C420jpeg, C420mpeg2, C420paldv all accepted; a missing C tag means C420).
// Chroma is upsampled by replication; the loaded clip is YCBCR8 with
// full-resolution planes.
//
// PNG_DIR: `path` is a directory; every *.png inside, sorted by filename,
// becomes one frame. 8-bit grayscale -> GRAY8 clip, 8-bit RGB -> RGB8 clip.
// Mixed dimensions or colorspaces throw DimensionError.
//
// Parse failures throw FormatError with the byte offset (Y4M) or the file
// name (PNG) in the message.
VideoClip load_clip(const std::string& path, ClipFormat format);

// Y4M_I420 requires a YCBCR8 clip (chroma subsampled 4:2:0 by taking the
// top-left sample of each 2x2 block). PNG_DIR requires GRAY8 or RGB8 and
// writes frames as %06d.png. Wrong colorspace for the container throws
// UsageError.
void save_clip(const VideoClip& clip, const std::string& path,
               ClipFormat format);

// 8-bit grayscale image I/O for watermark patterns. Reads PGM (P5, maxval
// 255) or PNG by extension; writes by extension likewise.
Plane load_gray_image(const std::string& path);
void save_gray_image(const Plane& image, const std::string& path);

}  // namespace vwmark
