#pragma once

#include <zlib.h>

#include <cstdint>
#include <string>
#include <vector>

#include "eegcloak/errors.hpp"
#include "eegcloak/io_util.hpp"
#include "eegcloak/topomap.hpp"

namespace eegcloak {
namespace detail {

inline void png_chunk(std::string& out, const char type[4], const std::string& payload) {
  BinWriter w;
  auto be32 = [](std::uint32_t v) {
    return std::string{static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                       static_cast<char>(v >> 8), static_cast<char>(v)};
  };
  out += be32(static_cast<std::uint32_t>(payload.size()));
  std::string body(type, 4);
  body += payload;
  out += body;
  const auto crc = crc32(0, reinterpret_cast<const Bytef*>(body.data()),
                         static_cast<uInt>(body.size()));
  out += be32(static_cast<std::uint32_t>(crc));
}

}  // namespace detail

// Minimal 8-bit RGB PNG encoder (filter 0 scanlines, one zlib stream).
inline std::string encode_png_rgb(const std::vector<std::uint8_t>& rgb, int h, int w) {
  std::string raw;
  raw.reserve(static_cast<std::size_t>(h) * (static_cast<std::size_t>(w) * 3 + 1));
  for (int i = 0; i < h; ++i) {
    raw.push_back('\0');  // filter type 0
    raw.append(reinterpret_cast<const char*>(rgb.data() + static_cast<std::size_t>(i) * w * 3),
               static_cast<std::size_t>(w) * 3);
  }
  uLongf zlen = compressBound(static_cast<uLong>(raw.size()));
  std::string z(zlen, '\0');
  if (compress2(reinterpret_cast<Bytef*>(z.data()), &zlen,
                reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
                9) != Z_OK)
    throw IoError("png deflate failed");
  z.resize(zlen);

  std::string out("\x89PNG\r\n\x1a\n", 8);
  BinWriter ihdr;
  auto be32 = [&](std::uint32_t v) {
    ihdr.put<std::uint8_t>(static_cast<std::uint8_t>(v >> 24));
    ihdr.put<std::uint8_t>(static_cast<std::uint8_t>(v >> 16));
    ihdr.put<std::uint8_t>(static_cast<std::uint8_t>(v >> 8));
    ihdr.put<std::uint8_t>(static_cast<std::uint8_t>(v));
  };
  be32(static_cast<std::uint32_t>(w));
  be32(static_cast<std::uint32_t>(h));
  ihdr.put<std::uint8_t>(8);  // bit depth
  ihdr.put<std::uint8_t>(2);  // color type: truecolor
  ihdr.put<std::uint8_t>(0);
  ihdr.put<std::uint8_t>(0);
  ihdr.put<std::uint8_t>(0);
  detail::png_chunk(out, "IHDR", ihdr.buf);
  detail::png_chunk(out, "IDAT", z);
  detail::png_chunk(out, "IEND", "");
  return out;
}

// 8-bit export for human viewing only; quantization is lossy by design.
inline void export_png(const std::filesystem::path& path, const EEGImage& img) {
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(img.h) * img.w * 3);
  for (int i = 0; i < img.h; ++i)
    for (int j = 0; j < img.w; ++j)
      for (int c = 0; c < 3; ++c)
        rgb[(static_cast<std::size_t>(i) * img.w + j) * 3 + c] = static_cast<std::uint8_t>(
            std::lround(std::clamp(img.at(c, i, j), 0.0f, 1.0f) * 255.0f));
  write_file(path, encode_png_rgb(rgb, img.h, img.w));
}

}  // namespace eegcloak
