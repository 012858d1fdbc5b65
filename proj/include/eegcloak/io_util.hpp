#pragma once

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "eegcloak/errors.hpp"

namespace eegcloak {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return s;
}

inline void write_file(const std::filesystem::path& p, const std::string& contents) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("short write to " + p.string());
}

// Reads a file, transparently inflating gzip (0x1f 0x8b magic).
inline std::string read_text_maybe_gz(const std::filesystem::path& p) {
  std::string raw = read_file(p);
  if (raw.size() < 2 || static_cast<unsigned char>(raw[0]) != 0x1f ||
      static_cast<unsigned char>(raw[1]) != 0x8b)
    return raw;
  gzFile f = gzopen(p.string().c_str(), "rb");
  if (!f) throw IoError("gzopen failed for " + p.string());
  std::string out;
  char buf[1 << 16];
  int n = 0;
  while ((n = gzread(f, buf, sizeof(buf))) > 0) out.append(buf, static_cast<std::size_t>(n));
  bool bad = n < 0;
  gzclose(f);
  if (bad) throw IoError("gzip inflate failed for " + p.string());
  return out;
}

// Little-endian binary cursor helpers (host is assumed little-endian; this is
// checked once at startup by the CLI).
struct BinWriter {
  std::string buf;
  template <typename T>
  void put(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    buf.append(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void put_bytes(const void* p, std::size_t n) {
    buf.append(static_cast<const char*>(p), n);
  }
  void put_string(const std::string& s) {
    put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    buf.append(s);
  }
};

struct BinReader {
  const std::string& buf;
  std::size_t pos = 0;
  explicit BinReader(const std::string& b) : buf(b) {}
  template <typename T>
  T get() {
    static_assert(std::is_trivially_copyable_v<T>);
    if (pos + sizeof(T) > buf.size()) throw IoError("truncated binary payload");
    T v;
    std::memcpy(&v, buf.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
  }
  void get_bytes(void* p, std::size_t n) {
    if (pos + n > buf.size()) throw IoError("truncated binary payload");
    std::memcpy(p, buf.data() + pos, n);
    pos += n;
  }
  std::string get_string() {
    auto n = get<std::uint32_t>();
    if (pos + n > buf.size()) throw IoError("truncated string payload");
    std::string s = buf.substr(pos, n);
    pos += n;
    return s;
  }
};

}  // namespace eegcloak
