#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eegcloak/io_util.hpp"
#include "eegcloak/nn/core.hpp"

namespace eegcloak::nn {

// Self-describing container: magic "ECKP", version u32 = 1, u32 JSON length,
// JSON header {meta, tensors: [{name, shape}]}, then the raw little-endian
// float32 tensor payloads in header order.

using NamedNet = std::pair<std::string, std::vector<Param<float>*>>;

inline std::string encode_checkpoint(const nlohmann::json& meta,
                                     const std::vector<NamedNet>& nets) {
  nlohmann::json header;
  header["meta"] = meta;
  auto tensors = nlohmann::json::array();
  std::string payload;
  for (const auto& [net, params] : nets)
    for (const auto* p : params) {
      tensors.push_back({{"name", net + "/" + p->name}, {"shape", p->value.shape}});
      payload.append(reinterpret_cast<const char*>(p->value.ptr()),
                     p->value.numel() * sizeof(float));
    }
  header["tensors"] = tensors;
  const std::string hj = header.dump();

  BinWriter w;
  w.put_bytes("ECKP", 4);
  w.put<std::uint32_t>(1);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(hj.size()));
  w.put_bytes(hj.data(), hj.size());
  w.put_bytes(payload.data(), payload.size());
  return std::move(w.buf);
}

// Loads tensors into already-constructed nets (matched by name and shape);
// returns the meta header. Missing or shape-mismatched tensors are errors.
inline nlohmann::json decode_checkpoint_into(const std::string& bytes,
                                             const std::vector<NamedNet>& nets) {
  BinReader r(bytes);
  char magic[4];
  r.get_bytes(magic, 4);
  if (std::string(magic, 4) != "ECKP") throw IoError("bad checkpoint magic");
  if (r.get<std::uint32_t>() != 1) throw IoError("unsupported checkpoint version");
  const auto hlen = r.get<std::uint32_t>();
  std::string hj(hlen, '\0');
  r.get_bytes(hj.data(), hlen);
  const auto header = nlohmann::json::parse(hj);

  std::map<std::string, Param<float>*> by_name;
  for (const auto& [net, params] : nets)
    for (auto* p : params) by_name[net + "/" + p->name] = p;

  for (const auto& t : header.at("tensors")) {
    const std::string name = t.at("name").get<std::string>();
    const auto shape = t.at("shape").get<std::vector<int>>();
    const std::size_t numel = Tensor<float>::numel_of(shape);
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      r.pos += numel * sizeof(float);  // tensor for a net we are not loading
      continue;
    }
    if (it->second->value.shape != shape)
      throw IoError("checkpoint shape mismatch for " + name);
    r.get_bytes(it->second->value.ptr(), numel * sizeof(float));
    by_name.erase(it);
  }
  if (!by_name.empty())
    throw IoError("checkpoint is missing tensor " + by_name.begin()->first);
  return header.at("meta");
}

inline void save_checkpoint(const std::filesystem::path& p, const nlohmann::json& meta,
                            const std::vector<NamedNet>& nets) {
  write_file(p, encode_checkpoint(meta, nets));
}

inline nlohmann::json load_checkpoint_into(const std::filesystem::path& p,
                                           const std::vector<NamedNet>& nets) {
  return decode_checkpoint_into(read_file(p), nets);
}

// Peek at the meta header without loading tensors.
inline nlohmann::json checkpoint_meta(const std::filesystem::path& p) {
  const std::string bytes = read_file(p);
  BinReader r(bytes);
  char magic[4];
  r.get_bytes(magic, 4);
  if (std::string(magic, 4) != "ECKP") throw IoError("bad checkpoint magic");
  r.get<std::uint32_t>();
  const auto hlen = r.get<std::uint32_t>();
  std::string hj(hlen, '\0');
  r.get_bytes(hj.data(), hlen);
  return nlohmann::json::parse(hj).at("meta");
}

}  // namespace eegcloak::nn
