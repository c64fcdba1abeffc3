#include "nuggetbench/tk/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>

#include <json.hpp>

#include "nuggetbench/core/error.hpp"

namespace nb::tk {

namespace {

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

void write_checkpoint(const std::string& path,
                      const std::vector<std::pair<std::string, const Tensor*>>& tensors) {
  nlohmann::ordered_json header;
  header["format"] = "nb-tensors";
  header["version"] = 1;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  std::uint64_t offset = 0;
  for (const auto& [name, tensor] : tensors) {
    nlohmann::ordered_json entry;
    entry["name"] = name;
    entry["shape"] = tensor->shape();
    entry["offset"] = offset;
    list.push_back(std::move(entry));
    offset += tensor->numel() * 8;
  }
  header["tensors"] = std::move(list);
  std::string header_bytes = header.dump();

  std::string blob;
  blob.reserve(8 + header_bytes.size() + offset);
  put_u64(blob, header_bytes.size());
  blob += header_bytes;
  for (const auto& [name, tensor] : tensors) {
    for (std::size_t i = 0; i < tensor->numel(); ++i) {
      put_u64(blob, std::bit_cast<std::uint64_t>(tensor->data()[i]));
    }
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint '" + path + "'");
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw IoError("failed writing checkpoint '" + path + "'");
}

std::vector<NamedTensor> read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path + "'");
  std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (blob.size() < 8) throw ParseError("checkpoint '" + path + "' is truncated");
  const auto* bytes = reinterpret_cast<const unsigned char*>(blob.data());
  std::uint64_t header_len = get_u64(bytes);
  if (8 + header_len > blob.size()) {
    throw ParseError("checkpoint '" + path + "' header overruns the file");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(blob.substr(8, header_len));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("checkpoint '" + path + "': bad header: " + e.what());
  }
  if (!header.contains("tensors") || !header["tensors"].is_array()) {
    throw ParseError("checkpoint '" + path + "': header lists no tensors");
  }
  const std::size_t payload_start = 8 + header_len;
  std::vector<NamedTensor> out;
  for (const auto& entry : header["tensors"]) {
    NamedTensor nt;
    nt.name = entry.at("name").get<std::string>();
    std::vector<std::size_t> shape = entry.at("shape").get<std::vector<std::size_t>>();
    std::uint64_t offset = entry.at("offset").get<std::uint64_t>();
    Tensor t(shape);
    if (payload_start + offset + t.numel() * 8 > blob.size()) {
      throw ParseError("checkpoint '" + path + "': tensor '" + nt.name + "' overruns the file");
    }
    const unsigned char* src = bytes + payload_start + offset;
    for (std::size_t i = 0; i < t.numel(); ++i) {
      t.data()[i] = std::bit_cast<double>(get_u64(src + i * 8));
    }
    nt.tensor = std::move(t);
    out.push_back(std::move(nt));
  }
  return out;
}

}  // namespace nb::tk
