#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "summ/nn/params.hpp"

namespace summ::nn {

namespace ckpt_detail {

inline void put_u32(std::ostream& os, uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

inline uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw std::runtime_error("checkpoint truncated");
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
  return v;
}

template <class S>
void put_scalar(std::ostream& os, S v) {
  static_assert(sizeof(S) == 4 || sizeof(S) == 8);
  uint64_t bits = 0;
  std::memcpy(&bits, &v, sizeof(S));
  unsigned char b[8];
  for (size_t i = 0; i < sizeof(S); ++i)
    b[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), sizeof(S));
}

template <class S>
S get_scalar(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), sizeof(S));
  if (!is) throw std::runtime_error("checkpoint truncated");
  uint64_t bits = 0;
  for (size_t i = 0; i < sizeof(S); ++i)
    bits |= static_cast<uint64_t>(b[i]) << (8 * i);
  S v;
  std::memcpy(&v, &bits, sizeof(S));
  return v;
}

}  // namespace ckpt_detail

inline constexpr char kCheckpointMagic[8] = {'S', 'U', 'M', 'M',
                                             'C', 'K', 'P', 'T'};
inline constexpr uint32_t kCheckpointVersion = 1;

template <class S>
void save_checkpoint(const std::string& path, const ParamStore<S>& store) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open checkpoint for write: " + path);
  os.write(kCheckpointMagic, 8);
  ckpt_detail::put_u32(os, kCheckpointVersion);
  ckpt_detail::put_u32(os, static_cast<uint32_t>(sizeof(S) * 8));
  auto params = store.all();
  ckpt_detail::put_u32(os, static_cast<uint32_t>(params.size()));
  for (const Parameter<S>* p : params) {
    ckpt_detail::put_u32(os, static_cast<uint32_t>(p->name.size()));
    os.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    ckpt_detail::put_u32(os, static_cast<uint32_t>(p->value.rows()));
    ckpt_detail::put_u32(os, static_cast<uint32_t>(p->value.cols()));
    for (int r = 0; r < p->value.rows(); ++r)
      for (int c = 0; c < p->value.cols(); ++c)
        ckpt_detail::put_scalar<S>(os, p->value(r, c));
  }
  if (!os) throw std::runtime_error("checkpoint write failed: " + path);
}

/// Loads values into an already-built store; every stored tensor must match
/// an existing parameter's name and shape.
template <class S>
void load_checkpoint(const std::string& path, ParamStore<S>& store) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kCheckpointMagic, 8) != 0)
    throw std::runtime_error("bad checkpoint magic: " + path);
  uint32_t version = ckpt_detail::get_u32(is);
  if (version != kCheckpointVersion)
    throw std::runtime_error("unsupported checkpoint version " +
                             std::to_string(version));
  uint32_t bits = ckpt_detail::get_u32(is);
  if (bits != sizeof(S) * 8)
    throw std::runtime_error("checkpoint scalar width " + std::to_string(bits) +
                             " does not match model scalar width " +
                             std::to_string(sizeof(S) * 8));
  uint32_t count = ckpt_detail::get_u32(is);
  for (uint32_t k = 0; k < count; ++k) {
    uint32_t name_len = ckpt_detail::get_u32(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    if (!is) throw std::runtime_error("checkpoint truncated");
    uint32_t rows = ckpt_detail::get_u32(is);
    uint32_t cols = ckpt_detail::get_u32(is);
    Parameter<S>& p = store.at(name);
    if (p.value.rows() != static_cast<int>(rows) ||
        p.value.cols() != static_cast<int>(cols))
      throw std::runtime_error(
          "checkpoint shape mismatch for " + name + ": stored " +
          std::to_string(rows) + "x" + std::to_string(cols) + ", model " +
          std::to_string(p.value.rows()) + "x" +
          std::to_string(p.value.cols()));
    for (uint32_t r = 0; r < rows; ++r)
      for (uint32_t c = 0; c < cols; ++c)
        p.value(static_cast<int>(r), static_cast<int>(c)) =
            ckpt_detail::get_scalar<S>(is);
  }
}

}  // namespace summ::nn
