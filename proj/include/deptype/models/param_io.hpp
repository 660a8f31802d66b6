#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "deptype/error.hpp"
#include "deptype/nn/tensor.hpp"

namespace deptype {

// params.bin layout, all integers and floats little-endian:
//
//   magic    8 bytes  "DTPARAMS"
//   version  u32      1
//   count    u32      number of tensors
//   count times:
//     name_len u32, name (UTF-8, no terminator)
//     ndim     u32, dims u64[ndim]
//     data     f64[product(dims)], row-major
//
// Integer-valued tensors (tree structure, shapes) are stored as f64 too;
// every value they hold is exactly representable.
struct Tensor {
  std::vector<std::uint64_t> dims;
  std::vector<double> data;

  static Tensor from_matrix(const Matrix& m) {
    return {{static_cast<std::uint64_t>(m.rows), static_cast<std::uint64_t>(m.cols)}, m.data};
  }
  static Tensor from_vector(std::vector<double> v) {
    const auto n = static_cast<std::uint64_t>(v.size());
    return {{n}, std::move(v)};
  }
  template <typename Int>
  static Tensor from_ints(const std::vector<Int>& v) {
    return from_vector(std::vector<double>(v.begin(), v.end()));
  }

  Matrix to_matrix() const {
    if (dims.size() != 2) throw DataError("tensor is not two-dimensional");
    Matrix m(static_cast<int>(dims[0]), static_cast<int>(dims[1]));
    if (m.size() != data.size()) throw DataError("tensor size does not match its shape");
    m.data = data;
    return m;
  }
  template <typename Int>
  std::vector<Int> to_ints() const {
    std::vector<Int> out;
    out.reserve(data.size());
    for (double d : data) out.push_back(static_cast<Int>(d));
    return out;
  }
};

using TensorMap = std::map<std::string, Tensor>;

namespace detail {

inline void put_u32(std::ostream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}
inline void put_u64(std::ostream& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}
inline std::uint64_t get_le(std::istream& in, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = in.get();
    if (c == EOF) throw DataError("params.bin is truncated");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

}  // namespace detail

inline constexpr char kParamsMagic[8] = {'D', 'T', 'P', 'A', 'R', 'A', 'M', 'S'};

inline void write_params(std::ostream& out, const TensorMap& tensors) {
  out.write(kParamsMagic, sizeof kParamsMagic);
  detail::put_u32(out, 1);
  detail::put_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, t] : tensors) {
    detail::put_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    detail::put_u32(out, static_cast<std::uint32_t>(t.dims.size()));
    for (auto d : t.dims) detail::put_u64(out, d);
    for (double v : t.data) detail::put_u64(out, std::bit_cast<std::uint64_t>(v));
  }
}

inline TensorMap read_params(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kParamsMagic, sizeof magic) != 0)
    throw DataError("params.bin has a bad magic header (corrupted artifact?)");
  const auto version = detail::get_le(in, 4);
  if (version != 1) throw DataError("unsupported params.bin version " + std::to_string(version));
  const auto count = detail::get_le(in, 4);
  TensorMap tensors;
  for (std::uint64_t k = 0; k < count; ++k) {
    const auto name_len = detail::get_le(in, 4);
    if (name_len > 4096) throw DataError("params.bin tensor name too long (corrupted artifact?)");
    std::string name(name_len, '\0');
    if (!in.read(name.data(), static_cast<std::streamsize>(name_len))) throw DataError("params.bin is truncated");
    Tensor t;
    const auto ndim = detail::get_le(in, 4);
    if (ndim > 8) throw DataError("params.bin tensor rank too large (corrupted artifact?)");
    std::uint64_t total = 1;
    for (std::uint64_t d = 0; d < ndim; ++d) {
      t.dims.push_back(detail::get_le(in, 8));
      total *= t.dims.back();
    }
    if (total > (1ULL << 32)) throw DataError("params.bin tensor too large (corrupted artifact?)");
    t.data.resize(total);
    for (auto& v : t.data) v = std::bit_cast<double>(detail::get_le(in, 8));
    tensors.emplace(std::move(name), std::move(t));
  }
  if (in.peek() != EOF) throw DataError("params.bin has trailing bytes (corrupted artifact?)");
  return tensors;
}

inline void save_params(const std::filesystem::path& path, const TensorMap& tensors) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingResource("cannot write " + path.string(), path.string());
  write_params(out, tensors);
}

inline TensorMap load_params(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingResource("cannot open " + path.string(), path.string());
  return read_params(in);
}

inline const Tensor& require(const TensorMap& m, const std::string& name) {
  auto it = m.find(name);
  if (it == m.end()) throw DataError("params.bin is missing tensor '" + name + "'");
  return it->second;
}

}  // namespace deptype
