#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "vmphase/error.hpp"

namespace vmphase::detail {

/// Little-endian encoder.
class ByteWriter {
public:
  void bytes(const char* data, std::size_t n) { out_.append(data, n); }

  void u32(std::uint32_t v)
  {
    for (int i = 0; i < 4; ++i)
      out_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }

  void f64(double v)
  {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i)
      out_.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
  }

  void f64s(const double* data, std::size_t n)
  {
    for (std::size_t i = 0; i < n; ++i)
      f64(data[i]);
  }

  [[nodiscard]] const std::string& str() const noexcept { return out_; }

private:
  std::string out_;
};

/// Little-endian decoder; throws TruncatedError on overrun.
class ByteReader {
public:
  ByteReader(const std::vector<unsigned char>& data, std::string what)
      : data_(data), what_(std::move(what))
  {
  }

  void need(std::size_t n) const
  {
    if (data_.size() - pos_ < n)
      throw TruncatedError(what_ + ": file truncated at byte " + std::to_string(pos_));
  }

  bool match(const char* magic, std::size_t n)
  {
    need(n);
    const bool ok = std::memcmp(data_.data() + pos_, magic, n) == 0;
    pos_ += n;
    return ok;
  }

  std::uint32_t u32()
  {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= std::uint32_t(data_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    pos_ += 4;
    return v;
  }

  double f64()
  {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= std::uint64_t(data_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }

  void f64s(double* out, std::size_t n)
  {
    need(n * 8);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = f64();
  }

  [[nodiscard]] std::size_t remaining() const noexcept { return data_.size() - pos_; }

private:
  const std::vector<unsigned char>& data_;
  std::string what_;
  std::size_t pos_ = 0;
};

std::vector<unsigned char> read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

} // namespace vmphase::detail
