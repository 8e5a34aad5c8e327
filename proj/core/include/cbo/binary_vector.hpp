#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace cbo {

/// Fixed-length vector over {0,1}. The dimension is set at construction and
/// every entry is stored as an explicit 0/1 value.
class BinaryVector {
 public:
  BinaryVector() = default;

  /// All-zeros vector of the given dimension.
  explicit BinaryVector(int dimension);

  BinaryVector(std::initializer_list<int> bits);

  /// Builds from raw bytes; every entry must be 0 or 1.
  static BinaryVector from_bits(std::vector<std::uint8_t> bits);

  /// Parses a bitstring such as "0110".
  static BinaryVector from_string(const std::string& text);

  int dimension() const { return static_cast<int>(bits_.size()); }
  std::uint8_t bit(int i) const { return bits_[static_cast<std::size_t>(i)]; }
  void set_bit(int i, bool value) { bits_[static_cast<std::size_t>(i)] = value ? 1 : 0; }
  void flip_bit(int i) { bits_[static_cast<std::size_t>(i)] ^= 1; }

  int ones_count() const;
  std::string to_string() const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const BinaryVector& a, const BinaryVector& b) { return a.bits_ == b.bits_; }
  friend bool operator!=(const BinaryVector& a, const BinaryVector& b) { return a.bits_ != b.bits_; }

  /// Lexicographic order on the bit sequence.
  friend bool operator<(const BinaryVector& a, const BinaryVector& b) { return a.bits_ < b.bits_; }

 private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace cbo
