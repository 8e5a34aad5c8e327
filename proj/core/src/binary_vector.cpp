#include "cbo/binary_vector.hpp"

#include <numeric>
#include <stdexcept>

namespace cbo {

BinaryVector::BinaryVector(int dimension) {
  if (dimension < 0) {
    throw std::invalid_argument("BinaryVector: dimension must be non-negative");
  }
  bits_.assign(static_cast<std::size_t>(dimension), 0);
}

BinaryVector::BinaryVector(std::initializer_list<int> bits) {
  bits_.reserve(bits.size());
  for (int b : bits) {
    if (b != 0 && b != 1) {
      throw std::invalid_argument("BinaryVector: entries must be 0 or 1");
    }
    bits_.push_back(static_cast<std::uint8_t>(b));
  }
}

BinaryVector BinaryVector::from_bits(std::vector<std::uint8_t> bits) {
  for (std::uint8_t b : bits) {
    if (b > 1) {
      throw std::invalid_argument("BinaryVector: entries must be 0 or 1");
    }
  }
  BinaryVector out;
  out.bits_ = std::move(bits);
  return out;
}

BinaryVector BinaryVector::from_string(const std::string& text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("BinaryVector: bitstring may contain only '0' and '1'");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return from_bits(std::move(bits));
}

int BinaryVector::ones_count() const {
  return std::accumulate(bits_.begin(), bits_.end(), 0);
}

std::string BinaryVector::to_string() const {
  std::string out;
  out.reserve(bits_.size());
  for (std::uint8_t b : bits_) {
    out.push_back(static_cast<char>('0' + b));
  }
  return out;
}

}  // namespace cbo
