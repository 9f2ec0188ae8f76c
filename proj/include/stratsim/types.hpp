#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace stratsim {

using VertexId = std::uint32_t;

/// Binary label in {-1, +1}.
enum class Label : std::int8_t { Negative = -1, Positive = 1 };

constexpr int to_int(Label y) { return static_cast<int>(y); }

inline Label label_from_int(long v) {
  if (v == 1) return Label::Positive;
  if (v == -1) return Label::Negative;
  throw std::invalid_argument("label must be -1 or +1, got " + std::to_string(v));
}

constexpr Label flip(Label y) {
  return y == Label::Positive ? Label::Negative : Label::Positive;
}

/// An agent (x, y): original feature vertex and true label.
struct Agent {
  VertexId x = 0;
  Label y = Label::Negative;

  friend bool operator==(const Agent&, const Agent&) = default;
};

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using LabelVector = VectorX<std::int8_t>;

}  // namespace stratsim
