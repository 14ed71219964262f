#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace atgraph {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Label sequence violates the order-of-appearance encoding.
struct malformed_sequence : error {
  malformed_sequence(const std::string& what, std::size_t index)
      : error(what + " (index " + std::to_string(index) + ")"), index(index) {}
  std::size_t index;
};

struct bad_schedule : error {
  using error::error;
};

struct bad_params : error {
  using error::error;
};

/// Inputs jointly impossible (labels vs. schedule, block sizes vs. times).
struct inconsistent_input : error {
  using error::error;
};

struct cap_exceeded : error {
  using error::error;
};

struct schedule_exhausted : error {
  using error::error;
};

struct insufficient_data : error {
  using error::error;
};

struct insufficient_tail : error {
  using error::error;
};

struct zero_sum : error {
  using error::error;
};

struct empty_sample : error {
  using error::error;
};

struct degenerate_support : error {
  using error::error;
};

struct length_mismatch : error {
  using error::error;
};

}  // namespace atgraph
