#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "thompson/doubletree.hpp"

namespace thompson {

enum class Letter : std::uint8_t { C, Cinv, D, D2, Dinv };

inline constexpr std::array<Letter, 5> kAllLetters = {Letter::C, Letter::Cinv, Letter::D, Letter::D2,
                                                      Letter::Dinv};

std::string_view letter_name(Letter l) noexcept;
// The group element named by the letter.
const DoubleTree& letter_element(Letter l);

// C∘x and D∘x, reduced, by local surgery on the range tree of x.
DoubleTree left_mul_c(const DoubleTree& x);
DoubleTree left_mul_d(const DoubleTree& x);
DoubleTree left_mul(Letter l, const DoubleTree& x);

// Per-thread counters of the reduction work done by the left actions.
struct ActionCounters {
  std::uint64_t calls = 0;
  std::uint64_t probes = 0;      // double-caret tests
  std::uint64_t reductions = 0;  // double carets removed
};
ActionCounters& action_counters() noexcept;

}  // namespace thompson
