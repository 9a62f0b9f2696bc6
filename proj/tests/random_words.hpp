#pragma once

#include <random>
#include <vector>

#include "thompson/doubletree.hpp"

namespace testutil {

// Product of a random word in C, D, C^-1, D^-1 of length at most max_len,
// evaluated with generic composition only.
inline thompson::DoubleTree random_element(std::mt19937_64& rng, unsigned max_len = 12) {
  const auto& g = thompson::generators();
  static const std::vector<thompson::DoubleTree> letters = {
      g.c, g.d, thompson::inverse(g.c), thompson::inverse(g.d)};
  std::uniform_int_distribution<unsigned> len_dist(0, max_len);
  std::uniform_int_distribution<std::size_t> letter_dist(0, letters.size() - 1);
  thompson::DoubleTree x;
  const unsigned len = len_dist(rng);
  for (unsigned k = 0; k < len; ++k) x = thompson::compose(letters[letter_dist(rng)], x);
  return x;
}

}  // namespace testutil
