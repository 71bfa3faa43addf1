#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "csfs/dataset.hpp"

namespace csfs {

// Class names A, B, C, ... (C27, C28, ... past Z).
std::string synth_class_name(std::size_t index);

// Gaussian data with known class-specific structure:
//   specific_A  N(0,1), shifted by `shift` for class A only
//   global      N(spacing * class_index, 1), separates every class
//   noise1..k   N(0,1)
// Labels are dealt round-robin, so classes are balanced.
struct PlantedSpec {
  std::size_t n = 400;
  std::size_t classes = 4;
  std::size_t noise = 6;
  double shift = 4.0;
  double spacing = 4.0;
  std::uint64_t seed = 0;
};

Dataset synth_planted(const PlantedSpec& spec);

// Well separated Gaussian blobs: on feature j class c has mean
// separation * perm_j(c), with perm_j a seeded permutation of the classes.
struct BlobSpec {
  std::size_t n = 400;
  std::size_t classes = 4;
  std::size_t features = 4;
  double separation = 8.0;
  std::uint64_t seed = 0;
};

Dataset synth_blobs(const BlobSpec& spec);

// Uniform noise features with balanced labels dealt in shuffled order; the
// null case for evaluation.
struct NoiseSpec {
  std::size_t n = 400;
  std::size_t classes = 4;
  std::size_t features = 8;
  std::uint64_t seed = 0;
};

Dataset synth_noise(const NoiseSpec& spec);

}  // namespace csfs
