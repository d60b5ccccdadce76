#pragma once

// Word-ball orbit enumeration for finitely generated groups of half-plane
// matrices, with projective (sign-insensitive) deduplication, plus the
// shipped preset groups.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypflow/mobius.hpp"

namespace hypflow {

enum class WordFilter {
  none,
  zero_exp_sum_gen0,  // keep only words with zero exponent sum in generator 0
};

struct GroupPreset {
  std::string name;
  std::vector<MobiusMap> generators;
  std::optional<double> expected_delta;
  std::string delta_note;
  WordFilter filter = WordFilter::none;
  bool elementary_hint = false;
  std::string note;
};

struct PresetParams {
  double ell = 2.0;     // translation length for cyclic_axial
  double lambda = 3.0;  // diagonal entry for schottky_perp / zcover_schottky
};

std::vector<std::string> preset_names();
GroupPreset make_preset(const std::string& name, const PresetParams& params = {});

struct OrbitElement {
  MobiusMap map;       // sign-canonical, unit determinant
  cplx point;          // alpha(q) in disk coordinates
  double dist;         // d(p, alpha q)
  uint32_t word_begin; // offset into OrbitBall::word_arena
  uint16_t word_len;
};

struct OrbitBall {
  cplx base_p{0.0, 0.0};
  cplx base_q{0.0, 0.0};
  double radius = 0.0;
  bool complete = true;       // false when the element budget was exhausted
  WordFilter filter = WordFilter::none;
  uint64_t near_collisions = 0;  // dedup hits in (1e-11, 1e-9]; a heuristic
                                 // non-discreteness signal, not a certificate
  std::vector<OrbitElement> elements;  // sorted by (dist, word shortlex)
  std::vector<int8_t> word_arena;      // letters: 2j = gen j, 2j+1 = inverse

  std::span<const int8_t> word_of(size_t i) const {
    const auto& e = elements[i];
    return {word_arena.data() + e.word_begin, size_t(e.word_len)};
  }
  std::string word_string(size_t i) const;

  // Number of leading elements with dist <= r (boundary-inclusive).
  size_t prefix_count(double r) const;
};

std::string word_to_string(std::span<const int8_t> word);

// Breadth-first enumeration of { alpha : d(p, alpha q) <= radius }.
// A word is expanded only while d(p, alpha q) <= radius + 2 * max generator
// displacement; matrices along a branch are renormalized every 8 letters.
OrbitBall enumerate_ball(const std::vector<MobiusMap>& gens, const DiskPoint& p,
                         const DiskPoint& q, double radius,
                         size_t max_elements = 16'000'000,
                         WordFilter filter = WordFilter::none);

OrbitBall enumerate_ball(const GroupPreset& preset, const DiskPoint& p,
                         const DiskPoint& q, double radius,
                         size_t max_elements = 16'000'000);

struct AnnuliCounts {
  std::vector<int64_t> a;  // a[n] = #{ alpha : n-1 < d(p, alpha q) <= n }
  bool complete = true;
};

AnnuliCounts annuli_counts(const OrbitBall& ball);

struct DualWitness {
  bool found = false;
  size_t index = 0;       // element index of the best alpha
  double residual = 0.0;  // max of the two angular residuals
};

// Search for alpha with alpha^{-1} p near xi and alpha p near eta (angles
// measured at p). Absence at finite depth is a valid result.
DualWitness dual_pair_witness(const OrbitBall& ball, const BoundaryPoint& xi,
                              const BoundaryPoint& eta, double eps);

}  // namespace hypflow
