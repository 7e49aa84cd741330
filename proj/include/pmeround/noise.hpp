// Tunable noise models that turn the exact reference strategies into
// almost-synchronous inputs, plus the seeded generate() entry point.
#pragma once

#include <cstdint>
#include <string>

#include "pmeround/base.hpp"
#include "pmeround/game.hpp"
#include "pmeround/strategy.hpp"

namespace pmeround {

enum class NoiseKind { depolarize_state, smooth_povm, rotate_measurements };

NoiseKind noise_kind_from_string(const std::string& s);
const char* noise_kind_name(NoiseKind k);

struct NoiseModel {
  NoiseKind kind = NoiseKind::depolarize_state;
  Real level = 0.0;  // in [0, 1]
  std::uint64_t seed = 0;
};

// Mixes the shared state's density with the maximally mixed state at weight
// p and re-purifies canonically. The purification's second register is split
// between the players ((i,j),(i',j')) -> ((i,i'),(j,j')) so that both sides
// carry part of the environment; measurement operators act as A (x) Id and
// B (x) Id.
Strategy depolarize_state(const Strategy& s, Real p);

// Mixes every POVM element on both sides with Id/#outcomes at weight p.
Strategy smooth_povm(const Strategy& s, Real p);

// Conjugates Alice's measurements by exp(i * theta * G) for a seeded random
// Hermitian G with unit operator norm, theta = level.
Strategy rotate_measurements(const Strategy& s, Real theta, std::uint64_t seed);

// Applies the noise model to the named builtin's reference strategy.
// Level 0 returns the reference strategy unchanged.
Strategy generate(const std::string& builtin_name, const NoiseModel& model);

}  // namespace pmeround
