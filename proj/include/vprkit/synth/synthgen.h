#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "vprkit/core/ground_truth.h"
#include "vprkit/core/types.h"

namespace vprkit::synth {

struct WorldConfig {
  int n_places = 10;
  int latent_dim = 32;
  int aliasing_pairs = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Unit-norm appearance latent per place.
struct World {
  WorldConfig config;
  Matrix latents;  // n_places x latent_dim
  // Place pairs whose latents were forced to be near-identical.
  std::vector<std::pair<int, int>> aliased;
};

// Half-open place range [begin, end).
struct PlaceRange {
  int begin = 0;
  int end = 0;
};

// One frame per place; `step` < 1 repeats places (slow), > 1 skips them (fast).
struct Visit {
  PlaceRange places;
  double step = 1.0;
};
// `duration` frames of the same place.
struct Stop {
  int place = 0;
  int duration = 1;
};
// Revisit of a range of places, one frame each.
struct Loop {
  PlaceRange places;
};
// Frames through unmapped terrain: one frame per place of the range, each
// with a fresh random appearance and place id -1.
struct Skip {
  PlaceRange places;
};

using TraverseEvent = std::variant<Visit, Stop, Loop, Skip>;

struct TraverseScript {
  std::vector<TraverseEvent> events;
  double noise_sigma = 0.0;
  Vector condition_bias;   // empty means zero
  Vector condition_scale;  // empty means ones
  std::uint64_t seed = 0;  // combined with the world seed

  void validate(const WorldConfig& world) const;
};

struct Traverse {
  DescriptorMatrix descriptors;
  std::vector<int> place_ids;  // -1 for exploration frames
};

World generate_world(const WorldConfig& config);

// Expands the events in order. For each frame, exploration latents (if any)
// are drawn first, then latent_dim noise values; frame descriptor is
// scale * latent + bias + noise.
Traverse generate_traverse(const World& world, const TraverseScript& script);

// gt[i][j] = (db.place_ids[i] == q.place_ids[j] != -1).
GroundTruth derive_gt(const Traverse& db, const Traverse& q,
                      SoftRadius radius = {});

// Condition transform with a random bias direction of norm `bias_norm` and
// per-dimension scales uniform in [scale_min, scale_max].
struct Condition {
  Vector bias;
  Vector scale;
};
Condition make_condition(int latent_dim, double bias_norm, double scale_min,
                         double scale_max, std::uint64_t seed);

// Parses a comma or semicolon separated event list, e.g.
// "visit 0 20 1, stop 5 3, loop 0 5, skip 20 25".
std::vector<TraverseEvent> parse_events(const std::string& text);
std::string format_events(const std::vector<TraverseEvent>& events);

}  // namespace vprkit::synth
