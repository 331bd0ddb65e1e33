#include "vprkit/synth/synthgen.h"

#include <cmath>
#include <numeric>
#include <sstream>

#include "vprkit/core/error.h"
#include "vprkit/core/rng.h"

namespace vprkit::synth {
namespace {

constexpr double kAliasPerturbation = 0.01;

void normalize_row(Matrix& m, Eigen::Index row) {
  const double norm = m.row(row).norm();
  if (norm > 0.0) m.row(row) /= norm;
}

Vector random_unit(int dim, Rng& rng) {
  Vector v(dim);
  for (int k = 0; k < dim; ++k) v(k) = rng.normal();
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  return v;
}

void check_range(const PlaceRange& r, int n_places, const char* event) {
  if (r.begin < 0 || r.end > n_places || r.begin >= r.end) {
    throw ArgumentError(std::string(event) + " range [" +
                        std::to_string(r.begin) + ", " +
                        std::to_string(r.end) + ") invalid for " +
                        std::to_string(n_places) + " places");
  }
}

}  // namespace

void WorldConfig::validate() const {
  if (n_places < 2) throw ArgumentError("n_places must be >= 2");
  if (latent_dim < 2) throw ArgumentError("latent_dim must be >= 2");
  if (aliasing_pairs < 0 || aliasing_pairs > n_places / 2) {
    throw ArgumentError("aliasing_pairs must be in [0, n_places/2]");
  }
}

void TraverseScript::validate(const WorldConfig& world) const {
  if (!(noise_sigma >= 0.0)) throw ArgumentError("noise_sigma must be >= 0");
  if (condition_bias.size() != 0 && condition_bias.size() != world.latent_dim) {
    throw DimensionError("condition_bias length differs from latent_dim");
  }
  if (condition_scale.size() != 0) {
    if (condition_scale.size() != world.latent_dim) {
      throw DimensionError("condition_scale length differs from latent_dim");
    }
    if ((condition_scale.array() <= 0.0).any()) {
      throw ArgumentError("condition_scale entries must be positive");
    }
  }
  for (const auto& ev : events) {
    if (const auto* v = std::get_if<Visit>(&ev)) {
      check_range(v->places, world.n_places, "visit");
      if (!(v->step > 0.0)) throw ArgumentError("visit step must be > 0");
    } else if (const auto* s = std::get_if<Stop>(&ev)) {
      if (s->place < 0 || s->place >= world.n_places) {
        throw ArgumentError("stop place out of range");
      }
      if (s->duration < 1) throw ArgumentError("stop duration must be >= 1");
    } else if (const auto* l = std::get_if<Loop>(&ev)) {
      check_range(l->places, world.n_places, "loop");
    } else if (const auto* k = std::get_if<Skip>(&ev)) {
      check_range(k->places, world.n_places, "skip");
    }
  }
}

World generate_world(const WorldConfig& config) {
  config.validate();
  Rng rng(mix_seed(config.seed, 0));
  World world{config, Matrix(config.n_places, config.latent_dim), {}};
  for (int i = 0; i < config.n_places; ++i) {
    for (int k = 0; k < config.latent_dim; ++k) {
      world.latents(i, k) = rng.normal();
    }
  }
  for (int i = 0; i < config.n_places; ++i) normalize_row(world.latents, i);

  if (config.aliasing_pairs > 0) {
    std::vector<int> perm(config.n_places);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = config.n_places - 1; i > 0; --i) {
      const auto j = static_cast<int>(rng.index(static_cast<std::uint64_t>(i) + 1));
      std::swap(perm[i], perm[j]);
    }
    for (int p = 0; p < config.aliasing_pairs; ++p) {
      const int src = perm[2 * p];
      const int dst = perm[2 * p + 1];
      const Vector delta =
          kAliasPerturbation * random_unit(config.latent_dim, rng);
      world.latents.row(dst) = world.latents.row(src) + delta.transpose();
      normalize_row(world.latents, dst);
      world.aliased.emplace_back(src, dst);
    }
  }
  return world;
}

Traverse generate_traverse(const World& world, const TraverseScript& script) {
  const WorldConfig& cfg = world.config;
  script.validate(cfg);
  const int dim = cfg.latent_dim;
  const Vector bias =
      script.condition_bias.size() ? script.condition_bias : Vector::Zero(dim);
  const Vector scale = script.condition_scale.size() ? script.condition_scale
                                                     : Vector::Ones(dim);
  Rng rng(mix_seed(cfg.seed, script.seed + 1));

  std::vector<Vector> frames;
  std::vector<int> ids;
  auto emit = [&](int place) {
    Vector latent;
    if (place >= 0) {
      latent = world.latents.row(place).transpose();
    } else {
      latent = random_unit(dim, rng);
    }
    Vector frame = scale.cwiseProduct(latent) + bias;
    for (int k = 0; k < dim; ++k) frame(k) += script.noise_sigma * rng.normal();
    frames.push_back(std::move(frame));
    ids.push_back(place);
  };

  for (const auto& ev : script.events) {
    if (const auto* v = std::get_if<Visit>(&ev)) {
      for (long k = 0;; ++k) {
        const long place =
            v->places.begin + static_cast<long>(std::floor(k * v->step));
        if (place >= v->places.end) break;
        emit(static_cast<int>(place));
      }
    } else if (const auto* s = std::get_if<Stop>(&ev)) {
      for (int t = 0; t < s->duration; ++t) emit(s->place);
    } else if (const auto* l = std::get_if<Loop>(&ev)) {
      for (int p = l->places.begin; p < l->places.end; ++p) emit(p);
    } else if (const auto* k = std::get_if<Skip>(&ev)) {
      for (int p = k->places.begin; p < k->places.end; ++p) emit(-1);
    }
  }

  Matrix values(static_cast<Eigen::Index>(frames.size()), dim);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    values.row(static_cast<Eigen::Index>(f)) = frames[f].transpose();
  }
  return Traverse{DescriptorMatrix(std::move(values)), std::move(ids)};
}

GroundTruth derive_gt(const Traverse& db, const Traverse& q,
                      SoftRadius radius) {
  BoolMatrix gt(db.place_ids.size(), q.place_ids.size());
  for (std::size_t i = 0; i < db.place_ids.size(); ++i) {
    for (std::size_t j = 0; j < q.place_ids.size(); ++j) {
      if (db.place_ids[i] != -1 && db.place_ids[i] == q.place_ids[j]) {
        gt.set(i, j);
      }
    }
  }
  BoolMatrix soft = dilate(gt, radius);
  return GroundTruth{std::move(gt), std::move(soft)};
}

Condition make_condition(int latent_dim, double bias_norm, double scale_min,
                         double scale_max, std::uint64_t seed) {
  if (!(scale_min > 0.0) || scale_max < scale_min) {
    throw ArgumentError("condition scale range must satisfy 0 < min <= max");
  }
  Rng rng(mix_seed(seed, 0xC0D1u));
  Condition c;
  c.bias = bias_norm * random_unit(latent_dim, rng);
  c.scale.resize(latent_dim);
  for (int k = 0; k < latent_dim; ++k) {
    c.scale(k) = rng.uniform(scale_min, scale_max);
  }
  return c;
}

std::vector<TraverseEvent> parse_events(const std::string& text) {
  std::vector<TraverseEvent> events;
  std::string normalized = text;
  for (char& c : normalized) {
    if (c == ';') c = ',';
  }
  std::istringstream items(normalized);
  std::string item;
  while (std::getline(items, item, ',')) {
    std::istringstream in(item);
    std::string kind;
    if (!(in >> kind)) continue;
    auto fail = [&]() -> ArgumentError {
      return ArgumentError("malformed event '" + item + "'");
    };
    std::string extra;
    if (kind == "visit") {
      Visit v;
      if (!(in >> v.places.begin >> v.places.end)) throw fail();
      if (!(in >> v.step)) v.step = 1.0;
      if (in >> extra) throw fail();
      events.emplace_back(v);
    } else if (kind == "stop") {
      Stop s;
      if (!(in >> s.place >> s.duration) || (in >> extra)) throw fail();
      events.emplace_back(s);
    } else if (kind == "loop") {
      Loop l;
      if (!(in >> l.places.begin >> l.places.end) || (in >> extra)) {
        throw fail();
      }
      events.emplace_back(l);
    } else if (kind == "skip") {
      Skip k;
      if (!(in >> k.places.begin >> k.places.end) || (in >> extra)) {
        throw fail();
      }
      events.emplace_back(k);
    } else {
      throw ArgumentError("unknown event kind '" + kind + "'");
    }
  }
  return events;
}

std::string format_events(const std::vector<TraverseEvent>& events) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t e = 0; e < events.size(); ++e) {
    if (e) out << ", ";
    const auto& ev = events[e];
    if (const auto* v = std::get_if<Visit>(&ev)) {
      out << "visit " << v->places.begin << ' ' << v->places.end << ' '
          << v->step;
    } else if (const auto* s = std::get_if<Stop>(&ev)) {
      out << "stop " << s->place << ' ' << s->duration;
    } else if (const auto* l = std::get_if<Loop>(&ev)) {
      out << "loop " << l->places.begin << ' ' << l->places.end;
    } else if (const auto* k = std::get_if<Skip>(&ev)) {
      out << "skip " << k->places.begin << ' ' << k->places.end;
    }
  }
  return out.str();
}

}  // namespace vprkit::synth
