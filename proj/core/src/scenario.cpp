#include "datrack/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "datrack/errors.hpp"
#include "datrack/rng.hpp"

namespace datrack {

bool EntitySpec::visible_at(int frame) const noexcept {
  if (visible.empty()) return true;
  return std::any_of(visible.begin(), visible.end(),
                     [&](const VisibleInterval& iv) { return frame >= iv.first && frame <= iv.last; });
}

void ScenarioSpec::validate() const {
  if (frame_count < 1) throw ScenarioError("scenario needs at least one frame");
  if (width < 1 || height < 1) throw ScenarioError("scenario frame extent must be positive");
  if (channels < 1) throw ScenarioError("scenario channel count must be positive");
  if (entities.empty()) throw ScenarioError("scenario has no entities");
  const auto targets = std::count_if(entities.begin(), entities.end(), [](const EntitySpec& e) { return e.is_target; });
  if (targets != 1) throw ScenarioError("scenario needs exactly one target, found " + std::to_string(targets));
  for (const auto& e : entities) {
    if (static_cast<int>(e.signature.size()) != channels) throw ScenarioError("entity signature length != channels");
    if (static_cast<int>(e.trajectory.size()) != frame_count) {
      throw ScenarioError("entity trajectory must cover every frame");
    }
    for (const auto& b : e.trajectory) {
      if (!b.valid()) throw ScenarioError("entity trajectory contains an invalid box");
    }
  }
  if (!(noise_sigma >= 0.0)) throw ScenarioError("noise sigma must be non-negative");
}

const EntitySpec& ScenarioSpec::target() const {
  for (const auto& e : entities) {
    if (e.is_target) return e;
  }
  throw ScenarioError("scenario has no target");
}

Sequence gen_scenario(const ScenarioSpec& spec) {
  spec.validate();
  Sequence seq;
  seq.width = spec.width;
  seq.height = spec.height;
  seq.frames.reserve(spec.frame_count);
  seq.ground_truth.reserve(spec.frame_count);
  const std::uint64_t noise_seed = derive_seed({spec.seed, 0x6e6f697365ULL});
  for (int f = 0; f < spec.frame_count; ++f) {
    SyntheticScene scene;
    scene.noise_sigma = spec.noise_sigma;
    scene.noise_seed = noise_seed;
    std::optional<BBox> truth;
    for (const auto& e : spec.entities) {
      if (!e.visible_at(f)) continue;
      scene.entities.push_back({e.signature, e.trajectory[f]});
      if (e.is_target) truth = e.trajectory[f];
    }
    seq.frames.push_back(Frame{f, spec.width, spec.height, std::move(scene)});
    seq.ground_truth.push_back(truth);
  }
  return seq;
}

std::optional<Preset> parse_preset(std::string_view name) {
  if (name == "crossing") return Preset::Crossing;
  if (name == "outview") return Preset::OutOfView;
  if (name == "clutter") return Preset::Clutter;
  return std::nullopt;
}

const char* to_string(Preset preset) noexcept {
  switch (preset) {
    case Preset::Crossing: return "crossing";
    case Preset::OutOfView: return "outview";
    case Preset::Clutter: return "clutter";
  }
  return "unknown";
}

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec random_unit(Rng& rng, int n) {
  Vec v(static_cast<std::size_t>(n));
  double norm = 0.0;
  while (norm < 1e-6) {
    for (auto& x : v) x = rng.normal();
    norm = std::sqrt(dot(v, v));
  }
  for (auto& x : v) x /= norm;
  return v;
}

// Unit vector orthogonal to the unit vector `v`.
Vec random_orthogonal(Rng& rng, const Vec& v) {
  for (;;) {
    Vec u = random_unit(rng, static_cast<int>(v.size()));
    const double p = dot(u, v);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] -= p * v[i];
    const double norm = std::sqrt(dot(u, u));
    if (norm < 1e-6) continue;
    for (auto& x : u) x /= norm;
    return u;
  }
}

Point2 random_velocity(Rng& rng, double lo, double hi) {
  const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double speed = rng.uniform(lo, hi);
  return {speed * std::cos(angle), speed * std::sin(angle)};
}

// Constant-velocity motion reflected at the margins of the frame.
std::vector<BBox> bouncing_path(Point2 start, Point2 velocity, double size, int frames, const PresetOptions& o,
                                double margin) {
  std::vector<BBox> path;
  Point2 p = start;
  Point2 v = velocity;
  for (int f = 0; f < frames; ++f) {
    path.push_back({p.x, p.y, size, size});
    p.x += v.x;
    p.y += v.y;
    if (p.x < margin || p.x > o.width - margin) {
      v.x = -v.x;
      p.x = std::clamp(p.x, margin, o.width - margin);
    }
    if (p.y < margin || p.y > o.height - margin) {
      v.y = -v.y;
      p.y = std::clamp(p.y, margin, o.height - margin);
    }
  }
  return path;
}

EntitySpec make_target(Rng& rng, const Vec& signature, const PresetOptions& o, double lo_speed, double hi_speed) {
  EntitySpec target;
  target.is_target = true;
  target.signature = signature;
  const Point2 start{rng.uniform(o.width * 0.3, o.width * 0.7), rng.uniform(o.height * 0.3, o.height * 0.7)};
  target.trajectory = bouncing_path(start, random_velocity(rng, lo_speed, hi_speed), o.target_size, o.frame_count,
                                    o, 60.0);
  return target;
}

// Signature of a different-category object: mostly orthogonal to the target.
Vec dissimilar_signature(Rng& rng, const Vec& v, double max_cos) {
  const Vec u = random_orthogonal(rng, v);
  const double c = rng.uniform(-max_cos, max_cos);
  const double s = std::sqrt(1.0 - c * c);
  Vec w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = c * v[i] + s * u[i];
  return w;
}

ScenarioSpec base_spec(std::uint64_t seed, const PresetOptions& o) {
  ScenarioSpec spec;
  spec.frame_count = o.frame_count;
  spec.width = o.width;
  spec.height = o.height;
  spec.channels = o.channels;
  spec.noise_sigma = o.noise_sigma;
  spec.seed = seed;
  return spec;
}

ScenarioSpec crossing(std::uint64_t seed, const PresetOptions& o) {
  Rng rng(derive_seed({seed, 1}));
  ScenarioSpec spec = base_spec(seed, o);
  const Vec v = random_unit(rng, o.channels);
  spec.entities.push_back(make_target(rng, v, o, 2.0, 4.0));
  const auto& path = spec.entities.front().trajectory;

  // Distractors meet the target at staggered frames around mid-sequence,
  // crossing its path at a right angle on straight lines.
  // The distractors form one family: a shared perturbation direction plus a
  // small individual component, all orthogonal to the target signature.
  const Vec shared = random_orthogonal(rng, v);
  for (int i = 0; i < o.distractor_count; ++i) {
    EntitySpec d;
    const Vec own = random_orthogonal(rng, v);
    Vec u(v.size());
    for (std::size_t c = 0; c < v.size(); ++c) u[c] = shared[c] + o.distractor_spread * own[c];
    const double un = std::sqrt(dot(u, u));
    for (auto& x : u) x /= un;
    d.signature.resize(v.size());
    for (std::size_t c = 0; c < v.size(); ++c) {
      d.signature[c] = (1.0 + o.distractor_gain) * (v[c] + o.distractor_perturbation * u[c]);
    }
    const double frac = o.distractor_count == 1 ? 0.5 : 0.35 + 0.3 * i / (o.distractor_count - 1);
    const int meet = std::clamp(static_cast<int>(std::lround(frac * (o.frame_count - 1))), 0, o.frame_count - 1);
    const BBox& at = path[meet];
    const BBox& next = path[std::min(meet + 1, o.frame_count - 1)];
    const BBox& prev = path[std::max(meet - 1, 0)];
    const double hx = next.cx - prev.cx;
    const double hy = next.cy - prev.cy;
    const double heading = std::hypot(hx, hy);
    const double side = rng.bernoulli(0.5) ? 1.0 : -1.0;
    const double speed = rng.uniform(o.crossing_speed_min, o.crossing_speed_max);
    const Point2 vel = heading > 0.0 ? Point2{-side * hy / heading * speed, side * hx / heading * speed}
                                     : random_velocity(rng, o.crossing_speed_min, o.crossing_speed_max);
    for (int f = 0; f < o.frame_count; ++f) {
      d.trajectory.push_back({at.cx + vel.x * (f - meet), at.cy + vel.y * (f - meet), o.target_size, o.target_size});
    }
    spec.entities.push_back(std::move(d));
  }
  return spec;
}

ScenarioSpec out_of_view(std::uint64_t seed, const PresetOptions& o) {
  Rng rng(derive_seed({seed, 2}));
  ScenarioSpec spec = base_spec(seed, o);
  const Vec v = random_unit(rng, o.channels);
  const double margin = 40.0;
  const int hide_first = std::clamp(o.hidden_first, 1, o.frame_count - 1);
  const int hide_last = std::clamp(o.hidden_last, hide_first, o.frame_count - 1);

  EntitySpec target = make_target(rng, v, o, 1.0, 2.5);
  const BBox exit = target.trajectory[hide_first - 1];
  // Reappearance point: far from where the target left, inside the frame.
  Point2 reappear{exit.cx, exit.cy};
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double dist = rng.uniform(o.reappear_min, o.reappear_max);
    const Point2 p{exit.cx + dist * std::cos(angle), exit.cy + dist * std::sin(angle)};
    if (p.x >= margin && p.x <= o.width - margin && p.y >= margin && p.y <= o.height - margin) {
      reappear = p;
      break;
    }
  }
  if (reappear == Point2{exit.cx, exit.cy}) throw ScenarioError("frame too small for the requested reappearance jump");
  const Point2 vel = random_velocity(rng, 1.0, 2.5);
  const auto tail = bouncing_path(reappear, vel, o.target_size, o.frame_count - hide_last - 1, o, margin);
  for (int f = hide_first; f < o.frame_count; ++f) {
    target.trajectory[f] = f <= hide_last ? exit : tail[f - hide_last - 1];
  }
  target.visible = {{0, hide_first - 1}, {hide_last + 1, o.frame_count - 1}};
  spec.entities.push_back(std::move(target));

  // One unrelated object that stays away from both the exit and reappearance points.
  EntitySpec other;
  other.signature = dissimilar_signature(rng, v, 0.3);
  Point2 start{margin, margin};
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Point2 p{rng.uniform(margin, o.width - margin), rng.uniform(margin, o.height - margin)};
    if (std::hypot(p.x - exit.cx, p.y - exit.cy) > 200.0 && std::hypot(p.x - reappear.x, p.y - reappear.y) > 200.0) {
      start = p;
      break;
    }
  }
  for (int f = 0; f < o.frame_count; ++f) other.trajectory.push_back({start.x, start.y, o.target_size, o.target_size});
  spec.entities.push_back(std::move(other));
  return spec;
}

ScenarioSpec clutter(std::uint64_t seed, const PresetOptions& o) {
  Rng rng(derive_seed({seed, 3}));
  ScenarioSpec spec = base_spec(seed, o);
  const Vec v = random_unit(rng, o.channels);
  spec.entities.push_back(make_target(rng, v, o, 2.0, 4.0));
  for (int i = 0; i < 5; ++i) {
    EntitySpec e;
    e.signature = dissimilar_signature(rng, v, 0.4);
    const Point2 start{rng.uniform(60.0, o.width - 60.0), rng.uniform(60.0, o.height - 60.0)};
    e.trajectory = bouncing_path(start, random_velocity(rng, 1.0, 4.0), o.target_size, o.frame_count, o, 60.0);
    spec.entities.push_back(std::move(e));
  }
  return spec;
}

}  // namespace

ScenarioSpec make_preset(Preset preset, std::uint64_t seed, const PresetOptions& options) {
  if (options.frame_count < 2 || options.channels < 2) throw ScenarioError("presets need >= 2 frames and channels");
  switch (preset) {
    case Preset::Crossing: return crossing(seed, options);
    case Preset::OutOfView: return out_of_view(seed, options);
    case Preset::Clutter: return clutter(seed, options);
  }
  throw ScenarioError("unknown preset");
}

}  // namespace datrack
