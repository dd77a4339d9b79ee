/* Copyright 2026 The SCS Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "scs/data/synthetic.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "scs/errors.hpp"

namespace scs::data {

std::string_view to_string(ShapeKind s) {
  switch (s) {
    case ShapeKind::kSquare: return "square";
    case ShapeKind::kCircle: return "circle";
    case ShapeKind::kTriangle: return "triangle";
  }
  return "?";
}

std::string_view to_string(ColorName c) {
  switch (c) {
    case ColorName::kRed: return "red";
    case ColorName::kGreen: return "green";
    case ColorName::kBlue: return "blue";
    case ColorName::kYellow: return "yellow";
  }
  return "?";
}

std::string_view to_string(SizeClass s) {
  switch (s) {
    case SizeClass::kSmall: return "small";
    case SizeClass::kMedium: return "medium";
    case SizeClass::kLarge: return "large";
  }
  return "?";
}

std::string_view phrase(Region r) {
  switch (r) {
    case Region::kLeft: return "on the left";
    case Region::kRight: return "on the right";
    case Region::kTop: return "at the top";
    case Region::kBottom: return "at the bottom";
    case Region::kCenter: return "in the center";
  }
  return "?";
}

bool in_region(const SceneObject& obj, Region r, std::size_t grid) {
  const double g = static_cast<double>(grid);
  const double cx = obj.center_x(), cy = obj.center_y();
  const bool mid_x = cx >= g / 3.0 && cx <= 2.0 * g / 3.0;
  const bool mid_y = cy >= g / 3.0 && cy <= 2.0 * g / 3.0;
  switch (r) {
    case Region::kLeft: return cx < g / 3.0;
    case Region::kRight: return cx > 2.0 * g / 3.0;
    case Region::kTop: return cy < g / 3.0;
    case Region::kBottom: return cy > 2.0 * g / 3.0;
    case Region::kCenter: return mid_x && mid_y;
  }
  return false;
}

std::optional<std::size_t> nearest_neighbor(const std::vector<SceneObject>& objects, std::size_t i) {
  std::optional<std::size_t> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < objects.size(); ++j) {
    if (j == i) continue;
    const double dx = objects[j].center_x() - objects[i].center_x();
    const double dy = objects[j].center_y() - objects[i].center_y();
    const double d = dx * dx + dy * dy;
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

bool satisfies(const std::vector<SceneObject>& objects, std::size_t candidate, std::size_t target,
               const Description& d, std::size_t grid) {
  const SceneObject& c = objects[candidate];
  const SceneObject& t = objects[target];
  if (c.color != t.color || c.shape != t.shape) return false;
  if (d.with_size && c.size != t.size) return false;
  if (d.region && !in_region(c, *d.region, grid)) return false;
  if (d.anchor) {
    const auto nn = nearest_neighbor(objects, candidate);
    if (!nn) return false;
    const SceneObject& a = objects[*d.anchor];
    if (objects[*nn].color != a.color || objects[*nn].shape != a.shape) return false;
  }
  return true;
}

std::string render_expression(const std::vector<SceneObject>& objects, std::size_t target,
                              const Description& d) {
  const SceneObject& t = objects[target];
  std::string s = "the ";
  if (d.with_size) s += std::string(to_string(t.size)) + " ";
  s += std::string(to_string(t.color)) + " " + std::string(to_string(t.shape));
  if (d.region) s += " " + std::string(phrase(*d.region));
  if (d.anchor) {
    const SceneObject& a = objects[*d.anchor];
    s += " next to the " + std::string(to_string(a.color)) + " " + std::string(to_string(a.shape));
  }
  return s;
}

namespace {

constexpr std::array<std::array<unsigned char, 3>, 4> kPalette{{
    {220, 40, 40},   // red
    {40, 200, 60},   // green
    {50, 80, 230},   // blue
    {230, 210, 40},  // yellow
}};
constexpr std::array<unsigned char, 3> kBackground{18, 18, 24};

// Side-length range in pixels on a 64-pixel grid.
std::pair<int, int> side_range(SizeClass s) {
  switch (s) {
    case SizeClass::kSmall: return {6, 10};
    case SizeClass::kMedium: return {12, 18};
    case SizeClass::kLarge: return {20, 30};
  }
  return {6, 10};
}

template <typename T>
T pick(RngState& rng, std::size_t n) {
  return static_cast<T>(rng.below(n));
}

bool overlaps(const PixelBox& a, const PixelBox& b) {
  constexpr double margin = 1.0;
  return a.x < b.x + b.w + margin && b.x < a.x + a.w + margin && a.y < b.y + b.h + margin &&
         b.y < a.y + a.h + margin;
}

std::optional<SceneObject> place(const SyntheticSceneSpec& spec, RngState& rng, ShapeKind shape,
                                 ColorName color, SizeClass size, const std::vector<SceneObject>& existing) {
  const auto [lo, hi] = side_range(size);
  const double scale = static_cast<double>(spec.grid_size) / 64.0;
  const int side_px = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
  const auto side = static_cast<std::size_t>(std::max(2.0, std::round(side_px * scale)));
  if (side > spec.grid_size) return std::nullopt;
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double x = static_cast<double>(rng.below(spec.grid_size - side + 1));
    const double y = static_cast<double>(rng.below(spec.grid_size - side + 1));
    SceneObject obj{shape, color, size, {x, y, static_cast<double>(side), static_cast<double>(side)}};
    bool clear = true;
    for (const auto& o : existing) clear = clear && !overlaps(o.box, obj.box);
    if (clear) return obj;
  }
  return std::nullopt;
}

void draw(Image& img, const SceneObject& o) {
  const auto& rgb = kPalette[static_cast<std::size_t>(o.color)];
  const auto x0 = static_cast<std::size_t>(o.box.x), y0 = static_cast<std::size_t>(o.box.y);
  const auto w = static_cast<std::size_t>(o.box.w), h = static_cast<std::size_t>(o.box.h);
  const double cx = o.center_x(), cy = o.center_y(), r = 0.5 * o.box.w;
  for (std::size_t py = y0; py < y0 + h; ++py) {
    for (std::size_t px = x0; px < x0 + w; ++px) {
      const double fx = static_cast<double>(px) + 0.5, fy = static_cast<double>(py) + 0.5;
      bool inside = true;
      if (o.shape == ShapeKind::kCircle) {
        inside = (fx - cx) * (fx - cx) + (fy - cy) * (fy - cy) <= r * r;
      } else if (o.shape == ShapeKind::kTriangle) {
        const double t = (fy - o.box.y) / o.box.h;
        inside = std::abs(fx - cx) <= t * 0.5 * o.box.w;
      }
      if (!inside) continue;
      for (std::size_t c = 0; c < 3; ++c) img.at(px, py, c) = rgb[c] / 255.0;
    }
  }
}

Image render(const SyntheticSceneSpec& spec, const std::vector<SceneObject>& objects) {
  Image img(spec.grid_size, spec.grid_size);
  for (std::size_t i = 0; i < img.rgb.size(); ++i) img.rgb[i] = kBackground[i % 3] / 255.0;
  for (const auto& o : objects) draw(img, o);
  return img;
}

std::vector<Description> candidate_descriptions(const std::vector<SceneObject>& objects, std::size_t target,
                                                std::size_t grid) {
  std::vector<Description> out;
  out.push_back({});
  out.push_back({true, std::nullopt, std::nullopt});
  for (Region r : {Region::kLeft, Region::kRight, Region::kTop, Region::kBottom, Region::kCenter}) {
    if (!in_region(objects[target], r, grid)) continue;
    out.push_back({false, r, std::nullopt});
    out.push_back({true, r, std::nullopt});
  }
  if (auto nn = nearest_neighbor(objects, target)) out.push_back({false, std::nullopt, *nn});
  return out;
}

}  // namespace

Scene generate_scene(const SyntheticSceneSpec& spec, RngState& rng, std::string image_id) {
  if (spec.size_classes.empty()) throw ValidationError("SyntheticSceneSpec: no size classes");
  if (spec.grid_size < 8) throw ValidationError("SyntheticSceneSpec: grid_size must be at least 8");
  for (std::size_t attempt = 0; attempt < spec.max_retries; ++attempt) {
    std::vector<SceneObject> objects;
    const auto target_shape = pick<ShapeKind>(rng, 3);
    const auto target_color = pick<ColorName>(rng, 4);
    const auto target_size = spec.size_classes[rng.below(spec.size_classes.size())];
    auto target = place(spec, rng, target_shape, target_color, target_size, objects);
    if (!target) continue;
    objects.push_back(*target);
    bool ok = true;
    for (std::size_t k = 0; k < spec.distractors && ok; ++k) {
      auto shape = pick<ShapeKind>(rng, 3);
      auto color = pick<ColorName>(rng, 4);
      if (rng.uniform() < spec.similar_distractor_prob) {
        if (rng.below(2) == 0) color = target_color;
        else shape = target_shape;
      }
      const auto size = spec.size_classes[rng.below(spec.size_classes.size())];
      auto obj = place(spec, rng, shape, color, size, objects);
      if (!obj) ok = false;
      else objects.push_back(*obj);
    }
    if (!ok) continue;

    std::vector<Description> unique;
    for (const auto& d : candidate_descriptions(objects, 0, spec.grid_size)) {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < objects.size(); ++i) hits += satisfies(objects, i, 0, d, spec.grid_size);
      if (hits == 1) unique.push_back(d);
    }
    if (unique.empty()) continue;

    Scene scene;
    scene.objects = std::move(objects);
    scene.target = 0;
    scene.description = unique[rng.below(unique.size())];
    scene.image = render(spec, scene.objects);
    scene.record.image_id = std::move(image_id);
    scene.record.image_w = spec.grid_size;
    scene.record.image_h = spec.grid_size;
    scene.record.expression = render_expression(scene.objects, 0, scene.description);
    scene.record.target_boxes = {scene.objects[0].box};
    scene.record.category = std::string(to_string(scene.objects[0].shape));
    return scene;
  }
  throw ValidationError("generate_scene: no uniquely describable scene after " +
                        std::to_string(spec.max_retries) + " attempts");
}

std::vector<Scene> generate_dataset(std::size_t count, const SyntheticSceneSpec& spec, std::uint64_t seed,
                                    std::string_view id_prefix) {
  const RngState root(seed);
  std::vector<Scene> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    RngState rng = root.fork(i);
    out.push_back(generate_scene(spec, rng, std::string(id_prefix) + "_" + std::to_string(i)));
  }
  return out;
}

}  // namespace scs::data
