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
#pragma once

// Synthetic referring scenes: colored shapes of several size classes on a
// square grid, one referent described by a templated expression that no other
// object in the scene satisfies.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scs/data/annotation.hpp"
#include "scs/data/image.hpp"
#include "scs/numerics/rng.hpp"

namespace scs::data {

enum class ShapeKind { kSquare, kCircle, kTriangle };
enum class ColorName { kRed, kGreen, kBlue, kYellow };
enum class SizeClass { kSmall, kMedium, kLarge };
// Thirds of the grid, judged on the object's box centre.
enum class Region { kLeft, kRight, kTop, kBottom, kCenter };

std::string_view to_string(ShapeKind s);
std::string_view to_string(ColorName c);
std::string_view to_string(SizeClass s);
// "on the left", "at the top", ...
std::string_view phrase(Region r);

struct SceneObject {
  ShapeKind shape;
  ColorName color;
  SizeClass size;
  PixelBox box;

  double center_x() const { return box.x + 0.5 * box.w; }
  double center_y() const { return box.y + 0.5 * box.h; }
};

bool in_region(const SceneObject& obj, Region r, std::size_t grid);
// Index of the closest other object by centre distance (lowest index on ties).
std::optional<std::size_t> nearest_neighbor(const std::vector<SceneObject>& objects, std::size_t i);

// Which predicates the expression uses beyond colour and shape.
struct Description {
  bool with_size = false;
  std::optional<Region> region;
  std::optional<std::size_t> anchor;  // "next to the <anchor>"
};

bool satisfies(const std::vector<SceneObject>& objects, std::size_t candidate, std::size_t target,
               const Description& d, std::size_t grid);
std::string render_expression(const std::vector<SceneObject>& objects, std::size_t target,
                              const Description& d);

struct SyntheticSceneSpec {
  std::size_t grid_size = 64;
  std::size_t distractors = 3;
  std::vector<SizeClass> size_classes{SizeClass::kSmall, SizeClass::kMedium, SizeClass::kLarge};
  // Chance that a distractor copies the referent's colour or shape.
  double similar_distractor_prob = 0.5;
  std::size_t max_retries = 200;
};

struct Scene {
  Image image;
  AnnotationRecord record;
  std::vector<SceneObject> objects;
  std::size_t target = 0;
  Description description;
};

// Deterministic in (spec, rng state). Throws ValidationError when no unique
// description is found within spec.max_retries attempts.
Scene generate_scene(const SyntheticSceneSpec& spec, RngState& rng, std::string image_id);

// count scenes from independent forks of RngState(seed).
std::vector<Scene> generate_dataset(std::size_t count, const SyntheticSceneSpec& spec, std::uint64_t seed,
                                    std::string_view id_prefix = "scene");

}  // namespace scs::data
