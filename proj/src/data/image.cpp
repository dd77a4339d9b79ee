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
#include "scs/data/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "scs/errors.hpp"

namespace scs::data {

void write_ppm(const Image& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  std::string bytes(image.rgb.size(), '\0');
  for (std::size_t i = 0; i < image.rgb.size(); ++i) {
    const double v = std::clamp(image.rgb[i], 0.0, 1.0);
    bytes[i] = static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0)));
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

namespace {

std::size_t read_header_int(std::istream& in, const std::filesystem::path& path) {
  in >> std::ws;
  while (in.peek() == '#') {
    std::string comment;
    std::getline(in, comment);
    in >> std::ws;
  }
  std::size_t v = 0;
  if (!(in >> v)) throw ValidationError(path.string() + ": malformed PPM header");
  return v;
}

}  // namespace

Image read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string magic;
  in >> magic;
  if (magic != "P6") throw ValidationError(path.string() + ": not a binary PPM (P6)");
  const std::size_t w = read_header_int(in, path);
  const std::size_t h = read_header_int(in, path);
  const std::size_t maxval = read_header_int(in, path);
  if (maxval != 255) throw ValidationError(path.string() + ": only maxval 255 is supported");
  in.get();
  Image image(w, h);
  std::string bytes(w * h * 3, '\0');
  in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw ValidationError(path.string() + ": truncated pixel data");
  }
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    image.rgb[i] = static_cast<double>(static_cast<unsigned char>(bytes[i])) / 255.0;
  }
  return image;
}

}  // namespace scs::data
