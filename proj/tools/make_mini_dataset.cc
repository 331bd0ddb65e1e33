// Writes a small image dataset: N database and N query PGMs of synthetic
// scenes, gt_pairs.txt and a pipeline config.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vprkit/core/io.h"
#include "vprkit/core/rng.h"

namespace fs = std::filesystem;
using vprkit::GrayImage;
using vprkit::Rng;

namespace {

struct Blob {
  double cx, cy, radius, amplitude;
};

std::vector<Blob> scene(Rng& rng, int size) {
  std::vector<Blob> blobs(12);
  for (auto& b : blobs) {
    b.cx = rng.uniform() * size;
    b.cy = rng.uniform() * size;
    b.radius = 2.0 + rng.uniform() * size / 5.0;
    b.amplitude = rng.uniform() * 2.0 - 1.0;
  }
  return blobs;
}

GrayImage render(const std::vector<Blob>& blobs, int size, double dx, double gain,
                 double offset, double noise, Rng& rng) {
  std::vector<double> px(static_cast<std::size_t>(size) * size);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      double v = 0.5;
      for (const auto& b : blobs) {
        const double ex = (c - dx - b.cx) / b.radius;
        const double ey = (r - b.cy) / b.radius;
        v += 0.25 * b.amplitude * std::exp(-(ex * ex + ey * ey));
      }
      v = gain * v + offset + noise * rng.normal();
      px[static_cast<std::size_t>(r) * size + c] = std::clamp(v, 0.0, 1.0);
    }
  }
  return GrayImage(size, size, std::move(px));
}

std::string name(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%02d.pgm", prefix, i);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the mini PGM dataset"};
  fs::path out = "data/mini";
  int places = 10;
  int size = 32;
  std::uint64_t seed = 2024;
  app.add_option("--out", out);
  app.add_option("--places", places);
  app.add_option("--size", size);
  app.add_option("--seed", seed);
  CLI11_PARSE(app, argc, argv);

  fs::create_directories(out / "db");
  fs::create_directories(out / "q");
  Rng rng(seed);
  std::string pairs;
  for (int i = 0; i < places; ++i) {
    const auto blobs = scene(rng, size);
    vprkit::write_pgm(render(blobs, size, 0.0, 1.0, 0.0, 0.01, rng), out / "db" / name("db", i));
    vprkit::write_pgm(render(blobs, size, 1.0, 0.8, 0.05, 0.03, rng), out / "q" / name("q", i));
    pairs += std::to_string(i) + " " + std::to_string(i) + "\n";
  }
  vprkit::write_file(out / "gt_pairs.txt", pairs);
  std::cout << "wrote " << 2 * places << " images to " << out.string() << "\n";
  return 0;
}
