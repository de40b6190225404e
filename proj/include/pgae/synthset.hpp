#pragma once
// Procedural stand-in for the tabletop dataset: minimum-jerk 5-joint
// trajectories, flat-shaded two-cube scenes with an agent effector,
// opposite-agent views, and the unseen-combination train/test split.

#include <cstdint>
#include <string>
#include <vector>

#include "pgae/dataset.hpp"
#include "pgae/rng.hpp"

namespace pgae {

// 10 t^3 - 15 t^4 + 6 t^5; zero velocity at both ends.
double min_jerk(double t);

constexpr double kEndpointJitter = 0.03;
constexpr double kPhaseSplit = 0.4;  // home->approach, then approach->manipulate

// Joint trajectory for a pattern; rows in [-1, 1], length pattern.trajectory_len().
std::vector<Vec> gen_trajectory(const Pattern& p, RngStream& rng);

struct Image {
    int h = 0, w = 0;
    std::vector<std::uint8_t> rgb;  // h*w*3

    std::uint8_t* px(int y, int x) { return rgb.data() + 3 * (y * w + x); }
    const std::uint8_t* px(int y, int x) const { return rgb.data() + 3 * (y * w + x); }
};

void save_ppm(const std::string& path, const Image& img);
Image load_ppm(const std::string& path);

struct RenderConfig {
    int h = 60, w = 80;  // desk scale; 120x160 also supported
};

// RGB values of the six cube colours, indexed by colour meaning.
const std::array<std::array<std::uint8_t, 3>, kNumColours>& cube_rgb();

// Deterministic flat-colour scene at phase tau in [0, 1]. The opposite
// viewpoint point-reflects the effector (lateral mirror, entering from the
// top edge); cube geometry is shared between views.
Image render_frame(const Pattern& p, double tau, Viewpoint view, const RenderConfig& rc = {});

struct GenConfig {
    std::string root;
    std::uint64_t seed = 7;
    RenderConfig render;
    bool write_frames = true;  // tests may skip the heavy frame output
};

// Builds all 864 samples on disk (manifest.json, vocab.txt, per-sample
// meta/joints/frames) and returns the in-memory dataset (without visual
// features, which `cae encode` adds later).
Dataset build_dataset(const GenConfig& cfg);

struct SplitSummary {
    std::vector<int> train_ids, test_ids;
};

// Partition recorded in the manifest: per meaning class one designated
// (arrangement, distractor) slot goes entirely to test. Validates the
// spec'd properties and throws if any is violated.
SplitSummary split(const Dataset& ds);

}  // namespace pgae
