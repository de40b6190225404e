#pragma once
// In-memory sample representation plus manifest / per-sample file IO.
// On-disk layout per sample directory: meta.json, joints.csv,
// frames_self/NNN.ppm, frames_opposite/NNN.ppm, features_self.csv,
// features_opposite.csv.

#include <string>
#include <vector>

#include "pgae/grammar.hpp"
#include "pgae/tensor.hpp"

namespace pgae {

enum class Viewpoint { Self, Opposite };

struct Sample {
    int id = -1;
    Pattern pattern;
    std::vector<std::string> words;  // verb colour speed surface forms
    int synonym_code = 0;            // v_syn*4 + c_syn*2 + s_syn
    int variation = 0;
    bool is_test = false;
    int M = 0;
    std::vector<Vec> joints;          // M x 5
    std::vector<Vec> feats_self;      // M x vis_dim, filled after feature extraction
    std::vector<Vec> feats_opposite;
    std::string dir;

    const std::vector<Vec>& feats(Viewpoint v) const {
        return v == Viewpoint::Self ? feats_self : feats_opposite;
    }
    bool has_opposite() const { return !feats_opposite.empty(); }
};

struct DatasetPaths {
    std::string root;
    std::string manifest() const { return root + "/manifest.json"; }
    std::string vocab_file() const { return root + "/vocab.txt"; }
    std::string sample_dir(int id) const;
};

// CSV helpers shared by joints and feature files (no header, fixed layout)
void save_csv(const std::string& path, const std::vector<Vec>& rows, int decimals);
std::vector<Vec> load_csv(const std::string& path);

struct Dataset {
    std::vector<Sample> samples;  // all 864, indexed by id
    std::vector<int> train_ids, test_ids;
    std::uint64_t seed = 0;
    int frame_h = 0, frame_w = 0;

    std::vector<const Sample*> split(bool test) const;
};

// Loads manifest + joints; features are loaded when load_features is set
// (files must exist, i.e. `cae encode` has run).
Dataset load_dataset(const std::string& root, bool load_features);

}  // namespace pgae
