#include "pgae/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

using nlohmann::json;

namespace pgae {

std::string DatasetPaths::sample_dir(int id) const {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "/samples/s%04d", id);
    return root + buf;
}

void save_csv(const std::string& path, const std::vector<Vec>& rows, int decimals) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("failed to write csv: " + path);
    char buf[48];
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.*f", decimals, row[k]);
            out << (k ? "," : "") << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("short write on csv: " + path);
}

std::vector<Vec> load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("failed to open csv: " + path);
    std::vector<Vec> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Vec row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) row.push_back(std::stod(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<const Sample*> Dataset::split(bool test) const {
    std::vector<const Sample*> out;
    const auto& ids = test ? test_ids : train_ids;
    out.reserve(ids.size());
    for (int id : ids) out.push_back(&samples[static_cast<std::size_t>(id)]);
    return out;
}

Dataset load_dataset(const std::string& root, bool load_features) {
    std::ifstream in(root + "/manifest.json");
    if (!in) throw std::runtime_error("failed to open manifest: " + root + "/manifest.json");
    json manifest = json::parse(in);

    Dataset ds;
    ds.seed = manifest.at("seed");
    ds.frame_h = manifest.at("frame_h");
    ds.frame_w = manifest.at("frame_w");

    std::vector<Pattern> patterns;
    for (const auto& pj : manifest.at("patterns")) {
        Pattern p;
        p.id = pj.at("id");
        p.verb = pj.at("verb");
        p.colour = pj.at("colour");
        p.speed = pj.at("speed");
        p.arrangement = pj.at("arrangement");
        p.distractor = pj.at("distractor");
        patterns.push_back(p);
    }

    for (const auto& sj : manifest.at("samples")) {
        Sample s;
        s.id = sj.at("id");
        s.pattern = patterns.at(sj.at("pattern").get<std::size_t>());
        s.variation = sj.at("variation");
        s.words = sj.at("words").get<std::vector<std::string>>();
        s.synonym_code = sj.at("synonym_code");
        s.M = sj.at("M");
        s.is_test = sj.at("split") == "test";
        s.dir = root + "/" + sj.at("dir").get<std::string>();
        s.joints = load_csv(s.dir + "/joints.csv");
        if (static_cast<int>(s.joints.size()) != s.M)
            throw std::runtime_error("joints.csv row count does not match M for " + s.dir);
        if (load_features) {
            s.feats_self = load_csv(s.dir + "/features_self.csv");
            s.feats_opposite = load_csv(s.dir + "/features_opposite.csv");
            if (s.feats_self.size() != s.joints.size() || s.feats_opposite.size() != s.joints.size())
                throw std::runtime_error("feature row count does not match M for " + s.dir);
        }
        (s.is_test ? ds.test_ids : ds.train_ids).push_back(s.id);
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

}  // namespace pgae
