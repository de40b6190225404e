#include "pgae/synthset.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pgae/vocab.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace pgae {

double min_jerk(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }

namespace {

constexpr int kJointDim = 5;

// pose endpoints; side is -1 (left) or +1 (right)
std::array<double, kJointDim> home_pose() { return {0.0, -0.70, 0.55, -0.45, 0.10}; }

std::array<double, kJointDim> approach_pose(double side) {
    return {0.55 * side, -0.15, 0.30, -0.20 * side, -0.05};
}

std::array<double, kJointDim> end_pose(int verb, double side) {
    auto p = approach_pose(side);
    switch (verb) {
        case 0:  // push: away from the agent
            p = {p[0] + 0.10 * side, p[1] + 0.45, p[2] - 0.35, p[3] + 0.05 * side, p[4] - 0.20};
            break;
        case 1:  // pull: toward the agent
            p = {p[0] - 0.05 * side, p[1] - 0.35, p[2] + 0.30, p[3] - 0.10 * side, p[4] + 0.25};
            break;
        default:  // slide: lateral, toward the table centre
            p = {p[0] - 0.45 * side, p[1] + 0.05, p[2] + 0.10, p[3] + 0.15 * side, p[4] + 0.05};
            break;
    }
    return p;
}

void jitter(std::array<double, kJointDim>& pose, RngStream& rng) {
    for (double& x : pose) x += rng.uniform(-kEndpointJitter, kEndpointJitter);
}

}  // namespace

std::vector<Vec> gen_trajectory(const Pattern& p, RngStream& rng) {
    const double side = p.arrangement == 0 ? -1.0 : 1.0;
    auto p0 = home_pose();
    auto p1 = approach_pose(side);
    auto p2 = end_pose(p.verb, side);
    jitter(p0, rng);
    jitter(p1, rng);
    jitter(p2, rng);

    const int M = p.trajectory_len();
    std::vector<Vec> rows(static_cast<std::size_t>(M), Vec(kJointDim));
    for (int t = 0; t < M; ++t) {
        const double tau = static_cast<double>(t) / static_cast<double>(M - 1);
        for (int k = 0; k < kJointDim; ++k) {
            double q;
            if (tau < kPhaseSplit) {
                const double s = min_jerk(tau / kPhaseSplit);
                q = p0[k] + (p1[k] - p0[k]) * s;
            } else {
                const double s = min_jerk((tau - kPhaseSplit) / (1.0 - kPhaseSplit));
                q = p1[k] + (p2[k] - p1[k]) * s;
            }
            rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] =
                std::min(1.0, std::max(-1.0, q));
        }
    }
    return rows;
}

void save_ppm(const std::string& path, const Image& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("failed to write image: " + path);
    out << "P6\n" << img.w << " " << img.h << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()), static_cast<long>(img.rgb.size()));
    if (!out) throw std::runtime_error("short write on image: " + path);
}

Image load_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("failed to open image: " + path);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    if (magic != "P6" || maxval != 255 || w <= 0 || h <= 0)
        throw std::runtime_error("unsupported PPM file: " + path);
    in.get();  // single whitespace after the header
    Image img;
    img.h = h;
    img.w = w;
    img.rgb.resize(static_cast<std::size_t>(3 * w * h));
    in.read(reinterpret_cast<char*>(img.rgb.data()), static_cast<long>(img.rgb.size()));
    if (!in) throw std::runtime_error("truncated PPM file: " + path);
    return img;
}

const std::array<std::array<std::uint8_t, 3>, kNumColours>& cube_rgb() {
    static const std::array<std::array<std::uint8_t, 3>, kNumColours> table = {{
        {255, 0, 0},    // red
        {0, 255, 0},    // green
        {0, 0, 255},    // blue
        {255, 255, 0},  // yellow
        {0, 255, 255},  // cyan
        {255, 0, 255},  // magenta
    }};
    return table;
}

namespace {

constexpr std::uint8_t kBackground[3] = {90, 90, 90};
constexpr std::uint8_t kEffector[3] = {250, 250, 250};

struct Geometry {
    double cube_y, left_x, right_x, cube_half;
    double eff_home_x, eff_home_y, eff_r;
    double push_dy, pull_dy, slide_dx;
};

Geometry geometry(const RenderConfig& rc) {
    Geometry g;
    g.cube_y = 0.42 * rc.h;
    g.left_x = 0.32 * rc.w;
    g.right_x = 0.68 * rc.w;
    g.cube_half = 0.09 * rc.h;
    g.eff_home_x = 0.42 * rc.w;
    g.eff_r = 0.055 * rc.h;
    g.eff_home_y = rc.h - 1 - g.eff_r;
    g.push_dy = -0.22 * rc.h;
    g.pull_dy = 0.20 * rc.h;
    g.slide_dx = 0.20 * rc.w;
    return g;
}

void fill_rect(Image& img, double cx, double cy, double half, const std::uint8_t* rgb) {
    const int y0 = std::max(0, static_cast<int>(std::lround(cy - half)));
    const int y1 = std::min(img.h - 1, static_cast<int>(std::lround(cy + half)));
    const int x0 = std::max(0, static_cast<int>(std::lround(cx - half)));
    const int x1 = std::min(img.w - 1, static_cast<int>(std::lround(cx + half)));
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            auto* p = img.px(y, x);
            p[0] = rgb[0];
            p[1] = rgb[1];
            p[2] = rgb[2];
        }
}

void fill_disc(Image& img, double cx, double cy, double r, const std::uint8_t* rgb) {
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - r)));
    const int y1 = std::min(img.h - 1, static_cast<int>(std::ceil(cy + r)));
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - r)));
    const int x1 = std::min(img.w - 1, static_cast<int>(std::ceil(cx + r)));
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            const double dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy > r * r) continue;
            auto* p = img.px(y, x);
            p[0] = rgb[0];
            p[1] = rgb[1];
            p[2] = rgb[2];
        }
}

}  // namespace

Image render_frame(const Pattern& p, double tau, Viewpoint view, const RenderConfig& rc) {
    if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("render_frame: tau outside [0, 1]");
    const Geometry g = geometry(rc);
    Image img;
    img.h = rc.h;
    img.w = rc.w;
    img.rgb.resize(static_cast<std::size_t>(3 * rc.h * rc.w));
    for (int i = 0; i < rc.h * rc.w; ++i) {
        img.rgb[static_cast<std::size_t>(3 * i)] = kBackground[0];
        img.rgb[static_cast<std::size_t>(3 * i + 1)] = kBackground[1];
        img.rgb[static_cast<std::size_t>(3 * i + 2)] = kBackground[2];
    }

    const double side = p.arrangement == 0 ? -1.0 : 1.0;
    const double target_x0 = p.arrangement == 0 ? g.left_x : g.right_x;
    const double distractor_x = p.arrangement == 0 ? g.right_x : g.left_x;

    // manipulation progress: cubes rest during the approach phase
    const double s2 = tau <= kPhaseSplit ? 0.0 : min_jerk((tau - kPhaseSplit) / (1.0 - kPhaseSplit));
    double dx = 0.0, dy = 0.0;
    switch (p.verb) {
        case 0: dy = g.push_dy * s2; break;
        case 1: dy = g.pull_dy * s2; break;
        default: dx = -side * g.slide_dx * s2; break;  // toward the table centre
    }

    fill_rect(img, distractor_x, g.cube_y, g.cube_half,
              cube_rgb()[static_cast<std::size_t>(p.distractor_colour())].data());
    fill_rect(img, target_x0 + dx, g.cube_y + dy, g.cube_half,
              cube_rgb()[static_cast<std::size_t>(p.colour)].data());

    // effector: home -> just below the target cube, then riding with it
    const double s1 = tau >= kPhaseSplit ? 1.0 : min_jerk(tau / kPhaseSplit);
    const double touch_x = target_x0;
    const double touch_y = g.cube_y + g.cube_half + g.eff_r + 1.0;
    double ex = g.eff_home_x + (touch_x - g.eff_home_x) * s1 + dx;
    double ey = g.eff_home_y + (touch_y - g.eff_home_y) * s1 + dy;
    if (view == Viewpoint::Opposite) {
        ex = (rc.w - 1) - ex;  // lateral mirror
        ey = (rc.h - 1) - ey;  // enters from the top edge
    }
    fill_disc(img, ex, ey, g.eff_r, kEffector);
    return img;
}

namespace {

struct SynAssignment {
    int v_syn, c_syn, s_syn;
    int code() const { return v_syn * 4 + c_syn * 2 + s_syn; }
};

// Designated test slot per meaning class: one (arrangement, distractor)
// corner, cycling across meanings so every corner occurs in training
// elsewhere.
void test_slot(int meaning_id, int& arr_t, int& distr_t) {
    arr_t = (meaning_id % 4) >> 1;
    distr_t = meaning_id % 2;
}

bool pattern_is_test(const Pattern& p) {
    int arr_t, distr_t;
    test_slot(p.meaning_id(), arr_t, distr_t);
    return p.arrangement == arr_t && p.distractor == distr_t;
}

// Surface-form assignment. The in-rule string is keyed to observable
// pattern attributes (arrangement and distractor choice); two variations
// per training slot carry the remaining synonym combinations so that all
// 288 surface strings occur in the corpus. Designated test slots stay
// fully in-rule, which keeps the exact-match description task solvable on
// held-out samples.
SynAssignment assign_synonyms(const Pattern& p, int variation) {
    const SynAssignment rule{p.arrangement, p.distractor, p.distractor};
    if (pattern_is_test(p) || variation <= 3) return rule;
    if (variation == 4) return {p.arrangement, p.distractor, 1 - p.distractor};
    return {p.arrangement, 1 - p.distractor, p.distractor};
}

ordered_json pattern_json(const Pattern& p) {
    return ordered_json{{"id", p.id},
                        {"verb", p.verb},
                        {"colour", p.colour},
                        {"speed", p.speed},
                        {"arrangement", p.arrangement},
                        {"distractor", p.distractor}};
}

Pattern pattern_from_json(const json& j) {
    Pattern p;
    p.id = j.at("id");
    p.verb = j.at("verb");
    p.colour = j.at("colour");
    p.speed = j.at("speed");
    p.arrangement = j.at("arrangement");
    p.distractor = j.at("distractor");
    return p;
}

}  // namespace

Dataset build_dataset(const GenConfig& cfg) {
    const Grammar& grammar = default_grammar();
    const auto patterns = enumerate_patterns();

    Dataset ds;
    ds.seed = cfg.seed;
    ds.frame_h = cfg.render.h;
    ds.frame_w = cfg.render.w;
    ds.samples.reserve(kNumSamples);

    fs::create_directories(cfg.root + "/samples");

    ordered_json manifest;
    manifest["seed"] = cfg.seed;
    manifest["frame_h"] = cfg.render.h;
    manifest["frame_w"] = cfg.render.w;
    manifest["grammar"] = {{"verbs", grammar.verbs}, {"colours", grammar.colours}, {"speeds", grammar.speeds}};
    manifest["patterns"] = ordered_json::array();
    for (const auto& p : patterns) manifest["patterns"].push_back(pattern_json(p));
    manifest["samples"] = ordered_json::array();

    for (const auto& p : patterns) {
        for (int variation = 0; variation < kVariationsPerPattern; ++variation) {
            Sample s;
            s.id = p.id * kVariationsPerPattern + variation;
            s.pattern = p;
            s.variation = variation;
            s.is_test = pattern_is_test(p);
            const auto syn = assign_synonyms(p, variation);
            s.synonym_code = syn.code();
            s.words = surface_words(grammar, p.verb, p.colour, p.speed, syn.v_syn, syn.c_syn, syn.s_syn);
            s.M = p.trajectory_len();

            RngStream sample_rng(cfg.seed ^ static_cast<std::uint64_t>(s.id));
            s.joints = gen_trajectory(p, sample_rng);

            char dirbuf[32];
            std::snprintf(dirbuf, sizeof(dirbuf), "samples/s%04d", s.id);
            s.dir = cfg.root + "/" + dirbuf;
            fs::create_directories(s.dir);
            save_csv(s.dir + "/joints.csv", s.joints, 6);

            ordered_json meta;
            meta["id"] = s.id;
            meta["pattern"] = pattern_json(p);
            meta["variation"] = variation;
            meta["words"] = s.words;
            meta["synonym_code"] = s.synonym_code;
            meta["M"] = s.M;
            meta["split"] = s.is_test ? "test" : "train";
            std::ofstream(s.dir + "/meta.json", std::ios::binary) << meta.dump(2) << '\n';

            if (cfg.write_frames) {
                fs::create_directories(s.dir + "/frames_self");
                fs::create_directories(s.dir + "/frames_opposite");
                for (int t = 0; t < s.M; ++t) {
                    const double tau = static_cast<double>(t) / static_cast<double>(s.M - 1);
                    char name[16];
                    std::snprintf(name, sizeof(name), "%03d.ppm", t);
                    save_ppm(s.dir + "/frames_self/" + name,
                             render_frame(p, tau, Viewpoint::Self, cfg.render));
                    save_ppm(s.dir + "/frames_opposite/" + name,
                             render_frame(p, tau, Viewpoint::Opposite, cfg.render));
                }
            }

            ordered_json sample_entry;
            sample_entry["id"] = s.id;
            sample_entry["pattern"] = p.id;
            sample_entry["variation"] = variation;
            sample_entry["words"] = s.words;
            sample_entry["synonym_code"] = s.synonym_code;
            sample_entry["M"] = s.M;
            sample_entry["split"] = s.is_test ? "test" : "train";
            sample_entry["dir"] = dirbuf;
            manifest["samples"].push_back(sample_entry);

            (s.is_test ? ds.test_ids : ds.train_ids).push_back(s.id);
            ds.samples.push_back(std::move(s));
        }
    }

    manifest["split"] = {{"train", ds.train_ids}, {"test", ds.test_ids}};
    manifest["counts"] = {{"patterns", kNumPatterns},
                          {"samples", kNumSamples},
                          {"train", ds.train_ids.size()},
                          {"test", ds.test_ids.size()}};
    std::ofstream(cfg.root + "/manifest.json", std::ios::binary) << manifest.dump(2) << '\n';
    Vocab::from_grammar(grammar).save(cfg.root + "/vocab.txt");
    return ds;
}

SplitSummary split(const Dataset& ds) {
    SplitSummary out;
    std::set<std::tuple<std::string, int, int>> train_triples;  // (description, action type, arrangement)
    std::set<int> test_actions, test_meanings;
    std::set<std::string> descriptions;

    auto description_of = [](const Sample& s) {
        std::string d;
        for (const auto& w : s.words) d += (d.empty() ? "" : " ") + w;
        return d;
    };

    for (const auto& s : ds.samples) {
        descriptions.insert(description_of(s));
        if (s.is_test) {
            out.test_ids.push_back(s.id);
            test_actions.insert(s.pattern.action_type());
            test_meanings.insert(s.pattern.meaning_id());
        } else {
            out.train_ids.push_back(s.id);
            train_triples.insert({description_of(s), s.pattern.action_type(), s.pattern.arrangement});
        }
    }

    std::ostringstream err;
    if (out.test_ids.size() != 216 || out.train_ids.size() != 648)
        err << "split sizes " << out.train_ids.size() << "/" << out.test_ids.size() << "; ";
    if (descriptions.size() != 288)
        err << descriptions.size() << " distinct descriptions (expected 288); ";
    if (static_cast<int>(test_actions.size()) != kNumActionTypes)
        err << "test covers " << test_actions.size() << " action types; ";
    if (static_cast<int>(test_meanings.size()) != kNumMeanings)
        err << "test covers " << test_meanings.size() << " meaning classes; ";
    for (const auto& s : ds.samples) {
        if (!s.is_test) continue;
        if (train_triples.count({description_of(s), s.pattern.action_type(), s.pattern.arrangement})) {
            err << "triple overlap on sample " << s.id << "; ";
            break;
        }
    }
    const std::string msg = err.str();
    if (!msg.empty()) throw std::runtime_error("split constraints violated: " + msg);
    return out;
}

}  // namespace pgae
