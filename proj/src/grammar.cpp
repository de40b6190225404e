#include "pgae/grammar.hpp"

namespace pgae {

const Grammar& default_grammar() {
    static const Grammar g = {
        // verbs
        {{{"push", "shove"}, {"pull", "drag"}, {"slide", "glide"}}},
        // colours
        {{{"red", "crimson"},
          {"green", "lime"},
          {"blue", "azure"},
          {"yellow", "amber"},
          {"cyan", "turquoise"},
          {"magenta", "fuchsia"}}},
        // speeds
        {{{"quickly", "swiftly"}, {"slowly", "leisurely"}}},
    };
    return g;
}

std::vector<Pattern> enumerate_patterns() {
    std::vector<Pattern> out;
    out.reserve(kNumPatterns);
    int id = 0;
    for (int verb = 0; verb < kNumVerbs; ++verb)
        for (int colour = 0; colour < kNumColours; ++colour)
            for (int speed = 0; speed < kNumSpeeds; ++speed)
                for (int arrangement = 0; arrangement < 2; ++arrangement)
                    for (int distractor = 0; distractor < 2; ++distractor)
                        out.push_back({id++, verb, colour, speed, arrangement, distractor});
    return out;
}

std::vector<std::string> surface_words(const Grammar& g, int verb, int colour, int speed, int v_syn,
                                       int c_syn, int s_syn) {
    return {g.verbs[verb][v_syn], g.colours[colour][c_syn], g.speeds[speed][s_syn]};
}

bool lookup_word(const Grammar& g, const std::string& word, WordMeaning& out) {
    for (int m = 0; m < kNumVerbs; ++m)
        for (int s = 0; s < 2; ++s)
            if (g.verbs[m][s] == word) {
                out = {0, m, s};
                return true;
            }
    for (int m = 0; m < kNumColours; ++m)
        for (int s = 0; s < 2; ++s)
            if (g.colours[m][s] == word) {
                out = {1, m, s};
                return true;
            }
    for (int m = 0; m < kNumSpeeds; ++m)
        for (int s = 0; s < 2; ++s)
            if (g.speeds[m][s] == word) {
                out = {2, m, s};
                return true;
            }
    return false;
}

}  // namespace pgae
