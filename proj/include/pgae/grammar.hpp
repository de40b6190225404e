#pragma once
// Description grammar: 3 verb meanings, 6 colours, 2 speeds, two surface
// synonyms each. 288 distinct surface strings, 36 meaning triples,
// 144 patterns (meaning x arrangement x distractor choice).

#include <array>
#include <string>
#include <vector>

namespace pgae {

constexpr int kNumVerbs = 3;
constexpr int kNumColours = 6;
constexpr int kNumSpeeds = 2;
constexpr int kNumMeanings = kNumVerbs * kNumColours * kNumSpeeds;  // 36
constexpr int kNumPatterns = kNumMeanings * 2 * 2;                  // 144
constexpr int kVariationsPerPattern = 6;
constexpr int kNumSamples = kNumPatterns * kVariationsPerPattern;   // 864
constexpr int kNumActionTypes = kNumVerbs * 2 * kNumSpeeds;         // 12

// speed 0 = fast (M = 50), speed 1 = slow (M = 100)
constexpr int kFastLen = 50;
constexpr int kSlowLen = 100;

struct Grammar {
    std::array<std::array<std::string, 2>, kNumVerbs> verbs;
    std::array<std::array<std::string, 2>, kNumColours> colours;
    std::array<std::array<std::string, 2>, kNumSpeeds> speeds;
};

const Grammar& default_grammar();

struct Pattern {
    int id = 0;            // 0..143
    int verb = 0;          // meaning ids
    int colour = 0;
    int speed = 0;
    int arrangement = 0;   // 0 = target left, 1 = target right
    int distractor = 0;    // choice among the two designated distractor colours

    int meaning_id() const { return (verb * kNumColours + colour) * kNumSpeeds + speed; }
    int action_type() const { return (verb * 2 + arrangement) * kNumSpeeds + speed; }
    int distractor_colour() const { return (colour + 1 + distractor) % kNumColours; }
    int trajectory_len() const { return speed == 0 ? kFastLen : kSlowLen; }
};

std::vector<Pattern> enumerate_patterns();

// Surface words of a description for a meaning triple and synonym bits.
std::vector<std::string> surface_words(const Grammar& g, int verb, int colour, int speed, int v_syn,
                                       int c_syn, int s_syn);

// Meaning lookup for a surface word; returns false if the word is not a
// description word of the expected category.
struct WordMeaning {
    int category = -1;  // 0 verb, 1 colour, 2 speed
    int meaning = -1;
    int synonym = -1;
};
bool lookup_word(const Grammar& g, const std::string& word, WordMeaning& out);

}  // namespace pgae
