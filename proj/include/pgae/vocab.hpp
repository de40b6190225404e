#pragma once
// 28-symbol vocabulary: 22 description words, <eos>, and five task signal
// tokens. Index layout is fixed: verbs, colours, speeds, <eos>, signals.

#include <string>
#include <unordered_map>
#include <vector>

#include "pgae/grammar.hpp"

namespace pgae {

constexpr int kVocabSize = 28;

enum class TaskSignal { Describe, Execute, RepeatAction, RepeatBoth, RepeatLanguage };
constexpr int kNumSignals = 5;

const char* signal_name(TaskSignal s);                      // e.g. "describe"
bool signal_from_name(const std::string& name, TaskSignal& out);

class Vocab {
  public:
    static Vocab from_grammar(const Grammar& g);
    static Vocab load(const std::string& path);
    static Vocab from_tokens(std::vector<std::string> tokens);

    int index(const std::string& token) const;          // throws on unknown token
    bool contains(const std::string& token) const;
    const std::string& token(int idx) const;
    int size() const { return static_cast<int>(tokens_.size()); }

    int eos() const { return eos_; }
    int signal_token(TaskSignal s) const;
    bool is_signal(int idx) const { return idx > eos_; }

    void save(const std::string& path) const;            // one token per line

    const std::vector<std::string>& tokens() const { return tokens_; }

  private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, int> index_;
    int eos_ = -1;

    void build_index();
};

// Token sequences: encoder inputs start with exactly one signal token;
// decoder targets end with <eos>.
using TokenSeq = std::vector<int>;

// [signal, words..., <eos>]; words may be empty for action-only tasks.
TokenSeq tokenize(const Vocab& v, const std::vector<std::string>& words, TaskSignal signal);
// Inverse of tokenize for the word portion (drops signal and <eos>).
std::vector<std::string> detokenize(const Vocab& v, const TokenSeq& seq);

}  // namespace pgae
